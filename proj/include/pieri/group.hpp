#pragma once

// Deciding whether monodromy permutations generate the full symmetric group.
//
// Scalable route (Jordan): a transitive group containing a p-cycle for a prime p
// with d/2 < p < d-2 contains A_d; one odd generator then gives S_d. Because
// p > d/2, an element with a p-cycle in its cycle type has a power that is a
// bare p-cycle, so witnesses are searched by cycle type. Small degrees fall
// back to an exact closure.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "pieri/errors.hpp"
#include "pieri/rng.hpp"

namespace pieri {

/// Bijection on {0, ..., d-1}; images[i] is where i goes.
struct Permutation {
  std::vector<std::size_t> images;

  Permutation() = default;
  explicit Permutation(std::vector<std::size_t> imgs) : images(std::move(imgs)) {
    if (!is_bijection()) throw NotBijective("images do not form a permutation");
  }

  static Permutation identity(std::size_t d) {
    std::vector<std::size_t> v(d);
    std::iota(v.begin(), v.end(), std::size_t{0});
    return Permutation(std::move(v));
  }

  /// Product of disjoint cycles given as lists of points.
  static Permutation from_cycles(std::size_t d, const std::vector<std::vector<std::size_t>>& cycles) {
    Permutation p = identity(d);
    for (const auto& cyc : cycles)
      for (std::size_t i = 0; i < cyc.size(); ++i) p.images.at(cyc[i]) = cyc[(i + 1) % cyc.size()];
    if (!p.is_bijection()) throw NotBijective("cycles overlap");
    return p;
  }

  std::size_t degree() const { return images.size(); }
  std::size_t operator[](std::size_t i) const { return images[i]; }

  bool is_bijection() const {
    std::vector<bool> seen(images.size(), false);
    for (std::size_t v : images) {
      if (v >= images.size() || seen[v]) return false;
      seen[v] = true;
    }
    return true;
  }

  bool is_identity() const {
    for (std::size_t i = 0; i < images.size(); ++i)
      if (images[i] != i) return false;
    return true;
  }

  bool operator==(const Permutation&) const = default;
};

/// (p ∘ q)[i] = p[q[i]]: apply q first.
inline Permutation compose(const Permutation& p, const Permutation& q) {
  if (p.degree() != q.degree()) throw DimensionMismatch("compose: degrees differ");
  std::vector<std::size_t> r(p.degree());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = p.images[q.images[i]];
  Permutation out;
  out.images = std::move(r);
  return out;
}

inline Permutation inverse(const Permutation& p) {
  std::vector<std::size_t> r(p.degree());
  for (std::size_t i = 0; i < r.size(); ++i) r[p.images[i]] = i;
  Permutation out;
  out.images = std::move(r);
  return out;
}

/// Cycle lengths including fixed points, ascending.
inline std::vector<std::size_t> cycle_type(const Permutation& p) {
  std::vector<bool> seen(p.degree(), false);
  std::vector<std::size_t> lengths;
  for (std::size_t i = 0; i < p.degree(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = p.images[j]) {
      seen[j] = true;
      ++len;
    }
    lengths.push_back(len);
  }
  std::sort(lengths.begin(), lengths.end());
  return lengths;
}

inline bool is_odd(const Permutation& p) { return (p.degree() - cycle_type(p).size()) % 2 == 1; }

inline std::string to_cycle_string(const Permutation& p) {
  std::vector<bool> seen(p.degree(), false);
  std::string s;
  for (std::size_t i = 0; i < p.degree(); ++i) {
    if (seen[i] || p.images[i] == i) continue;
    s += '(';
    for (std::size_t j = i; !seen[j]; j = p.images[j]) {
      seen[j] = true;
      if (s.back() != '(') s += ' ';
      s += std::to_string(j);
    }
    s += ')';
  }
  return s.empty() ? "()" : s;
}

struct OrbitInfo {
  bool transitive = false;
  std::vector<std::vector<std::size_t>> orbits;  // each sorted, ordered by smallest point
};

inline void check_degrees(const std::vector<Permutation>& perms, std::size_t d) {
  for (const auto& p : perms) {
    if (p.degree() != d) throw DimensionMismatch("generator has degree " + std::to_string(p.degree()));
    if (!p.is_bijection()) throw NotBijective("generator is not a permutation");
  }
}

inline OrbitInfo is_transitive(const std::vector<Permutation>& perms, std::size_t d) {
  check_degrees(perms, d);
  std::vector<std::size_t> parent(d);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& p : perms)
    for (std::size_t i = 0; i < d; ++i) {
      const std::size_t a = find(i), b = find(p.images[i]);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  OrbitInfo info;
  std::vector<std::size_t> slot(d, SIZE_MAX);
  for (std::size_t i = 0; i < d; ++i) {
    const std::size_t root = find(i);
    if (slot[root] == SIZE_MAX) {
      slot[root] = info.orbits.size();
      info.orbits.emplace_back();
    }
    info.orbits[slot[root]].push_back(i);
  }
  info.transitive = info.orbits.size() == 1;
  return info;
}

inline bool is_prime(std::size_t p) {
  if (p < 2) return false;
  for (std::size_t q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

/// Largest prime p in (d/2, d-2) with a p-cycle in the cycle type, or 0.
inline std::size_t jordan_prime(const std::vector<std::size_t>& type, std::size_t d) {
  std::size_t best = 0;
  for (std::size_t len : type)
    if (2 * len > d && len + 2 < d && is_prime(len)) best = std::max(best, len);
  return best;
}

inline std::uint64_t factorial(std::size_t d) {
  std::uint64_t f = 1;
  for (std::size_t i = 2; i <= d; ++i) f *= i;
  return f;
}

namespace detail {

inline std::uint32_t perm_rank(const std::vector<std::uint8_t>& p) {
  const std::size_t d = p.size();
  std::uint32_t r = 0;
  for (std::size_t i = 0; i < d; ++i) {
    std::uint32_t smaller = 0;
    for (std::size_t j = i + 1; j < d; ++j) smaller += p[j] < p[i];
    r = r * static_cast<std::uint32_t>(d - i) + smaller;
  }
  return r;
}

inline std::vector<std::uint8_t> perm_unrank(std::uint32_t r, std::size_t d) {
  std::vector<std::uint32_t> digits(d);
  for (std::size_t i = d; i-- > 0;) {
    const std::uint32_t base = static_cast<std::uint32_t>(d - i);
    digits[i] = r % base;
    r /= base;
  }
  std::vector<std::uint8_t> avail(d), out(d);
  std::iota(avail.begin(), avail.end(), std::uint8_t{0});
  for (std::size_t i = 0; i < d; ++i) {
    out[i] = avail[digits[i]];
    avail.erase(avail.begin() + digits[i]);
  }
  return out;
}

}  // namespace detail

inline constexpr std::size_t kClosureMaxDegree = 12;
inline constexpr std::uint64_t kClosureCap = 10'000'000;

/// Order of the generated group by breadth-first closure, or nullopt when
/// d > kClosureMaxDegree or the closure exceeds cap elements.
inline std::optional<std::uint64_t> closure_order(const std::vector<Permutation>& perms, std::size_t d,
                                                  std::uint64_t cap = kClosureCap) {
  check_degrees(perms, d);
  if (d > kClosureMaxDegree) return std::nullopt;
  if (d <= 1) return 1;
  const std::uint64_t full = factorial(d);
  std::vector<bool> seen(full, false);
  std::vector<std::vector<std::uint8_t>> gens;
  for (const auto& p : perms) gens.emplace_back(p.images.begin(), p.images.end());

  std::vector<std::uint8_t> id(d);
  std::iota(id.begin(), id.end(), std::uint8_t{0});
  std::deque<std::uint32_t> queue{detail::perm_rank(id)};
  seen[queue.front()] = true;
  std::uint64_t count = 1;
  std::vector<std::uint8_t> next(d);
  while (!queue.empty()) {
    const auto cur = detail::perm_unrank(queue.front(), d);
    queue.pop_front();
    for (const auto& g : gens) {
      for (std::size_t i = 0; i < d; ++i) next[i] = g[cur[i]];
      const std::uint32_t r = detail::perm_rank(next);
      if (seen[r]) continue;
      seen[r] = true;
      if (++count > cap) return std::nullopt;
      if (count == full) return full;
      queue.push_back(r);
    }
  }
  return count;
}

enum class GroupStatus { FullSymmetric, ProperSubgroupEvidence, Unknown };

inline const char* to_string(GroupStatus s) {
  switch (s) {
    case GroupStatus::FullSymmetric: return "FullSymmetric";
    case GroupStatus::ProperSubgroupEvidence: return "ProperSubgroupEvidence";
    case GroupStatus::Unknown: return "Unknown";
  }
  return "?";
}

/// A group element whose cycle type carries a Jordan prime.
struct JordanWitness {
  std::vector<std::size_t> word;  // generator indices, applied left to right
  std::vector<std::size_t> cycle_type;
  std::size_t prime = 0;
};

struct GroupVerdict {
  GroupStatus status = GroupStatus::Unknown;
  std::size_t degree = 0;
  OrbitInfo orbits;
  std::optional<JordanWitness> witness;
  std::vector<bool> generator_odd;
  std::optional<std::uint64_t> closure_order;
  std::string reason;

  bool any_odd() const { return std::find(generator_odd.begin(), generator_odd.end(), true) != generator_odd.end(); }
};

struct SymmetricTestOptions {
  std::size_t word_budget = 10'000;
  std::size_t max_word_length = 20;
  std::uint64_t seed = 0x5EEDULL;
};

inline std::optional<JordanWitness> find_jordan_witness(const std::vector<Permutation>& perms, std::size_t d,
                                                        const SymmetricTestOptions& opts) {
  if (perms.empty()) return std::nullopt;
  for (std::size_t g = 0; g < perms.size(); ++g) {
    auto type = cycle_type(perms[g]);
    if (const std::size_t p = jordan_prime(type, d)) return JordanWitness{{g}, std::move(type), p};
  }
  Lcg rng(opts.seed);
  for (std::size_t w = 0; w < opts.word_budget; ++w) {
    const std::size_t len = 2 + rng.below(opts.max_word_length - 1);
    std::vector<std::size_t> word(len);
    for (auto& letter : word) letter = rng.below(perms.size());
    Permutation elem = perms[word[0]];
    for (std::size_t i = 1; i < len; ++i) elem = compose(perms[word[i]], elem);
    auto type = cycle_type(elem);
    if (const std::size_t p = jordan_prime(type, d)) return JordanWitness{std::move(word), std::move(type), p};
  }
  return std::nullopt;
}

/// FullSymmetric only when a sufficient criterion fires; ProperSubgroupEvidence only
/// on certainties (intransitive, all generators even, or a complete closure < d!).
inline GroupVerdict is_full_symmetric(const std::vector<Permutation>& perms, std::size_t d,
                                      const SymmetricTestOptions& opts = {}) {
  check_degrees(perms, d);
  GroupVerdict v;
  v.degree = d;
  v.orbits = is_transitive(perms, d);
  for (const auto& p : perms) v.generator_odd.push_back(is_odd(p));

  if (d <= 1) {
    v.status = GroupStatus::FullSymmetric;
    v.reason = "S_1 is trivial";
    return v;
  }
  if (!v.orbits.transitive) {
    v.status = GroupStatus::ProperSubgroupEvidence;
    v.reason = "intransitive";
    return v;
  }
  if (!v.any_odd()) {
    v.status = GroupStatus::ProperSubgroupEvidence;
    v.reason = "all generators are even";
    return v;
  }
  if (d == 2) {
    v.status = GroupStatus::FullSymmetric;
    v.reason = "contains the transposition";
    return v;
  }

  v.witness = find_jordan_witness(perms, d, opts);
  if (v.witness) {
    v.status = GroupStatus::FullSymmetric;
    v.reason = "transitive, has a " + std::to_string(v.witness->prime) + "-cycle power and an odd generator";
    return v;
  }
  if (d <= kClosureMaxDegree) {
    v.closure_order = closure_order(perms, d);
    if (v.closure_order) {
      if (*v.closure_order == factorial(d)) {
        v.status = GroupStatus::FullSymmetric;
        v.reason = "closure order equals d!";
      } else {
        v.status = GroupStatus::ProperSubgroupEvidence;
        v.reason = "closure order " + std::to_string(*v.closure_order) + " < d!";
      }
      return v;
    }
  }
  v.status = GroupStatus::Unknown;
  v.reason = "no Jordan witness within the word budget";
  return v;
}

}  // namespace pieri
