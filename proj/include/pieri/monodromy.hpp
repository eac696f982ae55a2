#pragma once

// Piecewise-linear loops in the space of the last plane G_m. Each leg swaps one
// row g_i of the current plane for g'_i; the determinant is linear in that row,
// so the leg is a linear homotopy (1-t) F(.., g_i, ..) + t F(.., g'_i, ..).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pieri/group.hpp"
#include "pieri/pieri.hpp"
#include "pieri/tracker.hpp"

namespace pieri {

enum class LoopStrategy { Long, Short, Half };

inline const char* to_string(LoopStrategy s) {
  switch (s) {
    case LoopStrategy::Long: return "long";
    case LoopStrategy::Short: return "short";
    case LoopStrategy::Half: return "half";
  }
  return "?";
}

inline LoopStrategy parse_strategy(const std::string& s) {
  if (s == "long") return LoopStrategy::Long;
  if (s == "short") return LoopStrategy::Short;
  if (s == "half") return LoopStrategy::Half;
  throw InvalidInput("unknown loop strategy '" + s + "' (expected long, short or half)");
}

struct LoopLeg {
  LinearHomotopy homotopy;
  int row = -1;  // row of G_m being moved
  bool outward = true;
};

struct Loop {
  LoopStrategy strategy = LoopStrategy::Short;
  CMatrix base_plane;   // G_m
  CMatrix fresh_plane;  // G'
  std::vector<LoopLeg> legs;
};

namespace detail {

inline CMatrix with_row(const CMatrix& g, const CMatrix& src, int row) {
  CMatrix out = g;
  std::copy(src.row(row).begin(), src.row(row).end(), out.row(row).begin());
  return out;
}

}  // namespace detail

/// Loop based at G_m through the cube spanned by the rows of G_m and fresh_plane.
/// Long walks every row out then back; Short uses two rows (a square); Half goes
/// out along one row and returns with a random gamma. With one row, every
/// strategy is the Half loop.
inline Loop make_loop(const ProblemInstance& inst, LoopStrategy strategy, const CMatrix& fresh_plane,
                      Lcg& rng) {
  const int m = inst.problem.num_conditions();
  if (m < 1) throw InvalidInput("make_loop: the problem has no general plane to move");
  const CMatrix& base = inst.planes.back();
  if (fresh_plane.rows() != base.rows() || fresh_plane.cols() != base.cols())
    throw DimensionMismatch("fresh plane must be (n-k) x n");

  Loop loop;
  loop.strategy = strategy;
  loop.base_plane = base;
  loop.fresh_plane = fresh_plane;

  const SkewChart c = chart(inst.problem);
  const std::vector<CMatrix> fixed(inst.planes.begin(), inst.planes.end() - 1);
  const int rows = static_cast<int>(base.rows());

  std::vector<std::pair<int, bool>> moves;  // (row, outward)
  LoopStrategy effective = rows == 1 ? LoopStrategy::Half : strategy;
  switch (effective) {
    case LoopStrategy::Long:
      for (int r = 0; r < rows; ++r) moves.emplace_back(r, true);
      for (int r = 0; r < rows; ++r) moves.emplace_back(r, false);
      break;
    case LoopStrategy::Short:
      moves = {{0, true}, {1, true}, {0, false}, {1, false}};
      break;
    case LoopStrategy::Half:
      moves = {{0, true}, {0, false}};
      break;
  }

  CMatrix current = base;
  for (std::size_t i = 0; i < moves.size(); ++i) {
    const auto [row, outward] = moves[i];
    CMatrix next = detail::with_row(current, outward ? fresh_plane : base, row);
    LoopLeg leg;
    leg.row = row;
    leg.outward = outward;
    leg.homotopy.chart = c;
    leg.homotopy.fixed_planes = fixed;
    leg.homotopy.start_plane = current;
    leg.homotopy.target_plane = next;
    if (effective == LoopStrategy::Half && i == 1) leg.homotopy.gamma = fresh_gamma(rng);
    loop.legs.push_back(std::move(leg));
    current = std::move(next);
  }
  return loop;
}

/// Draws G' from rng, then builds the loop.
inline Loop make_loop(const ProblemInstance& inst, LoopStrategy strategy, Lcg& rng) {
  const CMatrix fresh = random_plane(inst.problem.shape, rng);
  return make_loop(inst, strategy, fresh, rng);
}

/// The same closed path traversed backwards.
inline Loop reversed(const Loop& loop) {
  Loop r = loop;
  r.legs.clear();
  for (auto it = loop.legs.rbegin(); it != loop.legs.rend(); ++it) {
    LoopLeg leg = *it;
    leg.homotopy = it->homotopy.reversed();
    leg.outward = !it->outward;
    r.legs.push_back(std::move(leg));
  }
  return r;
}

inline constexpr double kMatchDistance = 1e-6;
inline constexpr double kMatchRatio = 10.0;

/// Nearest-neighbour assignment of endpoints to master points with a
/// separation-ratio guard.
inline Permutation match_endpoints(const std::vector<CVector>& master, const std::vector<CVector>& endpoints) {
  if (master.size() != endpoints.size()) throw DimensionMismatch("endpoint count differs from master set");
  const std::size_t d = master.size();
  std::vector<std::size_t> images(d);
  std::vector<bool> taken(d, false);
  for (std::size_t i = 0; i < d; ++i) {
    double best = std::numeric_limits<double>::infinity(), second = best;
    std::size_t arg = 0;
    for (std::size_t j = 0; j < d; ++j) {
      const double dist = distance2(endpoints[i], master[j]);
      if (dist < best) {
        second = best;
        best = dist;
        arg = j;
      } else if (dist < second) {
        second = dist;
      }
    }
    if (best > kMatchDistance)
      throw MatchAmbiguity("endpoint " + std::to_string(i) + " is " + std::to_string(best) +
                           " from the nearest master point");
    if (d > 1 && second < kMatchRatio * best)
      throw MatchAmbiguity("endpoint " + std::to_string(i) + " is not well separated");
    if (taken[arg]) throw NotBijective("two paths end at master point " + std::to_string(arg));
    taken[arg] = true;
    images[i] = arg;
  }
  return Permutation(std::move(images));
}

/// Per-leg path results of one traversal, for trace export.
using LoopTraces = std::vector<std::vector<PathResult>>;

namespace detail {

inline Permutation traverse(const std::vector<CVector>& master, const Loop& loop, const TrackOptions& opts,
                            Lcg& rng, LoopTraces* traces) {
  std::vector<CVector> pts = master;
  if (traces) traces->clear();
  for (std::size_t l = 0; l < loop.legs.size(); ++l) {
    std::vector<PathResult> res = track_all(loop.legs[l].homotopy, pts, opts, rng, RetryScope::None,
                                            traces != nullptr);
    for (std::size_t i = 0; i < res.size(); ++i) {
      if (!res[i].ok())
        throw TrackingFailure("leg " + std::to_string(l) + " path " + std::to_string(i) + ": " +
                              to_string(res[i].status) + " at t=" + std::to_string(res[i].t));
      pts[i] = res[i].endpoint;
    }
    if (traces) traces->push_back(std::move(res));
  }
  return match_endpoints(master, pts);
}

}  // namespace detail

/// p[i] = index of the master point reached from master point i around the loop.
/// Failed legs or ambiguous matches re-run the whole loop with dt halved and a
/// fresh gamma on every leg, which keeps it a closed loop based at G_m.
inline Permutation monodromy_permutation(const MasterSet& master, const Loop& loop, const TrackOptions& opts,
                                         Lcg& rng, LoopTraces* traces = nullptr) {
  Loop attempt = loop;
  TrackOptions o = opts;
  std::vector<Complex> retry_gammas;
  for (int r = 0; r < opts.max_retries; ++r)
    for (std::size_t l = 0; l < loop.legs.size(); ++l) retry_gammas.push_back(fresh_gamma(rng));

  for (int round = 0;; ++round) {
    try {
      return detail::traverse(master.solutions, attempt, o, rng, traces);
    } catch (const Error&) {
      if (round >= opts.max_retries) throw;
    }
    o.initial_dt *= 0.5;
    o.max_dt *= 0.5;
    o.min_dt = std::min(o.min_dt, 0.5 * o.initial_dt);
    for (std::size_t l = 0; l < attempt.legs.size(); ++l)
      attempt.legs[l].homotopy.gamma = retry_gammas[round * loop.legs.size() + l];
  }
}

struct LoopRecord {
  LoopStrategy strategy;
  std::uint64_t loop_seed;  // Lcg seed that regenerates G' and the leg gammas
  CMatrix fresh_plane;
  Permutation permutation;
};

struct AccumulateResult {
  std::vector<Permutation> perms;
  std::vector<LoopRecord> loops;
  GroupVerdict verdict;
  bool full_symmetric = false;
};

/// Generates loops until the permutations provably generate S_d or max_loops is hit.
/// Loop i runs on its own Lcg seeded from rng, so any single loop can be replayed.
inline AccumulateResult accumulate(const MasterSet& master, const ProblemInstance& inst, LoopStrategy strategy,
                                   int max_loops, Lcg& rng, const TrackOptions& opts,
                                   const SymmetricTestOptions& group_opts = {},
                                   std::vector<LoopTraces>* traces = nullptr) {
  AccumulateResult out;
  const std::size_t d = master.solutions.size();
  out.verdict = is_full_symmetric(out.perms, d, group_opts);
  if (max_loops <= 0) return out;
  if (d <= 1) {
    out.full_symmetric = out.verdict.status == GroupStatus::FullSymmetric;
    return out;
  }
  for (int i = 0; i < max_loops; ++i) {
    const std::uint64_t loop_seed = rng.next();
    Lcg loop_rng(loop_seed);
    Loop loop = make_loop(inst, strategy, loop_rng);
    LoopTraces loop_traces;
    Permutation p = monodromy_permutation(master, loop, opts, loop_rng, traces ? &loop_traces : nullptr);
    if (traces) traces->push_back(std::move(loop_traces));
    out.perms.push_back(p);
    out.loops.push_back({strategy, loop_seed, loop.fresh_plane, std::move(p)});
    out.verdict = is_full_symmetric(out.perms, d, group_opts);
    if (out.verdict.status == GroupStatus::FullSymmetric) {
      out.full_symmetric = true;
      break;
    }
  }
  return out;
}

}  // namespace pieri
