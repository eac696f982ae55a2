#pragma once

// Master sets by the Pieri homotopy: the last general plane G_m is degenerated to
// the special plane G_mu, where the system splits into the child problems
// (lambda, nu) with mu ⋖ nu; their solutions are continued along the pencil
//   gamma t det[E; G_m] + (1 - t) det[E; G_mu] = 0.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pieri/schubert.hpp"
#include "pieri/tracker.hpp"

namespace pieri {

struct ChildEmbedding {
  Partition child_nu;
  int zeroed_row = -1;
  int parent_var_index = -1;  // index of a_{i, n-k+i-mu_i} in the parent chart
};

/// Where the child chart E_{lambda,nu} sits inside the parent E_{lambda,mu}.
inline ChildEmbedding child_embedding(const SkewChart& parent, const Partition& nu) {
  const Partition& mu = parent.problem().mu;
  if (nu.size() != mu.size()) throw DimensionMismatch("child partition has the wrong length");
  int row = -1;
  for (int r = 0; r < mu.size(); ++r) {
    const int diff = nu[r] - mu[r];
    if (diff == 1 && row < 0) {
      row = r;
    } else if (diff != 0) {
      throw InvalidInput("nu does not cover mu");
    }
  }
  if (row < 0) throw InvalidInput("nu does not cover mu");
  const int var = parent.rightmost_var(row);
  if (var < 0) throw IncompatibleConditions("child zeroes the leading one of a row");
  return ChildEmbedding{nu, row, var};
}

/// Parent coordinates of a child solution: a zero at the dropped cell, the other
/// coordinates in their shared row-major order.
inline CVector embed_child(std::span<const Complex> child_solution, const ChildEmbedding& emb,
                           const SkewChart& parent) {
  if (static_cast<int>(child_solution.size()) + 1 != parent.num_vars())
    throw DimensionMismatch("child solution must have parent num_vars - 1 entries");
  CVector x;
  x.reserve(parent.num_vars());
  x.insert(x.end(), child_solution.begin(), child_solution.begin() + emb.parent_var_index);
  x.push_back(Complex{});
  x.insert(x.end(), child_solution.begin() + emb.parent_var_index, child_solution.end());
  return x;
}

struct MasterSet {
  SimpleSchubertProblem problem;
  std::uint64_t seed = 0;
  std::vector<CVector> solutions;
  double residual_max = 0.0;
};

/// Per-node bookkeeping of one solve.
struct PieriNodeStats {
  Partition mu;
  int depth = 0;  // general planes in play
  std::size_t paths_tracked = 0;
  std::size_t solutions = 0;
  std::uint64_t expected = 0;
};

struct SolveReport {
  std::vector<PieriNodeStats> nodes;
  int restarts = 0;
  std::size_t retracked = 0;
};

/// Lexicographic by (re, im) of successive coordinates.
inline bool canonical_less(const CVector& a, const CVector& b) {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
    if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
  }
  return a.size() < b.size();
}

inline void canonical_sort(std::vector<CVector>& pts) {
  std::sort(pts.begin(), pts.end(), canonical_less);
}

inline double max_residual(const SkewChart& c, std::span<const CMatrix> planes,
                           const std::vector<CVector>& pts) {
  double r = 0.0;
  for (const auto& x : pts) r = std::max(r, norm_inf(eval_system(c, planes, x).values));
  return r;
}

namespace detail {

class PieriSolver {
 public:
  PieriSolver(const ProblemInstance& inst, const TrackOptions& opts, Lcg& rng, SolveReport* report)
      : inst_(inst), opts_(opts), rng_(rng), report_(report) {}

  std::vector<CVector> solve(const Partition& mu) {
    if (auto it = memo_.find(mu); it != memo_.end()) return it->second;
    const SimpleSchubertProblem prob(inst_.problem.shape, inst_.problem.lambda, mu);
    const int depth = prob.num_conditions();
    std::vector<CVector> out;
    if (!prob.compatible()) {
      memo_.emplace(mu, out);
      return out;
    }
    if (depth == 0) {
      out.emplace_back();
      memo_.emplace(mu, out);
      return out;
    }

    const SkewChart parent = chart(prob);
    std::vector<CVector> starts;
    for (const Partition& nu : children(mu, prob.shape)) {
      const SimpleSchubertProblem child(prob.shape, prob.lambda, nu);
      if (!child.compatible()) continue;
      const std::vector<CVector> sols = solve(nu);
      if (sols.empty()) continue;
      const ChildEmbedding emb = child_embedding(parent, nu);
      for (const auto& s : sols) starts.push_back(embed_child(s, emb, parent));
    }

    const std::uint64_t expected = count_solutions(prob);
    LinearHomotopy h;
    h.chart = parent;
    h.fixed_planes.assign(inst_.planes.begin(), inst_.planes.begin() + (depth - 1));
    h.start_plane = special_plane(mu, prob.shape);
    h.target_plane = inst_.planes[depth - 1];
    h.gamma = fresh_gamma(rng_);

    std::vector<PathResult> results;
    try {
      results = track_all(h, starts, opts_, rng_, RetryScope::AffectedPaths);
    } catch (const PathCollision& e) {
      throw CountMismatch(std::string("pieri node mu=") + mu.to_string() + ": " + e.what());
    }
    for (auto& r : results)
      if (r.ok()) out.push_back(std::move(r.endpoint));

    if (report_)
      report_->nodes.push_back({mu, depth, starts.size(), out.size(), expected});
    if (out.size() != expected)
      throw CountMismatch("pieri node mu=" + mu.to_string() + ": " + std::to_string(out.size()) +
                          " endpoints, expected " + std::to_string(expected));
    memo_.emplace(mu, out);
    return out;
  }

 private:
  const ProblemInstance& inst_;
  const TrackOptions& opts_;
  Lcg& rng_;
  SolveReport* report_;
  std::map<Partition, std::vector<CVector>> memo_;
};

}  // namespace detail

/// All d(lambda, mu) solutions of the instance, canonically ordered. A count
/// mismatch triggers one restart with a fresh gamma stream before it is raised.
inline MasterSet solve_master(const ProblemInstance& inst, const TrackOptions& opts,
                              SolveReport* report = nullptr) {
  opts.validate();
  if (!inst.problem.compatible()) {
    MasterSet empty{inst.problem, inst.seed, {}, 0.0};
    return empty;
  }
  for (int attempt = 0;; ++attempt) {
    Lcg rng(derive_seed(inst.seed, 100 + attempt));
    if (report) {
      report->nodes.clear();
      report->restarts = attempt;
    }
    try {
      detail::PieriSolver solver(inst, opts, rng, report);
      MasterSet ms;
      ms.problem = inst.problem;
      ms.seed = inst.seed;
      ms.solutions = solver.solve(inst.problem.mu);
      canonical_sort(ms.solutions);
      ms.residual_max = max_residual(chart(inst.problem), inst.planes, ms.solutions);
      return ms;
    } catch (const CountMismatch&) {
      if (attempt >= 1) throw;
    }
  }
}

struct VerifyReport {
  bool ok = true;
  std::vector<std::string> violations;
  double residual_max = 0.0;
  double min_separation = std::numeric_limits<double>::infinity();
  std::uint64_t expected = 0;
  std::size_t found = 0;
};

inline VerifyReport verify_master(const MasterSet& master, const ProblemInstance& inst,
                                  double residual_tol = 1e-8) {
  VerifyReport rep;
  rep.found = master.solutions.size();
  rep.expected = inst.problem.compatible() ? count_solutions(inst.problem) : 0;
  if (!(master.problem == inst.problem)) rep.violations.push_back("master set belongs to another problem");
  if (rep.found != rep.expected)
    rep.violations.push_back("count " + std::to_string(rep.found) + " != d(lambda,mu) = " +
                             std::to_string(rep.expected));
  if (rep.found > 0) {
    const SkewChart c = chart(inst.problem);
    for (std::size_t i = 0; i < master.solutions.size(); ++i) {
      const auto& x = master.solutions[i];
      if (static_cast<int>(x.size()) != c.num_vars()) {
        rep.violations.push_back("solution " + std::to_string(i) + " has the wrong length");
        continue;
      }
      const double r = norm_inf(eval_system(c, inst.planes, x).values);
      rep.residual_max = std::max(rep.residual_max, r);
      if (r >= residual_tol)
        rep.violations.push_back("solution " + std::to_string(i) + " residual " + std::to_string(r));
      if (std::abs(c.rightmost_product(x)) == 0.0)
        rep.violations.push_back("solution " + std::to_string(i) + " has a zero rightmost entry");
    }
    for (std::size_t i = 0; i < master.solutions.size(); ++i)
      for (std::size_t j = i + 1; j < master.solutions.size(); ++j) {
        if (master.solutions[i].size() != master.solutions[j].size()) continue;
        const double d = distance2(master.solutions[i], master.solutions[j]);
        rep.min_separation = std::min(rep.min_separation, d);
        if (d <= kEndpointSeparation)
          rep.violations.push_back("solutions " + std::to_string(i) + " and " + std::to_string(j) +
                                   " coincide");
      }
  }
  rep.ok = rep.violations.empty();
  return rep;
}

}  // namespace pieri
