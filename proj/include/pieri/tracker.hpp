#pragma once

// Predictor-corrector continuation along homotopies that are linear in t.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "pieri/numeric.hpp"
#include "pieri/rng.hpp"
#include "pieri/schubert.hpp"

namespace pieri {

/// Square system whose first equations det[E;G_j] are constant in t and whose
/// last equation is (1-t) det[E;start] + gamma t det[E;target].
struct LinearHomotopy {
  SkewChart chart;
  std::vector<CMatrix> fixed_planes;
  CMatrix start_plane;
  CMatrix target_plane;
  Complex gamma{1.0, 0.0};

  struct Eval {
    CVector values;
    CMatrix jac_x;
    CVector jac_t;
  };

  std::size_t num_equations() const { return fixed_planes.size() + 1; }

  void validate() const {
    if (std::abs(std::abs(gamma) - 1.0) > 1e-12) throw InvalidInput("homotopy gamma must have |gamma| = 1");
    if (static_cast<int>(num_equations()) != chart.num_vars())
      throw DimensionMismatch("homotopy is not square: " + std::to_string(num_equations()) +
                              " equations, " + std::to_string(chart.num_vars()) + " variables");
  }

  Eval evaluate(std::span<const Complex> x, double t) const {
    const CMatrix e = chart.instantiate(x);
    const std::size_t nv = chart.num_vars();
    Eval out;
    out.values.resize(num_equations());
    out.jac_x = CMatrix(num_equations(), nv);
    out.jac_t.assign(num_equations(), Complex{});
    for (std::size_t j = 0; j < fixed_planes.size(); ++j) {
      DetGradient dg = eval_condition(chart, e, fixed_planes[j]);
      out.values[j] = dg.value;
      std::copy(dg.gradient.begin(), dg.gradient.end(), out.jac_x.row(j).begin());
    }
    const std::size_t last = fixed_planes.size();
    const DetGradient s = eval_condition(chart, e, start_plane);
    const DetGradient g = eval_condition(chart, e, target_plane);
    const Complex a = 1.0 - t;
    const Complex b = gamma * t;
    out.values[last] = a * s.value + b * g.value;
    for (std::size_t v = 0; v < nv; ++v) out.jac_x(last, v) = a * s.gradient[v] + b * g.gradient[v];
    out.jac_t[last] = gamma * g.value - s.value;
    return out;
  }

  /// Same arc traversed from t=1 back to t=0.
  LinearHomotopy reversed() const {
    LinearHomotopy r = *this;
    std::swap(r.start_plane, r.target_plane);
    r.gamma = std::conj(gamma);
    return r;
  }
};

struct TrackOptions {
  double newton_tol = 1e-10;  // relative corrector step norm
  int max_newton_iters = 3;
  double initial_dt = 0.05;
  double min_dt = 1e-8;
  double max_dt = 0.1;
  int step_expand_after = 5;
  double refine_tol = 1e-12;  // endpoint polish
  int max_refine_iters = 12;
  double residual_tol = 1e-8;
  int max_retries = 3;
  std::size_t max_steps = 200000;
  unsigned threads = 0;  // 0 = hardware concurrency

  void validate() const {
    if (!(newton_tol > 0 && max_newton_iters > 0 && initial_dt > 0 && min_dt > 0 && max_dt > 0 &&
          step_expand_after > 0 && refine_tol > 0 && residual_tol > 0))
      throw InvalidInput("track options must be positive");
    if (!(min_dt < initial_dt)) throw InvalidInput("min_dt must be below initial_dt");
  }
};

enum class PathStatus { Success, SingularAt, StepUnderflow, NewtonDivergence };

inline const char* to_string(PathStatus s) {
  switch (s) {
    case PathStatus::Success: return "success";
    case PathStatus::SingularAt: return "singular";
    case PathStatus::StepUnderflow: return "step-underflow";
    case PathStatus::NewtonDivergence: return "newton-divergence";
  }
  return "?";
}

struct TracePoint {
  double t;
  CVector x;
};

struct PathResult {
  PathStatus status = PathStatus::Success;
  double t = 0.0;  // where tracking stopped (the singular t for SingularAt)
  CVector endpoint;
  double residual = 0.0;  // ‖H(endpoint, 1)‖∞ on success
  std::size_t steps = 0;
  std::size_t rejected = 0;
  std::vector<TracePoint> trace;

  bool ok() const { return status == PathStatus::Success; }
};

/// Uniform on the unit circle: exp(2 pi i u).
inline Complex fresh_gamma(Lcg& rng) {
  const double u = rng.uniform();
  return std::polar(1.0, 2.0 * std::numbers::pi * u);
}

namespace detail {

inline double relative_step(std::span<const Complex> dx, std::span<const Complex> x) {
  return norm2(dx) / std::max(1.0, norm2(x));
}

enum class NewtonOutcome { Converged, NotConverged, Diverged, Singular };

/// Newton on H(., t). Diverged means the correction grew twice in a row.
/// last_step, when given, receives the final relative correction.
inline NewtonOutcome newton(const LinearHomotopy& h, CVector& x, double t, double tol, int max_iters,
                            double* last_step = nullptr) {
  double prev = std::numeric_limits<double>::infinity();
  int growth = 0;
  for (int it = 0; it < max_iters; ++it) {
    const LinearHomotopy::Eval ev = h.evaluate(x, t);
    LuFactorization f = lu_factor(ev.jac_x);
    if (f.singular()) return NewtonOutcome::Singular;
    const CVector dx = f.solve(ev.values);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= dx[i];
    for (const auto& z : x)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return NewtonOutcome::Diverged;
    const double step = relative_step(dx, x);
    if (last_step) *last_step = step;
    if (step <= tol) return NewtonOutcome::Converged;
    if (step > prev) {
      if (++growth >= 2) return NewtonOutcome::Diverged;
    } else {
      growth = 0;
    }
    prev = step;
  }
  return NewtonOutcome::NotConverged;
}

inline double residual(const LinearHomotopy& h, std::span<const Complex> x, double t) {
  return norm_inf(h.evaluate(x, t).values);
}

}  // namespace detail

inline constexpr double kStagnationStep = 1e-6;

/// Tracks one solution of H(x, 0) = 0 to t = 1 with an Euler predictor and a
/// Newton corrector, then polishes the endpoint.
inline PathResult track_path(const LinearHomotopy& h, std::span<const Complex> start,
                             const TrackOptions& opts, bool record_trace = false) {
  h.validate();
  PathResult res;
  CVector x(start.begin(), start.end());

  // Starts may be embedded child points; pull them onto the t=0 system.
  {
    const auto out = detail::newton(h, x, 0.0, opts.refine_tol, opts.max_refine_iters);
    if (out == detail::NewtonOutcome::Singular) {
      res.status = PathStatus::SingularAt;
      return res;
    }
    if (detail::residual(h, x, 0.0) > opts.residual_tol) {
      res.status = PathStatus::NewtonDivergence;
      return res;
    }
  }
  if (record_trace) res.trace.push_back({0.0, x});

  double t = 0.0;
  double dt = std::min(opts.initial_dt, opts.max_dt);
  int successes = 0;
  while (t < 1.0) {
    if (res.steps + res.rejected >= opts.max_steps) {
      res.status = PathStatus::StepUnderflow;
      res.t = t;
      return res;
    }
    const double step = std::min(dt, 1.0 - t);
    double t1 = t + step;
    if (1.0 - t1 < 1e-14) t1 = 1.0;

    const LinearHomotopy::Eval ev = h.evaluate(x, t);
    LuFactorization f = lu_factor(ev.jac_x);
    if (f.singular()) {
      res.status = PathStatus::SingularAt;
      res.t = t;
      return res;
    }
    const CVector v = f.solve(ev.jac_t);
    CVector xp = x;
    for (std::size_t i = 0; i < xp.size(); ++i) xp[i] -= (t1 - t) * v[i];

    double last_step = 1.0;
    auto out = detail::newton(h, xp, t1, opts.newton_tol, opts.max_newton_iters, &last_step);
    // Far from the origin the relative step bottoms out near newton_tol from
    // roundoff alone; a point that is on the path by residual is accepted.
    if (out == detail::NewtonOutcome::NotConverged && last_step < kStagnationStep &&
        detail::residual(h, xp, t1) < opts.residual_tol)
      out = detail::NewtonOutcome::Converged;
    if (out == detail::NewtonOutcome::Converged) {
      x = std::move(xp);
      t = t1;
      ++res.steps;
      if (record_trace) res.trace.push_back({t, x});
      if (++successes >= opts.step_expand_after) {
        dt = std::min(2.0 * dt, opts.max_dt);
        successes = 0;
      }
    } else {
      ++res.rejected;
      successes = 0;
      dt *= 0.5;
      if (dt < opts.min_dt) {
        res.status = PathStatus::StepUnderflow;
        res.t = t;
        return res;
      }
    }
  }

  res.t = 1.0;
  const auto out = detail::newton(h, x, 1.0, opts.refine_tol, opts.max_refine_iters);
  if (out == detail::NewtonOutcome::Singular) {
    res.status = PathStatus::SingularAt;
    return res;
  }
  res.residual = detail::residual(h, x, 1.0);
  if (out == detail::NewtonOutcome::Diverged || res.residual > opts.residual_tol) {
    res.status = PathStatus::NewtonDivergence;
    return res;
  }
  if (record_trace) res.trace.back() = {1.0, x};
  res.endpoint = std::move(x);
  return res;
}

/// Runs body(i) for i in [0, count) on worker threads; results must be written by index.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  for (auto& th : pool) th.join();
}

inline constexpr double kEndpointSeparation = 1e-6;

/// Index pairs of successful endpoints closer than kEndpointSeparation.
inline std::vector<std::pair<std::size_t, std::size_t>> endpoint_collisions(
    const std::vector<PathResult>& results) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i].ok()) continue;
    for (std::size_t j = i + 1; j < results.size(); ++j) {
      if (!results[j].ok()) continue;
      if (distance2(results[i].endpoint, results[j].endpoint) < kEndpointSeparation) out.emplace_back(i, j);
    }
  }
  return out;
}

enum class RetryScope { AffectedPaths, WholeBatch, None };

/// Tracks every start. Failed or colliding paths are retried for up to opts.max_retries
/// rounds; each round halves dt. A round first re-tracks only the affected paths on
/// the same homotopy (a smaller step cures path jumping without changing which
/// endpoint a start belongs to). If that leaves failures, it re-tracks the whole batch
/// under a fresh gamma, since mixing endpoints from two gammas is not a valid set.
/// The retry gammas are drawn from rng before any path runs, so output does not
/// depend on thread scheduling.
inline std::vector<PathResult> track_all(const LinearHomotopy& h, const std::vector<CVector>& starts,
                                         const TrackOptions& opts, Lcg& rng,
                                         RetryScope scope = RetryScope::AffectedPaths,
                                         bool record_trace = false) {
  std::vector<Complex> retry_gammas(std::max(0, opts.max_retries));
  for (auto& g : retry_gammas) g = fresh_gamma(rng);

  std::vector<PathResult> results(starts.size());
  parallel_for(starts.size(), opts.threads,
               [&](std::size_t i) { results[i] = track_path(h, starts[i], opts, record_trace); });
  if (scope == RetryScope::None) return results;

  auto affected = [&] {
    std::vector<std::size_t> todo;
    std::vector<bool> redo(starts.size(), false);
    for (std::size_t i = 0; i < results.size(); ++i)
      if (!results[i].ok()) redo[i] = true;
    for (const auto& [i, j] : endpoint_collisions(results)) redo[i] = redo[j] = true;
    for (std::size_t i = 0; i < redo.size(); ++i)
      if (redo[i]) todo.push_back(i);
    return todo;
  };
  auto retrack = [&](const LinearHomotopy& hr, const TrackOptions& o, const std::vector<std::size_t>& todo) {
    parallel_for(todo.size(), opts.threads,
                 [&](std::size_t q) { results[todo[q]] = track_path(hr, starts[todo[q]], o, record_trace); });
  };
  std::vector<std::size_t> all(starts.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;

  TrackOptions retry_opts = opts;
  LinearHomotopy hr = h;
  for (std::size_t round = 0; round < retry_gammas.size(); ++round) {
    std::vector<std::size_t> todo = affected();
    if (todo.empty()) return results;
    retry_opts.initial_dt *= 0.5;
    retry_opts.max_dt *= 0.5;
    retry_opts.min_dt = std::min(retry_opts.min_dt, 0.5 * retry_opts.initial_dt);
    if (scope == RetryScope::AffectedPaths) {
      retrack(hr, retry_opts, todo);
      if (affected().empty()) return results;
    }
    hr.gamma = retry_gammas[round];
    retrack(hr, retry_opts, all);
  }
  if (!endpoint_collisions(results).empty())
    throw PathCollision("endpoints still coincide after " + std::to_string(retry_gammas.size()) + " retries");
  return results;
}

}  // namespace pieri
