#pragma once

// Command implementations behind the pieri_galois executable. Each command
// returns its process exit code: 0 ok, 2 bad input, 3 numerical failure,
// 4 inconclusive Galois verdict.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pieri/io.hpp"
#include "pieri/monodromy.hpp"
#include "pieri/pieri.hpp"

namespace pieri::cli {

enum ExitCode : int { kOk = 0, kBadInput = 2, kNumericalFailure = 3, kInconclusive = 4 };

inline constexpr std::size_t kTraceMaxSolutions = 100;

struct ProblemSpec {
  SimpleSchubertProblem problem;
  std::uint64_t seed = 0;
  TrackOptions track;
  LoopStrategy strategy = LoopStrategy::Short;
  int max_loops = 50;
};

inline ProblemSpec spec_from_json(const io::json& j) {
  io::check_schema(j, "spec");
  ProblemSpec spec;
  spec.problem = io::problem_from_json(j);
  try {
    spec.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("options")) {
      const io::json& o = j["options"];
      TrackOptions& t = spec.track;
      t.newton_tol = o.value("newton_tol", t.newton_tol);
      t.max_newton_iters = o.value("max_newton_iters", t.max_newton_iters);
      t.initial_dt = o.value("initial_dt", t.initial_dt);
      t.min_dt = o.value("min_dt", t.min_dt);
      t.max_dt = o.value("max_dt", t.max_dt);
      t.step_expand_after = o.value("step_expand_after", t.step_expand_after);
      t.max_retries = o.value("max_retries", t.max_retries);
      if (o.contains("strategy")) spec.strategy = parse_strategy(o["strategy"].get<std::string>());
      spec.max_loops = o.value("max_loops", spec.max_loops);
    }
  } catch (const io::json::exception& e) {
    throw InvalidInput(std::string("spec: ") + e.what());
  }
  spec.track.validate();
  return spec;
}

struct RunOptions {
  std::string planes_file;
  std::string loop_plane_file;
  std::optional<std::uint64_t> loop_seed;
  std::string out_dir = ".";
  bool emit_trace = false;
};

inline ProblemInstance make_instance(const ProblemSpec& spec, const RunOptions& run) {
  if (!run.planes_file.empty()) {
    auto planes = io::planes_from_json(io::read_json_file(run.planes_file));
    return ProblemInstance::with_planes(spec.problem, std::move(planes), spec.seed);
  }
  return ProblemInstance::random(spec.problem, spec.seed);
}

inline std::string out_path(const RunOptions& run, const std::string& name) {
  std::filesystem::create_directories(run.out_dir);
  return (std::filesystem::path(run.out_dir) / name).string();
}

inline std::string problem_label(const SimpleSchubertProblem& p) {
  return "(" + p.lambda.to_string() + "," + p.mu.to_string() + ") on G(" + std::to_string(p.shape.k) + "," +
         std::to_string(p.shape.n) + ")";
}

inline int cmd_count(const ProblemSpec& spec, std::ostream& out) {
  out << count_solutions(spec.problem) << '\n';
  return kOk;
}

inline MasterSet solve_and_write(const ProblemSpec& spec, const ProblemInstance& inst, const RunOptions& run) {
  MasterSet master = solve_master(inst, spec.track);
  io::write_text_file(out_path(run, "master.json"), io::to_json(master).dump(1) + "\n");
  return master;
}

inline int cmd_solve(const ProblemSpec& spec, const RunOptions& run, std::ostream& out) {
  const ProblemInstance inst = make_instance(spec, run);
  const MasterSet master = solve_and_write(spec, inst, run);
  out << "solutions " << master.solutions.size() << "\nresidual_max " << io::format_double(master.residual_max)
      << '\n';
  return kOk;
}

inline int cmd_galois(const ProblemSpec& spec, const RunOptions& run, std::ostream& out) {
  const ProblemInstance inst = make_instance(spec, run);
  if (run.emit_trace && count_solutions(spec.problem) > kTraceMaxSolutions)
    throw InvalidInput("--emit-trace needs at most " + std::to_string(kTraceMaxSolutions) + " solutions");
  const MasterSet master = solve_and_write(spec, inst, run);
  Lcg rng(derive_seed(spec.seed, 200));
  std::vector<LoopTraces> traces;
  const AccumulateResult acc = accumulate(master, inst, spec.strategy, spec.max_loops, rng, spec.track, {},
                                          run.emit_trace ? &traces : nullptr);

  io::write_text_file(out_path(run, "permutations.json"),
                      io::permutations_document(spec.problem, spec.seed, master.solutions.size(), acc.loops));
  io::json verdict = io::to_json(acc.verdict);
  verdict["problem"] = io::to_json(spec.problem);
  verdict["seed"] = spec.seed;
  verdict["num_permutations"] = acc.perms.size();
  verdict["result"] = acc.full_symmetric ? "FullSymmetric" : "Inconclusive";
  io::write_text_file(out_path(run, "verdict.json"), verdict.dump(1) + "\n");
  if (run.emit_trace) {
    std::ostringstream csv;
    csv << io::kTraceHeader;
    std::size_t offset = 0;
    for (const auto& t : traces) {
      io::append_trace_csv(csv, t, offset);
      offset += t.size();
    }
    io::write_text_file(out_path(run, "trace.csv"), csv.str());
  }

  out << (acc.full_symmetric ? "FullSymmetric" : "Inconclusive") << " d=" << master.solutions.size()
      << " permutations=" << acc.perms.size() << " (" << acc.verdict.reason << ")\n";
  return acc.full_symmetric ? kOk : kInconclusive;
}

inline int cmd_trace(const ProblemSpec& spec, const RunOptions& run, std::ostream& out) {
  const std::uint64_t d = count_solutions(spec.problem);
  if (d > kTraceMaxSolutions)
    throw InvalidInput("trace needs at most " + std::to_string(kTraceMaxSolutions) + " solutions, problem has " +
                       std::to_string(d));
  const ProblemInstance inst = make_instance(spec, run);
  const MasterSet master = solve_and_write(spec, inst, run);
  Lcg rng(run.loop_seed.value_or(derive_seed(spec.seed, 300)));
  Loop loop;
  if (!run.loop_plane_file.empty()) {
    const auto planes = io::planes_from_json(io::read_json_file(run.loop_plane_file));
    if (planes.size() != 1) throw InvalidInput("loop plane file must hold exactly one plane");
    loop = make_loop(inst, spec.strategy, planes.front(), rng);
  } else {
    loop = make_loop(inst, spec.strategy, rng);
  }
  LoopTraces traces;
  const Permutation p = monodromy_permutation(master, loop, spec.track, rng, &traces);
  std::ostringstream csv;
  csv << io::kTraceHeader;
  io::append_trace_csv(csv, traces);
  io::write_text_file(out_path(run, "trace.csv"), csv.str());
  out << "legs " << loop.legs.size() << "\npermutation " << io::json(p.images).dump() << "\ncycles "
      << to_cycle_string(p) << '\n';
  return kOk;
}

/// Runs a command, mapping library errors to exit codes.
template <typename Fn>
int guarded(Fn&& fn, std::ostream& err) {
  try {
    return fn();
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const IncompatibleConditions& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const EmptyProblem& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const DimensionMismatch& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  }
}

}  // namespace pieri::cli
