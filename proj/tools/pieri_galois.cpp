// pieri_galois: solve simple Schubert problems and compute their Galois groups.
//
//   pieri_galois count  SPEC.json
//   pieri_galois solve  SPEC.json [--planes FILE] [--out DIR]
//   pieri_galois galois SPEC.json [--strategy short] [--max-loops 50] [--emit-trace]
//   pieri_galois trace  SPEC.json [--loop-plane FILE | --loop-seed S]
//
// Instead of a spec file the problem may be given inline with --k/--n/--lambda/--mu.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "pieri/cli.hpp"

namespace {

struct Args {
  std::string spec_file;
  std::optional<int> k, n;
  std::string lambda = "box", mu = "box";
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<int> max_loops;
  std::optional<std::string> strategy;
  std::optional<unsigned> threads;
  pieri::cli::RunOptions run;
};

pieri::cli::ProblemSpec build_spec(const Args& a) {
  using pieri::io::json;
  json j;
  if (!a.spec_file.empty()) {
    j = pieri::io::read_json_file(a.spec_file);
  } else {
    if (!a.k || !a.n) throw pieri::InvalidInput("give a spec file or both --k and --n");
    j = json{{"k", *a.k}, {"n", *a.n}, {"lambda", a.lambda}, {"mu", a.mu}};
  }
  pieri::cli::ProblemSpec spec = pieri::cli::spec_from_json(j);
  if (a.seed) spec.seed = *a.seed;
  if (a.tol) spec.track.newton_tol = *a.tol;
  if (a.max_loops) spec.max_loops = *a.max_loops;
  if (a.strategy) spec.strategy = pieri::parse_strategy(*a.strategy);
  if (a.threads) spec.track.threads = *a.threads;
  spec.track.validate();
  return spec;
}

void add_common(CLI::App* sub, Args& a) {
  sub->add_option("spec", a.spec_file, "problem spec (JSON)");
  sub->add_option("--k", a.k, "plane dimension k");
  sub->add_option("--n", a.n, "ambient dimension n");
  sub->add_option("--lambda", a.lambda, "partition lambda, e.g. 2,1,0 or box");
  sub->add_option("--mu", a.mu, "partition mu");
  sub->add_option("--seed", a.seed, "seed for planes, gammas and loops");
  sub->add_option("--tol", a.tol, "Newton corrector tolerance (relative step norm)");
  sub->add_option("--threads", a.threads, "path-tracking threads (0 = all cores)");
  sub->add_option("--planes", a.run.planes_file, "JSON file with the general planes G_1..G_m");
  sub->add_option("--out", a.run.out_dir, "output directory")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pieri homotopies and Galois groups of simple Schubert problems"};
  app.require_subcommand(1);
  Args a;

  auto* count = app.add_subcommand("count", "print the number of solutions d(lambda, mu)");
  auto* solve = app.add_subcommand("solve", "compute a master set of solutions");
  auto* galois = app.add_subcommand("galois", "compute monodromy permutations and decide if the group is S_d");
  auto* trace = app.add_subcommand("trace", "track the master set around one loop and export the paths");
  for (auto* sub : {count, solve, galois, trace}) add_common(sub, a);
  for (auto* sub : {galois, trace})
    sub->add_option("--strategy", a.strategy, "loop strategy: long, short or half");
  galois->add_option("--max-loops", a.max_loops, "stop after this many loops");
  galois->add_flag("--emit-trace", a.run.emit_trace, "also write trace.csv for every loop");
  trace->add_option("--loop-plane", a.run.loop_plane_file, "JSON file with the fresh plane G'");
  trace->add_option("--loop-seed", a.run.loop_seed, "seed for the fresh plane and leg gammas");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : pieri::cli::kBadInput;
  }

  return pieri::cli::guarded(
      [&]() -> int {
        const pieri::cli::ProblemSpec spec = build_spec(a);
        if (count->parsed()) return pieri::cli::cmd_count(spec, std::cout);
        if (solve->parsed()) return pieri::cli::cmd_solve(spec, a.run, std::cout);
        if (galois->parsed()) return pieri::cli::cmd_galois(spec, a.run, std::cout);
        return pieri::cli::cmd_trace(spec, a.run, std::cout);
      },
      std::cerr);
}
