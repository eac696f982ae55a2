#pragma once

// Shared problem instances for the test suites.

#include <string>
#include <vector>

#include "oracles.hpp"
#include "pieri/io.hpp"
#include "pieri/schubert.hpp"

namespace fixtures {

inline std::string data_path(const std::string& name) { return std::string(PIERI_TEST_DATA_DIR) + "/" + name; }

inline pieri::SimpleSchubertProblem all_simple(int k, int n) {
  return pieri::SimpleSchubertProblem(pieri::GrassmannianShape(k, n), pieri::Partition::box(k),
                                      pieri::Partition::box(k));
}

/// (□, □, □, □) on G(2,4) with the two integer planes of the worked example.
inline pieri::ProblemInstance worked24() {
  return pieri::ProblemInstance::with_planes(
      all_simple(2, 4), pieri::io::planes_from_json(pieri::io::read_json_file(data_path("worked24_planes.json"))),
      2007);
}

inline pieri::CMatrix worked24_loop_plane() {
  return pieri::io::planes_from_json(pieri::io::read_json_file(data_path("worked24_loop_plane.json"))).front();
}

// Reference solutions, five significant digits.
inline const std::vector<pieri::CVector>& worked24_reference() {
  static const std::vector<pieri::CVector> pts{{{-0.23714, -0.0028980}, {-0.51680, -0.10520}},
                                               {{0.97009, 1.2705}, {0.44336, 0.38248}}};
  return pts;
}

inline oracle::Dense to_dense(const pieri::CMatrix& a) {
  oracle::Dense d(a.rows(), std::vector<pieri::Complex>(a.cols()));
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) d[r][c] = a(r, c);
  return d;
}

/// Roots of the instance's determinantal system by the grid-multistart oracle.
inline std::vector<pieri::CVector> oracle_roots(const pieri::SimpleSchubertProblem& p,
                                                const std::vector<pieri::CMatrix>& planes, int grid) {
  const oracle::ChartPattern pattern(p.shape.k, p.shape.n, p.lambda.parts(), p.mu.parts());
  std::vector<oracle::Dense> dense;
  for (const auto& g : planes) dense.push_back(to_dense(g));
  return oracle::grid_multistart_roots(pattern, dense, grid);
}

/// Smallest distance from x to any point of the set.
inline double nearest(const pieri::CVector& x, const std::vector<pieri::CVector>& set) {
  double best = 1e300;
  for (const auto& y : set) best = std::min(best, pieri::distance2(x, y));
  return best;
}

}  // namespace fixtures
