#pragma once

// File formats. Every JSON document carries "schema": 1; complex numbers are
// [re, im] pairs written with round-trip precision.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pieri/group.hpp"
#include "pieri/monodromy.hpp"
#include "pieri/pieri.hpp"
#include "pieri/tracker.hpp"

namespace pieri::io {

using nlohmann::json;

inline constexpr int kSchema = 1;

inline json to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw InvalidInput("complex number must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json to_json(std::span<const Complex> v) {
  json a = json::array();
  for (const auto& z : v) a.push_back(to_json(z));
  return a;
}

inline CVector vector_from_json(const json& j) {
  if (!j.is_array()) throw InvalidInput("coordinate vector must be an array");
  CVector v;
  for (const auto& z : j) v.push_back(complex_from_json(z));
  return v;
}

inline json to_json(const CMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(to_json(m.row(r)));
  return rows;
}

inline CMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InvalidInput("matrix must be a non-empty array of rows");
  const std::size_t cols = j[0].size();
  std::vector<Complex> entries;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != cols) throw InvalidInput("matrix rows must have equal length");
    for (const auto& z : row) entries.push_back(complex_from_json(z));
  }
  return CMatrix(j.size(), cols, std::move(entries));
}

inline json to_json(const SimpleSchubertProblem& p) {
  return json{{"k", p.shape.k}, {"n", p.shape.n}, {"lambda", p.lambda.parts()}, {"mu", p.mu.parts()}};
}

/// Accepts a list of parts, "□"/"box", a comma list "2,1,0" or a digit string "210".
inline Partition partition_from_json(const json& j, int k) {
  if (j.is_array()) {
    std::vector<int> parts;
    for (const auto& p : j) {
      if (!p.is_number_integer()) throw InvalidInput("partition parts must be integers");
      parts.push_back(p.get<int>());
    }
    return Partition(std::move(parts), k);
  }
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "□" || s == "box") return Partition::box(k);
    if (s.empty() || s == "empty" || s == "0") return Partition::empty(k);
    std::vector<int> parts;
    if (s.find(',') != std::string::npos) {
      std::stringstream ss(s);
      std::string item;
      while (std::getline(ss, item, ',')) {
        try {
          std::size_t used = 0;
          parts.push_back(std::stoi(item, &used));
          if (used != item.size()) throw InvalidInput("bad partition '" + s + "'");
        } catch (const std::logic_error&) {
          throw InvalidInput("bad partition '" + s + "'");
        }
      }
    } else {
      for (char c : s) {
        if (c < '0' || c > '9') throw InvalidInput("bad partition '" + s + "'");
        parts.push_back(c - '0');
      }
    }
    return Partition(std::move(parts), k);
  }
  throw InvalidInput("partition must be a list or a string");
}

inline SimpleSchubertProblem problem_from_json(const json& j) {
  try {
    const int k = j.at("k").get<int>();
    const int n = j.at("n").get<int>();
    GrassmannianShape shape(k, n);
    Partition lambda = j.contains("lambda") ? partition_from_json(j["lambda"], k) : Partition::box(k);
    Partition mu = j.contains("mu") ? partition_from_json(j["mu"], k) : Partition::box(k);
    return SimpleSchubertProblem(shape, std::move(lambda), std::move(mu));
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("problem: ") + e.what());
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path);
  out << text;
  if (!out) throw InvalidInput("write failed: " + path);
}

inline void check_schema(const json& j, const std::string& what) {
  if (j.contains("schema") && j["schema"] != kSchema)
    throw InvalidInput(what + ": unsupported schema " + j["schema"].dump());
}

// Planes file: {"schema": 1, "planes": [G_1, ..., G_m]} or {"schema": 1, "plane": G}.
inline std::vector<CMatrix> planes_from_json(const json& j) {
  check_schema(j, "planes");
  std::vector<CMatrix> planes;
  if (j.contains("plane")) {
    planes.push_back(matrix_from_json(j["plane"]));
  } else if (j.contains("planes") && j["planes"].is_array()) {
    for (const auto& g : j["planes"]) planes.push_back(matrix_from_json(g));
  } else {
    throw InvalidInput("planes file needs a \"planes\" array or a \"plane\" matrix");
  }
  return planes;
}

inline json planes_to_json(const std::vector<CMatrix>& planes) {
  json a = json::array();
  for (const auto& g : planes) a.push_back(to_json(g));
  return json{{"schema", kSchema}, {"planes", a}};
}

inline json to_json(const MasterSet& m) {
  json sols = json::array();
  for (const auto& s : m.solutions) sols.push_back(to_json(s));
  return json{{"schema", kSchema},
              {"problem", to_json(m.problem)},
              {"seed", m.seed},
              {"count", m.solutions.size()},
              {"solutions", sols},
              {"residual_max", m.residual_max}};
}

inline MasterSet master_from_json(const json& j) {
  check_schema(j, "master set");
  try {
    MasterSet m;
    m.problem = problem_from_json(j.at("problem"));
    m.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& s : j.at("solutions")) m.solutions.push_back(vector_from_json(s));
    m.residual_max = j.value("residual_max", 0.0);
    return m;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("master set: ") + e.what());
  }
}

/// Pretty JSON with each permutation's image array on one line.
inline std::string permutations_document(const SimpleSchubertProblem& problem, std::uint64_t seed,
                                         std::size_t degree, const std::vector<LoopRecord>& loops) {
  std::ostringstream s;
  s << "{\n  \"schema\": " << kSchema << ",\n  \"problem\": " << to_json(problem).dump()
    << ",\n  \"seed\": " << seed << ",\n  \"degree\": " << degree << ",\n  \"loops\": [";
  for (std::size_t i = 0; i < loops.size(); ++i) {
    s << (i ? ",\n" : "\n") << "    {\"index\": " << i << ", \"strategy\": " << json(to_string(loops[i].strategy)).dump()
      << ", \"loop_seed\": " << loops[i].loop_seed
      << ", \"images\": " << json(loops[i].permutation.images).dump() << "}";
  }
  s << (loops.empty() ? "]\n}\n" : "\n  ]\n}\n");
  return s.str();
}

inline std::vector<Permutation> permutations_from_json(const json& j) {
  check_schema(j, "permutations");
  std::vector<Permutation> out;
  for (const auto& l : j.at("loops")) out.emplace_back(l.at("images").get<std::vector<std::size_t>>());
  return out;
}

inline json to_json(const GroupVerdict& v) {
  json orbits = json::array();
  for (const auto& o : v.orbits.orbits) orbits.push_back(o);
  json odd = json::array();
  for (std::size_t i = 0; i < v.generator_odd.size(); ++i)
    if (v.generator_odd[i]) odd.push_back(i);
  json witness = nullptr;
  if (v.witness)
    witness = json{{"word", v.witness->word}, {"cycle_type", v.witness->cycle_type}, {"prime", v.witness->prime}};
  return json{{"schema", kSchema},
              {"status", to_string(v.status)},
              {"degree", v.degree},
              {"transitive", v.orbits.transitive},
              {"orbits", orbits},
              {"witness", witness},
              {"parity", {{"odd_generators", odd}, {"any_odd", v.any_odd()}}},
              {"closure_order", v.closure_order ? json(*v.closure_order) : json(nullptr)},
              {"reason", v.reason}};
}

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// CSV rows (path_id, leg, t, var_index, re, im), leg numbering offset by leg_offset.
inline void append_trace_csv(std::ostream& out, const LoopTraces& traces, std::size_t leg_offset = 0) {
  for (std::size_t leg = 0; leg < traces.size(); ++leg)
    for (std::size_t path = 0; path < traces[leg].size(); ++path)
      for (const TracePoint& pt : traces[leg][path].trace)
        for (std::size_t v = 0; v < pt.x.size(); ++v)
          out << path << ',' << leg + leg_offset << ',' << format_double(pt.t) << ',' << v << ','
              << format_double(pt.x[v].real()) << ',' << format_double(pt.x[v].imag()) << '\n';
}

inline constexpr const char* kTraceHeader = "# schema=1\npath_id,leg,t,var_index,re,im\n";

}  // namespace pieri::io
