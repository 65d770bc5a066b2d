#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cayley/circuit.hpp"
#include "cayley/reduction.hpp"
#include "cayley/version.hpp"

namespace cayley {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Circuit files
//
// {
//   "n": 2,
//   "gates": [
//     {"qubits": [0,1], "unitary": [[[re,im], ...], ...]},
//     {"qubits": [0],   "haar_seed": 7}
//   ]
// }
//
// A gate carries either an explicit unitary (nested arrays of [re,im] pairs,
// row-major) or a haar_seed regenerating it reproducibly. Unitaries are
// checked to residual < 1e-8 on load.

struct GateSpec {
  std::vector<int> qubits;
  std::optional<Matrix<double>> unitary;
  std::optional<uint64_t> haar_seed;
};

struct CircuitFile {
  int n = 0;
  std::vector<GateSpec> gates;
};

inline Matrix<double> gate_unitary(const GateSpec& spec) {
  if (spec.unitary) return *spec.unitary;
  SplitRng rng(*spec.haar_seed);
  return haar_unitary<double>(1 << spec.qubits.size(), rng);
}

inline Architecture architecture_of(const CircuitFile& file) {
  Architecture arch;
  arch.n = file.n;
  for (const auto& g : file.gates) arch.placements.push_back(g.qubits);
  arch.validate();
  return arch;
}

namespace detail {

inline Matrix<double> parse_unitary(const ordered_json& j, size_t gate_index) {
  auto fail = [&](const std::string& msg) {
    throw SchemaError("gate " + std::to_string(gate_index) + ": " + msg);
  };
  if (!j.is_array() || j.empty()) fail("unitary must be a nonempty array of rows");
  int dim = static_cast<int>(j.size());
  Matrix<double> m(dim);
  for (int r = 0; r < dim; ++r) {
    const auto& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
      fail("unitary row " + std::to_string(r) + " must have " + std::to_string(dim) +
           " entries");
    for (int c = 0; c < dim; ++c) {
      const auto& e = row[c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        fail("unitary entry (" + std::to_string(r) + "," + std::to_string(c) +
             ") must be a [re, im] pair");
      m(r, c) = Cx<double>(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

inline ordered_json unitary_to_json(const Matrix<double>& m) {
  ordered_json rows = ordered_json::array();
  for (int r = 0; r < m.dim(); ++r) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < m.dim(); ++c)
      row.push_back(ordered_json::array({m(r, c).re, m(r, c).im}));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace detail

inline CircuitFile parse_circuit_file(const ordered_json& j) {
  if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer())
    throw SchemaError("circuit file: top-level object with integer 'n' required");
  if (!j.contains("gates") || !j["gates"].is_array())
    throw SchemaError("circuit file: 'gates' array required");
  CircuitFile file;
  file.n = j["n"].get<int>();
  for (size_t k = 0; k < j["gates"].size(); ++k) {
    const auto& gj = j["gates"][k];
    auto fail = [&](const std::string& msg) {
      throw SchemaError("gate " + std::to_string(k) + ": " + msg);
    };
    if (!gj.is_object()) fail("must be an object");
    if (!gj.contains("qubits") || !gj["qubits"].is_array()) fail("'qubits' array required");
    GateSpec spec;
    for (const auto& q : gj["qubits"]) {
      if (!q.is_number_integer()) fail("qubit indices must be integers");
      spec.qubits.push_back(q.get<int>());
    }
    if (spec.qubits.size() != 1 && spec.qubits.size() != 2)
      fail("gates act on 1 or 2 qubits");
    for (int q : spec.qubits)
      if (q < 0 || q >= file.n) fail("qubit index out of range");
    if (spec.qubits.size() == 2 && spec.qubits[0] == spec.qubits[1])
      fail("2-qubit gate needs distinct qubits");
    bool has_u = gj.contains("unitary");
    bool has_seed = gj.contains("haar_seed");
    if (!has_u && !has_seed) fail("either 'unitary' or 'haar_seed' required");
    if (has_u) {
      Matrix<double> m = detail::parse_unitary(gj["unitary"], k);
      if (m.dim() != (1 << spec.qubits.size()))
        fail("unitary dimension must be 2^(#qubits)");
      if (unitarity_residual(m) > 1e-8) fail("matrix fails the unitarity check (residual > 1e-8)");
      spec.unitary = m;
    }
    if (has_seed) {
      if (!gj["haar_seed"].is_number_unsigned() && !gj["haar_seed"].is_number_integer())
        fail("'haar_seed' must be an integer");
      spec.haar_seed = gj["haar_seed"].get<uint64_t>();
    }
    file.gates.push_back(std::move(spec));
  }
  return file;
}

inline CircuitFile load_circuit_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open circuit file: " + path);
  ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("circuit file " + path + ": " + e.what());
  }
  return parse_circuit_file(j);
}

inline ordered_json circuit_file_to_json(const CircuitFile& file) {
  ordered_json j;
  j["n"] = file.n;
  j["gates"] = ordered_json::array();
  for (const auto& g : file.gates) {
    ordered_json gj;
    gj["qubits"] = g.qubits;
    if (g.unitary) gj["unitary"] = detail::unitary_to_json(*g.unitary);
    if (g.haar_seed) gj["haar_seed"] = *g.haar_seed;
    j["gates"].push_back(gj);
  }
  return j;
}

inline void save_circuit_file(const std::string& path, const CircuitFile& file) {
  std::ofstream out(path);
  if (!out) throw SchemaError("cannot write circuit file: " + path);
  out << circuit_file_to_json(file).dump(2) << "\n";
}

// Build the interpolation circuit: worst gates from the file, Haar
// companions drawn from split streams of `companion_seed`.
template <class T>
Circuit<T> build_circuit(const CircuitFile& file, uint64_t companion_seed) {
  Circuit<T> c;
  c.arch = architecture_of(file);
  SplitRng rng(companion_seed);
  for (size_t k = 0; k < file.gates.size(); ++k) {
    Matrix<double> wd = gate_unitary(file.gates[k]);
    Matrix<T> w(wd.dim());
    for (int i = 0; i < wd.dim(); ++i)
      for (int j = 0; j < wd.dim(); ++j)
        w(i, j) = cx_from_double<T>(wd(i, j).re, wd(i, j).im);
    SplitRng gate_rng = rng.split(static_cast<uint64_t>(k));
    c.gates.push_back(cayley_gate_for_worst(w, gate_rng));
  }
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------
// CSV

inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write csv: " + path);
  for (size_t i = 0; i < header.size(); ++i)
    out << header[i] << (i + 1 < header.size() ? "," : "\n");
  for (const auto& row : rows)
    for (size_t i = 0; i < row.size(); ++i)
      out << row[i] << (i + 1 < row.size() ? "," : "\n");
}

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Sample lists: (node,value) for real data, (node,re,im) for complex data.
// The exact backend serializes values as "p/q" strings.

template <class T>
void write_sample_points(const std::string& path, const std::vector<SamplePoint<T>>& pts) {
  bool complex_vals = false;
  for (const auto& p : pts) complex_vals = complex_vals || !(p.value.im == T{});
  std::vector<std::vector<std::string>> rows;
  for (const auto& p : pts) {
    std::vector<std::string> row = {ScalarTraits<T>::str(p.node),
                                    ScalarTraits<T>::str(p.value.re)};
    if (complex_vals) row.push_back(ScalarTraits<T>::str(p.value.im));
    rows.push_back(std::move(row));
  }
  write_csv(path,
            complex_vals ? std::vector<std::string>{"node", "re", "im"}
                         : std::vector<std::string>{"node", "value"},
            rows);
}

template <class T>
std::vector<SamplePoint<T>> read_sample_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open sample csv: " + path);
  std::vector<SamplePoint<T>> pts;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {  // header row
      first = false;
      continue;
    }
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) cols.push_back(item);
    if (cols.size() != 2 && cols.size() != 3)
      throw SchemaError("sample csv: rows need 2 or 3 columns, got " +
                        std::to_string(cols.size()));
    SamplePoint<T> p;
    p.node = ScalarTraits<T>::parse(cols[0]);
    p.value.re = ScalarTraits<T>::parse(cols[1]);
    if (cols.size() == 3) p.value.im = ScalarTraits<T>::parse(cols[2]);
    pts.push_back(std::move(p));
  }
  return pts;
}

// ---------------------------------------------------------------------------
// Run manifest: emitted with every report so published numbers replay

struct RunManifest {
  std::string command;
  ordered_json config_echo = ordered_json::object();
  uint64_t seed = 0;
  std::string backend;
  unsigned precision_bits = 0;
  double wall_seconds = 0;

  ordered_json to_json() const {
    ordered_json j;
    j["command"] = command;
    j["config"] = config_echo;
    j["seed"] = seed;
    j["backend"] = backend;
    j["precision_bits"] = precision_bits;
    j["version"] = kVersion;
    j["wall_seconds"] = wall_seconds;
    return j;
  }
};

template <class T>
ordered_json report_to_json(const ReductionReport<T>& rep, const RunManifest& manifest) {
  ordered_json j;
  j["estimated_p0_at_0"] = ScalarTraits<T>::str(rep.estimated_p0_at_0);
  j["true_p0_at_0"] = ScalarTraits<T>::str(rep.true_p0_at_0);
  j["abs_error"] = ScalarTraits<T>::str(rep.abs_error);
  j["decode_status"] = rep.decode_status;
  if (!rep.failure_detail.empty()) j["failure_detail"] = rep.failure_detail;
  j["corrupted_indices"] = rep.corrupted_indices;
  j["log2_paturi_bound"] = rep.log2_paturi_bound;
  j["config"] = manifest.config_echo;
  j["condition_diagnostics"] = {
      {"max_node_residual", ScalarTraits<T>::str(rep.max_node_residual)},
      {"grid_scale", ScalarTraits<T>::str(rep.grid_scale)},
      {"extrapolation_amplification", rep.extrapolation_amplification},
      {"predicted_extrapolation_error", ScalarTraits<T>::str(rep.predicted_extrapolation_error)},
      {"fit_degree_num", rep.fit_degree_num},
      {"fit_degree_den", rep.fit_degree_den},
      {"agreement_count", rep.agreement_count},
      {"flagged_indices", rep.flagged_indices},
      {"paturi_bound_at_minus_1", ScalarTraits<T>::str(rep.paturi_bound_at_minus_1)},
  };
  j["manifest"] = manifest.to_json();
  return j;
}

template <class T>
void write_samples_csv(const std::string& path, const ReductionReport<T>& rep) {
  std::vector<std::vector<std::string>> rows;
  for (size_t i = 0; i < rep.grid_thetas.size(); ++i) {
    std::vector<std::string> row;
    row.push_back(std::to_string(i));
    row.push_back(ScalarTraits<T>::str(rep.grid_thetas[i]));
    row.push_back(ScalarTraits<T>::str(rep.grid_values[i]));
    row.push_back(i < rep.fitted_values.size() ? ScalarTraits<T>::str(rep.fitted_values[i])
                                               : std::string());
    rows.push_back(std::move(row));
  }
  write_csv(path, {"index", "theta", "oracle_value", "fitted_object_value"}, rows);
}

}  // namespace cayley
