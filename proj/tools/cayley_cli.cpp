// Command-line front end: circuit I/O, path checks, the worst-to-average
// reduction, TVD estimation, bound evaluation, and the truncated-series
// comparison. Every command is deterministic given its flags and seed; a
// manifest rides along with every report.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "cayley/circuit_io.hpp"
#include "cayley/haar_stats.hpp"

using namespace cayley;

namespace {

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::string item;
  std::stringstream ss(csv);
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void write_json_file(const std::string& path, const ordered_json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write: " + path);
  out << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------

int cmd_haar_sample(int n_dim, int count, uint64_t seed, const std::string& out_path) {
  Timer timer;
  CircuitFile file;
  file.n = n_dim == 2 ? 1 : 2;
  std::vector<int> qubits = n_dim == 2 ? std::vector<int>{0} : std::vector<int>{0, 1};
  SplitRng rng(seed);
  for (int i = 0; i < count; ++i) {
    SplitRng draw = rng.split(static_cast<uint64_t>(i));
    GateSpec spec;
    spec.qubits = qubits;
    spec.unitary = haar_unitary<double>(n_dim, draw);
    file.gates.push_back(std::move(spec));
  }
  save_circuit_file(out_path, file);
  RunManifest man;
  man.command = "haar-sample";
  man.config_echo = {{"N", n_dim}, {"count", count}, {"out", out_path}};
  man.seed = seed;
  man.backend = "double";
  man.precision_bits = 53;
  man.wall_seconds = timer.seconds();
  std::cout << man.to_json().dump(2) << "\n";
  return 0;
}

int cmd_path_check(const std::string& circuit_path, const std::string& thetas_csv,
                   uint64_t seed, const std::string& out_path) {
  Timer timer;
  CircuitFile file = load_circuit_file(circuit_path);
  Circuit<double> c = build_circuit<double>(file, seed);
  std::vector<double> thetas = parse_list(thetas_csv);

  bool all_ok = true;
  ordered_json rows = ordered_json::array();
  std::printf("%12s  %22s  %s\n", "theta", "max_unitarity_residual", "status");
  for (double th : thetas) {
    double worst = 0;
    for (const auto& g : c.gates)
      worst = std::max(worst, unitarity_residual(gate_at(g, th)));
    bool ok = worst < 1e-10;
    all_ok = all_ok && ok;
    std::printf("%12g  %22.3e  %s\n", th, worst, ok ? "ok" : "FAIL");
    rows.push_back({{"theta", th}, {"max_unitarity_residual", worst}, {"ok", ok}});
  }
  double end0 = 0, end1 = 0;
  for (const auto& g : c.gates) {
    end0 = std::max(end0, (gate_at(g, 0.0) - g.worst).max_abs());
    end1 = std::max(end1, (gate_at(g, 1.0) - g.worst * haar_companion(g)).max_abs());
  }
  bool end_ok = end0 < 1e-12 && end1 < 1e-12;
  all_ok = all_ok && end_ok;
  std::printf("endpoint theta=0: max |C_k(0) - C_k|     = %.3e  %s\n", end0,
              end0 < 1e-12 ? "ok" : "FAIL");
  std::printf("endpoint theta=1: max |C_k(1) - C_k H_k| = %.3e  %s\n", end1,
              end1 < 1e-12 ? "ok" : "FAIL");

  if (!out_path.empty()) {
    RunManifest man;
    man.command = "path-check";
    man.config_echo = {{"circuit", circuit_path}, {"thetas", thetas_csv}};
    man.seed = seed;
    man.backend = "double";
    man.precision_bits = 53;
    man.wall_seconds = timer.seconds();
    ordered_json j;
    j["rows"] = rows;
    j["endpoint_worst_equal_residual"] = end0;
    j["endpoint_product_residual"] = end1;
    j["all_ok"] = all_ok;
    j["manifest"] = man.to_json();
    write_json_file(out_path, j);
  }
  return all_ok ? 0 : 1;
}

struct ReduceArgs {
  std::string circuit_path;
  double delta = 0.5;
  int L = 40;
  int t = 0;
  std::string grid = "uniform";
  std::string model = "exact";
  double eps = 0;
  double frac = 0;
  unsigned precision = 53;
  uint64_t seed = 1;
  std::string mode = "polynomial";
  int repeats = 1;
  std::string out;
  std::string samples_csv;
};

template <class T>
int run_reduce(const ReduceArgs& a) {
  Timer timer;
  CircuitFile file = load_circuit_file(a.circuit_path);
  Architecture arch = architecture_of(file);
  const uint64_t companion_seed = SplitRng(a.seed).split(1).seed();
  Circuit<T> circuit = build_circuit<T>(file, companion_seed);

  ReductionConfig<T> cfg;
  cfg.delta = ScalarTraits<T>::from_double(a.delta);
  cfg.L = a.L;
  cfg.t = a.t;
  cfg.grid_kind = a.grid == "random" ? GridKind::uniform_random : GridKind::uniform_spaced;
  cfg.precision_bits = a.precision;
  cfg.degree_mode = a.mode == "rational" ? DegreeMode::rational : DegreeMode::polynomial;
  cfg.seed = SplitRng(a.seed).split(2).seed();

  OracleModel<T> model;
  if (a.model == "exact") model.kind = OracleKind::exact;
  else if (a.model == "corrupt") model.kind = OracleKind::corrupt;
  else if (a.model == "noise") model.kind = OracleKind::additive_noise;
  else if (a.model == "corrupt-noise") model.kind = OracleKind::corrupt_and_noise;
  else throw std::invalid_argument("unknown oracle model: " + a.model);
  model.fraction = a.frac;
  model.eps = ScalarTraits<T>::from_double(a.eps);
  model.seed = SplitRng(a.seed).split(3).seed();

  ReductionReport<T> rep;
  if (a.repeats > 1) {
    std::vector<Matrix<T>> worst;
    for (const auto& spec : file.gates) {
      Matrix<double> wd = gate_unitary(spec);
      Matrix<T> w(wd.dim());
      for (int i = 0; i < wd.dim(); ++i)
        for (int j = 0; j < wd.dim(); ++j)
          w(i, j) = cx_from_double<T>(wd(i, j).re, wd(i, j).im);
      worst.push_back(std::move(w));
    }
    rep = run_reduction_repeated(worst, arch, cfg, model, a.repeats, companion_seed);
  } else {
    rep = try_run_reduction(circuit, cfg, model);
  }

  RunManifest man;
  man.command = "reduce";
  man.config_echo = {{"circuit", a.circuit_path}, {"delta", a.delta},   {"L", a.L},
                     {"t", a.t},                  {"grid", a.grid},     {"model", a.model},
                     {"eps", a.eps},              {"frac", a.frac},     {"mode", a.mode},
                     {"repeats", a.repeats}};
  man.seed = a.seed;
  man.backend = ScalarTraits<T>::name();
  man.precision_bits = a.precision;
  man.wall_seconds = timer.seconds();

  ordered_json j = report_to_json(rep, man);
  if (!a.out.empty()) write_json_file(a.out, j);
  if (!a.samples_csv.empty()) write_samples_csv(a.samples_csv, rep);
  std::cout << j.dump(2) << "\n";

  if (rep.decode_status == "decode_failed") return 2;
  if (rep.decode_status == "precision_insufficient") return 3;
  return 0;
}

int cmd_reduce(const ReduceArgs& a) {
  if (a.precision <= 53) return run_reduce<double>(a);
  set_precision_bits(a.precision);
  return run_reduce<BigFloat>(a);
}

int cmd_tvd(int n_dim, const std::string& deltas_csv, long samples, int grid_points,
            const std::string& method, uint64_t seed, const std::string& out_path) {
  Timer timer;
  TvdOptions opts;
  opts.samples = samples;
  opts.grid_points = grid_points;
  opts.seed = seed;
  opts.method = (method == "mc" || n_dim == 4) ? TvdMethod::monte_carlo : TvdMethod::grid;

  std::vector<std::vector<std::string>> rows;
  std::printf("%10s  %14s  %12s\n", "delta", "tvd", "stderr");
  for (double d : parse_list(deltas_csv)) {
    TvdEstimate e = estimate_tvd(n_dim, 1.0 - d, opts);
    std::printf("%10g  %14.8e  %12.3e\n", d, e.value, e.std_error);
    rows.push_back({fmt_double(d), fmt_double(e.value), fmt_double(e.std_error)});
  }
  if (!out_path.empty()) {
    write_csv(out_path, {"delta", "tvd", "stderr"}, rows);
    RunManifest man;
    man.command = "tvd";
    man.config_echo = {{"N", n_dim},          {"deltas", deltas_csv}, {"samples", samples},
                       {"grid_points", grid_points}, {"method", method}, {"out", out_path}};
    man.seed = seed;
    man.backend = "double";
    man.precision_bits = 53;
    man.wall_seconds = timer.seconds();
    write_json_file(out_path + ".manifest.json", man.to_json());
  }
  return 0;
}

int cmd_bounds(int d, int m, double delta, double eps, int n_qubits,
               const std::string& out_path) {
  Timer timer;
  auto pb = paturi_bound(d, delta, eps);
  auto rb = robustness_bound(m, delta, eps);
  auto th = robustness_threshold(m, delta, n_qubits);
  ordered_json j;
  j["paturi"] = {{"d", d},
                 {"delta", delta},
                 {"eps", eps},
                 {"value", pb.value},
                 {"log2_value", pb.log2_value}};
  j["robustness"] = {{"m", m},
                     {"delta", delta},
                     {"eps", eps},
                     {"value", rb.value},
                     {"log2_value", rb.log2_value},
                     {"o1_factor_taken_as", 1.0}};
  j["epsilon_threshold"] = {{"m", m},
                            {"delta", delta},
                            {"n", n_qubits},
                            {"value", th.value},
                            {"log2_value", th.log2_value}};
  RunManifest man;
  man.command = "bounds";
  man.config_echo = {{"d", d}, {"m", m}, {"delta", delta}, {"eps", eps}, {"n", n_qubits}};
  man.backend = "double";
  man.precision_bits = 53;
  man.wall_seconds = timer.seconds();
  j["manifest"] = man.to_json();
  std::cout << j.dump(2) << "\n";
  if (!out_path.empty()) write_json_file(out_path, j);
  return 0;
}

int cmd_truncate(const std::string& circuit_path, int K, const std::string& thetas_csv,
                 uint64_t seed, const std::string& out_path) {
  Timer timer;
  CircuitFile file = load_circuit_file(circuit_path);
  Circuit<double> c = build_circuit<double>(file, SplitRng(seed).split(1).seed());
  std::vector<double> thetas = parse_list(thetas_csv);
  TruncationReport<double> rep = truncation_experiment(c, thetas, K);

  std::printf("degree bookkeeping: truncated 2mK = %d, exact path 2*sum(N_k) = %d\n",
              rep.degree_truncated, rep.degree_cayley);
  std::printf("%10s  %18s  %16s  %18s  %12s\n", "theta", "max_gate_residual",
              "p0_truncated", "p0_cayley_matched", "deviation");
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : rep.rows) {
    std::printf("%10g  %18.3e  %16.9e  %18.9e  %12.3e\n", r.theta, r.max_gate_residual,
                r.p0_truncated, r.p0_cayley_matched, r.deviation);
    rows.push_back({fmt_double(r.theta), fmt_double(r.max_gate_residual),
                    fmt_double(r.p0_truncated), fmt_double(r.p0_cayley_matched),
                    fmt_double(r.deviation)});
  }
  if (!out_path.empty()) {
    write_csv(out_path,
              {"theta", "max_gate_residual", "p0_truncated", "p0_cayley_matched",
               "deviation"},
              rows);
    RunManifest man;
    man.command = "truncate";
    man.config_echo = {{"circuit", circuit_path},
                       {"K", K},
                       {"thetas", thetas_csv},
                       {"degree_truncated", rep.degree_truncated},
                       {"degree_cayley", rep.degree_cayley}};
    man.seed = seed;
    man.backend = "double";
    man.precision_bits = 53;
    man.wall_seconds = timer.seconds();
    write_json_file(out_path + ".manifest.json", man.to_json());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cayley-path interpolation toolkit"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads, "cap worker threads for data-parallel loops");

  unsigned default_precision = 53;
  app.add_option("--precision-bits", default_precision,
                 "default mantissa bits for high-precision commands")
      ->envname("CAYLEY_PRECISION_BITS");

  // haar-sample
  int hs_n = 2, hs_count = 1;
  uint64_t hs_seed = 1;
  std::string hs_out = "gates.json";
  auto* hs = app.add_subcommand("haar-sample", "sample Haar unitaries into a circuit file");
  hs->add_option("--N", hs_n, "local dimension (2 or 4)")->check(CLI::IsMember({2, 4}));
  hs->add_option("--count", hs_count, "number of gates")->check(CLI::PositiveNumber);
  hs->add_option("--seed", hs_seed, "generator seed");
  hs->add_option("--out", hs_out, "output circuit file")->required();

  // path-check
  std::string pc_file, pc_thetas = "0,0.5,1";
  uint64_t pc_seed = 1;
  std::string pc_out;
  auto* pc = app.add_subcommand("path-check", "unitarity and endpoint checks along the path");
  pc->add_option("circuit", pc_file, "circuit json file")->required();
  pc->add_option("--thetas", pc_thetas, "comma-separated theta values");
  pc->add_option("--seed", pc_seed, "Haar companion seed");
  pc->add_option("--out", pc_out, "optional json report");

  // reduce
  ReduceArgs ra;
  auto* rd = app.add_subcommand("reduce", "worst-to-average reduction experiment");
  rd->add_option("circuit", ra.circuit_path, "circuit json file")->required();
  rd->add_option("--delta", ra.delta, "half-width of the interval around theta=1");
  rd->add_option("--L", ra.L, "grid size");
  rd->add_option("--t", ra.t, "decoder error budget");
  rd->add_option("--grid", ra.grid, "uniform|random")->check(CLI::IsMember({"uniform", "random"}));
  rd->add_option("--model", ra.model, "exact|corrupt|noise|corrupt-noise")
      ->check(CLI::IsMember({"exact", "corrupt", "noise", "corrupt-noise"}));
  rd->add_option("--eps", ra.eps, "additive noise half-width");
  rd->add_option("--frac", ra.frac, "corrupted fraction of grid nodes");
  rd->add_option("--precision-bits", ra.precision, "mantissa bits (<=53 for double)");
  rd->add_option("--seed", ra.seed, "master seed");
  rd->add_option("--mode", ra.mode, "polynomial|rational")
      ->check(CLI::IsMember({"polynomial", "rational"}));
  rd->add_option("--repeats", ra.repeats, "Haar redraws, median-aggregated");
  rd->add_option("--out", ra.out, "report json path");
  rd->add_option("--samples-csv", ra.samples_csv, "per-node samples csv path");

  // tvd
  int tv_n = 2;
  std::string tv_deltas = "0.01,0.02,0.04";
  long tv_samples = 100000;
  int tv_grid = 400;
  std::string tv_method = "grid";
  uint64_t tv_seed = 1;
  std::string tv_out;
  auto* tv = app.add_subcommand("tvd", "distance of the deformed gate distribution from Haar");
  tv->add_option("--N", tv_n, "local dimension (2 or 4)")->check(CLI::IsMember({2, 4}));
  tv->add_option("--deltas", tv_deltas, "comma-separated deltas (theta = 1-delta)");
  tv->add_option("--samples", tv_samples, "monte-carlo draws");
  tv->add_option("--grid-points", tv_grid, "quadrature grid per axis (N=2)");
  tv->add_option("--method", tv_method, "grid|mc")->check(CLI::IsMember({"grid", "mc"}));
  tv->add_option("--seed", tv_seed, "sampling seed");
  tv->add_option("--out", tv_out, "csv output path");

  // bounds
  int bd_d = 0, bd_m = 1, bd_n = 2;
  double bd_delta = 0.5, bd_eps = 0;
  std::string bd_out;
  auto* bd = app.add_subcommand("bounds", "error-amplification bounds");
  bd->add_option("--d", bd_d, "polynomial degree for the growth bound");
  bd->add_option("--m", bd_m, "gate count for the robustness bound");
  bd->add_option("--delta", bd_delta, "interval half-width");
  bd->add_option("--eps", bd_eps, "oracle error");
  bd->add_option("--n", bd_n, "qubit count for the epsilon threshold");
  bd->add_option("--out", bd_out, "optional json output");

  // truncate
  std::string tc_file, tc_thetas = "0,0.5,1";
  int tc_K = 0;
  uint64_t tc_seed = 1;
  std::string tc_out;
  auto* tc = app.add_subcommand("truncate", "truncated-series comparison");
  tc->add_option("circuit", tc_file, "circuit json file")->required();
  tc->add_option("--K", tc_K, "truncation order")->check(CLI::NonNegativeNumber);
  tc->add_option("--thetas", tc_thetas, "comma-separated theta values");
  tc->add_option("--seed", tc_seed, "Haar companion seed");
  tc->add_option("--out", tc_out, "csv output path");

  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif

  try {
    if (*hs) return cmd_haar_sample(hs_n, hs_count, hs_seed, hs_out);
    if (*pc) return cmd_path_check(pc_file, pc_thetas, pc_seed, pc_out);
    if (*rd) {
      if (ra.precision == 53 && default_precision > 53) ra.precision = default_precision;
      return cmd_reduce(ra);
    }
    if (*tv) return cmd_tvd(tv_n, tv_deltas, tv_samples, tv_grid, tv_method, tv_seed, tv_out);
    if (*bd) return cmd_bounds(bd_d, bd_m, bd_delta, bd_eps, bd_n, bd_out);
    if (*tc) return cmd_truncate(tc_file, tc_K, tc_thetas, tc_seed, tc_out);
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 1;
  } catch (const DecodeFailed& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const PrecisionInsufficient& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
