// Compares the OpenMP kernels against their serial reference twins and
// checks that both produce bit-identical results.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cayley/circuit.hpp"
#include "cayley/haar_stats.hpp"

using namespace cayley;

namespace {

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

struct Row {
  std::string name;
  double serial_s;
  double parallel_s;
  bool identical;
};

Row bench_apply_gate(int n, int gate_count) {
  SplitRng rng(42);
  std::vector<Matrix<double>> gates;
  std::vector<std::vector<int>> places;
  for (int k = 0; k < gate_count; ++k) {
    gates.push_back(haar_unitary<double>(4, rng));
    int a = static_cast<int>(rng.below(n));
    int b = static_cast<int>(rng.below(n - 1));
    if (b >= a) ++b;
    places.push_back({a, b});
  }

  StateVector<double> st_serial = StateVector<double>::zero_state(n);
  double t0 = now_seconds();
  for (int k = 0; k < gate_count; ++k) apply_gate_serial(st_serial, gates[k], places[k]);
  double serial_s = now_seconds() - t0;

  StateVector<double> st_par = StateVector<double>::zero_state(n);
  t0 = now_seconds();
  for (int k = 0; k < gate_count; ++k) apply_gate(st_par, gates[k], places[k]);
  double parallel_s = now_seconds() - t0;

  bool same = true;
  for (size_t i = 0; i < st_serial.amp.size(); ++i)
    same = same && st_serial.amp[i] == st_par.amp[i];
  return {"apply_gate n=" + std::to_string(n) + " x" + std::to_string(gate_count),
          serial_s, parallel_s, same};
}

Row bench_tvd(int grid) {
  double t0 = now_seconds();
  double a = detail::tvd_grid_n2_serial(0.98, grid);
  double serial_s = now_seconds() - t0;
  t0 = now_seconds();
  double b = detail::tvd_grid_n2(0.98, grid);
  double parallel_s = now_seconds() - t0;
  return {"tvd_grid " + std::to_string(grid) + "^2", serial_s, parallel_s, a == b};
}

Row bench_mean_p0(long trials) {
  Architecture arch{2, {{0, 1}, {0, 1}}};
  SplitRng rng(7);
  double t0 = now_seconds();
  auto a = mean_p0_haar_serial<double>(arch, trials, rng);
  double serial_s = now_seconds() - t0;
  t0 = now_seconds();
  auto b = mean_p0_haar<double>(arch, trials, rng);
  double parallel_s = now_seconds() - t0;
  return {"mean_p0 trials=" + std::to_string(trials), serial_s, parallel_s,
          a.mean == b.mean && a.std_error == b.std_error};
}

}  // namespace

int main(int argc, char** argv) {
  int n = 18;
  int gate_count = 20;
  int grid = 600;
  long trials = 20000;
  for (int i = 1; i + 1 < argc; i += 2) {
    std::string flag = argv[i];
    if (flag == "--n") n = std::atoi(argv[i + 1]);
    else if (flag == "--gates") gate_count = std::atoi(argv[i + 1]);
    else if (flag == "--grid") grid = std::atoi(argv[i + 1]);
    else if (flag == "--trials") trials = std::atol(argv[i + 1]);
    else if (flag == "--threads") {
#ifdef _OPENMP
      omp_set_num_threads(std::atoi(argv[i + 1]));
#endif
    }
  }
#ifdef _OPENMP
  std::printf("max threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; kernels run serially\n");
#endif

  std::vector<Row> rows;
  rows.push_back(bench_apply_gate(n, gate_count));
  rows.push_back(bench_tvd(grid));
  rows.push_back(bench_mean_p0(trials));

  std::printf("%-28s %12s %12s %9s %10s\n", "kernel", "serial [s]", "parallel [s]",
              "speedup", "identical");
  bool all_same = true;
  for (const auto& r : rows) {
    std::printf("%-28s %12.3f %12.3f %9.2f %10s\n", r.name.c_str(), r.serial_s,
                r.parallel_s, r.serial_s / (r.parallel_s > 0 ? r.parallel_s : 1e-12),
                r.identical ? "yes" : "NO");
    all_same = all_same && r.identical;
  }
  return all_same ? 0 : 1;
}
