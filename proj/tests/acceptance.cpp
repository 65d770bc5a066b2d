// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Tolerances are pinned here, not configurable.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cayley/circuit_io.hpp"
#include "cayley/haar_stats.hpp"
#include "cayley/reduction.hpp"
#include "cayley/stats_util.hpp"
#include "support/helpers.hpp"

using namespace cayley;
using test_support::chebyshev_nodes;
using test_support::lagrange_eval;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Criterion {
  int id;
  std::string label;
  double budget_seconds;
  std::function<bool(std::string&)> run;
};

using test_support::expected_pair_counts;
using test_support::PairHistogram;

bool criterion_path_endpoints(std::string& detail) {
  SplitRng rng(1001);
  double worst_end0 = 0, worst_end1 = 0, worst_resid = 0;
  for (int rep = 0; rep < 50; ++rep) {
    int n = (rep % 2) ? 2 : 4;
    auto g = sample_cayley_gate<double>(n, rng);
    worst_end0 = std::max(worst_end0, (gate_at(g, 0.0) - g.worst).max_abs());
    worst_end1 =
        std::max(worst_end1, (gate_at(g, 1.0) - g.worst * haar_companion(g)).max_abs());
    for (int j = 0; j < 100; ++j) {
      double theta = -2.0 + 4.0 * j / 99.0;
      worst_resid = std::max(worst_resid, unitarity_residual(gate_at(g, theta)));
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf), "max|C(0)-C|=%.2e max|C(1)-CH|=%.2e max resid=%.2e",
                worst_end0, worst_end1, worst_resid);
  detail = buf;
  return worst_end0 < 1e-12 && worst_end1 < 1e-12 && worst_resid < 1e-10;
}

bool criterion_degree_bounds(std::string& detail) {
  set_precision_bits(256);
  Architecture arch{2, {{0, 1}, {0, 1}}};
  auto c = sample_haar_circuit<BigFloat>(arch, SplitRng(1002));
  int degree = c.degree_sum();  // Nm = 8

  auto fresh = chebyshev_nodes<BigFloat>(degree + 6);
  double worst_poly = 0, worst_p0q2 = 0;
  {
    auto nodes = chebyshev_nodes<BigFloat>(degree + 1);
    std::vector<Cx<BigFloat>> vals;
    for (const auto& x : nodes) vals.push_back(polynomial_amplitude(c, x));
    for (int k = 0; k < 5; ++k) {
      auto pred = lagrange_eval(nodes, vals, fresh[k]);
      auto act = polynomial_amplitude(c, fresh[k]);
      worst_poly = std::max(worst_poly, ScalarTraits<BigFloat>::to_double(
                                            abs_c(Cx<BigFloat>(pred - act))));
    }
  }
  {
    auto nodes = chebyshev_nodes<BigFloat>(2 * degree + 1);
    std::vector<Cx<BigFloat>> vals;
    for (const auto& x : nodes)
      vals.push_back(Cx<BigFloat>(p0(c, x) * abs2(q_product(c, x))));
    for (int k = 0; k < 5; ++k) {
      auto pred = lagrange_eval(nodes, vals, fresh[k]);
      BigFloat act = p0(c, fresh[k]) * abs2(q_product(c, fresh[k]));
      worst_p0q2 = std::max(worst_p0q2, ScalarTraits<BigFloat>::to_double(abs_c(
                                            Cx<BigFloat>(pred - Cx<BigFloat>(act)))));
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf), "deg-%d fresh resid=%.2e, deg-%d fresh resid=%.2e",
                degree, worst_poly, 2 * degree, worst_p0q2);
  detail = buf;
  return worst_poly < 1e-9 && worst_p0q2 < 1e-9;
}

bool criterion_feynman(std::string& detail) {
  SplitRng rng(1003);
  double worst = 0;
  for (int rep = 0; rep < 20; ++rep) {
    SplitRng r = rng.split(rep);
    int n = 1 + static_cast<int>(r.below(3));
    int m = 1 + static_cast<int>(r.below(3));
    Architecture arch;
    arch.n = n;
    for (int k = 0; k < m; ++k) {
      if (n == 1 || r.below(2) == 0) {
        arch.placements.push_back({static_cast<int>(r.below(n))});
      } else {
        int a = static_cast<int>(r.below(n));
        int b = static_cast<int>(r.below(n - 1));
        if (b >= a) ++b;
        arch.placements.push_back({a, b});
      }
    }
    auto c = sample_haar_circuit<double>(arch, r.split(99));
    double theta = r.uniform(-1.5, 1.5);
    uint64_t y = r.below(uint64_t(1) << n);
    std::string ys = bitstring_of_index(y, n);
    auto direct = amplitude(c, theta, ys);
    auto path = feynman_amplitude(c, theta, std::string(n, '0'), ys);
    worst = std::max(worst, abs_c(Cx<double>(direct - path)));
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "max |amplitude - path sum| = %.2e", worst);
  detail = buf;
  return worst < 1e-9;
}

bool criterion_bw_decoding(std::string& detail) {
  using R = Rational;
  using CxR = Cx<Rational>;
  SplitRng rng(1004);
  int recovered = 0, silent_wrong = 0;
  const int instances = 500;
  for (int inst = 0; inst < instances; ++inst) {
    SplitRng r = rng.split(inst);
    int k1 = static_cast<int>(r.below(9));
    int k2 = static_cast<int>(r.below(9));
    int t = static_cast<int>(r.below(4));
    auto rand_cx = [&](bool lead) {
      long re = static_cast<long>(r.below(11)) - 5;
      long im = static_cast<long>(r.below(11)) - 5;
      if (lead && re == 0 && im == 0) re = 1;
      return CxR(R(re), R(im));
    };
    std::vector<CxR> ac(k1 + 1), bc(k2 + 1);
    for (int i = 0; i <= k1; ++i) ac[i] = rand_cx(i == k1);
    for (int i = 0; i <= k2; ++i) bc[i] = rand_cx(i == k2);
    Polynomial<R> A(ac), B(bc);

    auto sample = [&](int len) {
      std::vector<SamplePoint<R>> pts;
      long node = -(len / 2);
      while (static_cast<int>(pts.size()) < len) {
        R x(node++);
        if (B.eval(x) == CxR{}) continue;
        pts.push_back({x, A.eval(x) / B.eval(x)});
      }
      return pts;
    };
    auto corrupt = [&](std::vector<SamplePoint<R>>& pts, int count) {
      std::vector<int> idx;
      while (static_cast<int>(idx.size()) < count) {
        int i = static_cast<int>(r.below(pts.size()));
        bool dup = false;
        for (int j : idx) dup = dup || j == i;
        if (!dup) idx.push_back(i);
      }
      for (int i : idx) pts[i].value += CxR(R(1 + static_cast<long>(r.below(7))), R(1, 3));
    };
    auto matches = [&](const RationalFunction<R>& f) {
      long x = 40;
      int checked = 0;
      while (checked < 20) {
        R node(x++);
        if (B.eval(node) == CxR{}) continue;
        try {
          if (!(evaluate(f, node) == A.eval(node) / B.eval(node))) return false;
        } catch (const PoleProximity&) {
          return false;
        }
        ++checked;
      }
      return true;
    };

    // exactly enough points: recovery must be exact
    auto pts = sample(k1 + k2 + 2 * t + 1);
    corrupt(pts, t);
    try {
      auto f = bw_decode(pts, k1, k2, t);
      if (matches(f)) ++recovered;
    } catch (const Error&) {
      // counted as a non-recovery
    }

    // one point too few: anything accepted must still be correct
    if (k1 + k2 + 2 * t >= 1) {
      auto pts2 = sample(k1 + k2 + 2 * t);
      corrupt(pts2, std::min<int>(t, static_cast<int>(pts2.size())));
      try {
        auto f = bw_decode(pts2, k1, k2, t);
        if (!matches(f)) ++silent_wrong;
      } catch (const std::invalid_argument&) {
      } catch (const Error&) {
      }
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%d/%d recovered, %d silently wrong", recovered,
                instances, silent_wrong);
  detail = buf;
  return recovered == instances && silent_wrong == 0;
}

bool criterion_noiseless_reduction(std::string& detail) {
  set_precision_bits(512);
  Architecture arch{2, {{0, 1}, {0, 1}}};
  auto c = sample_haar_circuit<BigFloat>(arch, SplitRng(1005));
  ReductionConfig<BigFloat> cfg;
  cfg.delta = BigFloat(1) / BigFloat(2);
  cfg.L = 40;
  cfg.t = 0;
  cfg.precision_bits = 512;
  OracleModel<BigFloat> exact;
  auto rep = run_reduction(c, cfg, exact);

  ReductionConfig<BigFloat> cfg2 = cfg;
  cfg2.L = 60;
  cfg2.t = 3;
  OracleModel<BigFloat> m;
  m.kind = OracleKind::corrupt;
  m.fraction = 0.05;  // 3 plantings on 60 nodes
  m.seed = 42;
  auto rep2 = run_reduction(c, cfg2, m);

  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "noiseless err=%.2e; corrupted err=%.2e (%d planted, %d flagged)",
                ScalarTraits<BigFloat>::to_double(rep.abs_error),
                ScalarTraits<BigFloat>::to_double(rep2.abs_error),
                static_cast<int>(rep2.corrupted_indices.size()),
                static_cast<int>(rep2.flagged_indices.size()));
  detail = buf;
  return rep.decoded() && rep.abs_error < BigFloat("1e-20") && rep2.decoded() &&
         rep2.abs_error < BigFloat("1e-20") &&
         rep2.flagged_indices == rep2.corrupted_indices;
}

bool criterion_paturi(std::string& detail) {
  set_precision_bits(512);
  Architecture arch{2, {{0, 1}, {0, 1}}};
  auto c = sample_haar_circuit<BigFloat>(arch, SplitRng(1006));
  ReductionConfig<BigFloat> cfg;
  cfg.delta = BigFloat(1) / BigFloat(2);
  cfg.L = 40;
  cfg.t = 0;
  cfg.precision_bits = 512;
  auto amp = empirical_amplification(c, cfg, BigFloat("1e-25"), 20);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "max err=%.2e vs bound(d=%d)=%.2e, ratio=%.2e",
                ScalarTraits<BigFloat>::to_double(amp.max_abs_error), amp.degree,
                ScalarTraits<BigFloat>::to_double(amp.paturi_bound_value), amp.ratio);
  detail = buf;
  return amp.degree == 16 && amp.ratio <= 1.0;
}

bool criterion_tvd_scaling(std::string& detail) {
  auto t1 = estimate_tvd(2, 0.99);
  auto t2 = estimate_tvd(2, 0.98);
  auto t4 = estimate_tvd(2, 0.96);
  double r1 = t2.value / t1.value;
  double r2 = t4.value / t2.value;
  auto fit = stats::linear_fit({0.01, 0.02, 0.04}, {t1.value, t2.value, t4.value});
  char buf[160];
  std::snprintf(buf, sizeof(buf), "ratios %.3f, %.3f; slope fit R^2 = %.5f", r1, r2,
                fit.r2);
  detail = buf;
  return r1 >= 1.5 && r1 <= 2.5 && r2 >= 1.5 && r2 <= 2.5 && fit.r2 >= 0.98;
}

bool criterion_weyl(std::string& detail) {
  // quadrature normalization
  int grid = 400;
  double h = 2 * kPi / grid;
  std::vector<double> rows(grid, 0.0);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < grid; ++i) {
    double acc = 0;
    for (int j = 0; j < grid; ++j) {
      PhaseVector<double> x = {-kPi + (i + 0.5) * h, -kPi + (j + 0.5) * h};
      acc += weyl_density(x);
    }
    rows[i] = acc;
  }
  double total = 0;
  for (double v : rows) total += v;
  total *= h * h;

  // 10^5 Haar draws against the density, chi-square at the 1% level
  const long draws = 100000;
  const int bins = 50;
  PairHistogram hist(bins);
  SplitRng rng(1008);
  for (long i = 0; i < draws; ++i) {
    auto u = haar_unitary<double>(2, rng);
    auto r = unitary_eigenphases(u);
    hist.add(r[0], r[1]);
  }
  auto expected = expected_pair_counts(
      bins, draws, [](const PhaseVector<double>& p) { return weyl_density(p); });
  auto chi = stats::chi2_statistic(hist.counts, expected, 5.0);
  double quantile = stats::chi2_quantile(0.99, chi.dof());
  char buf[160];
  std::snprintf(buf, sizeof(buf), "integral=%.6f; chi2=%.1f vs %.1f (dof %ld)", total,
                chi.statistic, quantile, static_cast<long>(chi.dof()));
  detail = buf;
  return std::abs(total - 1.0) < 1e-4 && chi.statistic < quantile;
}

bool criterion_anticoncentration(std::string& detail) {
  Architecture arch{2, {{0, 1}, {0, 1}}};
  auto est = mean_p0_haar<double>(arch, 10000, SplitRng(1009));
  char buf[120];
  std::snprintf(buf, sizeof(buf), "mean p0 = %.5f +- %.5f vs 2^-2 = 0.25", est.mean,
                est.std_error);
  detail = buf;
  return std::abs(est.mean - 0.25) < 0.025;
}

bool criterion_truncation(std::string& detail) {
  Architecture arch{2, {{0, 1}, {0, 1}}};
  auto c = sample_haar_circuit<double>(arch, SplitRng(1010));

  // K=1 singular values against sqrt(1 + a^2 theta^2)
  double theta = 0.8;
  double worst_sv = 0;
  for (const auto& g : c.gates) {
    auto pair = geodesic_pair(g);
    auto m = truncated_gate(pair, theta, 1);
    auto e = hermitian_eig(m.adjoint() * m, 1e-10);
    std::vector<double> want;
    for (double r : pair.log_gen.eigenvalues)
      want.push_back(std::sqrt(1.0 + r * r * theta * theta));
    std::sort(want.begin(), want.end());
    for (size_t i = 0; i < want.size(); ++i)
      worst_sv = std::max(worst_sv, std::abs(std::sqrt(e.eigenvalues[i]) - want[i]));
  }

  auto rep = truncation_experiment(c, std::vector<double>{1.0}, 40);
  auto rep2 = truncation_experiment(c, std::vector<double>{1.0}, 2);
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "K=1 sv dev=%.2e; K=40 dev=%.2e; degrees 2mK=%d vs 2sumN=%d", worst_sv,
                rep.rows[0].deviation, rep2.degree_truncated, rep2.degree_cayley);
  detail = buf;
  return worst_sv < 1e-12 && rep.rows[0].deviation < 1e-12 &&
         rep2.degree_truncated == 8 && rep2.degree_cayley == 16;
}

bool criterion_robustness_scaling(std::string& detail) {
  int n = 2;
  auto f = [&](int m) {
    return robustness_threshold(m, 1.0 / (4.0 * m), n).log2_value;
  };
  double s1 = (f(4) - f(2)) / (16.0 - 4.0);
  double s2 = (f(8) - f(4)) / (64.0 - 16.0);
  double rel = std::abs(s1 / s2 - 1.0);
  char buf[120];
  std::snprintf(buf, sizeof(buf), "slopes %.3f, %.3f; relative spread %.4f", s1, s2, rel);
  detail = buf;
  return rel < 0.05;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "path endpoints and unitarity", 5, criterion_path_endpoints},
      {2, "degree bounds of the polynomial object", 10, criterion_degree_bounds},
      {3, "Feynman path-sum cross-check", 30, criterion_feynman},
      {4, "Berlekamp-Welch unique decoding", 60, criterion_bw_decoding},
      {5, "noiseless and corrupted reduction", 60, criterion_noiseless_reduction},
      {6, "empirical error amplification under the growth bound", 120, criterion_paturi},
      {7, "TVD linear scaling in delta", 120, criterion_tvd_scaling},
      {8, "Weyl density validity", 60, criterion_weyl},
      {9, "anti-concentration of mean p0", 120, criterion_anticoncentration},
      {10, "truncated-series bookkeeping", 30, criterion_truncation},
      {11, "robustness threshold scaling in m^2", 1, criterion_robustness_scaling},
  };

  int failures = 0;
  for (auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_budget = dt < c.budget_seconds;
    if (!in_budget) detail += " [over the " + std::to_string(c.budget_seconds) + " s budget]";
    ok = ok && in_budget;
    std::printf("[%s] criterion %2d (%5.1f s): %s -- %s\n", ok ? "PASS" : "FAIL", c.id,
                dt, c.label.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  else std::printf("all %d criteria passed\n", static_cast<int>(criteria.size()));
  return failures;
}
