#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cayley/haar_stats.hpp"
#include "cayley/stats_util.hpp"
#include "support/helpers.hpp"

using namespace cayley;
using test_support::expected_pair_counts;
using test_support::PairHistogram;

namespace {
constexpr double kPi = 3.14159265358979323846;
}  // namespace

TEST_CASE("phase_map: endpoints, oddness, monotonicity, inversion") {
  for (double r : {-2.0, -0.3, 0.0, 1.7}) {
    CHECK(phase_map(r, 1.0) == doctest::Approx(r));
    CHECK(phase_map(r, 0.0) == doctest::Approx(0.0));
  }
  CHECK(phase_map(kPi / 2, 0.5) == doctest::Approx(2 * std::atan(0.5)));
  CHECK(phase_map(kPi / 2, 0.5) == doctest::Approx(0.92729521800161));

  for (double theta : {0.3, 0.9, 1.4}) {
    double prev = -10;
    for (int i = 1; i < 40; ++i) {
      double r = -kPi + 2 * kPi * i / 40.0;
      double v = phase_map(r, theta);
      CHECK(v > prev);  // strictly increasing
      prev = v;
      CHECK(phase_map(-r, theta) == doctest::Approx(-v));
      CHECK(phase_map(v, 1.0 / theta) == doctest::Approx(r).epsilon(1e-10));
    }
  }
}

TEST_CASE("jacobian_factor: closed forms and the finite-difference oracle") {
  for (double r : {-2.0, 0.0, 0.5, 3.0}) CHECK(jacobian_factor(r, 1.0) == doctest::Approx(1.0));
  for (double theta : {0.4, 0.9, 1.3}) CHECK(jacobian_factor(0.0, theta) == doctest::Approx(1.0 / theta));
  CHECK_THROWS_AS(jacobian_factor(0.3, 0.0), std::invalid_argument);

  // centered difference of the inverse phase map r(nu)
  for (double r0 : {0.3, -1.2, 2.5, -2.9}) {
    double theta = 0.9;
    double nu0 = phase_map(r0, theta);
    double h = 1e-6;
    double fd = (phase_map(nu0 + h, 1 / theta) - phase_map(nu0 - h, 1 / theta)) / (2 * h);
    CHECK(std::abs(fd - jacobian_factor(r0, theta)) < 1e-6);
  }
}

TEST_CASE("weyl_density: repulsion, closed-form value, normalization") {
  PhaseVector<double> same = {0.4, 0.4};
  CHECK(weyl_density(same) == doctest::Approx(0.0));

  // antipodal phases: |e^{i0} - e^{-i pi}|^2 = 4 over 2!(2 pi)^2
  PhaseVector<double> opposite = {0.0, -kPi};
  CHECK(weyl_density(opposite) == doctest::Approx(1.0 / (2 * kPi * kPi)));
  CHECK(weyl_density(opposite) == doctest::Approx(0.050660).epsilon(1e-4));

  PhaseVector<double> bad = {0.0, 4.0};
  CHECK_THROWS_AS(weyl_density(bad), std::invalid_argument);

  int grid = 200;
  double h = 2 * kPi / grid;
  double total_w = 0, total_d = 0;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      PhaseVector<double> x = {-kPi + (i + 0.5) * h, -kPi + (j + 0.5) * h};
      total_w += weyl_density(x);
      total_d += deformed_density(x, 0.95);
    }
  CHECK(std::abs(total_w * h * h - 1.0) < 1e-4);
  CHECK(std::abs(total_d * h * h - 1.0) < 1e-4);
}

TEST_CASE("densities are nonnegative everywhere") {
  SplitRng rng(14);
  for (int k = 0; k < 300; ++k) {
    PhaseVector<double> x = {rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi)};
    CHECK(weyl_density(x) >= 0.0);
    for (double theta : {0.3, 0.95, 1.05}) CHECK(deformed_density(x, theta) >= 0.0);
  }
  // the Jacobian factor itself stays positive for theta > 0
  for (int k = 0; k < 100; ++k)
    CHECK(jacobian_factor(rng.uniform(-3.14, 3.14), rng.uniform(0.05, 2.0)) > 0.0);
}

TEST_CASE("deformed_density: theta=1 collapses to the Weyl density") {
  SplitRng rng(4);
  for (int k = 0; k < 50; ++k) {
    PhaseVector<double> x = {rng.uniform(-3.1, 3.1), rng.uniform(-3.1, 3.1)};
    CHECK(deformed_density(x, 1.0) == doctest::Approx(weyl_density(x)).epsilon(1e-10));
  }
}

TEST_CASE("deformed phases sampled from actual gates match the density (chi^2, 1%)") {
  // draw H, scale its generator by theta, histogram the resulting phases
  const double theta = 0.9;
  const int bins = 24;
  const long draws = 40000;
  PairHistogram hist(bins);
  SplitRng rng(808);
  for (long i = 0; i < draws; ++i) {
    SplitRng trial = rng.split(static_cast<uint64_t>(i));
    auto u = haar_unitary<double>(2, trial);
    auto gen = cayley_inverse_unitary(u, 1e-14);
    Matrix<double> scaled = assemble_from_eigen(gen, [&](int a) {
      return cayley_transform(theta * gen.eigenvalues[a]);
    });
    auto nu = unitary_eigenphases(scaled);
    hist.add(nu[0], nu[1]);
  }
  auto expected = expected_pair_counts(bins, draws, [&](const std::vector<double>& p) {
    return deformed_density(p, theta);
  });
  auto r = stats::chi2_statistic(hist.counts, expected, 5.0);
  CHECK(r.statistic < stats::chi2_quantile(0.99, r.dof()));
}

TEST_CASE("estimate_tvd: zero at theta=1, linear in delta, monotone") {
  auto at1 = estimate_tvd(2, 1.0);
  CHECK(at1.value < 1e-10);
  CHECK(at1.std_error == 0.0);

  auto t1 = estimate_tvd(2, 0.99);
  auto t2 = estimate_tvd(2, 0.98);
  auto t4 = estimate_tvd(2, 0.96);
  CHECK(t2.value / t1.value > 1.5);
  CHECK(t2.value / t1.value < 2.5);
  CHECK(t4.value / t2.value > 1.5);
  CHECK(t4.value / t2.value < 2.5);

  auto fit = stats::linear_fit({0.01, 0.02, 0.04}, {t1.value, t2.value, t4.value});
  CHECK(fit.r2 >= 0.98);

  auto far = estimate_tvd(2, 0.5);
  CHECK(far.value > t1.value);

  // both sides of theta = 1 stay O(delta)
  auto above = estimate_tvd(2, 1.02);
  CHECK(above.value < 3 * t2.value);
  CHECK(above.value > 0.2 * t2.value);

  CHECK_THROWS_AS(estimate_tvd(3, 0.9), UnsupportedDimension);
}

TEST_CASE("estimate_tvd agrees with the positive-part integral") {
  // since both densities normalize to 1, half the absolute difference
  // integrates to the same number as the positive part alone; this checks
  // the quadrature through an independent identity
  for (double theta : {0.9, 0.98}) {
    int grid = 400;
    double h = 2 * kPi / grid;
    double pos = 0;
    for (int i = 0; i < grid; ++i)
      for (int j = 0; j < grid; ++j) {
        PhaseVector<double> x = {-kPi + (i + 0.5) * h, -kPi + (j + 0.5) * h};
        double d = weyl_density(x) - deformed_density(x, theta);
        if (d > 0) pos += d;
      }
    pos *= h * h;
    auto tvd = estimate_tvd(2, theta);
    CHECK(std::abs(tvd.value - pos) < 1e-12);
  }
}

TEST_CASE("estimate_tvd: N=4 Monte-Carlo estimator") {
  TvdOptions opts;
  opts.samples = 20000;
  opts.seed = 5;
  auto a = estimate_tvd(4, 0.98, opts);
  CHECK(a.value > 0);
  CHECK(a.value < 0.2);
  CHECK(a.std_error > 0);
  // replay is bit-identical
  auto b = estimate_tvd(4, 0.98, opts);
  CHECK(a.value == b.value);
  CHECK(a.std_error == b.std_error);
  // N=2 Monte-Carlo agrees with quadrature within a few standard errors
  TvdOptions mc;
  mc.method = TvdMethod::monte_carlo;
  mc.samples = 40000;
  mc.seed = 6;
  auto m = estimate_tvd(2, 0.97, mc);
  auto g = estimate_tvd(2, 0.97);
  CHECK(std::abs(m.value - g.value) < 5 * m.std_error + 1e-4);
}

TEST_CASE("circuit_tvd_proxy: linear in m, zero at delta=0") {
  CHECK(circuit_tvd_proxy(5, 2, 0.0).value == 0.0);
  auto one = circuit_tvd_proxy(1, 2, 0.01);
  auto two = circuit_tvd_proxy(2, 2, 0.01);
  auto eight = circuit_tvd_proxy(8, 2, 0.01);
  CHECK(two.value == doctest::Approx(2 * one.value).epsilon(1e-12));
  CHECK(eight.value == doctest::Approx(8 * one.value).epsilon(1e-12));
  CHECK_THROWS_AS(circuit_tvd_proxy(0, 2, 0.01), std::invalid_argument);
}

TEST_CASE("estimate_tvd values are genuine distances in [0, 1]") {
  for (double theta : {0.05, 0.3, 0.8, 0.99, 1.0, 1.2}) {
    auto e = estimate_tvd(2, theta);
    CHECK(e.value >= 0.0);
    CHECK(e.value <= 1.0);
  }
  // far from theta=1 the distributions separate but never beyond 1
  auto hard = estimate_tvd(2, 0.01);
  CHECK(hard.value > 0.5);
  CHECK(hard.value <= 1.0);
}

TEST_CASE("haar phases match the Weyl density (chi^2, 1% level)") {
  const int bins = 30;
  const long draws = 30000;
  PairHistogram hist(bins);
  SplitRng rng(909);
  for (long i = 0; i < draws; ++i) {
    auto u = haar_unitary<double>(2, rng);
    auto r = unitary_eigenphases(u);
    hist.add(r[0], r[1]);
  }
  auto expected = expected_pair_counts(
      bins, draws, [](const std::vector<double>& p) { return weyl_density(p); });
  auto r = stats::chi2_statistic(hist.counts, expected, 5.0);
  CHECK(r.statistic < stats::chi2_quantile(0.99, r.dof()));
}

TEST_CASE("unitary_eigenphases: reconstruction for 2x2 and 4x4") {
  SplitRng rng(66);
  for (int rep = 0; rep < 40; ++rep) {
    int n = (rep % 2) ? 2 : 4;
    auto u = haar_unitary<double>(n, rng);
    auto phases = unitary_eigenphases(u);
    REQUIRE(static_cast<int>(phases.size()) == n);
    // the characteristic polynomial has the same roots: compare traces
    Cx<double> tr{};
    for (int i = 0; i < n; ++i) tr += u(i, i);
    Cx<double> sum{};
    for (double r : phases) sum += unit_phase(r);
    CHECK(abs_c(Cx<double>(tr - sum)) < 1e-9);
  }
}
