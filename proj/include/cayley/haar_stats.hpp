#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "cayley/cayley_gate.hpp"
#include "cayley/matrix.hpp"

namespace cayley {

// Joint eigenphase vector of a local unitary, phases in [-pi, pi).
template <class T>
using PhaseVector = std::vector<T>;

template <class T>
T wrap_phase(T r) {
  T pi = ScalarTraits<T>::pi();
  if (r >= pi) r -= 2 * pi;
  if (r < -pi) r += 2 * pi;
  return r;
}

// nu(r) = 2 arctan(theta tan(r/2)): the phase of f(theta h) when the phase
// of f(h) is r. Identity at theta=1, collapses to 0 at theta=0.
template <class T>
T phase_map(const T& r, const T& theta) {
  using std::atan;
  using std::tan;
  T two = ScalarTraits<T>::from_int(2);
  return two * atan(theta * tan(r / two));
}

// |dr/dnu| = (1 + theta^2 + cos(r)(1 - theta^2)) / (2 theta), the diagonal
// Jacobian factor of the phase map, expressed in terms of r = r(nu).
template <class T>
T jacobian_factor(const T& r, const T& theta) {
  using std::cos;
  if (!(theta > ScalarTraits<T>::from_int(0)))
    throw std::invalid_argument("jacobian_factor: theta must be positive");
  T one = ScalarTraits<T>::from_int(1);
  return (one + theta * theta + cos(r) * (one - theta * theta)) / (theta + theta);
}

// Joint eigenphase density of a Haar unitary:
// (N!)^{-1} (2 pi)^{-N} prod_{a<b} |e^{i r_a} - e^{i r_b}|^2
template <class T>
T weyl_density(const PhaseVector<T>& phases) {
  using std::cos;
  int n = static_cast<int>(phases.size());
  if (n < 1) throw UnsupportedDimension("weyl_density: empty phase vector");
  T pi = ScalarTraits<T>::pi();
  for (const T& r : phases)
    if (r < -pi || r >= pi)
      throw std::invalid_argument("weyl_density: phases must lie in [-pi, pi)");
  T two = ScalarTraits<T>::from_int(2);
  T dens = ScalarTraits<T>::from_int(1);
  long fact = 1;
  for (int k = 2; k <= n; ++k) fact *= k;
  dens = dens / ScalarTraits<T>::from_int(fact);
  T norm = two * pi;
  for (int k = 0; k < n; ++k) dens = dens / norm;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      dens *= two - two * cos(phases[a] - phases[b]);
  return dens;
}

// Pushforward of the Weyl density under the phase map: the density of the
// phases of f(theta h) at nu is weyl(r(nu)) prod_a |dr/dnu|(r_a).
template <class T>
T deformed_density(const PhaseVector<T>& nus, const T& theta) {
  if (!(theta > ScalarTraits<T>::from_int(0)))
    throw std::invalid_argument("deformed_density: theta must be positive");
  T one = ScalarTraits<T>::from_int(1);
  PhaseVector<T> rs(nus.size());
  for (size_t i = 0; i < nus.size(); ++i) rs[i] = phase_map(nus[i], one / theta);
  T dens = weyl_density(rs);
  for (const T& r : rs) dens *= jacobian_factor(r, theta);
  return dens;
}

// Eigenphases of a unitary, ascending, in [-pi, pi). Closed form for 2x2;
// larger gates go through the Cayley generator, whose arctan compresses the
// conditioning of phases near the branch point.
template <class T>
PhaseVector<T> unitary_eigenphases(const Matrix<T>& u) {
  using std::atan;
  using std::sqrt;
  if (u.dim() == 2) {
    Cx<T> tr = u(0, 0) + u(1, 1);
    Cx<T> det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
    Cx<T> half = tr * Cx<T>(ScalarTraits<T>::from_double(0.5));
    Cx<T> disc = half * half - det;
    // complex square root of the discriminant
    T mag = sqrt(abs_c(disc));
    T ang = arg_c(disc) / ScalarTraits<T>::from_int(2);
    Cx<T> root = unit_phase(ang) * mag;
    PhaseVector<T> r = {wrap_phase(arg_c(Cx<T>(half + root))),
                        wrap_phase(arg_c(Cx<T>(half - root)))};
    if (r[1] < r[0]) std::swap(r[0], r[1]);
    return r;
  }
  // tan(r/2) = h for the Cayley generator eigenvalues
  EigenDecomposition<T> e = cayley_inverse_unitary(u, ScalarTraits<T>::from_double(1e-14));
  PhaseVector<T> r(e.eigenvalues.size());
  for (size_t a = 0; a < r.size(); ++a)
    r[a] = wrap_phase(T(2 * atan(e.eigenvalues[a])));
  std::sort(r.begin(), r.end());
  return r;
}

struct TvdEstimate {
  double value = 0;
  double std_error = 0;
  long samples = 0;
};

enum class TvdMethod { grid, monte_carlo };

struct TvdOptions {
  int grid_points = 400;      // per axis, grid method (N=2 only)
  long samples = 100000;      // monte carlo draws
  TvdMethod method = TvdMethod::grid;
  uint64_t seed = 1;
};

namespace detail {

// deterministic 2-D midpoint quadrature of |weyl - deformed| over the torus;
// rows accumulate into slots and are summed serially, so the result is
// independent of thread count
inline double tvd_grid_n2(double theta, int grid) {
  double pi = 3.14159265358979323846;
  double h = 2.0 * pi / grid;
  std::vector<double> row_sum(grid, 0.0);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < grid; ++i) {
    double r1 = -pi + (i + 0.5) * h;
    double acc = 0.0;
    for (int j = 0; j < grid; ++j) {
      double r2 = -pi + (j + 0.5) * h;
      PhaseVector<double> x = {r1, r2};
      acc += std::abs(weyl_density(x) - deformed_density(x, theta));
    }
    row_sum[i] = acc;
  }
  double total = 0.0;
  for (double v : row_sum) total += v;
  return 0.5 * total * h * h;
}

inline double tvd_grid_n2_serial(double theta, int grid) {
  double pi = 3.14159265358979323846;
  double h = 2.0 * pi / grid;
  double total = 0.0;
  for (int i = 0; i < grid; ++i) {
    double r1 = -pi + (i + 0.5) * h;
    double acc = 0.0;
    for (int j = 0; j < grid; ++j) {
      double r2 = -pi + (j + 0.5) * h;
      PhaseVector<double> x = {r1, r2};
      acc += std::abs(weyl_density(x) - deformed_density(x, theta));
    }
    total += acc;
  }
  return 0.5 * total * h * h;
}

}  // namespace detail

// Total variation distance between the Haar phase distribution and the one
// induced by f(theta h), h the generator of a Haar draw. N=2 defaults to
// deterministic grid quadrature (std_error 0); N=4 uses the Monte-Carlo
// importance estimate 0.5 E_weyl |1 - deformed/weyl| with the exact Weyl
// density as the weight. Trials use split seeds: bit-identical replay at
// any thread count.
inline TvdEstimate estimate_tvd(int n_dim, double theta, const TvdOptions& opts = {}) {
  if (n_dim != 2 && n_dim != 4)
    throw UnsupportedDimension("estimate_tvd: only N=2 and N=4 are supported");
  if (!(theta > 0)) throw std::invalid_argument("estimate_tvd: theta must be positive");
  if (n_dim == 2 && opts.method == TvdMethod::grid) {
    TvdEstimate e;
    e.value = detail::tvd_grid_n2(theta, opts.grid_points);
    e.std_error = 0;
    e.samples = static_cast<long>(opts.grid_points) * opts.grid_points;
    return e;
  }
  long count = std::max<long>(opts.samples, 1000);
  SplitRng rng(opts.seed);
  std::vector<double> vals(count);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < count; ++i) {
    SplitRng trial = rng.split(static_cast<uint64_t>(i));
    Matrix<double> u = haar_unitary<double>(n_dim, trial);
    PhaseVector<double> r = unitary_eigenphases(u);
    for (double& x : r) x = wrap_phase(x);
    double w = weyl_density(r);
    double d = deformed_density(r, theta);
    vals[i] = 0.5 * std::abs(1.0 - d / w);
  }
  double mean = 0.0;
  for (double v : vals) mean += v;
  mean /= static_cast<double>(count);
  double var = 0.0;
  for (double v : vals) var += (v - mean) * (v - mean);
  var /= static_cast<double>(count > 1 ? count - 1 : 1);
  TvdEstimate e;
  e.value = mean;
  e.std_error = std::sqrt(var / static_cast<double>(count));
  e.samples = count;
  return e;
}

// Additive circuit-level proxy: m gates, each within tvd(N, 1-delta) of
// Haar, bound the whole circuit by m times the per-gate estimate.
inline TvdEstimate circuit_tvd_proxy(int m, int n_dim, double delta,
                                     const TvdOptions& opts = {}) {
  if (m < 1) throw std::invalid_argument("circuit_tvd_proxy: m must be >= 1");
  if (delta < 0) throw std::invalid_argument("circuit_tvd_proxy: delta must be >= 0");
  if (delta == 0) return TvdEstimate{0.0, 0.0, 0};
  TvdEstimate per_gate = estimate_tvd(n_dim, 1.0 - delta, opts);
  return TvdEstimate{m * per_gate.value, m * per_gate.std_error, per_gate.samples};
}

}  // namespace cayley
