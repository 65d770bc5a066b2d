#pragma once

#include <vector>

#include "cayley/circuit.hpp"
#include "cayley/rational.hpp"

namespace test_support {

using namespace cayley;

template <class T>
Matrix<T> random_hermitian(int n, SplitRng& rng) {
  Matrix<T> a = sample_ginibre<T>(n, rng);
  return a + a.adjoint();
}

// Lagrange interpolation oracle, independent of the library's fitting path.
// Evaluates the unique degree-(#nodes-1) interpolant through (xs, ys) at x.
template <class T>
Cx<T> lagrange_eval(const std::vector<T>& xs, const std::vector<Cx<T>>& ys, const T& x) {
  Cx<T> acc{};
  for (size_t i = 0; i < xs.size(); ++i) {
    Cx<T> term = ys[i];
    for (size_t j = 0; j < xs.size(); ++j) {
      if (j == i) continue;
      term *= Cx<T>(T(x - xs[j])) / Cx<T>(T(xs[i] - xs[j]));
    }
    acc += term;
  }
  return acc;
}

// Chebyshev nodes of the first kind on [-1, 1]
template <class T>
std::vector<T> chebyshev_nodes(int count) {
  using std::cos;
  std::vector<T> xs(count);
  T pi = ScalarTraits<T>::pi();
  for (int i = 0; i < count; ++i)
    xs[i] = cos(pi * (ScalarTraits<T>::from_int(2 * i + 1) /
                      ScalarTraits<T>::from_int(2 * count)));
  return xs;
}

// CayleyGate with a hand-picked generator spectrum and identity eigenbasis.
template <class T>
CayleyGate<T> gate_with_spectrum(const Matrix<T>& worst, std::vector<T> eigenvalues) {
  CayleyGate<T> g;
  g.worst = worst;
  g.generator.eigenvalues = std::move(eigenvalues);
  g.generator.eigenvectors = Matrix<T>::identity(worst.dim());
  return g;
}

inline constexpr double kTestPi = 3.14159265358979323846;

// Sorted-pair histogram of 2x2 eigenphases over the lower triangle
// r_lo <= r_hi of the torus. Each draw lands in exactly one cell, keeping
// the chi-square counts independent.
struct PairHistogram {
  int bins;
  std::vector<double> counts;

  explicit PairHistogram(int bins) : bins(bins), counts(bins * bins, 0.0) {}

  void add(double r0, double r1) {
    double lo = std::min(r0, r1), hi = std::max(r0, r1);
    auto bin_of = [&](double r) {
      int b = static_cast<int>((r + kTestPi) / (2 * kTestPi) * bins);
      return std::min(std::max(b, 0), bins - 1);
    };
    counts[bin_of(lo) * bins + bin_of(hi)] += 1;
  }
};

// expected count per sorted-pair cell: 2 * draws * integral of the symmetric
// density over the cell restricted to x < y, by 8x8 midpoint subsampling
template <class Density>
std::vector<double> expected_pair_counts(int bins, long draws, Density&& dens) {
  double h = 2 * kTestPi / bins;
  std::vector<double> expected(static_cast<size_t>(bins) * bins, 0.0);
  for (int i = 0; i < bins; ++i)
    for (int j = i; j < bins; ++j) {
      double x0 = -kTestPi + i * h, y0 = -kTestPi + j * h;
      double mass = 0;
      for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) {
          double x = x0 + (a + 0.5) * h / 8;
          double y = y0 + (b + 0.5) * h / 8;
          if (x >= y) continue;
          std::vector<double> p = {x, y};
          mass += dens(p);
        }
      expected[static_cast<size_t>(i) * bins + j] = 2.0 * draws * mass * (h / 8) * (h / 8);
    }
  return expected;
}

}  // namespace test_support
