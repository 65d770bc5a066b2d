#pragma once

#include <algorithm>
#include <vector>

#include "cayley/errors.hpp"
#include "cayley/matrix.hpp"

namespace cayley {

// Complex-coefficient polynomial, ascending order. coeffs.size() is always
// declared_degree + 1; trailing zeros are allowed so a declared bound can
// exceed the actual degree.
template <class T>
struct Polynomial {
  std::vector<Cx<T>> coeffs;

  Polynomial() : coeffs(1) {}
  explicit Polynomial(std::vector<Cx<T>> c) : coeffs(std::move(c)) {
    if (coeffs.empty()) coeffs.resize(1);
  }
  Polynomial(std::initializer_list<Cx<T>> c) : coeffs(c) {
    if (coeffs.empty()) coeffs.resize(1);
  }
  static Polynomial constant(const Cx<T>& c) { return Polynomial({ {c} }); }

  int declared_degree() const { return static_cast<int>(coeffs.size()) - 1; }

  // highest index with a coefficient that is nonzero (exact) or carries more
  // than `rel_tol` of the largest coefficient magnitude (floating)
  int effective_degree(const T& rel_tol) const {
    T top = ScalarTraits<T>::from_int(0);
    for (const auto& c : coeffs) top = std::max(top, abs2(c));
    if (top == ScalarTraits<T>::from_int(0)) return 0;
    T cut = top * rel_tol * rel_tol;
    for (int d = declared_degree(); d > 0; --d)
      if (abs2(coeffs[d]) > cut) return d;
    return 0;
  }
  int effective_degree() const {
    return effective_degree(ScalarTraits<T>::exact
                                ? ScalarTraits<T>::from_int(0)
                                : T(ScalarTraits<T>::epsilon() * ScalarTraits<T>::from_int(100)));
  }

  Cx<T> eval(const Cx<T>& x) const {
    Cx<T> acc{};
    for (int d = declared_degree(); d >= 0; --d) acc = acc * x + coeffs[d];
    return acc;
  }
  Cx<T> eval(const T& x) const { return eval(Cx<T>(x)); }

  bool is_zero() const {
    for (const auto& c : coeffs)
      if (!(c == Cx<T>{})) return false;
    return true;
  }

  void trim_declared(int degree) { coeffs.resize(degree + 1); }
};

template <class T>
Polynomial<T> poly_mul(const Polynomial<T>& a, const Polynomial<T>& b) {
  std::vector<Cx<T>> c(a.coeffs.size() + b.coeffs.size() - 1);
  for (size_t i = 0; i < a.coeffs.size(); ++i)
    for (size_t j = 0; j < b.coeffs.size(); ++j) c[i + j] += a.coeffs[i] * b.coeffs[j];
  return Polynomial<T>(std::move(c));
}

// exact-field division with remainder
template <class T>
std::pair<Polynomial<T>, Polynomial<T>> poly_divmod(const Polynomial<T>& a,
                                                    const Polynomial<T>& b) {
  static_assert(ScalarTraits<T>::exact, "poly_divmod requires the exact backend");
  int db = b.effective_degree();
  if (b.coeffs[db] == Cx<T>{})
    throw DegenerateSystem("poly_divmod: division by zero polynomial");
  std::vector<Cx<T>> rem = a.coeffs;
  int da = static_cast<int>(rem.size()) - 1;
  std::vector<Cx<T>> quot(std::max(da - db + 1, 1));
  Cx<T> lead_inv = Cx<T>(ScalarTraits<T>::from_int(1)) / b.coeffs[db];
  for (int d = da; d >= db; --d) {
    Cx<T> f = rem[d] * lead_inv;
    if (f == Cx<T>{}) continue;
    quot[d - db] = f;
    for (int j = 0; j <= db; ++j) rem[d - db + j] -= f * b.coeffs[j];
  }
  rem.resize(std::max(db, 1));
  return {Polynomial<T>(std::move(quot)), Polynomial<T>(std::move(rem))};
}

// monic gcd over the exact field
template <class T>
Polynomial<T> poly_gcd(Polynomial<T> a, Polynomial<T> b) {
  static_assert(ScalarTraits<T>::exact, "poly_gcd requires the exact backend");
  auto make_monic = [](Polynomial<T>& p) {
    int d = p.effective_degree();
    p.trim_declared(d);
    if (p.is_zero()) return;
    Cx<T> inv = Cx<T>(ScalarTraits<T>::from_int(1)) / p.coeffs[d];
    for (auto& c : p.coeffs) c *= inv;
  };
  make_monic(a);
  make_monic(b);
  while (!b.is_zero()) {
    auto [q, r] = poly_divmod(a, b);
    a = std::move(b);
    b = std::move(r);
    make_monic(b);
  }
  make_monic(a);
  return a;
}

template <class T>
struct RationalFunction {
  Polynomial<T> numerator;
  Polynomial<T> denominator;
};

template <class T>
struct SamplePoint {
  T node;
  Cx<T> value;
};

template <class T>
std::vector<SamplePoint<T>> make_points(const std::vector<T>& nodes,
                                        const std::vector<T>& values) {
  std::vector<SamplePoint<T>> pts(nodes.size());
  for (size_t i = 0; i < nodes.size(); ++i) pts[i] = {nodes[i], Cx<T>(values[i])};
  return pts;
}

// numerator(x)/denominator(x); PoleProximity when the denominator value is
// below backend-epsilon relative to its own evaluation scale
template <class T>
Cx<T> evaluate(const RationalFunction<T>& f, const T& x) {
  using std::sqrt;
  Cx<T> den = f.denominator.eval(x);
  if constexpr (ScalarTraits<T>::exact) {
    if (den == Cx<T>{}) throw PoleProximity("evaluate: node is a denominator root");
  } else {
    T scale = ScalarTraits<T>::from_int(0);
    T xa = x < ScalarTraits<T>::from_int(0) ? T(-x) : x;
    T p = ScalarTraits<T>::from_int(1);
    for (const auto& c : f.denominator.coeffs) {
      scale += abs_c(c) * p;
      p *= xa;
    }
    if (!(abs_c(den) > ScalarTraits<T>::epsilon() * scale))
      throw PoleProximity("evaluate: denominator vanishes to working precision");
  }
  return f.numerator.eval(x) / den;
}

template <class T>
struct FitOptions {
  // relative residual accepted in floating modes (times the data scale)
  T residual_tol = ScalarTraits<T>::from_double(1e-6);
  // floating modes require nodes preconditioned into [-1.5, 1.5]
  bool enforce_node_bound = true;
};

namespace detail {

template <class T>
void check_nodes(const std::vector<SamplePoint<T>>& pts, bool enforce_bound) {
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      if (pts[i].node == pts[j].node)
        throw DuplicateNodes("fit: sample nodes must be distinct");
  if constexpr (!ScalarTraits<T>::exact) {
    if (enforce_bound) {
      T bound = ScalarTraits<T>::from_double(1.5);
      for (const auto& p : pts) {
        T a = p.node < ScalarTraits<T>::from_int(0) ? T(-p.node) : p.node;
        if (a > bound)
          throw std::invalid_argument(
              "fit: affinely rescale nodes into [-1,1] before floating-point fitting");
      }
    }
  }
}

// rows of the linearized system  f_i * B(theta_i) - A(theta_i) = 0,
// unknowns ordered (a_0..a_k1, b_0..b_k2)
template <class T>
std::vector<std::vector<Cx<T>>> design_rows(const std::vector<SamplePoint<T>>& pts,
                                            int k1, int k2) {
  std::vector<std::vector<Cx<T>>> rows;
  rows.reserve(pts.size());
  for (const auto& p : pts) {
    std::vector<Cx<T>> row(static_cast<size_t>(k1 + k2 + 2));
    Cx<T> pw(ScalarTraits<T>::from_int(1));
    for (int j = 0; j <= k1; ++j) {
      row[j] = -pw;
      pw *= Cx<T>(p.node);
    }
    pw = Cx<T>(ScalarTraits<T>::from_int(1));
    for (int j = 0; j <= k2; ++j) {
      row[k1 + 1 + j] = p.value * pw;
      pw *= Cx<T>(p.node);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// one exact kernel vector of the row system, or empty when full rank
template <class T>
std::vector<Cx<T>> kernel_exact(std::vector<std::vector<Cx<T>>> rows, size_t cols) {
  static_assert(ScalarTraits<T>::exact);
  size_t nrows = rows.size();
  std::vector<int> pivot_col;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < nrows; ++c) {
    size_t best = r;
    T best_mag = ScalarTraits<T>::from_int(0);
    for (size_t i = r; i < nrows; ++i) {
      T mag = abs2(rows[i][c]);
      if (mag > best_mag) {
        best_mag = mag;
        best = i;
      }
    }
    if (best_mag == ScalarTraits<T>::from_int(0)) continue;
    std::swap(rows[r], rows[best]);
    Cx<T> inv = Cx<T>(ScalarTraits<T>::from_int(1)) / rows[r][c];
    for (size_t j = c; j < cols; ++j) rows[r][j] *= inv;
    for (size_t i = 0; i < nrows; ++i) {
      if (i == r) continue;
      Cx<T> f = rows[i][c];
      if (f == Cx<T>{}) continue;
      for (size_t j = c; j < cols; ++j) rows[i][j] -= f * rows[r][j];
    }
    pivot_col.push_back(static_cast<int>(c));
    ++r;
  }
  if (r == cols) return {};  // trivial kernel only
  // first free column spans a kernel vector
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivot_col) is_pivot[c] = true;
  size_t free_col = 0;
  while (free_col < cols && is_pivot[free_col]) ++free_col;
  std::vector<Cx<T>> v(cols);
  v[free_col] = Cx<T>(ScalarTraits<T>::from_int(1));
  for (size_t i = 0; i < pivot_col.size(); ++i)
    v[pivot_col[i]] = -rows[i][free_col];
  return v;
}

// floating path: eigenvector of the smallest eigenvalue of M^dag M, the
// smallest-singular-direction of the design matrix
template <class T>
std::vector<Cx<T>> kernel_floating(const std::vector<std::vector<Cx<T>>>& rows,
                                   size_t cols) {
  Matrix<T> g(static_cast<int>(cols));
  for (const auto& row : rows)
    for (size_t i = 0; i < cols; ++i)
      for (size_t j = 0; j < cols; ++j) g(static_cast<int>(i), static_cast<int>(j)) +=
          conj(row[i]) * row[j];
  T tol = ScalarTraits<T>::epsilon() * ScalarTraits<T>::from_int(100) *
          (g.max_abs() + ScalarTraits<T>::from_int(1));
  EigenDecomposition<T> e = hermitian_eig(g, tol);
  return e.eigenvector(0);
}

// divide both polynomials by the highest-degree nonzero denominator
// coefficient so replays produce identical coefficient vectors
template <class T>
void normalize(RationalFunction<T>& f) {
  int d = f.denominator.effective_degree();
  Cx<T> lead = f.denominator.coeffs[d];
  if (lead == Cx<T>{}) {
    // fall back to the highest nonzero anywhere
    for (int j = f.denominator.declared_degree(); j >= 0; --j)
      if (!(f.denominator.coeffs[j] == Cx<T>{})) {
        lead = f.denominator.coeffs[j];
        break;
      }
  }
  if (lead == Cx<T>{})
    throw DegenerateSystem("fit: denominator is identically zero");
  Cx<T> inv = Cx<T>(ScalarTraits<T>::from_int(1)) / lead;
  for (auto& c : f.numerator.coeffs) c *= inv;
  for (auto& c : f.denominator.coeffs) c *= inv;
}

template <class T>
T data_scale(const std::vector<SamplePoint<T>>& pts) {
  if constexpr (ScalarTraits<T>::exact) {
    return ScalarTraits<T>::from_int(1);
  } else {
    T s = ScalarTraits<T>::from_int(0);
    for (const auto& p : pts) s = std::max(s, abs2(p.value));
    using std::sqrt;
    s = sqrt(s);
    if (s == ScalarTraits<T>::from_int(0)) s = ScalarTraits<T>::from_int(1);
    return s;
  }
}

}  // namespace detail

// Solve the linearized interpolation system f_i B(theta_i) = A(theta_i) for
// a rational function of degree (k1, k2). Exact backend: an exact kernel
// vector; floating backends: the smallest-singular-direction of the design
// matrix, accepted only if the relative residual stays below the tolerance.
template <class T>
RationalFunction<T> fit_rational(const std::vector<SamplePoint<T>>& pts, int k1, int k2,
                                 const FitOptions<T>& opts = {}) {
  if (k1 < 0 || k2 < 0) throw std::invalid_argument("fit_rational: negative degree bound");
  if (static_cast<int>(pts.size()) < k1 + k2 + 1)
    throw std::invalid_argument("fit_rational: need at least k1+k2+1 points");
  detail::check_nodes(pts, opts.enforce_node_bound);

  auto rows = detail::design_rows(pts, k1, k2);
  size_t cols = static_cast<size_t>(k1 + k2 + 2);
  std::vector<Cx<T>> v;
  if constexpr (ScalarTraits<T>::exact) {
    v = detail::kernel_exact<T>(std::move(rows), cols);
    if (v.empty())
      throw DegenerateSystem("fit_rational: exact system has trivial kernel only");
  } else {
    v = detail::kernel_floating<T>(rows, cols);
    // relative residual of each linearized equation against the unit-norm
    // kernel direction; consistent data drives this to rounding level
    using std::sqrt;
    T vnorm2 = ScalarTraits<T>::from_int(0);
    for (const auto& c : v) vnorm2 += abs2(c);
    T worst = ScalarTraits<T>::from_int(0);
    for (const auto& row : rows) {
      Cx<T> dot{};
      T rnorm2 = ScalarTraits<T>::from_int(0);
      for (size_t j = 0; j < cols; ++j) {
        dot += row[j] * v[j];
        rnorm2 += abs2(row[j]);
      }
      if (rnorm2 == ScalarTraits<T>::from_int(0)) continue;
      worst = std::max(worst, T(sqrt(abs2(dot) / (rnorm2 * vnorm2))));
    }
    if (worst > opts.residual_tol)
      throw DegenerateSystem(
          "fit_rational: residual exceeds tolerance; data inconsistent with degree bounds");
  }

  RationalFunction<T> f;
  f.numerator = Polynomial<T>(std::vector<Cx<T>>(v.begin(), v.begin() + k1 + 1));
  f.denominator = Polynomial<T>(std::vector<Cx<T>>(v.begin() + k1 + 1, v.end()));
  detail::normalize(f);
  return f;
}

enum class ReduceMode { exact, approximate };

// Exact mode divides out the polynomial gcd; approximate mode is a
// documented pass-through (callers evaluate Num/Den directly and validate
// by held-out agreement).
template <class T>
RationalFunction<T> reduce_common_factor(const Polynomial<T>& num, const Polynomial<T>& den,
                                         ReduceMode mode) {
  if (den.is_zero())
    throw DegenerateSystem("reduce_common_factor: denominator identically zero");
  RationalFunction<T> f{num, den};
  if (mode == ReduceMode::approximate) return f;
  if constexpr (ScalarTraits<T>::exact) {
    Polynomial<T> g = poly_gcd(num, den);
    if (g.effective_degree() > 0) {
      f.numerator = poly_divmod(num, g).first;
      f.denominator = poly_divmod(den, g).first;
    }
    f.numerator.trim_declared(std::max(f.numerator.effective_degree(), 0));
    f.denominator.trim_declared(std::max(f.denominator.effective_degree(), 0));
    detail::normalize(f);
    return f;
  } else {
    throw std::invalid_argument("reduce_common_factor: exact mode needs the exact backend");
  }
}

// Generalized Berlekamp-Welch for rational functions. Finds Num (deg <=
// k1+t) and Den (deg <= k2+t) with Num(theta_i) = f_i Den(theta_i) at every
// point -- the error locator divides both -- then accepts the quotient only
// if it has effective degree (k1, k2) (exact mode, after the gcd) and agrees
// with at least points.size() - t of the samples. Needs more than
// k1+k2+2t points; decoding is unique whenever it exists.
template <class T>
RationalFunction<T> bw_decode(const std::vector<SamplePoint<T>>& pts, int k1, int k2,
                              int t, const FitOptions<T>& opts = {}) {
  if (t < 0) throw std::invalid_argument("bw_decode: negative error budget");
  if (static_cast<int>(pts.size()) <= k1 + k2 + 2 * t)
    throw std::invalid_argument("bw_decode: need more than k1+k2+2t points");
  detail::check_nodes(pts, opts.enforce_node_bound);

  RationalFunction<T> wide;
  {
    FitOptions<T> inner = opts;
    try {
      wide = fit_rational(pts, k1 + t, k2 + t, inner);
    } catch (const DegenerateSystem&) {
      throw TooManyErrors("bw_decode: extended system inconsistent with error budget");
    }
  }

  RationalFunction<T> cand;
  if constexpr (ScalarTraits<T>::exact) {
    cand = reduce_common_factor(wide.numerator, wide.denominator, ReduceMode::exact);
    if (cand.numerator.effective_degree() > k1 || cand.denominator.effective_degree() > k2)
      throw TooManyErrors("bw_decode: reduced function exceeds degree bounds");
  } else {
    cand = reduce_common_factor(wide.numerator, wide.denominator, ReduceMode::approximate);
  }

  // held-out agreement count over all samples
  int agree = 0;
  T scale = detail::data_scale(pts);
  T tol = opts.residual_tol * scale;
  for (const auto& p : pts) {
    try {
      Cx<T> v = evaluate(cand, p.node);
      if constexpr (ScalarTraits<T>::exact) {
        if (v == p.value) ++agree;
      } else {
        if (abs_c(Cx<T>(v - p.value)) <= tol) ++agree;
      }
    } catch (const PoleProximity&) {
      // a sample at a pole of the candidate counts as disagreement
    }
  }
  if (agree < static_cast<int>(pts.size()) - t)
    throw TooManyErrors("bw_decode: candidate disagrees with more than t samples");
  return cand;
}

}  // namespace cayley
