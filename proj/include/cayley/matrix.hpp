#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "cayley/errors.hpp"
#include "cayley/rng.hpp"
#include "cayley/scalar.hpp"

namespace cayley {

// Small dense complex square matrix, row-major. Gates are 2x2 or 4x4; the
// decoder's normal matrices reach a few dozen rows. Nothing here is tuned
// for large N.
template <class T>
class Matrix {
 public:
  Matrix() : n_(0) {}
  explicit Matrix(int n) : n_(n), a_(static_cast<size_t>(n) * n) {}

  static Matrix identity(int n) {
    Matrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = Cx<T>(ScalarTraits<T>::from_int(1));
    return m;
  }

  int dim() const { return n_; }

  Cx<T>& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
  const Cx<T>& operator()(int i, int j) const {
    return a_[static_cast<size_t>(i) * n_ + j];
  }

  Matrix adjoint() const {
    Matrix m(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) m(j, i) = conj((*this)(i, j));
    return m;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.n_ != b.n_) throw DimensionMismatch("matrix product: dim mismatch");
    Matrix c(a.n_);
    for (int i = 0; i < a.n_; ++i)
      for (int k = 0; k < a.n_; ++k) {
        Cx<T> aik = a(i, k);
        for (int j = 0; j < a.n_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) {
    for (size_t i = 0; i < a.a_.size(); ++i) a.a_[i] += b.a_[i];
    return a;
  }
  friend Matrix operator-(Matrix a, const Matrix& b) {
    for (size_t i = 0; i < a.a_.size(); ++i) a.a_[i] -= b.a_[i];
    return a;
  }
  friend Matrix operator*(Matrix a, const Cx<T>& s) {
    for (auto& x : a.a_) x *= s;
    return a;
  }
  friend Matrix operator*(const Cx<T>& s, Matrix a) { return a * s; }

  // entrywise max modulus
  T max_abs() const {
    T m2 = ScalarTraits<T>::from_int(0);
    for (const auto& x : a_) m2 = std::max(m2, abs2(x));
    using std::sqrt;
    return sqrt(m2);
  }

  std::vector<Cx<T>>& entries() { return a_; }
  const std::vector<Cx<T>>& entries() const { return a_; }

 private:
  int n_;
  std::vector<Cx<T>> a_;
};

template <class T>
std::vector<Cx<T>> mat_vec(const Matrix<T>& m, const std::vector<Cx<T>>& v) {
  std::vector<Cx<T>> r(m.dim());
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) r[i] += m(i, j) * v[j];
  return r;
}

// ||M^dag M - I||_max
template <class T>
T unitarity_residual(const Matrix<T>& m) {
  Matrix<T> g = m.adjoint() * m;
  for (int i = 0; i < g.dim(); ++i) g(i, i) -= Cx<T>(ScalarTraits<T>::from_int(1));
  return g.max_abs();
}

// Eigenpairs of a Hermitian matrix: real eigenvalues ascending, unit
// eigenvector columns with the leading significant entry made real-positive
// so that repeated runs reproduce bit-identical decompositions.
template <class T>
struct EigenDecomposition {
  std::vector<T> eigenvalues;
  Matrix<T> eigenvectors;  // column alpha <-> eigenvalues[alpha]

  int dim() const { return eigenvectors.dim(); }

  std::vector<Cx<T>> eigenvector(int alpha) const {
    std::vector<Cx<T>> v(dim());
    for (int i = 0; i < dim(); ++i) v[i] = eigenvectors(i, alpha);
    return v;
  }
};

// sum_alpha g(alpha) |psi_alpha><psi_alpha|
template <class T, class Fn>
Matrix<T> assemble_from_eigen(const EigenDecomposition<T>& e, Fn&& weight) {
  int n = e.dim();
  Matrix<T> m(n);
  for (int a = 0; a < n; ++a) {
    Cx<T> w = weight(a);
    for (int i = 0; i < n; ++i) {
      Cx<T> wi = w * e.eigenvectors(i, a);
      for (int j = 0; j < n; ++j) m(i, j) += wi * conj(e.eigenvectors(j, a));
    }
  }
  return m;
}

template <class T>
Matrix<T> reconstruct(const EigenDecomposition<T>& e) {
  return assemble_from_eigen(e, [&](int a) { return Cx<T>(e.eigenvalues[a]); });
}

namespace detail {

template <class T>
void canonicalize_columns(Matrix<T>& v) {
  using std::sqrt;
  int n = v.dim();
  T quarter = ScalarTraits<T>::from_int(1) / ScalarTraits<T>::from_int(4 * n);
  for (int c = 0; c < n; ++c) {
    int lead = 0;
    for (int i = 0; i < n; ++i) {
      if (abs2(v(i, c)) >= quarter) {
        lead = i;
        break;
      }
    }
    T mag = sqrt(abs2(v(lead, c)));
    if (mag == ScalarTraits<T>::from_int(0)) continue;
    Cx<T> phase = conj(v(lead, c)) * (ScalarTraits<T>::from_int(1) / mag);
    for (int i = 0; i < n; ++i) v(i, c) *= phase;
  }
}

template <class T>
void sort_eigen(EigenDecomposition<T>& e) {
  int n = e.dim();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return e.eigenvalues[a] < e.eigenvalues[b]; });
  std::vector<T> vals(n);
  Matrix<T> vecs(n);
  for (int c = 0; c < n; ++c) {
    vals[c] = e.eigenvalues[order[c]];
    for (int i = 0; i < n; ++i) vecs(i, c) = e.eigenvectors(i, order[c]);
  }
  e.eigenvalues = std::move(vals);
  e.eigenvectors = std::move(vecs);
}

// Closed-form 2x2 Hermitian eigendecomposition via trace/determinant.
template <class T>
EigenDecomposition<T> eig2(const Matrix<T>& h) {
  using std::sqrt;
  T zero = ScalarTraits<T>::from_int(0);
  T one = ScalarTraits<T>::from_int(1);
  T a = h(0, 0).re, b = h(1, 1).re;
  Cx<T> g = h(0, 1);
  EigenDecomposition<T> e;
  e.eigenvectors = Matrix<T>(2);
  T mid = (a + b) / ScalarTraits<T>::from_int(2);
  T half_diff = (a - b) / ScalarTraits<T>::from_int(2);
  T rad = sqrt(half_diff * half_diff + abs2(g));
  e.eigenvalues = {mid - rad, mid + rad};
  if (abs2(g) == zero) {
    // already diagonal; order the basis vectors by eigenvalue
    int lo = (a <= b) ? 0 : 1;
    e.eigenvalues = {std::min(a, b), std::max(a, b)};
    e.eigenvectors(lo, 0) = Cx<T>(one);
    e.eigenvectors(1 - lo, 1) = Cx<T>(one);
    return e;
  }
  for (int c = 0; c < 2; ++c) {
    // (g, lambda - a)^T is an eigenvector for eigenvalue lambda
    Cx<T> v0 = g;
    Cx<T> v1 = Cx<T>(e.eigenvalues[c] - a);
    T nrm = sqrt(abs2(v0) + abs2(v1));
    Cx<T> inv = Cx<T>(one / nrm);
    e.eigenvectors(0, c) = v0 * inv;
    e.eigenvectors(1, c) = v1 * inv;
  }
  canonicalize_columns(e.eigenvectors);
  return e;
}

// Cyclic complex Jacobi, capped sweeps. Used for 4x4 gates and for the
// modest normal matrices arising in least-squares kernels.
template <class T>
EigenDecomposition<T> eig_jacobi(const Matrix<T>& h_in, int max_sweeps) {
  using std::sqrt;
  T zero = ScalarTraits<T>::from_int(0);
  T one = ScalarTraits<T>::from_int(1);
  int n = h_in.dim();
  Matrix<T> h = h_in;
  Matrix<T> v = Matrix<T>::identity(n);

  T scale2 = zero;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale2 += abs2(h(i, j));
  if (scale2 == zero) {
    EigenDecomposition<T> e;
    e.eigenvalues.assign(n, zero);
    e.eigenvectors = v;
    return e;
  }
  T eps = ScalarTraits<T>::epsilon();
  T stop2 = scale2 * eps * eps;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    T off2 = zero;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off2 += abs2(h(p, q));
    if (!(off2 > stop2)) {
      EigenDecomposition<T> e;
      e.eigenvalues.resize(n);
      for (int i = 0; i < n; ++i) e.eigenvalues[i] = h(i, i).re;
      e.eigenvectors = v;
      sort_eigen(e);
      canonicalize_columns(e.eigenvectors);
      return e;
    }
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        Cx<T> g = h(p, q);
        T g2 = abs2(g);
        if (!(g2 > stop2 / (n * n))) continue;
        T gm = sqrt(g2);
        // rotation zeroing h(p,q): smaller root of t^2 - 2*theta*t - 1 = 0
        T theta = (h(q, q).re - h(p, p).re) / (gm + gm);
        T t;
        {
          T at = theta < zero ? -theta : theta;
          t = one / (at + sqrt(theta * theta + one));
          if (theta > zero) t = -t;
        }
        T c = one / sqrt(t * t + one);
        Cx<T> s = conj(g) * (t * c / gm);
        // right-multiply columns p,q of h and v
        for (int k = 0; k < n; ++k) {
          Cx<T> hkp = h(k, p), hkq = h(k, q);
          h(k, p) = hkp * c + hkq * s;
          h(k, q) = hkq * c - hkp * conj(s);
          Cx<T> vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * c + vkq * s;
          v(k, q) = vkq * c - vkp * conj(s);
        }
        // left-multiply rows p,q by the adjoint rotation
        for (int k = 0; k < n; ++k) {
          Cx<T> hpk = h(p, k), hqk = h(q, k);
          h(p, k) = hpk * c + hqk * conj(s);
          h(q, k) = hqk * c - hpk * s;
        }
      }
    }
  }
  throw NoConvergence("jacobi eigensolver: sweep cap reached");
}

}  // namespace detail

inline constexpr int kJacobiSweepCap = 100;

// Hermitian eigendecomposition. Closed form for 2x2, cyclic Jacobi above.
// Throws NotHermitian when ||H - H^dag||_max > tol, NoConvergence at the
// sweep cap.
template <class T>
EigenDecomposition<T> hermitian_eig(const Matrix<T>& h, const T& tol) {
  int n = h.dim();
  if (n < 1) throw DimensionMismatch("hermitian_eig: empty matrix");
  T dev = (h - h.adjoint()).max_abs();
  if (dev > tol) throw NotHermitian("hermitian_eig: input deviates from H^dag by more than tol");
  // work on the exactly Hermitian average so roundoff in the input cannot
  // leak imaginary parts into the eigenvalues
  Matrix<T> hh = h;
  T half = ScalarTraits<T>::from_int(1) / ScalarTraits<T>::from_int(2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Cx<T> sym = (h(i, j) + conj(h(j, i))) * Cx<T>(half);
      hh(i, j) = sym;
    }
  for (int i = 0; i < n; ++i) hh(i, i).im = ScalarTraits<T>::from_int(0);
  if (n == 1) {
    EigenDecomposition<T> e;
    e.eigenvalues = {hh(0, 0).re};
    e.eigenvectors = Matrix<T>::identity(1);
    return e;
  }
  if (n == 2) return detail::eig2(hh);
  return detail::eig_jacobi(hh, kJacobiSweepCap);
}

template <class T>
EigenDecomposition<T> hermitian_eig(const Matrix<T>& h) {
  T tol = ScalarTraits<T>::epsilon() * ScalarTraits<T>::from_int(100) *
          (h.max_abs() + ScalarTraits<T>::from_int(1));
  return hermitian_eig(h, tol);
}

// N x N matrix of i.i.d. standard complex Gaussians (E|entry|^2 = 1),
// deterministic given the generator state.
template <class T>
Matrix<T> sample_ginibre(int n, SplitRng& rng) {
  if (n < 1) throw DimensionMismatch("sample_ginibre: N must be >= 1");
  Matrix<T> m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto [re, im] = rng.complex_gaussian();
      m(i, j) = cx_from_double<T>(re, im);
    }
  return m;
}

// Haar-uniform unitary: QR of a Ginibre sample. Gram-Schmidt with a second
// orthogonalization pass produces the R with positive real diagonal directly,
// which is the phase correction that makes the Q factor exactly Haar.
template <class T>
Matrix<T> haar_unitary(int n, SplitRng& rng) {
  using std::sqrt;
  Matrix<T> a = sample_ginibre<T>(n, rng);
  Matrix<T> q(n);
  for (int j = 0; j < n; ++j) {
    std::vector<Cx<T>> v(n);
    for (int i = 0; i < n; ++i) v[i] = a(i, j);
    for (int pass = 0; pass < 2; ++pass) {
      for (int k = 0; k < j; ++k) {
        Cx<T> proj{};
        for (int i = 0; i < n; ++i) proj += conj(q(i, k)) * v[i];
        for (int i = 0; i < n; ++i) v[i] -= proj * q(i, k);
      }
    }
    T nrm2 = ScalarTraits<T>::from_int(0);
    for (int i = 0; i < n; ++i) nrm2 += abs2(v[i]);
    T inv = ScalarTraits<T>::from_int(1) / sqrt(nrm2);
    for (int i = 0; i < n; ++i) q(i, j) = v[i] * Cx<T>(inv);
  }
  return q;
}

// Gauss-Jordan inverse with partial pivoting; gates are at most 4x4.
template <class T>
Matrix<T> inverse_small(const Matrix<T>& m_in) {
  int n = m_in.dim();
  Matrix<T> m = m_in;
  Matrix<T> inv = Matrix<T>::identity(n);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    T best = abs2(m(col, col));
    for (int r = col + 1; r < n; ++r) {
      T v = abs2(m(r, col));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == ScalarTraits<T>::from_int(0))
      throw DegenerateSystem("inverse_small: singular matrix");
    if (piv != col)
      for (int j = 0; j < n; ++j) {
        std::swap(m(piv, j), m(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    Cx<T> d = m(col, col);
    Cx<T> dinv = Cx<T>(ScalarTraits<T>::from_int(1)) / d;
    for (int j = 0; j < n; ++j) {
      m(col, j) *= dinv;
      inv(col, j) *= dinv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      Cx<T> f = m(r, col);
      if (f == Cx<T>{}) continue;
      for (int j = 0; j < n; ++j) {
        m(r, j) -= f * m(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

}  // namespace cayley
