#pragma once

#include <type_traits>
#include <utility>
#include <vector>

#include "cayley/matrix.hpp"

namespace cayley {

// Argument of the Cayley transform: a real number or the distinguished
// minus-infinity input, which maps to -1 (the one circle point the finite
// transform never reaches).
template <class T>
struct CayleyArg {
  bool minus_inf = false;
  T x{};

  CayleyArg(const T& v) : x(v) {}
  CayleyArg(double v)
    requires(!std::is_same_v<T, double>)
      : x(ScalarTraits<T>::from_double(v)) {}
  static CayleyArg minus_infinity() {
    CayleyArg a(T{});
    a.minus_inf = true;
    return a;
  }
};

// f(x) = (1+ix)/(1-ix), a bijection from the reals onto the unit circle
// minus {-1}; f(-inf) = -1.
template <class T>
Cx<T> cayley_transform(const CayleyArg<T>& a) {
  T one = ScalarTraits<T>::from_int(1);
  if (a.minus_inf) return Cx<T>(-one);
  Cx<T> num(one, a.x);
  Cx<T> den(one, -a.x);
  return num / den;
}

template <class T>
Cx<T> cayley_transform(const T& x) {
  return cayley_transform(CayleyArg<T>(x));
}

inline constexpr double kDefaultBranchGuard = 1e-8;

// Hermitian generator h with f(h) = H, computed as h = i(I-H)(I+H)^{-1}.
// Eigenphases r with |r| > pi - guard sit too close to the branch point of
// the transform (h = tan(r/2) diverges there) and are rejected.
template <class T>
EigenDecomposition<T> cayley_inverse_unitary(const Matrix<T>& h_unitary,
                                             const T& guard) {
  using std::atan;
  using std::tan;
  int n = h_unitary.dim();
  T one = ScalarTraits<T>::from_int(1);
  T two = ScalarTraits<T>::from_int(2);
  T utol = ScalarTraits<T>::epsilon() * ScalarTraits<T>::from_int(1000) *
           ScalarTraits<T>::from_int(n);
  if (unitarity_residual(h_unitary) > utol)
    throw std::invalid_argument("cayley_inverse_unitary: input is not unitary");

  Matrix<T> ip = h_unitary;  // I + H
  Matrix<T> im = h_unitary;  // I - H
  for (auto& x : im.entries()) x = -x;
  for (int i = 0; i < n; ++i) {
    ip(i, i) += Cx<T>(one);
    im(i, i) += Cx<T>(one);
  }
  Matrix<T> gen;
  try {
    gen = im * inverse_small(ip);
  } catch (const DegenerateSystem&) {
    // eigenphase exactly at -1
    throw PhaseAtBranchPoint("cayley_inverse_unitary: eigenphase at the branch point -1");
  }
  for (auto& x : gen.entries()) x = Cx<T>(-x.im, x.re);  // multiply by i
  // The inversion leaves a skew part of order eps * (1 + ||h||^2); phases
  // near +-pi blow ||h|| up, and the eigenvalue guard below rejects them.
  T s = gen.max_abs();
  T htol = ScalarTraits<T>::epsilon() * ScalarTraits<T>::from_int(1000) *
           (one + s + s * s);
  EigenDecomposition<T> e = hermitian_eig(gen, htol);

  T phase_cap = tan((ScalarTraits<T>::pi() - guard) / two);
  for (const T& ha : e.eigenvalues) {
    T a = ha < ScalarTraits<T>::from_int(0) ? T(-ha) : ha;
    if (a > phase_cap)
      throw PhaseAtBranchPoint("cayley_inverse_unitary: eigenphase within guard of +-pi");
  }
  return e;
}

template <class T>
EigenDecomposition<T> cayley_inverse_unitary(const Matrix<T>& h_unitary) {
  return cayley_inverse_unitary(h_unitary, ScalarTraits<T>::from_double(kDefaultBranchGuard));
}

// A gate frozen on its interpolation path: the fixed worst-case unitary C
// together with the eigendecomposition of the Hermitian generator h of its
// Haar companion H = f(h). Both endpoints and every intermediate point are
// recovered from these two pieces; the companion is never resampled.
template <class T>
struct CayleyGate {
  Matrix<T> worst;                  // C, unitary
  EigenDecomposition<T> generator;  // eigenpairs of h, f(h) = H

  int dim() const { return worst.dim(); }
};

template <class T>
CayleyGate<T> make_cayley_gate(const Matrix<T>& worst, const Matrix<T>& haar_companion,
                               const T& guard) {
  return CayleyGate<T>{worst, cayley_inverse_unitary(haar_companion, guard)};
}

template <class T>
CayleyGate<T> make_cayley_gate(const Matrix<T>& worst, const Matrix<T>& haar_companion) {
  return make_cayley_gate(worst, haar_companion,
                          ScalarTraits<T>::from_double(kDefaultBranchGuard));
}

// Haar companion gates whose phases fall inside the guard are resampled;
// only user-supplied gates surface PhaseAtBranchPoint.
template <class T>
CayleyGate<T> cayley_gate_for_worst(const Matrix<T>& worst, SplitRng& rng) {
  for (;;) {
    Matrix<T> h = haar_unitary<T>(worst.dim(), rng);
    try {
      return make_cayley_gate(worst, h);
    } catch (const PhaseAtBranchPoint&) {
      continue;
    }
  }
}

template <class T>
CayleyGate<T> sample_cayley_gate(int n, SplitRng& rng) {
  Matrix<T> worst = haar_unitary<T>(n, rng);
  return cayley_gate_for_worst(worst, rng);
}

// H = f(h), reconstructed from the stored generator.
template <class T>
Matrix<T> haar_companion(const CayleyGate<T>& g) {
  return assemble_from_eigen(g.generator,
                             [&](int a) { return cayley_transform(g.generator.eigenvalues[a]); });
}

// C(theta) = C f(theta h) = sum_a f(theta h_a) C |psi_a><psi_a|
template <class T>
Matrix<T> gate_at(const CayleyGate<T>& g, const T& theta) {
  Matrix<T> ft = assemble_from_eigen(
      g.generator, [&](int a) { return cayley_transform(T(theta * g.generator.eigenvalues[a])); });
  return g.worst * ft;
}

// The polynomial factorization of f(theta h) at one theta:
//   q(theta)   = prod_a (1 - i theta h_a)
//   p_a(theta) = (1 + i theta h_a) prod_{b != a} (1 - i theta h_b)
// so that C(theta) = q^{-1} sum_a p_a C |psi_a><psi_a|. Both are polynomials
// of degree N in theta.
template <class T>
struct LocalFactors {
  std::vector<Cx<T>> numerators;  // p_a(theta)
  Cx<T> denominator;              // q(theta)
};

template <class T>
LocalFactors<T> local_factors(const CayleyGate<T>& g, const T& theta) {
  T one = ScalarTraits<T>::from_int(1);
  int n = g.dim();
  LocalFactors<T> f;
  f.denominator = Cx<T>(one);
  f.numerators.assign(n, Cx<T>(one));
  for (int a = 0; a < n; ++a) {
    Cx<T> minus(one, -theta * g.generator.eigenvalues[a]);
    Cx<T> plus(one, theta * g.generator.eigenvalues[a]);
    f.denominator *= minus;
    for (int b = 0; b < n; ++b) f.numerators[b] *= (b == a) ? plus : minus;
  }
  return f;
}

// q_k(theta) alone; the reduction multiplies these out classically.
template <class T>
Cx<T> local_q(const CayleyGate<T>& g, const T& theta) {
  T one = ScalarTraits<T>::from_int(1);
  Cx<T> q(one);
  for (const T& h : g.generator.eigenvalues) q *= Cx<T>(one, -theta * h);
  return q;
}

// z-coordinate factorization around theta = 1 + z: the eigenvalue moduli
// r_a = sqrt(1 + h_a^2) cancel between numerator and denominator, leaving
// factors that stay within O(|z|) of unit size.
template <class T>
struct ZFormFactors {
  std::vector<T> moduli;  // r_a = sqrt(1 + h_a^2), >= 1
  std::vector<T> angles;  // u_a = arctan(h_a), in (-pi/2, pi/2)
};

template <class T>
ZFormFactors<T> z_form_factors(const CayleyGate<T>& g) {
  using std::atan;
  using std::sqrt;
  T one = ScalarTraits<T>::from_int(1);
  ZFormFactors<T> f;
  for (const T& h : g.generator.eigenvalues) {
    f.moduli.push_back(sqrt(one + h * h));
    f.angles.push_back(atan(h));
  }
  return f;
}

// Local denominator in z-form: prod_a e^{-i u_a} (1 - i z (h_a/r_a) e^{i u_a}).
// Related to the theta-form by q(1+z) = (prod_a r_a) * q_z(z); its squared
// modulus stays within O(N |z|) of one.
template <class T>
Cx<T> local_q_z(const CayleyGate<T>& g, const T& z) {
  T one = ScalarTraits<T>::from_int(1);
  ZFormFactors<T> f = z_form_factors(g);
  Cx<T> q(one);
  int n = g.dim();
  for (int a = 0; a < n; ++a) {
    T w = g.generator.eigenvalues[a] / f.moduli[a];
    Cx<T> phase = unit_phase(f.angles[a]);
    Cx<T> factor = Cx<T>(one) - Cx<T>(T{}, z * w) * phase;
    q *= conj(phase) * factor;
  }
  return q;
}

// C(z) = C(theta = 1 + z) computed through the z-form factorization.
template <class T>
Matrix<T> gate_at_z(const CayleyGate<T>& g, const T& z) {
  T one = ScalarTraits<T>::from_int(1);
  int n = g.dim();
  ZFormFactors<T> f = z_form_factors(g);
  std::vector<T> w(n);
  std::vector<Cx<T>> phase(n);
  for (int a = 0; a < n; ++a) {
    w[a] = g.generator.eigenvalues[a] / f.moduli[a];
    phase[a] = unit_phase(f.angles[a]);
  }
  Cx<T> den(one);
  for (int a = 0; a < n; ++a)
    den *= conj(phase[a]) * (Cx<T>(one) - Cx<T>(T{}, z * w[a]) * phase[a]);
  Matrix<T> num = assemble_from_eigen(g.generator, [&](int a) {
    Cx<T> pa = phase[a] + Cx<T>(T{}, z * w[a]);
    for (int b = 0; b < n; ++b) {
      if (b == a) continue;
      pa *= conj(phase[b]) - Cx<T>(T{}, z * w[b]);
    }
    return pa;
  });
  Cx<T> inv_den = Cx<T>(one) / den;
  return g.worst * (num * inv_den);
}

}  // namespace cayley
