#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace cayley {

// Real scalar backends. All numeric code in the library is templated on one
// of these three types:
//
//   double    machine precision
//   BigFloat  MPFR software floats; mantissa width set by set_precision_bits()
//   Rational  exact rationals (no transcendental functions; used by the
//             decoding property tests, where the inputs are rational)
using BigFloat =
    boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                  boost::multiprecision::et_off>;
using Rational =
    boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                  boost::multiprecision::et_off>;

namespace detail {
inline unsigned& precision_bits_ref() {
  static unsigned bits = 113;
  return bits;
}
}  // namespace detail

// Mantissa width used by BigFloat values created after this call. Must be
// called outside of parallel regions; worker threads read the same setting.
inline void set_precision_bits(unsigned bits) {
  if (bits < 53) bits = 53;
  detail::precision_bits_ref() = bits;
  // boost tracks precision in decimal digits; round up so no bits are lost
  BigFloat::default_precision(static_cast<unsigned>(bits * 0.30103) + 4);
}

inline unsigned precision_bits() { return detail::precision_bits_ref(); }

struct PrecisionGuard {
  unsigned saved;
  PrecisionGuard(unsigned bits) : saved(precision_bits()) {
    set_precision_bits(bits);
  }
  ~PrecisionGuard() { set_precision_bits(saved); }
};

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static const char* name() { return "double"; }
  static double epsilon() { return std::numeric_limits<double>::epsilon(); }
  static double from_double(double x) { return x; }
  static double to_double(double x) { return x; }
  static double from_int(long v) { return static_cast<double>(v); }
  static double pi() { return 3.14159265358979323846; }
  static std::string str(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
  }
  static double parse(const std::string& s) { return std::stod(s); }
};

template <>
struct ScalarTraits<BigFloat> {
  static constexpr bool exact = false;
  static const char* name() { return "mpfr"; }
  static BigFloat epsilon() {
    return ldexp(BigFloat(1), 1 - static_cast<int>(precision_bits()));
  }
  static BigFloat from_double(double x) { return BigFloat(x); }
  static double to_double(const BigFloat& x) { return x.convert_to<double>(); }
  static BigFloat from_int(long v) { return BigFloat(v); }
  static BigFloat pi() { return 4 * atan(BigFloat(1)); }
  static std::string str(const BigFloat& x) {
    return x.str(0, std::ios_base::scientific);
  }
  static BigFloat parse(const std::string& s) { return BigFloat(s); }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static const char* name() { return "rational"; }
  static Rational epsilon() { return Rational(0); }
  static Rational from_double(double x) { return Rational(x); }  // exact
  static double to_double(const Rational& x) { return x.convert_to<double>(); }
  static Rational from_int(long v) { return Rational(v); }
  static std::string str(const Rational& x) { return x.str(); }  // "p/q"
  static Rational parse(const std::string& s) { return Rational(s); }
  // no pi(): the exact backend has no transcendentals
};

// Complex number over any real backend. std::complex is only specified for
// the builtin floating types, so the library carries its own.
template <class T>
struct Cx {
  T re{};
  T im{};

  Cx() = default;
  Cx(const T& r) : re(r) {}
  Cx(const T& r, const T& i) : re(r), im(i) {}

  Cx& operator+=(const Cx& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Cx& operator-=(const Cx& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Cx& operator*=(const Cx& o) {
    T r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = r;
    return *this;
  }
  Cx& operator*=(const T& s) {
    re *= s;
    im *= s;
    return *this;
  }
  Cx& operator/=(const Cx& o) {
    T d = o.re * o.re + o.im * o.im;
    T r = (re * o.re + im * o.im) / d;
    im = (im * o.re - re * o.im) / d;
    re = r;
    return *this;
  }

  friend Cx operator+(Cx a, const Cx& b) { return a += b; }
  friend Cx operator-(Cx a, const Cx& b) { return a -= b; }
  friend Cx operator*(Cx a, const Cx& b) { return a *= b; }
  friend Cx operator*(Cx a, const T& s) { return a *= s; }
  friend Cx operator*(const T& s, Cx a) { return a *= s; }
  friend Cx operator/(Cx a, const Cx& b) { return a /= b; }
  friend Cx operator-(const Cx& a) { return Cx(-a.re, -a.im); }
  friend bool operator==(const Cx& a, const Cx& b) {
    return a.re == b.re && a.im == b.im;
  }
};

template <class T>
Cx<T> conj(const Cx<T>& z) {
  return Cx<T>(z.re, -z.im);
}

template <class T>
T abs2(const Cx<T>& z) {
  return z.re * z.re + z.im * z.im;
}

template <class T>
T abs_c(const Cx<T>& z) {
  using std::sqrt;
  return sqrt(abs2(z));
}

template <class T>
T arg_c(const Cx<T>& z) {
  using std::atan2;
  return atan2(z.im, z.re);
}

// e^{i phi}
template <class T>
Cx<T> unit_phase(const T& phi) {
  using std::cos;
  using std::sin;
  return Cx<T>(cos(phi), sin(phi));
}

template <class T>
Cx<T> cx_from_double(double re, double im) {
  return Cx<T>(ScalarTraits<T>::from_double(re), ScalarTraits<T>::from_double(im));
}

template <class T>
Cx<double> cx_to_double(const Cx<T>& z) {
  return Cx<double>(ScalarTraits<T>::to_double(z.re), ScalarTraits<T>::to_double(z.im));
}

}  // namespace cayley
