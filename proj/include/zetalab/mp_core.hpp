#pragma once

// Precision-controlled real/complex arithmetic and the handful of special
// functions the moment formulas need.
//
// Three scalar types are used throughout the library:
//   double       -- not used for reported values; only for error bookkeeping
//   long double  -- 64-bit significand, the default working type of the
//                   quadrature kernels (work_bits = 64)
//   Real         -- MPFR-backed, runtime precision, used whenever a
//                   PrecisionContext asks for more than 64 bits
//
// Generic kernels are templates over the scalar type and are explicitly
// instantiated for long double and Real (and double where it is useful).

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <type_traits>

#include "zetalab/error.hpp"

namespace zetalab::mp {

using Real = boost::multiprecision::mpfr_float;

template <class T>
inline constexpr bool is_real_v = std::is_same_v<T, Real>;

/// A value together with an absolute error estimate.
template <class V>
struct Estimate {
  V value{};
  double err = 0.0;
};

// ---------------------------------------------------------------------------
// scalar helpers

template <class T>
unsigned bits_of() {
  if constexpr (is_real_v<T>) {
    return boost::multiprecision::detail::digits10_2_2(Real::default_precision());
  } else {
    return static_cast<unsigned>(std::numeric_limits<T>::digits);
  }
}

template <class T>
T eps_of() {
  using std::ldexp;
  return ldexp(T(1), 1 - static_cast<int>(bits_of<T>()));
}

template <class T>
double to_double(const T& x) {
  return static_cast<double>(x);
}

/// Copy of x rounded to the current default precision. Boost keeps the
/// source precision on copy, so values crossing a PrecisionScope boundary
/// need this.
inline Real rounded(const Real& x) {
  Real r(x);
  r.precision(Real::default_precision());
  return r;
}

template <class T>
T pi() {
  return boost::math::constants::pi<T>();
}

template <class T>
T euler() {
  return boost::math::constants::euler<T>();
}

template <class T>
T ln_two() {
  return boost::math::constants::ln_two<T>();
}

/// B_{2k} as a T (B_0 = 1, B_2 = 1/6, ...). Exact rationals are cached
/// process-wide and converted at the current precision of T.
template <class T>
T bernoulli_b2n(unsigned k);

// ---------------------------------------------------------------------------
// complex numbers over any of the scalar types

template <class T>
struct Complex {
  T re{};
  T im{};

  Complex() = default;
  Complex(T r) : re(std::move(r)), im(0) {}  // NOLINT(implicit)
  Complex(T r, T i) : re(std::move(r)), im(std::move(i)) {}

  template <class U>
  static Complex from(const Complex<U>& z) {
    return Complex(T(z.re), T(z.im));
  }

  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Complex& operator*=(const Complex& o) {
    T r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  Complex& operator*=(const T& s) {
    re *= s;
    im *= s;
    return *this;
  }
  Complex& operator/=(const Complex& o);
  Complex& operator/=(const T& s) {
    re /= s;
    im /= s;
    return *this;
  }
  Complex operator-() const { return Complex(-re, -im); }
};

template <class T> Complex<T> operator+(Complex<T> a, const Complex<T>& b) { return a += b; }
template <class T> Complex<T> operator-(Complex<T> a, const Complex<T>& b) { return a -= b; }
template <class T> Complex<T> operator*(Complex<T> a, const Complex<T>& b) { return a *= b; }
template <class T> Complex<T> operator/(Complex<T> a, const Complex<T>& b) { return a /= b; }
template <class T> Complex<T> operator+(Complex<T> a, const T& b) { a.re += b; return a; }
template <class T> Complex<T> operator-(Complex<T> a, const T& b) { a.re -= b; return a; }
template <class T> Complex<T> operator*(Complex<T> a, const T& b) { return a *= b; }
template <class T> Complex<T> operator*(const T& b, Complex<T> a) { return a *= b; }
template <class T> Complex<T> operator/(Complex<T> a, const T& b) { return a /= b; }
template <class T> Complex<T> operator/(const T& a, const Complex<T>& b) { return Complex<T>(a) / b; }

template <class T>
Complex<T>& Complex<T>::operator/=(const Complex<T>& o) {
  using std::abs;
  // Smith's algorithm keeps the intermediate products in range.
  if (abs(o.re) >= abs(o.im)) {
    T r = o.im / o.re;
    T den = o.re + o.im * r;
    T nr = (re + im * r) / den;
    im = (im - re * r) / den;
    re = std::move(nr);
  } else {
    T r = o.re / o.im;
    T den = o.re * r + o.im;
    T nr = (re * r + im) / den;
    im = (im * r - re) / den;
    re = std::move(nr);
  }
  return *this;
}

template <class T>
Complex<T> conj(const Complex<T>& z) {
  return Complex<T>(z.re, -z.im);
}

template <class T>
T norm(const Complex<T>& z) {
  return z.re * z.re + z.im * z.im;
}

template <class T>
T abs(const Complex<T>& z) {
  using std::abs;
  using std::sqrt;
  T a = abs(z.re), b = abs(z.im);
  if (a < b) std::swap(a, b);
  if (a == 0) return T(0);
  T r = b / a;
  return a * sqrt(1 + r * r);
}

template <class T>
T arg(const Complex<T>& z) {
  using std::atan2;
  return atan2(z.im, z.re);
}

template <class T>
Complex<T> exp(const Complex<T>& z) {
  using std::cos;
  using std::exp;
  using std::sin;
  T m = exp(z.re);
  return Complex<T>(m * cos(z.im), m * sin(z.im));
}

/// Principal branch.
template <class T>
Complex<T> log(const Complex<T>& z) {
  using std::log;
  return Complex<T>(log(abs(z)), arg(z));
}

template <class T>
Complex<T> sqrt(const Complex<T>& z) {
  using std::abs;
  using std::sqrt;
  if (z.re == 0 && z.im == 0) return z;
  T m = abs(z);
  T a = sqrt((m + abs(z.re)) / 2);
  if (z.re >= 0) return Complex<T>(a, z.im / (2 * a));
  T b = abs(z.im) / (2 * a);
  return Complex<T>(b, z.im < 0 ? T(-a) : a);
}

template <class T>
Complex<T> pow(const Complex<T>& z, const Complex<T>& w) {
  return exp(w * log(z));
}

/// x^w for real x > 0.
template <class T>
Complex<T> pow(const T& x, const Complex<T>& w) {
  using std::log;
  return exp(w * log(x));
}

template <class T>
Complex<T> sin(const Complex<T>& z) {
  using std::cos;
  using std::cosh;
  using std::sin;
  using std::sinh;
  return Complex<T>(sin(z.re) * cosh(z.im), cos(z.re) * sinh(z.im));
}

template <class T>
Complex<T> cos(const Complex<T>& z) {
  using std::cos;
  using std::cosh;
  using std::sin;
  using std::sinh;
  return Complex<T>(cos(z.re) * cosh(z.im), -sin(z.re) * sinh(z.im));
}

/// log(sin z), any branch (callers exponentiate). Stable for large |Im z|.
template <class T>
Complex<T> log_sin(const Complex<T>& z);

using ComplexValue = Complex<Real>;

// ---------------------------------------------------------------------------
// precision context

/// Sets the MPFR default precision for the current scope. MPFR's default is
/// process-global in this Boost version, so scopes are serialized.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  std::unique_lock<std::recursive_mutex> lock_;
  unsigned saved_digits10_;
};

struct Constants {
  Real euler_gamma;
  Real log_2pi;
  Real zeta_prime_2;
  Real pi;
};

class PrecisionContext {
 public:
  /// Tolerances default to 2^-(work_bits - 24) when left at zero.
  explicit PrecisionContext(unsigned work_bits = 64, double abs_tol = 0.0,
                            double rel_tol = 0.0);

  unsigned work_bits() const noexcept { return work_bits_; }
  double abs_tol() const noexcept { return abs_tol_; }
  double rel_tol() const noexcept { return rel_tol_; }

  /// A context with twice the working bits and the same tolerances.
  PrecisionContext doubled() const;

  /// Evaluated once at construction, at work_bits.
  const Constants& constants() const noexcept { return *constants_; }

  /// Throws precision_failure unless err <= max(abs_tol, rel_tol * |scale|).
  void check(double err, double scale, const char* what) const;

 private:
  unsigned work_bits_;
  double abs_tol_;
  double rel_tol_;
  std::shared_ptr<const Constants> constants_;
};

// ---------------------------------------------------------------------------
// operations

/// Principal-branch log Gamma at the precision of T: Stirling series after
/// raising the argument by the recurrence. Error estimate is absolute on the
/// logarithm (i.e. relative on Gamma).
template <class T>
Estimate<Complex<T>> log_gamma(const Complex<T>& z);

Estimate<ComplexValue> complex_log_gamma(const ComplexValue& z, const PrecisionContext& ctx);

/// exp(2 pi i x) with exact reduction of x modulo 1.
template <class T>
Complex<T> e_of(const T& x);

ComplexValue e_of(const Real& x, const PrecisionContext& ctx);

/// zeta'(2) = -sum_{n>=2} log(n)/n^2 by Euler-Maclaurin tail summation.
template <class T>
Estimate<T> zeta_prime_at_2();

Estimate<Real> zeta_prime_at_2(const PrecisionContext& ctx);

}  // namespace zetalab::mp
