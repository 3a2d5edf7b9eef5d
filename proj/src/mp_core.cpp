#include "zetalab/mp_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace zetalab::mp {
namespace {

std::recursive_mutex& precision_mutex() {
  static std::recursive_mutex m;
  return m;
}

unsigned digits10_for_bits(unsigned bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

template <class T>
bool is_nonpositive_integer(const Complex<T>& z) {
  using std::floor;
  return z.im == 0 && z.re <= 0 && floor(z.re) == z.re;
}

}  // namespace

PrecisionScope::PrecisionScope(unsigned bits)
    : lock_(precision_mutex()), saved_digits10_(Real::default_precision()) {
  Real::default_precision(digits10_for_bits(bits));
}

PrecisionScope::~PrecisionScope() { Real::default_precision(saved_digits10_); }

PrecisionContext::PrecisionContext(unsigned work_bits, double abs_tol, double rel_tol)
    : work_bits_(work_bits), abs_tol_(abs_tol), rel_tol_(rel_tol) {
  if (work_bits_ < 64)
    throw Error(ErrorKind::invalid_argument,
                "work_bits must be >= 64, got " + std::to_string(work_bits_));
  const double derived = std::ldexp(1.0, -static_cast<int>(std::min(work_bits_, 1000u)) + 24);
  if (abs_tol_ == 0.0) abs_tol_ = derived;
  if (rel_tol_ == 0.0) rel_tol_ = derived;
  if (!(abs_tol_ > 0.0 && abs_tol_ < 1.0) || !(rel_tol_ > 0.0 && rel_tol_ < 1.0))
    throw Error(ErrorKind::invalid_argument, "tolerances must lie in (0, 1)");

  PrecisionScope scope(work_bits_);
  auto c = std::make_shared<Constants>();
  c->pi = mp::pi<Real>();
  c->euler_gamma = mp::euler<Real>();
  c->log_2pi = log(2 * c->pi);
  c->zeta_prime_2 = zeta_prime_at_2<Real>().value;
  constants_ = std::move(c);
}

PrecisionContext PrecisionContext::doubled() const {
  return PrecisionContext(2 * work_bits_, abs_tol_, rel_tol_);
}

void PrecisionContext::check(double err, double scale, const char* what) const {
  const double allowed = std::max(abs_tol_, rel_tol_ * std::abs(scale));
  if (!(err <= allowed)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, ": error estimate %.3g exceeds tolerance %.3g at %u bits", err, allowed,
                  work_bits_);
    throw Error(ErrorKind::precision_failure, std::string(what) + buf);
  }
}

// ---------------------------------------------------------------------------

template <class T>
Complex<T> log_sin(const Complex<T>& z) {
  const T half_pi = pi<T>() / 2;
  const T log2 = ln_two<T>();
  if (z.im > 0) {
    // sin z = (i/2) e^{-iz} (1 - e^{2iz})
    Complex<T> e2 = exp(Complex<T>(T(-2 * z.im), T(2 * z.re)));
    return Complex<T>(T(z.im - log2), T(half_pi - z.re)) + log(Complex<T>(T(1)) - e2);
  }
  if (z.im < 0) {
    // sin z = (-i/2) e^{iz} (1 - e^{-2iz})
    Complex<T> e2 = exp(Complex<T>(T(2 * z.im), T(-2 * z.re)));
    return Complex<T>(T(-z.im - log2), T(z.re - half_pi)) + log(Complex<T>(T(1)) - e2);
  }
  using std::sin;
  return log(Complex<T>(T(sin(z.re)), T(0)));
}

template <class T>
Estimate<Complex<T>> log_gamma(const Complex<T>& z) {
  using std::ceil;
  using std::cos;
  using std::log;
  if (is_nonpositive_integer(z))
    throw Error(ErrorKind::pole, "log Gamma at a non-positive integer");

  const unsigned bits = bits_of<T>();
  const T eps = eps_of<T>();
  // Below this real part the smallest Stirling term, ~exp(-2 pi |w|), is not
  // small enough for the working precision.
  const double r0 = 0.11 * (bits + 10) + 2.0;

  long shift = 0;
  if (to_double(z.re) < r0) shift = static_cast<long>(std::ceil(r0 - to_double(z.re)));

  const T half_log_2pi = log(2 * pi<T>()) / 2;
  for (int attempt = 0; attempt < 8; ++attempt) {
    Complex<T> w = z + T(shift);
    Complex<T> logw = log(w);
    Complex<T> lead = (w - T(0.5)) * logw - w + half_log_2pi;

    const double theta = to_double(arg(w));
    const double sec = 1.0 / std::cos(theta / 2);
    Complex<T> winv = T(1) / w;
    Complex<T> w2inv = winv * winv;
    Complex<T> wpow = winv;
    Complex<T> sum(T(0), T(0));
    const double scale = std::max(1.0, to_double(abs(lead)));
    double trunc = -1.0;
    double prev = std::numeric_limits<double>::infinity();
    for (unsigned k = 1; k < 4 * bits; ++k) {
      T coef = bernoulli_b2n<T>(k) / T(2 * k * (2 * k - 1));
      Complex<T> term = wpow * coef;
      const double mag = to_double(abs(term));
      const double bound = mag * std::pow(sec, 2.0 * k);
      if (bound <= to_double(eps) * scale) {
        trunc = bound;
        break;
      }
      if (mag > prev) break;  // asymptotic series turned; raise the argument
      prev = mag;
      sum += term;
      wpow *= w2inv;
    }
    if (trunc < 0) {
      shift += static_cast<long>(r0) + 1;
      continue;
    }

    Complex<T> result = lead + sum;
    double rounding = to_double(abs(lead));
    for (long j = 0; j < shift; ++j) {
      Complex<T> lj = log(z + T(j));
      rounding += to_double(abs(lj));
      result -= lj;
    }
    return {result, trunc + 4.0 * to_double(eps) * rounding};
  }
  throw Error(ErrorKind::precision_failure, "log Gamma: Stirling series failed to converge");
}

Estimate<ComplexValue> complex_log_gamma(const ComplexValue& z, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx.work_bits());
  ComplexValue zz(rounded(z.re), rounded(z.im));
  auto r = log_gamma<Real>(zz);
  ctx.check(r.err, 1.0, "complex_log_gamma");
  return r;
}

template <class T>
Complex<T> e_of(const T& x) {
  using std::cos;
  using std::floor;
  using std::sin;
  T r = x - floor(x);
  if (r == 0) return Complex<T>(T(1), T(0));
  if (r == T(0.5)) return Complex<T>(T(-1), T(0));
  if (r == T(0.25)) return Complex<T>(T(0), T(1));
  if (r == T(0.75)) return Complex<T>(T(0), T(-1));
  T angle = 2 * pi<T>() * r;
  return Complex<T>(T(cos(angle)), T(sin(angle)));
}

ComplexValue e_of(const Real& x, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx.work_bits());
  return e_of<Real>(rounded(x));
}

template <class T>
Estimate<T> zeta_prime_at_2() {
  using std::abs;
  using std::log;
  using std::pow;
  const unsigned bits = bits_of<T>();
  const T eps = eps_of<T>();
  const unsigned n_direct = 10 + bits / 4;

  T direct(0);
  for (unsigned n = n_direct - 1; n >= 2; --n) {
    T tn(n);
    direct += log(tn) / (tn * tn);
  }

  // sum_{n>=N} f(n) with f(x) = log x / x^2:
  //   int_N^inf f + f(N)/2 + sum_k B_2k N^{-2k-1} (log N - H_{2k} + 1)
  const T big_n(n_direct);
  const T log_n = log(big_n);
  T tail = (log_n + 1) / big_n + log_n / (2 * big_n * big_n);
  T harmonic(0);  // H_{2k}
  T npow = 1 / (big_n * big_n * big_n);
  double trunc = -1.0;
  for (unsigned k = 1; k < 4 * bits; ++k) {
    harmonic += T(1) / T(2 * k - 1) + T(1) / T(2 * k);
    T term = bernoulli_b2n<T>(k) * npow * (log_n - harmonic + 1);
    const double mag = to_double(T(abs(term)));
    if (mag <= to_double(eps) * 1e-2) {
      trunc = 2.0 * mag;
      break;
    }
    tail += term;
    npow /= big_n * big_n;
  }
  if (trunc < 0)
    throw Error(ErrorKind::precision_failure, "zeta'(2): tail series did not converge");
  T value = -(direct + tail);
  return {value, trunc + 4.0 * n_direct * to_double(eps)};
}

Estimate<Real> zeta_prime_at_2(const PrecisionContext& ctx) {
  PrecisionScope scope(ctx.work_bits());
  auto r = zeta_prime_at_2<Real>();
  ctx.check(r.err, to_double(r.value), "zeta_prime_at_2");
  return r;
}

template Complex<double> log_sin(const Complex<double>&);
template Complex<long double> log_sin(const Complex<long double>&);
template Complex<Real> log_sin(const Complex<Real>&);
template Estimate<Complex<double>> log_gamma(const Complex<double>&);
template Estimate<Complex<long double>> log_gamma(const Complex<long double>&);
template Estimate<Complex<Real>> log_gamma(const Complex<Real>&);
template Complex<double> e_of(const double&);
template Complex<long double> e_of(const long double&);
template Complex<Real> e_of(const Real&);
template Estimate<double> zeta_prime_at_2<double>();
template Estimate<long double> zeta_prime_at_2<long double>();
template Estimate<Real> zeta_prime_at_2<Real>();

}  // namespace zetalab::mp
