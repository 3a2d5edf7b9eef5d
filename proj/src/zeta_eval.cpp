#include "zetalab/zeta_eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace zetalab::zeta {
namespace {

using mp::to_double;

template <class T>
bool is_positive_integer(const Complex<T>& s) {
  using std::floor;
  return s.im == 0 && s.re >= 1 && floor(s.re) == s.re;
}

template <class T>
double dabs(const Complex<T>& z) {
  return to_double(mp::abs(z));
}

// Euler-Maclaurin with N - 1 direct terms. err < 0 signals that the
// correction series turned before reaching precision (N too small).
template <class T>
Estimate<Complex<T>> em_sum(const Complex<T>& s, long big_n) {
  using std::cos;
  using std::exp;
  using std::log;
  using std::sin;
  const double eps = to_double(mp::eps_of<T>());
  const T sigma = s.re, t = s.im;
  const double abs_t = std::abs(to_double(t));

  Complex<T> sum(T(0), T(0));
  double magnitude = 0.0;  // rounding scale, including the phase t log n
  for (long n = big_n - 1; n >= 1; --n) {
    const T ln = log(T(n));
    const T m = exp(-sigma * ln);
    const T ph = t * ln;
    sum.re += m * cos(ph);
    sum.im -= m * sin(ph);
    magnitude += to_double(m) * (2.0 + abs_t * to_double(ln));
  }

  const T nn(big_n);
  const T log_n = log(nn);
  const Complex<T> n_pow = mp::exp(Complex<T>(T(-sigma * log_n), T(-t * log_n)));
  const Complex<T> head = n_pow * nn / (s - T(1)) + n_pow / T(2);
  sum += head;
  magnitude += dabs(head) * (4.0 + abs_t * to_double(log_n));

  // T_k = B_{2k}/(2k)! s(s+1)...(s+2k-2) N^{-s-2k+1}; p holds T_k / B_{2k}.
  Complex<T> p = s * n_pow / (T(2) * nn);
  const T n2 = nn * nn;
  const double sig = to_double(sigma);
  double prev = std::numeric_limits<double>::infinity();
  const unsigned max_k = 4 * mp::bits_of<T>() + 100;
  for (unsigned k = 1; k < max_k; ++k) {
    const Complex<T> term = p * mp::bernoulli_b2n<T>(k);
    Complex<T> p_next =
        p * (s + T(2 * k - 1)) * (s + T(2 * k)) / (T(static_cast<double>((2 * k + 1) * (2 * k + 2))) * n2);
    const double next_mag = dabs(p_next) * std::abs(to_double(mp::bernoulli_b2n<T>(k + 1)));
    // Backlund: |R_k| <= |(s + 2k + 1) / (sigma + 2k + 1)| |T_{k+1}|
    const double bound = dabs(s + T(2 * k + 1)) / std::abs(sig + 2 * k + 1) * next_mag;
    sum += term;
    magnitude += dabs(term) * 4.0;
    const double scale = std::max(1.0, dabs(sum));
    if (bound <= eps * scale * 0.25) return {sum, bound + 2.0 * eps * magnitude};
    if (next_mag > prev) break;
    prev = next_mag;
    p = std::move(p_next);
  }
  return {sum, -1.0};
}

template <class T>
T horner(const std::vector<T>& c, const T& x) {
  T acc(0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

template <class T>
double poly_magnitude(const std::vector<T>& c, double x) {
  double acc = 0.0, xp = 1.0;
  for (const T& v : c) {
    acc += std::abs(to_double(v)) * xp;
    xp *= std::abs(x);
  }
  return acc;
}

}  // namespace

template <class T>
Estimate<Complex<T>> zeta_em(const Complex<T>& s) {
  if (s.re == 1 && s.im == 0) throw Error(ErrorKind::pole, "zeta has a pole at s = 1");
  if (s.re < -1) {
    auto reflected = zeta_em(Complex<T>(T(1 - s.re), T(-s.im)));
    auto c = chi(s);
    Complex<T> v = c.value * reflected.value;
    return {v, dabs(c.value) * reflected.err + dabs(reflected.value) * c.err};
  }
  const double abs_t = std::abs(to_double(s.im));
  const double abs_s = dabs(s);
  long big_n = static_cast<long>(std::ceil(1.5 * std::max(abs_t, abs_s) / (2.0 * M_PI))) +
               std::max<long>(10, static_cast<long>(mp::bits_of<T>() / 5));
  for (int attempt = 0; attempt < 8; ++attempt, big_n *= 2) {
    auto r = em_sum(s, big_n);
    if (r.err >= 0) return r;
  }
  throw Error(ErrorKind::precision_failure, "zeta_em: Euler-Maclaurin correction series did not converge");
}

template <class T>
Estimate<Complex<T>> chi(const Complex<T>& s) {
  using std::log;
  if (is_positive_integer(s)) throw Error(ErrorKind::pole, "chi(s) is undefined at positive integers");
  const T pi = mp::pi<T>();
  const Complex<T> a = s * mp::ln_two<T>();
  const Complex<T> b = (s - T(1)) * T(log(pi));
  const Complex<T> c = mp::log_sin(s * T(pi / 2));
  const auto lg = mp::log_gamma(Complex<T>(T(1 - s.re), T(-s.im)));
  const Complex<T> total = a + b + c + lg.value;
  const Complex<T> v = mp::exp(total);
  const double eps = to_double(mp::eps_of<T>());
  const double spread = dabs(a) + dabs(b) + dabs(c) + dabs(lg.value) + dabs(s);
  return {v, dabs(v) * (lg.err + 8.0 * eps * spread)};
}

template <class T>
Estimate<T> rs_theta(const T& t) {
  using std::abs;
  using std::log;
  if (!(t > 0)) throw Error(ErrorKind::invalid_argument, "rs_theta requires t > 0");
  const double eps = to_double(mp::eps_of<T>());
  const T pi = mp::pi<T>();
  const T main = t / 2 * log(t / (2 * pi)) - t / 2 - pi / 8;
  const double main_scale = to_double(T(abs(t / 2 * log(t / (2 * pi))))) + to_double(t);

  // sum_k (1 - 2^{1-2k}) |B_2k| / (4k (2k-1) t^{2k-1}). The formal terms keep
  // shrinking well past the true accuracy of the expansion, which is limited
  // by an exponentially small term of size about exp(-pi t).
  const double stokes = std::exp(-M_PI * to_double(t));
  const double target = eps * std::max(1.0, std::abs(to_double(main)));
  if (stokes <= target * 0.25) {
    T series(0);
    T tpow = 1 / t;
    const T t2inv = 1 / (t * t);
    double prev = std::numeric_limits<double>::infinity();
    for (unsigned k = 1; k < 4 * mp::bits_of<T>(); ++k) {
      T b = mp::bernoulli_b2n<T>(k);
      if (b < 0) b = -b;
      const T factor = 1 - ldexp(T(1), 1 - 2 * static_cast<int>(k));
      const T term = factor * b * tpow / T(static_cast<double>(4 * k * (2 * k - 1)));
      const double mag = to_double(term);
      if (mag <= target * 0.25)
        return {T(main + series), 2.0 * mag + stokes + 4.0 * eps * main_scale};
      if (mag > prev) break;
      prev = mag;
      series += term;
      tpow *= t2inv;
    }
  }

  // Too small for the expansion at this precision: direct log Gamma.
  auto lg = mp::log_gamma(Complex<T>(T(0.25), T(t / 2)));
  const T value = lg.value.im - t / 2 * log(pi);
  return {value, lg.err + 4.0 * eps * main_scale};
}

template <class T>
Estimate<T> hardy_z_em(const T& t) {
  using std::abs;
  if (t < 0) throw Error(ErrorKind::invalid_argument, "hardy_Z requires t >= 0");
  const auto z = zeta_em(Complex<T>(T(0.5), t));
  if (t == 0) return {z.value.re, z.err};
  const auto th = rs_theta(t);
  const Complex<T> rot = mp::exp(Complex<T>(T(0), th.value)) * z.value;
  const double eps = to_double(mp::eps_of<T>());
  const double mag = dabs(z.value);
  return {rot.re, z.err + mag * (th.err + 4.0 * eps * (1.0 + std::abs(to_double(th.value))))};
}

double rs_remainder_bound(double t, int terms) {
  static const double d[] = {0.127, 0.053, 0.011, 0.031, 0.017};
  if (terms < 0 || terms > 4) throw Error(ErrorKind::invalid_argument, "rs_terms must be 0..4");
  // Tabulated constants hold for t >= 200. Below that the observed error
  // against Euler-Maclaurin on [2 pi, 200] stays under 1.3x the formula, so a
  // factor 4 is applied.
  const double factor = t >= 200.0 ? 1.0 : 4.0;
  return factor * d[terms] * std::pow(t, -(2.0 * terms + 3.0) / 4.0);
}

template <class T>
Estimate<T> hardy_z_rs(const T& t, int terms) {
  using std::cos;
  using std::floor;
  using std::log;
  using std::pow;
  using std::sqrt;
  if (terms < 0 || terms > 4) throw Error(ErrorKind::invalid_argument, "rs_terms must be 0..4");
  const T two_pi = 2 * mp::pi<T>();
  if (!(t >= two_pi)) throw Error(ErrorKind::invalid_argument, "Riemann-Siegel needs t >= 2 pi");
  const double eps = to_double(mp::eps_of<T>());
  const auto th = rs_theta(t);
  const T tau = t / two_pi;
  const T a = sqrt(tau);
  const long big_n = static_cast<long>(to_double(T(floor(a))));
  const T p = a - T(big_n);

  T main(0);
  double rounding = 0.0;
  const double theta_mag = std::abs(to_double(th.value));
  for (long n = big_n; n >= 1; --n) {
    const T ln = log(T(n));
    const T w = 1 / sqrt(T(n));
    main += w * cos(th.value - t * ln);
    rounding += to_double(w) * (th.err + 2.0 * eps * (theta_mag + to_double(t * ln) + 1.0));
  }
  main *= 2;
  rounding *= 2;

  const T h = p - T(0.5);
  const T tau_m_half = 1 / a;
  T corr(0);
  T tau_pow(1);
  double corr_mag = 0.0;
  for (int k = 0; k <= terms; ++k) {
    const auto& c = rs_correction_coefficients<T>(k);
    corr += horner(c, h) * tau_pow;
    corr_mag += poly_magnitude(c, to_double(h)) * to_double(tau_pow);
    tau_pow *= tau_m_half;
  }
  corr *= pow(tau, T(-0.25));
  if (big_n % 2 == 0) corr = -corr;

  const double err = rs_remainder_bound(to_double(t), terms) + rounding + 8.0 * eps * corr_mag;
  return {T(main + corr), err};
}

template <class T>
Estimate<T> hardy_z(const T& t, const ZConfig& cfg) {
  if (t < 0) throw Error(ErrorKind::invalid_argument, "hardy_Z requires t >= 0");
  if (to_double(t) < cfg.crossover) return hardy_z_em(t);
  return hardy_z_rs(t, cfg.rs_terms);
}

Estimate<ComplexValue> zeta_em(const ComplexValue& s, const PrecisionContext& ctx) {
  mp::PrecisionScope scope(ctx.work_bits());
  auto r = zeta_em(ComplexValue(mp::rounded(s.re), mp::rounded(s.im)));
  ctx.check(r.err, dabs(r.value), "zeta_em");
  return r;
}

Estimate<ComplexValue> chi(const ComplexValue& s, const PrecisionContext& ctx) {
  mp::PrecisionScope scope(ctx.work_bits());
  auto r = chi(ComplexValue(mp::rounded(s.re), mp::rounded(s.im)));
  ctx.check(r.err, dabs(r.value), "chi");
  return r;
}

Estimate<Real> rs_theta(const Real& t, const PrecisionContext& ctx) {
  mp::PrecisionScope scope(ctx.work_bits());
  auto r = rs_theta(mp::rounded(t));
  ctx.check(r.err, to_double(r.value), "rs_theta");
  return r;
}

Estimate<Real> hardy_Z(const Real& t, const PrecisionContext& ctx, const ZConfig& cfg) {
  mp::PrecisionScope scope(ctx.work_bits());
  const Real tt = mp::rounded(t);
  Estimate<Real> r;
  if (to_double(tt) >= cfg.crossover && rs_remainder_bound(to_double(tt), cfg.rs_terms) <= ctx.abs_tol())
    r = hardy_z_rs(tt, cfg.rs_terms);
  else
    r = hardy_z_em(tt);
  ctx.check(r.err, to_double(r.value), "hardy_Z");
  return r;
}

ZetaSample sample_critical_line(double t, const PrecisionContext& ctx) {
  if (t < 0) throw Error(ErrorKind::invalid_argument, "sample_critical_line requires t >= 0");
  mp::PrecisionScope scope(ctx.work_bits());
  auto r = zeta_em(ComplexValue(Real(0.5), Real(t)), ctx);
  return {t, r.value, r.err};
}

#define ZETALAB_INSTANTIATE(T)                                          \
  template Estimate<Complex<T>> zeta_em(const Complex<T>&);             \
  template Estimate<Complex<T>> chi(const Complex<T>&);                 \
  template Estimate<T> rs_theta(const T&);                              \
  template Estimate<T> hardy_z_em(const T&);                            \
  template Estimate<T> hardy_z_rs(const T&, int);                       \
  template Estimate<T> hardy_z(const T&, const ZConfig&);

ZETALAB_INSTANTIATE(double)
ZETALAB_INSTANTIATE(long double)
ZETALAB_INSTANTIATE(Real)
#undef ZETALAB_INSTANTIATE

}  // namespace zetalab::zeta
