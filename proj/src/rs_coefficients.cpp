// Riemann-Siegel correction polynomials C_0..C_4 as Taylor polynomials in
// h = p - 1/2, derived from the series of
//   Psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p)
// around p = 1/2, where numerator and denominator become
//   cos(2 pi h^2 - 5 pi / 8)   and   -cos(2 pi h).

#include <map>
#include <mutex>
#include <vector>

#include "zetalab/zeta_eval.hpp"

namespace zetalab::zeta {
namespace {

constexpr int kPsiTerms = 200;

struct Term {
  int derivative;
  long numerator;
  long denominator;
  int pi_power;
};

// C_k = sum numerator / (denominator * pi^pi_power) * Psi^(derivative)
const std::vector<Term>& correction_terms(int k) {
  static const std::vector<std::vector<Term>> table = {
      {{0, 1, 1, 0}},
      {{3, -1, 96, 2}},
      {{2, 1, 64, 2}, {6, 1, 18432, 4}},
      {{1, -1, 64, 2}, {5, -1, 3840, 4}, {9, -1, 5308416, 6}},
      {{0, 1, 128, 2}, {4, 19, 24576, 4}, {8, 11, 5898240, 6}, {12, 1, 2038431744, 8}},
  };
  return table.at(static_cast<std::size_t>(k));
}

// Taylor coefficients of Psi(1/2 + h), computed at the current precision.
std::vector<Real> psi_series() {
  const Real pi = mp::pi<Real>();
  const Real two_pi = 2 * pi;
  const Real c58 = cos(5 * pi / 8);
  const Real s58 = sin(5 * pi / 8);

  std::vector<Real> num(kPsiTerms, Real(0)), den(kPsiTerms, Real(0));
  // cos(a - b) with a = 2 pi h^2, b = 5 pi / 8:  cos a cos b + sin a sin b
  Real a_pow(1);  // (2 pi)^m / m!
  for (int m = 0; 2 * m < kPsiTerms; ++m) {
    if (m > 0) a_pow = a_pow * two_pi / m;
    const int deg = 2 * m;
    const int sign = (m / 2) % 2 == 0 ? 1 : -1;
    if (m % 2 == 0)
      num[deg] += sign * c58 * a_pow;
    else
      num[deg] += sign * s58 * a_pow;
  }
  // -cos(2 pi h)
  Real b_pow(1);
  for (int m = 0; m < kPsiTerms; ++m) {
    if (m > 0) b_pow = b_pow * two_pi / m;
    if (m % 2 == 0) den[m] = ((m / 2) % 2 == 0 ? -1 : 1) * b_pow;
  }

  std::vector<Real> q(kPsiTerms, Real(0));
  for (int n = 0; n < kPsiTerms; ++n) {
    Real acc = num[n];
    for (int i = 1; i <= n; ++i)
      if (den[i] != 0) acc -= den[i] * q[n - i];
    q[n] = acc / den[0];
  }
  return q;
}

std::vector<std::vector<Real>> corrections(unsigned bits) {
  // The division sees the zeros of cos(2 pi h) at |h| = 1/4 through rounding,
  // which amplifies errors by 4^n at degree n.
  mp::PrecisionScope scope(bits + 2 * kPsiTerms + 64);
  const std::vector<Real> q = psi_series();
  const Real pi = mp::pi<Real>();
  const Real cutoff = ldexp(Real(1), -static_cast<int>(bits) - 16);

  std::vector<std::vector<Real>> out(5);
  for (int k = 0; k <= 4; ++k) {
    const int max_deriv = 12;
    std::vector<Real> poly(kPsiTerms - max_deriv, Real(0));
    for (const Term& term : correction_terms(k)) {
      Real factor = Real(term.numerator) / Real(term.denominator) / pow(pi, term.pi_power);
      for (std::size_t n = 0; n < poly.size(); ++n) {
        Real falling(1);
        for (int j = 1; j <= term.derivative; ++j) falling *= Real(static_cast<long>(n) + j);
        poly[n] += factor * falling * q[n + term.derivative];
      }
    }
    // |h| <= 1/2: drop the tail once coefficients scaled by 2^-n are negligible.
    std::size_t keep = poly.size();
    while (keep > 1 && abs(ldexp(poly[keep - 1], -static_cast<int>(keep - 1))) < cutoff) --keep;
    poly.resize(keep);
    out[k] = std::move(poly);
  }
  return out;
}

}  // namespace

template <class T>
const std::vector<T>& rs_correction_coefficients(int k) {
  if (k < 0 || k > 4) throw Error(ErrorKind::invalid_argument, "Riemann-Siegel term index must be 0..4");
  if constexpr (mp::is_real_v<T>) {
    static std::mutex mutex;
    static std::map<unsigned, std::vector<std::vector<Real>>> cache;
    const unsigned bits = mp::bits_of<Real>();
    std::lock_guard lock(mutex);
    auto it = cache.find(bits);
    if (it == cache.end()) {
      auto polys = corrections(bits);
      mp::PrecisionScope scope(bits + 32);
      for (auto& poly : polys)
        for (auto& c : poly) c = mp::rounded(c);
      it = cache.emplace(bits, std::move(polys)).first;
    }
    return it->second[static_cast<std::size_t>(k)];
  } else {
    static const std::vector<std::vector<T>> table = [] {
      auto hi = corrections(128);
      std::vector<std::vector<T>> t(5);
      for (int j = 0; j <= 4; ++j)
        for (const Real& c : hi[j]) t[j].push_back(static_cast<T>(c));
      return t;
    }();
    return table[static_cast<std::size_t>(k)];
  }
}

template const std::vector<double>& rs_correction_coefficients<double>(int);
template const std::vector<long double>& rs_correction_coefficients<long double>(int);
template const std::vector<Real>& rs_correction_coefficients<Real>(int);

}  // namespace zetalab::zeta
