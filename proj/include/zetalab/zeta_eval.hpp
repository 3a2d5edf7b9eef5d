#pragma once

// zeta(s) near the critical line, the chi factor, the Riemann-Siegel theta
// function and the Hardy Z-function.

#include <vector>

#include "zetalab/mp_core.hpp"

namespace zetalab::zeta {

using mp::Complex;
using mp::ComplexValue;
using mp::Estimate;
using mp::PrecisionContext;
using mp::Real;

struct ZConfig {
  /// Euler-Maclaurin strictly below, Riemann-Siegel at and above.
  double crossover = 1000.0;
  /// Riemann-Siegel correction terms C_0 .. C_{rs_terms} (at most 4).
  int rs_terms = 4;
};

/// Euler-Maclaurin summation at the precision of T; functional equation
/// for Re s < -1.
template <class T>
Estimate<Complex<T>> zeta_em(const Complex<T>& s);

Estimate<ComplexValue> zeta_em(const ComplexValue& s, const PrecisionContext& ctx);

/// chi(s) = 2^s pi^{s-1} sin(pi s / 2) Gamma(1 - s), assembled in log space.
template <class T>
Estimate<Complex<T>> chi(const Complex<T>& s);

Estimate<ComplexValue> chi(const ComplexValue& s, const PrecisionContext& ctx);

/// theta(t) = Im log Gamma(1/4 + it/2) - (t/2) log pi. Asymptotic series,
/// with a direct log-Gamma fallback where the series cannot reach precision.
template <class T>
Estimate<T> rs_theta(const T& t);

Estimate<Real> rs_theta(const Real& t, const PrecisionContext& ctx);

/// Z(t) from Re(e^{i theta} zeta(1/2 + it)) with Euler-Maclaurin zeta.
template <class T>
Estimate<T> hardy_z_em(const T& t);

/// Z(t) from the Riemann-Siegel main sum plus C_0..C_terms corrections.
template <class T>
Estimate<T> hardy_z_rs(const T& t, int terms);

/// Bound on the Riemann-Siegel remainder after C_0..C_terms.
double rs_remainder_bound(double t, int terms);

/// Coefficients of C_k(p) as a polynomial in (p - 1/2), lowest degree first.
template <class T>
const std::vector<T>& rs_correction_coefficients(int k);

template <class T>
Estimate<T> hardy_z(const T& t, const ZConfig& cfg = {});

/// Multiprecision Z(t). Riemann-Siegel is used above the crossover only when
/// its remainder bound meets the context tolerance.
Estimate<Real> hardy_Z(const Real& t, const PrecisionContext& ctx, const ZConfig& cfg = {});

struct ZetaSample {
  double t = 0.0;
  ComplexValue value;  // zeta(1/2 + it)
  double abs_err = 0.0;
};

ZetaSample sample_critical_line(double t, const PrecisionContext& ctx);

}  // namespace zetalab::zeta
