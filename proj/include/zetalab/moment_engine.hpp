#pragma once

// Moments of |zeta(1/2+it)|^{2k} and the derived quantities: the error terms
// E_1, E_2 against the explicit polynomials, Gaussian-smoothed and Laplace
// integrals, sign-change scans and the calibration of unknown coefficients.

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "zetalab/moment_profile.hpp"

namespace zetalab::moment {

enum class Provenance { exact, calibrated, user_supplied, unset };

const char* to_string(Provenance p) noexcept;

struct MomentPolynomial {
  int k = 1;
  std::vector<double> coeffs;           // degree k^2 first, constant term last
  std::vector<Provenance> provenance;   // one flag per coefficient

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  bool all_exact() const;
  /// e.g. "exact,exact,calibrated,calibrated,calibrated"
  std::string provenance_summary() const;
};

/// y + 2 gamma - 1 - log 2 pi.
MomentPolynomial p1(const PrecisionContext& ctx);

/// a_4 = 1/(2 pi^2) and a_3 from the constants; a_2..a_0 zero and unset.
MomentPolynomial p4_exact(const PrecisionContext& ctx);

/// a_4, a_3 exact with the given lower coefficients.
MomentPolynomial p4_with(const PrecisionContext& ctx, double a2, double a1, double a0,
                         Provenance lower);

/// T P(log T); zero at T = 0.
double main_term(const MomentPolynomial& poly, double T);

/// int_0^T t P(log t) dt in closed form.
double main_term_integral(const MomentPolynomial& poly, double T);

/// Builds a profile of [a, b] for Z^{2k} and integrates it. k in {1, 2, 6};
/// k = 6 is exploratory and is not held to the context tolerance.
IntegralResult integrate_moment(int k, double a, double b, const PrecisionContext& ctx,
                                const QuadConfig& cfg, const ZSource& source = {});

struct ErrorTermValue {
  double T = 0.0;
  double integral = 0.0;
  double main = 0.0;
  double value = 0.0;
  double err_bound = 0.0;
  std::string provenance;
};

/// E_k(T) from a profile that starts at 0. E_1 requires exact coefficients.
ErrorTermValue error_term(const MomentProfile& prof, const MomentPolynomial& poly, double T);

ErrorTermValue error_term(const MomentPolynomial& poly, double T, const PrecisionContext& ctx,
                          const QuadConfig& cfg);

/// Gaussian-smoothed fourth moment I(T, delta) over |t| <= window * delta.
/// Requires 0 < delta <= T / log T.
IntegralResult smoothed_fourth(double T, double delta, const PrecisionContext& ctx,
                               const QuadConfig& cfg, const ZSource& source = {});

struct LaplaceResult {
  ComplexIntegralResult integral;
  double cutoff = 0.0;      // X
  double tail_bound = 0.0;  // C_maj e^{-Re(s) X} log^{k^2+1} X
  double cmaj = 0.0;
};

/// Smallest X >= e with C_maj e^{-sigma X} log^{k^2+1} X <= tol.
double laplace_cutoff(int k, double sigma, double tol, double cmaj);

/// L_k(s) = int_0^inf Z^{2k} e^{-s x} dx.
LaplaceResult laplace_moment(int k, std::complex<double> s, const PrecisionContext& ctx,
                             const QuadConfig& cfg, const ZSource& source = {});

/// Same, reusing a profile of [0, X'] with X' >= X.
LaplaceResult laplace_moment(const MomentProfile& prof, int k, std::complex<double> s,
                             const PrecisionContext& ctx, const QuadConfig& cfg);

/// (gamma - log(4 pi sigma)) / (2 sin sigma), 0 < sigma < 1.
double kober_main(double sigma, const PrecisionContext& ctx);

/// The B coefficient can be taken as displayed in the literature or with the
/// sign that matches a_4, a_3 (see README).
enum class BVariant { consistent, printed };

struct AtkinsonCoefficients {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double D = 0.0;
  double E = 0.0;
  BVariant variant = BVariant::consistent;
  Provenance lower = Provenance::unset;  // provenance of C, D, E
};

AtkinsonCoefficients atkinson_constants(const PrecisionContext& ctx,
                                        BVariant variant = BVariant::consistent);

/// (A l^4 + B l^3 + C l^2 + D l + E) / sigma with l = log(1/sigma).
double atkinson_expansion(double sigma, const AtkinsonCoefficients& c);

/// int_0^T E_2(t) dt = int_0^T (T - u) Z^4 du - int_0^T t P_4(log t) dt.
IntegralResult integral_of_E2(const MomentProfile& prof, const MomentPolynomial& poly, double T);

/// int_0^T E_2(t)^2 dt, with E_2 re-integrated at every quadrature node.
IntegralResult mean_square_E2(const MomentProfile& prof, const MomentPolynomial& poly, double T);

enum class ScanTarget { E1, E2, integral_E2, custom };

const char* to_string(ScanTarget t) noexcept;

struct ScanPoint {
  double t = 0.0;
  double value = 0.0;
};

struct SignChangeReport {
  ScanTarget target = ScanTarget::custom;
  double T0 = 0.0;
  double T1 = 0.0;
  double exponent = 0.0;
  double A = 0.0;
  long points_scanned = 0;
  std::vector<ScanPoint> above;      // value > A t^exponent
  std::vector<ScanPoint> below;      // value < -A t^exponent
  std::vector<double> crossings;     // refined zeros, ascending

  bool crossing_in(double a, double b) const;
};

/// Scans f on an even grid of [T0, T1] and refines each sign change by
/// bisection to xtol.
SignChangeReport sign_change_scan(ScanTarget tag, const std::function<double(double)>& f, double T0,
                                  double T1, double step, double exponent, double A,
                                  double xtol = 1e-9);

/// E_1 or E_2 (by poly.k), sampled at every quadrature node of the profile.
SignChangeReport scan_error_term(const MomentProfile& prof, const MomentPolynomial& poly, double T0,
                                 double T1, double exponent, double A);

/// int_0^T E_2, sampled at every leaf end of the profile.
SignChangeReport scan_integral_E2(const MomentProfile& prof, const MomentPolynomial& poly, double T0,
                                  double T1, double exponent, double A);

struct FitDiagnostics {
  std::vector<double> coeffs;        // highest degree first
  std::vector<double> first_half;    // refit on the first half of the grid
  std::vector<double> second_half;
  double residual_norm = 0.0;        // of the weighted system
  double condition = 0.0;            // of the column-scaled design matrix
  double max_half_drift = 0.0;       // largest relative coefficient change between halves
};

/// Least squares for y = sum c_j x^j (j = degree..0) with Householder QR.
/// Needs at least `min_points` points and x spread over more than a point.
FitDiagnostics fit_polynomial(const std::vector<double>& x, const std::vector<double>& y,
                              int degree, std::size_t min_points);

struct P4Calibration {
  MomentPolynomial poly;
  FitDiagnostics fit;
};

/// Fits a_2, a_1, a_0 to (F(T) - T(a_4 L^4 + a_3 L^3)) / T with L = log T.
/// Needs >= 20 points spanning at least a decade.
P4Calibration calibrate_P4(const std::vector<double>& grid, const std::vector<double>& fourth_moment,
                           const PrecisionContext& ctx);

/// Same, reading F(T) from a profile starting at 0.
P4Calibration calibrate_P4(const MomentProfile& prof, const std::vector<double>& grid,
                           const PrecisionContext& ctx);

struct AtkinsonCalibration {
  AtkinsonCoefficients coeffs;
  FitDiagnostics fit;
};

/// Fits C, D, E to sigma L_2(sigma) - A l^4 - B l^3.
AtkinsonCalibration calibrate_atkinson(const std::vector<double>& sigma,
                                       const std::vector<double>& laplace_values,
                                       const AtkinsonCoefficients& base);

/// n log-spaced points from a to b inclusive.
std::vector<double> log_grid(double a, double b, int n);

}  // namespace zetalab::moment
