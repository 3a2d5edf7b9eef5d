#pragma once

// Maass-form spectral data and the spectral sums that model the fourth
// moment: the smoothed-moment sum, the Laplace and integrated E_2 sums, the
// L_2(s) expansion and per-term diagnostics.
//
// Data file (one record per line, `#` lines are provenance):
//   j,kappa,c,eps[,alpha,H_half]
// with c = alpha_j H_j(1/2)^3 and kappa strictly increasing.
// Hecke eigenvalue file:
//   j,p,t_p

#include <complex>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zetalab/moment_engine.hpp"
#include "zetalab/mp_core.hpp"

namespace zetalab::spectral {

using mp::ComplexValue;
using mp::Estimate;
using mp::PrecisionContext;
using mp::Real;

struct MaassFormRecord {
  int j = 0;
  double kappa = 0.0;
  double c = 0.0;  // alpha_j H_j(1/2)^3
  int eps = 1;
  std::optional<double> alpha;
  std::optional<double> H_half;
  std::map<long, double> hecke_t_p;
};

struct SpectralDataset {
  std::vector<MaassFormRecord> records;
  std::string source;    // joined provenance lines
  std::string checksum;  // FNV-1a of the file bytes, hex

  /// Records of this dataset followed by those of `other`.
  SpectralDataset concatenated(const SpectralDataset& other) const;
};

/// Throws validation-error naming the violated invariant.
void validate(const SpectralDataset& ds);

SpectralDataset parse_spectral_dataset(std::istream& in, const std::string& name);
SpectralDataset load_spectral_dataset(const std::string& path);

/// Attaches t_j(p) from a `j,p,t_p` file. Every p must be prime and pass
/// |t_p| <= p^{1/2} + p^{-1/2}.
void load_hecke_eigenvalues(const std::string& path, SpectralDataset& ds);
void parse_hecke_eigenvalues(std::istream& in, const std::string& name, SpectralDataset& ds);

/// t(n) for 0 <= n <= N (t(0) unused, set to 0). Throws missing-prime.
std::vector<double> hecke_extend(const std::map<long, double>& t_p, long N);

struct HeckePartial {
  std::complex<double> value;
  double tail_bound = 0.0;  // infinite when Re s <= 2
  long N = 0;
};

/// sum_{n <= N} t(n) n^{-s}. The tail bound uses |t(n)| <= d(n) n^{1/2} <= 2n,
/// which the eigenvalue gate implies.
HeckePartial hecke_series_partial(const MaassFormRecord& rec, std::complex<double> s, long N);

/// pi^{-1} (2 pi)^{2s-1} Gamma(1-s+i kappa) Gamma(1-s-i kappa)
///   (-cos(pi s) + eps cosh(pi kappa)), through log-Gamma.
Estimate<ComplexValue> hecke_fe_factor(const ComplexValue& s, const Real& kappa, int eps,
                                       const PrecisionContext& ctx);

/// sqrt(pi/2) (2^{iy} Gamma(1/4 + iy/2) / Gamma(1/4 - iy/2))^3 Gamma(-2iy) cosh(pi y).
Estimate<ComplexValue> r_factor(const Real& y, const PrecisionContext& ctx);

struct SpectralConfig {
  double weight_majorant = 10.0;   // c_j <= C kappa_j^3
  double admissible_A = 1.0;       // exponent in the lower end of the delta window
};

struct SpectralSum {
  double value = 0.0;
  double truncation_bound = 0.0;
  long terms_used = 0;
  bool delta_admissible = false;
  std::vector<double> terms;  // per record, 0 for skipped records
};

/// pi 2^{-1/2} T^{-1/2} sum c_j kappa_j^{-1/2} sin(kappa_j log(kappa_j / 4eT))
///   exp(-(delta kappa_j / 2T)^2). Records with Gaussian factor below tol are
/// skipped and their magnitude is added to the bound.
SpectralSum motohashi_spectral_sum(double T, double delta, const SpectralDataset& ds, double tol,
                                   const SpectralConfig& cfg = {});

enum class ExponentVariant { oscillatory, printed };
enum class GammaVariant { half_shift, printed };

const char* to_string(ExponentVariant v) noexcept;
const char* to_string(GammaVariant v) noexcept;

/// 2 T^{3/2} Re sum c_j R(kappa_j) Gamma(1/2 - i kappa_j) T^{-i kappa_j}
/// (oscillatory) or T^{-kappa_j} (printed).
SpectralSum laplace_E2_spectral(double T, const SpectralDataset& ds, ExponentVariant variant,
                                const PrecisionContext& ctx);

/// 2 T^{3/2} Re sum c_j T^{i kappa_j} R(kappa_j) / ((1/2 + i kappa_j)(3/2 + i kappa_j)).
SpectralSum integral_E2_spectral(double T, const SpectralDataset& ds, const PrecisionContext& ctx);

struct L2Expansion {
  std::complex<double> main;
  std::complex<double> spectral;
  GammaVariant variant = GammaVariant::half_shift;
  std::vector<std::complex<double>> terms;
};

/// main = (A l^4 + B l^3 + C l^2 + D l + E)/s, l = log(1/s);
/// spectral = s^{-1/2} sum c_j (s^{-i k} R(k) G(k) + s^{i k} R(-k) G(-k)),
/// G(k) = Gamma(1/2 - i k) (half_shift) or Gamma(k) (printed).
/// Needs 0 < |s| <= 1 and |arg s| <= phi.
L2Expansion l2_spectral_expansion(std::complex<double> s, const SpectralDataset& ds,
                                  const moment::AtkinsonCoefficients& main, GammaVariant variant,
                                  const PrecisionContext& ctx, double phi = 1.4);

enum class Kernel { motohashi, laplace_e2, integral_e2, l2_expansion };

/// Throws unknown-kernel.
Kernel parse_kernel(const std::string& name);
const char* to_string(Kernel k) noexcept;

struct KernelParams {
  double T = 100.0;
  double delta = 10.0;
  std::complex<double> s{0.05, 0.0};
  double tol = 0.0;
  ExponentVariant exponent = ExponentVariant::oscillatory;
  GammaVariant gamma = GammaVariant::half_shift;
};

struct TermRow {
  int j = 0;
  double kappa = 0.0;
  double magnitude = 0.0;
  double cumulative = 0.0;   // running sum of the (real) contributions
  double decay_ratio = 0.0;  // magnitude / previous magnitude; NaN for the first row
};

struct TermProfile {
  std::vector<TermRow> rows;
  bool non_decaying = false;  // last three ratios all >= 1
};

TermProfile term_profile(const SpectralDataset& ds, Kernel kernel, const KernelParams& params,
                         const PrecisionContext& ctx);

/// Correctly rounded sum of doubles (exact accumulation).
double exact_sum(const std::vector<double>& v);

}  // namespace zetalab::spectral
