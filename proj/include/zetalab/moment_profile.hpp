#pragma once

// One adaptive sweep of Z(t) over an interval. Each accepted panel ("leaf")
// keeps Z at the nodes of an n-point and a 2n-point Gauss-Legendre rule, so
// that every power of |zeta|, any smooth weight, and cumulative integrals at
// arbitrary points are available from the same evaluations.

#include <complex>
#include <functional>
#include <map>
#include <vector>

#include "zetalab/mp_core.hpp"
#include "zetalab/quadrature.hpp"
#include "zetalab/zeta_eval.hpp"

namespace zetalab::moment {

using LD = long double;
using mp::Estimate;
using mp::PrecisionContext;

struct ZPoint {
  LD value = 0;
  double err = 0;
};

/// Pointwise integrand source: Z(t) (or a test substitute) with its error.
using ZSource = std::function<ZPoint(LD t)>;

struct QuadConfig {
  int nodes = 16;               // low-order rule; the comparison rule has 2 * nodes
  double panel_fraction = 0.5;  // of the mean zero gap 2 pi / log(t / 2 pi)
  double max_panel = 1.0;
  int max_depth = 24;
  double rel_tol = 1e-13;       // per-panel acceptance of |I_n - I_2n|
  double segment = 10.0;        // fixed cut points; also the checkpoint step
  double window = 8.0;          // W: Gaussian truncation at |t| <= W delta
  double laplace_cmaj = 10.0;   // C_maj in the Laplace tail majorant
  double laplace_phi = 1.4;     // largest accepted |arg s|
  unsigned threads = 1;
  zeta::ZConfig zeta;
};

/// Z(|t|) at the context precision. Z is even, so negative t is allowed.
ZSource default_source(const PrecisionContext& ctx, const QuadConfig& cfg);

/// Constant integrand, for normalisation checks.
ZSource constant_source(LD value);

struct IntegralResult {
  double value = 0.0;
  double err_bound = 0.0;
  long panels = 0;
  double a = 0.0;
  double b = 0.0;
};

struct ComplexIntegralResult {
  std::complex<double> value;
  double err_bound = 0.0;
  long panels = 0;
  double a = 0.0;
  double b = 0.0;
};

struct Leaf {
  LD a = 0;
  LD b = 0;
  std::vector<LD> lo;  // Z at the n-point nodes
  std::vector<LD> hi;  // Z at the 2n-point nodes
  double zerr = 0.0;   // largest pointwise error of Z on the leaf
};

/// Panel width at t for the configuration.
double panel_width(double t, const QuadConfig& cfg);

class MomentProfile {
 public:
  MomentProfile() = default;

  /// Sweeps [a, b]. A panel is split until |I_n - I_2n| passes for every
  /// power in `powers` (integrand Z^power).
  static MomentProfile build(double a, double b, const std::vector<int>& powers,
                             const ZSource& source, const QuadConfig& cfg);

  /// Concatenates sweeps of adjacent intervals (this one first).
  void append(const MomentProfile& next);

  double begin() const { return begin_; }
  double end() const { return end_; }
  const std::vector<Leaf>& leaves() const { return leaves_; }
  int nodes() const { return nodes_; }

  /// int_a^b Z^power over [a, b] within the profile.
  IntegralResult integral(int power, double a, double b) const;

  /// int_begin^x Z^power.
  Estimate<LD> cumulative(int power, double x) const;

  /// int_a^b w(t) Z^power dt.
  IntegralResult weighted(int power, const std::function<LD(LD)>& w, double a, double b) const;
  ComplexIntegralResult weighted_complex(int power, const std::function<std::complex<LD>(LD)>& w,
                                         double a, double b) const;

  /// int_a^b g(t, F(t)) dt with F(t) = int_begin^t Z^power. g also returns
  /// |dg/dF| for error propagation.
  IntegralResult functional(int power, double a, double b,
                            const std::function<LD(LD t, LD f, LD& dg)>& g) const;

  /// F(t) = int_begin^t Z^power at every 2n-point node, in order.
  std::vector<std::pair<LD, Estimate<LD>>> node_cumulatives(int power) const;

 private:
  struct Piece;
  std::vector<Piece> pieces(double a, double b) const;
  const std::vector<LD>& prefix(int power) const;
  const std::vector<double>& prefix_err(int power) const;
  void ensure_prefix(int power) const;

  double begin_ = 0.0;
  double end_ = 0.0;
  int nodes_ = 16;
  std::vector<Leaf> leaves_;
  mutable std::map<int, std::vector<LD>> prefix_;
  mutable std::map<int, std::vector<double>> prefix_err_;
};

/// Leaf integral of Z^power: value from the 2n rule, error from the rule
/// difference plus propagated pointwise error.
Estimate<LD> leaf_integral(const Leaf& leaf, int power);

}  // namespace zetalab::moment
