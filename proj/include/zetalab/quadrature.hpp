#pragma once

// Gauss-Legendre rules on [-1, 1] and the Legendre-expansion antiderivative
// used to integrate a panel's interpolant up to an interior point.

#include <vector>

namespace zetalab::quad {

using LD = long double;

struct GaussRule {
  std::vector<LD> nodes;    // ascending
  std::vector<LD> weights;
};

/// n-point rule, computed once per n by Newton iteration on P_n.
const GaussRule& gauss_legendre(int n);

/// Maps node values of a function on [-1, 1] (at the n-point Gauss nodes) to
/// its Legendre coefficients; the expansion is exact for polynomials of
/// degree < n.
class LegendreExpansion {
 public:
  explicit LegendreExpansion(int n);

  int size() const { return n_; }

  /// Legendre coefficients c_0..c_{n-1} of the interpolant of f.
  std::vector<LD> coefficients(const LD* f) const;

  /// int_{-1}^{u} of the interpolant, given its coefficients.
  static LD antiderivative(const std::vector<LD>& c, LD u);

  /// Matrix A with (A f)_m = int_{-1}^{u_m} interpolant(f), for fixed points u.
  std::vector<std::vector<LD>> integration_matrix(const std::vector<LD>& points) const;

 private:
  int n_;
  std::vector<std::vector<LD>> projection_;  // projection_[j][i] = (2j+1)/2 w_i P_j(x_i)
};

}  // namespace zetalab::quad
