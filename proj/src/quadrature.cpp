#include "zetalab/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "zetalab/error.hpp"

namespace zetalab::quad {
namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
void legendre(int n, LD x, LD& p, LD& dp) {
  LD p0 = 1, p1 = x;
  if (n == 0) {
    p = 1;
    dp = 0;
    return;
  }
  for (int k = 2; k <= n; ++k) {
    LD p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1);
}

GaussRule compute_rule(int n) {
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const LD pi = 3.141592653589793238462643383279502884L;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    LD x = std::cos(pi * (i + 0.75L) / (n + 0.5L));
    LD p = 0, dp = 0;
    for (int it = 0; it < 100; ++it) {
      legendre(n, x, p, dp);
      const LD dx = p / dp;
      x -= dx;
      if (std::fabs(dx) <= 1e-21L) break;
    }
    legendre(n, x, p, dp);
    const LD w = 2 / ((1 - x * x) * dp * dp);
    r.nodes[n - 1 - i] = x;
    r.nodes[i] = -x;
    r.weights[i] = r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0;
  return r;
}

// P_0..P_{m} at x.
std::vector<LD> legendre_all(int m, LD x) {
  std::vector<LD> p(m + 1);
  p[0] = 1;
  if (m >= 1) p[1] = x;
  for (int k = 2; k <= m; ++k) p[k] = ((2 * k - 1) * x * p[k - 1] - (k - 1) * p[k - 2]) / k;
  return p;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1 || n > 512) throw Error(ErrorKind::invalid_argument, "Gauss-Legendre order out of range");
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
  return it->second;
}

LegendreExpansion::LegendreExpansion(int n) : n_(n), projection_(n, std::vector<LD>(n)) {
  const GaussRule& g = gauss_legendre(n);
  for (int i = 0; i < n; ++i) {
    const auto p = legendre_all(n - 1, g.nodes[i]);
    for (int j = 0; j < n; ++j) projection_[j][i] = (2 * j + 1) / LD(2) * g.weights[i] * p[j];
  }
}

std::vector<LD> LegendreExpansion::coefficients(const LD* f) const {
  std::vector<LD> c(n_, 0);
  for (int j = 0; j < n_; ++j) {
    LD acc = 0;
    for (int i = 0; i < n_; ++i) acc += projection_[j][i] * f[i];
    c[j] = acc;
  }
  return c;
}

LD LegendreExpansion::antiderivative(const std::vector<LD>& c, LD u) {
  const int n = static_cast<int>(c.size());
  const auto p = legendre_all(n, u);
  // int_{-1}^u P_j = (P_{j+1}(u) - P_{j-1}(u)) / (2j + 1) for j >= 1
  LD acc = c[0] * (u + 1);
  for (int j = 1; j < n; ++j) acc += c[j] * (p[j + 1] - p[j - 1]) / (2 * j + 1);
  return acc;
}

std::vector<std::vector<LD>> LegendreExpansion::integration_matrix(const std::vector<LD>& points) const {
  std::vector<std::vector<LD>> a(points.size(), std::vector<LD>(n_, 0));
  for (std::size_t m = 0; m < points.size(); ++m) {
    const auto p = legendre_all(n_, points[m]);
    std::vector<LD> basis(n_);
    basis[0] = points[m] + 1;
    for (int j = 1; j < n_; ++j) basis[j] = (p[j + 1] - p[j - 1]) / (2 * j + 1);
    for (int i = 0; i < n_; ++i) {
      LD acc = 0;
      for (int j = 0; j < n_; ++j) acc += basis[j] * projection_[j][i];
      a[m][i] = acc;
    }
  }
  return a;
}

}  // namespace zetalab::quad
