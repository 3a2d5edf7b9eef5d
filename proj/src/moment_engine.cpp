#include "zetalab/moment_engine.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace zetalab::moment {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Consts {
  LD gamma;
  LD log_2pi;
  LD zp2;
  LD pi;
};

Consts consts(const PrecisionContext& ctx) {
  const auto& c = ctx.constants();
  return {static_cast<LD>(c.euler_gamma), static_cast<LD>(c.log_2pi), static_cast<LD>(c.zeta_prime_2),
          static_cast<LD>(c.pi)};
}

LD main_term_ld(const MomentPolynomial& poly, LD T) {
  if (T == 0) return 0;
  const LD L = std::log(T);
  LD acc = 0;
  for (double c : poly.coeffs) acc = acc * L + c;
  return T * acc;
}

void require_profile_from_zero(const MomentProfile& prof) {
  if (prof.begin() != 0.0) throw Error(ErrorKind::invalid_range, "profile must start at 0");
}

void require_moment_poly(const MomentPolynomial& poly) {
  if ((poly.k != 1 && poly.k != 2) || poly.degree() != poly.k * poly.k ||
      poly.provenance.size() != poly.coeffs.size())
    throw Error(ErrorKind::invalid_argument, "malformed moment polynomial");
  if (poly.k == 1 && !poly.all_exact())
    throw Error(ErrorKind::invalid_argument, "E_1 uses exact coefficients only");
}

QuadConfig capped(QuadConfig cfg, double width) {
  if (width > 0) cfg.max_panel = std::min(cfg.max_panel, width);
  return cfg;
}

// Bisection for a sign change of f on [a, b] (f(a) f(b) < 0).
double bisect(const std::function<double(double)>& f, double a, double b, double fa, double xtol) {
  for (int it = 0; it < 200 && b - a > xtol; ++it) {
    const double m = a + (b - a) / 2;
    if (m <= a || m >= b) break;
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return a + (b - a) / 2;
}

void classify(SignChangeReport& r, double t, double v) {
  const double bar = r.A * std::pow(t, r.exponent);
  if (v > bar) r.above.push_back({t, v});
  if (v < -bar) r.below.push_back({t, v});
}

}  // namespace

const char* to_string(Provenance p) noexcept {
  switch (p) {
    case Provenance::exact: return "exact";
    case Provenance::calibrated: return "calibrated";
    case Provenance::user_supplied: return "user-supplied";
    case Provenance::unset: return "unset";
  }
  return "unset";
}

const char* to_string(ScanTarget t) noexcept {
  switch (t) {
    case ScanTarget::E1: return "E1";
    case ScanTarget::E2: return "E2";
    case ScanTarget::integral_E2: return "intE2";
    case ScanTarget::custom: return "custom";
  }
  return "custom";
}

bool MomentPolynomial::all_exact() const {
  return std::all_of(provenance.begin(), provenance.end(), [](Provenance p) { return p == Provenance::exact; });
}

std::string MomentPolynomial::provenance_summary() const {
  std::string s;
  for (std::size_t i = 0; i < provenance.size(); ++i) {
    if (i) s += ',';
    s += to_string(provenance[i]);
  }
  return s;
}

MomentPolynomial p1(const PrecisionContext& ctx) {
  const Consts c = consts(ctx);
  return {1, {1.0, static_cast<double>(2 * c.gamma - 1 - c.log_2pi)}, {Provenance::exact, Provenance::exact}};
}

MomentPolynomial p4_exact(const PrecisionContext& ctx) {
  return p4_with(ctx, 0.0, 0.0, 0.0, Provenance::unset);
}

MomentPolynomial p4_with(const PrecisionContext& ctx, double a2, double a1, double a0, Provenance lower) {
  const Consts c = consts(ctx);
  const LD pi2 = c.pi * c.pi;
  const LD a4 = 1 / (2 * pi2);
  const LD a3 = 2 * (4 * c.gamma - 1 - c.log_2pi - 12 * c.zp2 / pi2) / pi2;
  MomentPolynomial p;
  p.k = 2;
  p.coeffs = {static_cast<double>(a4), static_cast<double>(a3), a2, a1, a0};
  p.provenance = {Provenance::exact, Provenance::exact, lower, lower, lower};
  return p;
}

double main_term(const MomentPolynomial& poly, double T) {
  if (!(T >= 0)) throw Error(ErrorKind::invalid_range, "main term needs T >= 0");
  return static_cast<double>(main_term_ld(poly, T));
}

double main_term_integral(const MomentPolynomial& poly, double T) {
  if (!(T >= 0)) throw Error(ErrorKind::invalid_range, "main term needs T >= 0");
  if (T == 0) return 0.0;
  const LD L = std::log(static_cast<LD>(T));
  const LD half_sq = static_cast<LD>(T) * T / 2;
  // J_j = int_0^T t log^j t dt = (T^2/2) L^j - (j/2) J_{j-1}
  const int d = poly.degree();
  std::vector<LD> J(d + 1);
  J[0] = half_sq;
  LD Lj = 1;
  for (int j = 1; j <= d; ++j) {
    Lj *= L;
    J[j] = half_sq * Lj - static_cast<LD>(j) / 2 * J[j - 1];
  }
  LD acc = 0;
  for (int j = 0; j <= d; ++j) acc += poly.coeffs[d - j] * J[j];
  return static_cast<double>(acc);
}

IntegralResult integrate_moment(int k, double a, double b, const PrecisionContext& ctx,
                                const QuadConfig& cfg, const ZSource& source) {
  if (k != 1 && k != 2 && k != 6) throw Error(ErrorKind::invalid_argument, "k must be 1, 2 or 6");
  if (!(a >= 0) || !(a <= b)) throw Error(ErrorKind::invalid_range, "need 0 <= a <= b");
  if (a == b) return {0.0, 0.0, 0, a, b};
  const ZSource src = source ? source : default_source(ctx, cfg);
  const auto prof = MomentProfile::build(a, b, {2 * k}, src, cfg);
  auto r = prof.integral(2 * k, a, b);
  if (k != 6) ctx.check(r.err_bound, r.value, "moment integral");
  return r;
}

ErrorTermValue error_term(const MomentProfile& prof, const MomentPolynomial& poly, double T) {
  require_moment_poly(poly);
  require_profile_from_zero(prof);
  ErrorTermValue r;
  r.T = T;
  const auto F = prof.cumulative(2 * poly.k, T);
  const LD m = main_term_ld(poly, T);
  r.integral = static_cast<double>(F.value);
  r.main = static_cast<double>(m);
  r.value = static_cast<double>(F.value - m);
  r.err_bound = F.err + 4 * kEps * static_cast<double>(std::fabs(m));
  r.provenance = poly.provenance_summary();
  return r;
}

ErrorTermValue error_term(const MomentPolynomial& poly, double T, const PrecisionContext& ctx,
                          const QuadConfig& cfg) {
  require_moment_poly(poly);
  if (!(T >= 0)) throw Error(ErrorKind::invalid_range, "need T >= 0");
  if (T == 0) return {0.0, 0.0, 0.0, 0.0, 0.0, poly.provenance_summary()};
  const auto prof = MomentProfile::build(0, T, {2 * poly.k}, default_source(ctx, cfg), cfg);
  auto r = error_term(prof, poly, T);
  ctx.check(r.err_bound, r.integral, "error term");
  return r;
}

IntegralResult smoothed_fourth(double T, double delta, const PrecisionContext& ctx, const QuadConfig& cfg,
                               const ZSource& source) {
  if (!(T > 1) || !(delta > 0) || !(delta <= T / std::log(T)))
    throw Error(ErrorKind::invalid_delta, "need T > 1 and 0 < delta <= T / log T");
  const double W = cfg.window;
  if (!(W > 0)) throw Error(ErrorKind::invalid_argument, "window must be positive");
  const QuadConfig qc = capped(cfg, delta);
  const ZSource src = source ? source : default_source(ctx, qc);
  const double a = T - W * delta, b = T + W * delta;
  const auto prof = MomentProfile::build(a, b, {4}, src, qc);
  const LD d = delta, t0 = T;
  const LD norm = 1 / (d * std::sqrt(static_cast<LD>(M_PI)));
  auto r = prof.weighted(4, [=](LD t) { const LD u = (t - t0) / d; return norm * std::exp(-u * u); }, a, b);
  const double tail = std::erfc(W) * cfg.laplace_cmaj * std::pow(std::log(std::fabs(T) + W * delta + M_E), 4.0);
  r.err_bound += tail;
  r.a = a;
  r.b = b;
  ctx.check(r.err_bound, r.value, "smoothed fourth moment");
  return r;
}

double laplace_cutoff(int k, double sigma, double tol, double cmaj) {
  if (!(sigma > 0) || !(tol > 0) || !(cmaj > 0))
    throw Error(ErrorKind::invalid_argument, "cutoff needs positive sigma, tolerance and majorant");
  const double p = k * k + 1;
  auto excess = [&](double X) { return std::log(cmaj) + p * std::log(std::log(X)) - sigma * X - std::log(tol); };
  double X = M_E;
  for (int it = 0; it < 200; ++it) {
    const double next = std::max(M_E, (std::log(cmaj) + p * std::log(std::log(X)) - std::log(tol)) / sigma);
    if (std::fabs(next - X) <= 1e-12 * next) {
      X = next;
      break;
    }
    X = next;
  }
  while (excess(X) > 0) X *= 1.0 + 1e-9;
  return X;
}

LaplaceResult laplace_moment(int k, std::complex<double> s, const PrecisionContext& ctx, const QuadConfig& cfg,
                             const ZSource& source) {
  if (k != 1 && k != 2) throw Error(ErrorKind::invalid_argument, "k must be 1 or 2");
  if (!(s.real() > 0) || std::fabs(std::arg(s)) > cfg.laplace_phi)
    throw Error(ErrorKind::invalid_argument, "need Re s > 0 and |arg s| <= phi");
  const double X = laplace_cutoff(k, s.real(), ctx.abs_tol(), cfg.laplace_cmaj);
  const QuadConfig qc = capped(cfg, s.imag() != 0 ? M_PI / std::fabs(s.imag()) : 0.0);
  const ZSource src = source ? source : default_source(ctx, qc);
  const auto prof = MomentProfile::build(0, X, {2 * k}, src, qc);
  return laplace_moment(prof, k, s, ctx, qc);
}

LaplaceResult laplace_moment(const MomentProfile& prof, int k, std::complex<double> s, const PrecisionContext& ctx,
                             const QuadConfig& cfg) {
  if (k != 1 && k != 2) throw Error(ErrorKind::invalid_argument, "k must be 1 or 2");
  if (!(s.real() > 0) || std::fabs(std::arg(s)) > cfg.laplace_phi)
    throw Error(ErrorKind::invalid_argument, "need Re s > 0 and |arg s| <= phi");
  require_profile_from_zero(prof);
  LaplaceResult out;
  out.cmaj = cfg.laplace_cmaj;
  out.cutoff = laplace_cutoff(k, s.real(), ctx.abs_tol(), cfg.laplace_cmaj);
  if (prof.end() < out.cutoff) throw Error(ErrorKind::invalid_range, "profile ends before the Laplace cutoff");
  const std::complex<LD> sl(s.real(), s.imag());
  out.integral = prof.weighted_complex(2 * k, [sl](LD x) { return std::exp(-sl * x); }, 0, out.cutoff);
  out.tail_bound = cfg.laplace_cmaj * std::exp(-s.real() * out.cutoff) * std::pow(std::log(out.cutoff), k * k + 1);
  out.integral.err_bound += out.tail_bound;
  ctx.check(out.integral.err_bound, std::abs(out.integral.value), "Laplace moment");
  return out;
}

double kober_main(double sigma, const PrecisionContext& ctx) {
  if (!(sigma > 0 && sigma < 1)) throw Error(ErrorKind::invalid_argument, "need 0 < sigma < 1");
  const Consts c = consts(ctx);
  const LD s = sigma;
  return static_cast<double>((c.gamma - std::log(4 * c.pi * s)) / (2 * std::sin(s)));
}

AtkinsonCoefficients atkinson_constants(const PrecisionContext& ctx, BVariant variant) {
  const Consts c = consts(ctx);
  const LD pi2 = c.pi * c.pi;
  // a_3 + 4 a_4 psi(2): the l^3 coefficient of the transformed main term.
  const LD consistent = (6 * c.gamma - 2 * c.log_2pi - 24 * c.zp2 / pi2) / pi2;
  AtkinsonCoefficients a;
  a.A = static_cast<double>(1 / (2 * pi2));
  a.B = static_cast<double>(variant == BVariant::consistent ? consistent : -consistent);
  a.variant = variant;
  return a;
}

double atkinson_expansion(double sigma, const AtkinsonCoefficients& c) {
  if (!(sigma > 0 && sigma < 1)) throw Error(ErrorKind::invalid_argument, "need 0 < sigma < 1");
  const double l = std::log(1 / sigma);
  return ((((c.A * l + c.B) * l + c.C) * l + c.D) * l + c.E) / sigma;
}

IntegralResult integral_of_E2(const MomentProfile& prof, const MomentPolynomial& poly, double T) {
  require_moment_poly(poly);
  if (poly.k != 2) throw Error(ErrorKind::invalid_argument, "integral of E_2 needs the fourth-moment polynomial");
  require_profile_from_zero(prof);
  if (T == 0) return {0.0, 0.0, 0, 0.0, 0.0};
  const LD TT = T;
  auto r = prof.weighted(4, [TT](LD u) { return TT - u; }, 0, T);
  const double closed = main_term_integral(poly, T);
  r.value -= closed;
  r.err_bound += 8 * kEps * (std::fabs(closed) + std::fabs(r.value + closed));
  return r;
}

IntegralResult mean_square_E2(const MomentProfile& prof, const MomentPolynomial& poly, double T) {
  require_moment_poly(poly);
  if (poly.k != 2) throw Error(ErrorKind::invalid_argument, "mean square of E_2 needs the fourth-moment polynomial");
  require_profile_from_zero(prof);
  if (T == 0) return {0.0, 0.0, 0, 0.0, 0.0};
  return prof.functional(4, 0, T, [&poly](LD t, LD F, LD& dg) {
    const LD e = F - main_term_ld(poly, t);
    dg = 2 * std::fabs(e);
    return e * e;
  });
}

bool SignChangeReport::crossing_in(double a, double b) const {
  auto it = std::lower_bound(crossings.begin(), crossings.end(), a);
  return it != crossings.end() && *it <= b;
}

SignChangeReport sign_change_scan(ScanTarget tag, const std::function<double(double)>& f, double T0, double T1,
                                  double step, double exponent, double A, double xtol) {
  if (!(T0 < T1) || !(step > 0)) throw Error(ErrorKind::invalid_range, "need T0 < T1 and step > 0");
  SignChangeReport r{tag, T0, T1, exponent, A, 0, {}, {}, {}};
  const long n = static_cast<long>(std::ceil((T1 - T0) / step));
  double prev_t = T0, prev_v = f(T0);
  classify(r, T0, prev_v);
  if (prev_v == 0.0) r.crossings.push_back(T0);
  r.points_scanned = 1;
  for (long i = 1; i <= n; ++i) {
    const double t = i == n ? T1 : T0 + static_cast<double>(i) * step;
    const double v = f(t);
    classify(r, t, v);
    ++r.points_scanned;
    if (v == 0.0) {
      r.crossings.push_back(t);
    } else if (prev_v != 0.0 && (v < 0) != (prev_v < 0)) {
      r.crossings.push_back(bisect(f, prev_t, t, prev_v, xtol));
    }
    prev_t = t;
    prev_v = v;
  }
  return r;
}

SignChangeReport scan_error_term(const MomentProfile& prof, const MomentPolynomial& poly, double T0, double T1,
                                 double exponent, double A) {
  require_moment_poly(poly);
  require_profile_from_zero(prof);
  if (!(T0 < T1) || T1 > prof.end()) throw Error(ErrorKind::invalid_range, "scan range outside the profile");
  const int power = 2 * poly.k;
  SignChangeReport r{poly.k == 1 ? ScanTarget::E1 : ScanTarget::E2, T0, T1, exponent, A, 0, {}, {}, {}};
  auto E = [&](double x) { return static_cast<double>(prof.cumulative(power, x).value - main_term_ld(poly, x)); };
  bool have_prev = false;
  double prev_t = 0, prev_v = 0;
  for (const auto& [t, F] : prof.node_cumulatives(power)) {
    if (t < T0 || t > T1) continue;
    const double td = static_cast<double>(t);
    const double v = static_cast<double>(F.value - main_term_ld(poly, t));
    classify(r, td, v);
    ++r.points_scanned;
    if (v == 0.0) {
      r.crossings.push_back(td);
    } else if (have_prev && prev_v != 0.0 && (v < 0) != (prev_v < 0)) {
      r.crossings.push_back(bisect(E, prev_t, td, prev_v, 1e-9 * std::max(1.0, td)));
    }
    have_prev = true;
    prev_t = td;
    prev_v = v;
  }
  return r;
}

SignChangeReport scan_integral_E2(const MomentProfile& prof, const MomentPolynomial& poly, double T0, double T1,
                                  double exponent, double A) {
  require_moment_poly(poly);
  if (poly.k != 2) throw Error(ErrorKind::invalid_argument, "integral of E_2 needs the fourth-moment polynomial");
  require_profile_from_zero(prof);
  if (!(T0 < T1) || T1 > prof.end()) throw Error(ErrorKind::invalid_range, "scan range outside the profile");
  SignChangeReport r{ScanTarget::integral_E2, T0, T1, exponent, A, 0, {}, {}, {}};
  const auto& leaves = prof.leaves();
  auto F = [](LD, LD f, LD& dg) { dg = 1; return f; };
  // G[i] = int_0^{a_i} F, F(t) = int_0^t Z^4.
  std::vector<LD> G(leaves.size() + 1, 0);
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    if (leaves[i].a > T1) {
      G.resize(i + 1);
      break;
    }
    G[i + 1] = G[i] + prof.functional(4, static_cast<double>(leaves[i].a), static_cast<double>(leaves[i].b), F).value;
  }
  auto value_at = [&](double x) {
    auto it = std::upper_bound(leaves.begin(), leaves.end(), static_cast<LD>(x),
                               [](LD v, const Leaf& l) { return v < l.b; });
    const std::size_t i = std::min<std::size_t>(it - leaves.begin(), leaves.size() - 1);
    LD g = G[i];
    if (static_cast<LD>(x) > leaves[i].a)
      g += prof.functional(4, static_cast<double>(leaves[i].a), x, F).value;
    return static_cast<double>(g - static_cast<LD>(main_term_integral(poly, x)));
  };
  bool have_prev = false;
  double prev_t = 0, prev_v = 0;
  for (std::size_t i = 1; i < G.size(); ++i) {
    const double t = static_cast<double>(leaves[i - 1].b);
    if (t < T0 || t > T1) continue;
    const double v = static_cast<double>(G[i] - static_cast<LD>(main_term_integral(poly, t)));
    classify(r, t, v);
    ++r.points_scanned;
    if (v == 0.0) {
      r.crossings.push_back(t);
    } else if (have_prev && prev_v != 0.0 && (v < 0) != (prev_v < 0)) {
      r.crossings.push_back(bisect(value_at, prev_t, t, prev_v, 1e-9 * std::max(1.0, t)));
    }
    have_prev = true;
    prev_t = t;
    prev_v = v;
  }
  return r;
}

FitDiagnostics fit_polynomial(const std::vector<double>& x, const std::vector<double>& y, int degree,
                              std::size_t min_points) {
  const std::size_t n = x.size();
  const std::size_t m = static_cast<std::size_t>(degree) + 1;
  if (degree < 0 || y.size() != n) throw Error(ErrorKind::invalid_argument, "fit needs matching x and y");
  if (n < std::max(min_points, m))
    throw Error(ErrorKind::ill_conditioned_fit, "too few points for the fit");
  const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
  if (!(*xmax > *xmin)) throw Error(ErrorKind::ill_conditioned_fit, "fit abscissae do not spread");

  auto solve = [&](std::size_t lo, std::size_t hi, double* cond, double* resid) {
    const Eigen::Index rows = static_cast<Eigen::Index>(hi - lo);
    Eigen::MatrixXd M(rows, m);
    Eigen::VectorXd rhs(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
      double p = 1;
      for (std::size_t j = 0; j < m; ++j) {
        M(i, static_cast<Eigen::Index>(m - 1 - j)) = p;
        p *= x[lo + i];
      }
      rhs(i) = y[lo + i];
    }
    Eigen::VectorXd scale = M.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < M.cols(); ++j) M.col(j) /= scale(j);
    if (cond) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
      const auto& sv = svd.singularValues();
      *cond = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
    }
    Eigen::VectorXd c = M.colPivHouseholderQr().solve(rhs);
    if (resid) *resid = (M * c - rhs).norm();
    std::vector<double> out(m);
    for (std::size_t j = 0; j < m; ++j) out[j] = c(static_cast<Eigen::Index>(j)) / scale(static_cast<Eigen::Index>(j));
    return out;
  };

  FitDiagnostics d;
  d.coeffs = solve(0, n, &d.condition, &d.residual_norm);
  if (!(d.condition < 1e12)) throw Error(ErrorKind::ill_conditioned_fit, "design matrix is ill-conditioned");
  const std::size_t half = n / 2;
  if (half >= m && n - half >= m) {
    d.first_half = solve(0, half, nullptr, nullptr);
    d.second_half = solve(half, n, nullptr, nullptr);
    for (std::size_t j = 0; j < m; ++j) {
      const double ref = std::max(std::fabs(d.coeffs[j]), std::numeric_limits<double>::min());
      d.max_half_drift = std::max(d.max_half_drift, std::fabs(d.first_half[j] - d.second_half[j]) / ref);
    }
  } else {
    d.max_half_drift = std::numeric_limits<double>::quiet_NaN();
  }
  return d;
}

P4Calibration calibrate_P4(const std::vector<double>& grid, const std::vector<double>& fourth_moment,
                           const PrecisionContext& ctx) {
  if (grid.size() != fourth_moment.size()) throw Error(ErrorKind::invalid_argument, "grid and values differ in size");
  if (grid.size() < 20) throw Error(ErrorKind::ill_conditioned_fit, "calibration needs at least 20 points");
  const auto [lo, hi] = std::minmax_element(grid.begin(), grid.end());
  if (!(*lo > 1) || !(*hi >= 10 * *lo))
    throw Error(ErrorKind::ill_conditioned_fit, "calibration grid must lie above 1 and span a decade");
  const MomentPolynomial base = p4_exact(ctx);
  const LD a4 = base.coeffs[0], a3 = base.coeffs[1];
  std::vector<double> L(grid.size()), y(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const LD T = grid[i], l = std::log(T);
    L[i] = static_cast<double>(l);
    y[i] = static_cast<double>((fourth_moment[i] - T * (a4 * l + a3) * l * l * l) / T);
  }
  P4Calibration out;
  out.fit = fit_polynomial(L, y, 2, 20);
  out.poly = p4_with(ctx, out.fit.coeffs[0], out.fit.coeffs[1], out.fit.coeffs[2], Provenance::calibrated);
  return out;
}

P4Calibration calibrate_P4(const MomentProfile& prof, const std::vector<double>& grid, const PrecisionContext& ctx) {
  require_profile_from_zero(prof);
  std::vector<double> F;
  F.reserve(grid.size());
  for (double T : grid) F.push_back(static_cast<double>(prof.cumulative(4, T).value));
  return calibrate_P4(grid, F, ctx);
}

AtkinsonCalibration calibrate_atkinson(const std::vector<double>& sigma, const std::vector<double>& laplace_values,
                                       const AtkinsonCoefficients& base) {
  if (sigma.size() != laplace_values.size()) throw Error(ErrorKind::invalid_argument, "sigma and values differ in size");
  std::vector<double> l(sigma.size()), y(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (!(sigma[i] > 0 && sigma[i] < 1)) throw Error(ErrorKind::invalid_argument, "need 0 < sigma < 1");
    const double li = std::log(1 / sigma[i]);
    l[i] = li;
    y[i] = sigma[i] * laplace_values[i] - (base.A * li + base.B) * li * li * li;
  }
  AtkinsonCalibration out;
  out.fit = fit_polynomial(l, y, 2, 6);
  out.coeffs = base;
  out.coeffs.C = out.fit.coeffs[0];
  out.coeffs.D = out.fit.coeffs[1];
  out.coeffs.E = out.fit.coeffs[2];
  out.coeffs.lower = Provenance::calibrated;
  return out;
}

std::vector<double> log_grid(double a, double b, int n) {
  if (n < 2 || !(a > 0) || !(b > a)) throw Error(ErrorKind::invalid_argument, "log grid needs 0 < a < b and n >= 2");
  std::vector<double> g(n);
  const double la = std::log(a), lb = std::log(b);
  for (int i = 0; i < n; ++i) g[i] = std::exp(la + (lb - la) * i / (n - 1));
  g.front() = a;
  g.back() = b;
  return g;
}

}  // namespace zetalab::moment
