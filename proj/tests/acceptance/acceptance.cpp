// Acceptance runner. `acceptance N` runs criterion N (1-9), prints one line per
// sub-check and a final PASS/FAIL line. Exit 0 on pass, 1 on failure, 77 when
// the criterion is skipped.
#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "zetalab/arith_kernels.hpp"
#include "zetalab/moment_engine.hpp"
#include "zetalab/spectral.hpp"
#include "zetalab/zeta_eval.hpp"

using namespace zetalab;
using moment::LD;
using mp::ComplexValue;
using mp::Real;
using moment::MomentProfile;
using moment::QuadConfig;

namespace {

constexpr int kSkip = 77;

// Recorded fixture constants (see README, "Acceptance").
constexpr double kE1Exponent = 0.3171;
constexpr double kE1Bound = 7.7;     // observed max 7.589 over the nodes in [10, 5000]
constexpr double kE2Bound = 66.0;    // observed max 64.82 over the nodes in [500, 5000]
constexpr double kQBound = 0.25;     // observed |q| <= 0.153 on 24 points of [0.005, 0.05]

class Report {
 public:
  Report(int n, std::string title) : n_(n), title_(std::move(title)) {}

  bool check(const std::string& name, bool ok, const std::string& detail = {}) {
    std::printf("  %-4s %s%s%s\n", ok ? "ok" : "FAIL", name.c_str(), detail.empty() ? "" : ": ", detail.c_str());
    ok_ = ok_ && ok;
    return ok;
  }
  void note(const std::string& line) { std::printf("  %s\n", line.c_str()); }

  int finish() const {
    std::printf("%s criterion %d: %s\n", ok_ ? "PASS" : "FAIL", n_, title_.c_str());
    return ok_ ? 0 : 1;
  }

 private:
  int n_;
  std::string title_;
  bool ok_ = true;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

mp::PrecisionContext integral_ctx() { return mp::PrecisionContext(64, 1e-10, 1e-9); }

MomentProfile sweep(double b, const std::vector<int>& powers) {
  QuadConfig cfg;
  const auto t0 = std::chrono::steady_clock::now();
  auto p = MomentProfile::build(0, b, powers, moment::default_source(integral_ctx(), cfg), cfg);
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("  (profile of [0, %g]: %zu panels, %.1f s)\n", b, p.leaves().size(), s);
  return p;
}

struct NodeMax {
  double ratio = 0.0;
  double at = 0.0;
};

// max |F(t) - main(t)| / t^e over the quadrature nodes in [a, b].
NodeMax node_max(const MomentProfile& prof, const moment::MomentPolynomial& poly, double a, double b, double e) {
  NodeMax m;
  for (const auto& [t, F] : prof.node_cumulatives(2 * poly.k)) {
    const double x = static_cast<double>(t);
    if (x < a || x > b) continue;
    const double r = std::fabs(static_cast<double>(F.value) - moment::main_term(poly, x)) / std::pow(x, e);
    if (r > m.ratio) m = {r, x};
  }
  return m;
}

ComplexValue cv(double re, double im) { return ComplexValue(Real(re), Real(im)); }

std::complex<double> cd(const ComplexValue& z) { return {mp::to_double(z.re), mp::to_double(z.im)}; }

int functional_equation() {
  Report r(1, "functional-equation suite");
  const mp::PrecisionContext ctx(64);
  double worst = 0;
  for (double t : {1.0, 10.0, 100.0, 1000.0}) {
    const double d = std::fabs(std::abs(cd(zeta::chi(cv(0.5, t), ctx).value)) - 1);
    worst = std::max(worst, d);
  }
  r.check("|chi(1/2+it)| = 1 at t = 1, 10, 100, 1000", worst <= 1e-12, fmt("max deviation %.2e", worst));

  worst = 0;
  int points = 0;
  for (double sigma : {-1.0, -0.25, 0.3, 0.8, 1.6})
    for (double t : {-40.0, -15.0, -3.0, -0.5, 0.5, 2.0, 7.0, 20.0, 60.0, 150.0}) {
      const auto a = cd(zeta::chi(cv(sigma, t), ctx).value);
      const auto b = cd(zeta::chi(cv(1 - sigma, -t), ctx).value);
      worst = std::max(worst, std::abs(a * b - 1.0));
      ++points;
    }
  r.check("chi(s) chi(1-s) = 1 on a " + std::to_string(points) + "-point grid", points == 50 && worst <= 1e-12,
          fmt("max deviation %.2e", worst));

  const double z = std::abs(cd(zeta::zeta_em(cv(0.5, 14.134725), ctx).value));
  r.check("|zeta(1/2 + 14.134725i)| < 1e-5", z < 1e-5, fmt("%.3e", z));
  return r.finish();
}

int cross_method() {
  Report r(2, "Riemann-Siegel vs Euler-Maclaurin");
  std::mt19937_64 rng(20241016);
  std::uniform_real_distribution<double> u(10.0, 500.0);
  int bad = 0;
  double worst = 0;
  for (int i = 0; i < 50; ++i) {
    const LD t = u(rng);
    const auto em = zeta::hardy_z_em<LD>(t);
    const auto rs = zeta::hardy_z_rs<LD>(t, 4);
    const double diff = std::fabs(static_cast<double>(em.value - rs.value));
    const double allowed = em.err + rs.err;
    worst = std::max(worst, diff / allowed);
    if (diff > allowed) ++bad;
  }
  r.check("50 random t in [10, 500] agree within combined estimates", bad == 0,
          fmt("%.0f disagreements, max |diff|/bound %.3f", bad, worst));
  return r.finish();
}

int second_moment() {
  Report r(3, "second-moment suite");
  const auto ctx = integral_ctx();
  const auto P1 = moment::p1(ctx);
  r.check("P1 coefficients exact", P1.all_exact(), P1.provenance_summary());

  const auto prof = sweep(5000, {2});
  const auto m = node_max(prof, P1, 10, 5000, kE1Exponent);
  r.check("max |E1(T)| / T^0.3171 on [10, 5000] <= " + fmt("%g", kE1Bound), m.ratio <= kE1Bound,
          fmt("%.4f at T = %.2f", m.ratio, m.at));

  const auto scan = moment::scan_error_term(prof, P1, 256, 4096 + 5 * 64, kE1Exponent, kE1Bound);
  for (double T = 256; T <= 4096; T *= 2) {
    const double b = T + 5 * std::sqrt(T);
    r.check("sign change of E1 in " + fmt("[%g, %g]", T, b), scan.crossing_in(T, b));
  }
  r.note(fmt("%g crossings found in [256, %g]", static_cast<double>(scan.crossings.size()), 4096 + 320.0));
  return r.finish();
}

int fourth_moment() {
  Report r(4, "fourth-moment suite");
  const auto ctx = integral_ctx();
  const auto prof = sweep(5000, {4});
  const double a4 = 1 / (2 * M_PI * M_PI);

  std::vector<double> dev;
  for (double T : {1000.0, 2000.0, 5000.0}) {
    const auto F = prof.integral(4, 0, T);
    const double ratio = F.value / (T * std::pow(std::log(T), 4));
    dev.push_back(std::fabs(ratio / a4 - 1));
    r.note(fmt("T = %g: int |zeta|^4 / (T log^4 T) = %.6f", T, ratio) + fmt(" (%.2f%% from a4)", 100 * dev.back()));
  }
  r.check("within 15% of 1/(2 pi^2) at T = 5000", dev[2] <= 0.15, fmt("%.2f%%", 100 * dev[2]));
  r.check("relative deviation decreasing over T = 1000, 2000, 5000", dev[0] > dev[1] && dev[1] > dev[2],
          fmt("%.4f, ", dev[0]) + fmt("%.4f, %.4f", dev[1], dev[2]));

  const auto cal = moment::calibrate_P4(prof, moment::log_grid(500, 5000, 40), ctx);
  r.note("calibrated P4 on 40 log-spaced points in [500, 5000]: a2 = " + fmt("%.6g", cal.poly.coeffs[2]) +
         fmt(", a1 = %.6g, a0 = %.6g", cal.poly.coeffs[3], cal.poly.coeffs[4]));
  r.note(fmt("fit condition %.3g, max half drift %.3g", cal.fit.condition, cal.fit.max_half_drift));

  const auto m = node_max(prof, cal.poly, 500, 5000, 2.0 / 3);
  r.check("max |E2(T)| / T^(2/3) on [500, 5000] <= " + fmt("%g", kE2Bound), m.ratio <= kE2Bound,
          fmt("%.3f at T = %.2f", m.ratio, m.at));

  const auto scan = moment::scan_error_term(prof, cal.poly, 500, 5000, 0.5, 0.05);
  r.check("E2 > 0.05 T^(1/2) somewhere in [500, 5000]", !scan.above.empty(),
          fmt("%g nodes", static_cast<double>(scan.above.size())));
  r.check("E2 < -0.05 T^(1/2) somewhere in [500, 5000]", !scan.below.empty(),
          fmt("%g nodes", static_cast<double>(scan.below.size())));
  return r.finish();
}

int laplace_suite() {
  Report r(5, "Laplace suite");
  const auto ctx = integral_ctx();
  QuadConfig cfg;
  const double X = moment::laplace_cutoff(2, 0.005, ctx.abs_tol(), cfg.laplace_cmaj);
  const auto prof = sweep(std::ceil(X), {2, 4});

  std::vector<double> d;
  for (double sigma : {0.2, 0.1, 0.05, 0.02}) {
    const auto L = moment::laplace_moment(prof, 1, {2 * sigma, 0.0}, ctx, cfg);
    d.push_back(L.integral.value.real() - moment::kober_main(sigma, ctx));
    r.note(fmt("sigma = %g: L1(2 sigma) - kober_main = %.10f", sigma, d.back()));
  }
  for (std::size_t i = 2; i < d.size(); ++i) {
    const double prev = std::fabs(d[i - 1] - d[i - 2]), cur = std::fabs(d[i] - d[i - 1]);
    r.check("difference step " + std::to_string(i) + " shrinks by >= 2x", 2 * cur <= prev,
            fmt("%.6f -> %.6f", prev, cur) + fmt(" (factor %.3f)", prev / cur));
  }

  const auto sig = moment::log_grid(0.005, 0.05, 24);
  std::vector<double> L2;
  for (double s : sig) L2.push_back(moment::laplace_moment(prof, 2, {s, 0.0}, ctx, cfg).integral.value.real());
  const auto base = moment::atkinson_constants(ctx);
  const auto printed = moment::atkinson_constants(ctx, moment::BVariant::printed);
  double qmax = 0, qlo = 1e300, qhi = -1e300, pmax = 0;
  for (std::size_t i = 0; i < sig.size(); ++i) {
    const double l = std::log(1 / sig[i]);
    const double q = (sig[i] * L2[i] - base.A * std::pow(l, 4) - base.B * std::pow(l, 3)) / (l * l);
    const double qp = (sig[i] * L2[i] - printed.A * std::pow(l, 4) - printed.B * std::pow(l, 3)) / (l * l);
    qmax = std::max(qmax, std::fabs(q));
    qlo = std::min(qlo, q);
    qhi = std::max(qhi, q);
    pmax = std::max(pmax, std::fabs(qp));
  }
  r.check("remainder / log^2(1/sigma) bounded by " + fmt("%g", kQBound) + " on [0.005, 0.05]", qmax <= kQBound,
          fmt("range [%.4f, %.4f]", qlo, qhi));
  r.note(fmt("with the printed sign of B the same ratio reaches %.4f", pmax));

  const auto cal = moment::calibrate_atkinson(sig, L2, base);
  const double C = cal.coeffs.C, C1 = cal.fit.first_half[0], C2 = cal.fit.second_half[0];
  r.note(fmt("calibrated C = %.6f, D = %.6f", C, cal.coeffs.D) + fmt(", E = %.6f", cal.coeffs.E));
  r.note(fmt("fit condition %.3g, max half drift %.3g", cal.fit.condition, cal.fit.max_half_drift));
  const double unit = std::pow(10.0, std::floor(std::log10(std::fabs(C))) - 1);
  r.check("C stable to 2 significant digits across grid halves", std::fabs(C1 - C2) <= unit / 2,
          fmt("%.6f vs %.6f", C1, C2));
  return r.finish();
}

int arithmetic() {
  Report r(6, "arithmetic-kernel suite");
  const auto table = arith::divisor_sieve(10000);
  int bad = 0;
  for (std::uint64_t n = 1; n <= 10000; ++n)
    if (table.d(n) != arith::divisor_count_bruteforce(n)) ++bad;
  r.check("divisor sieve = trial division for n <= 10^4", bad == 0);

  std::mt19937_64 rng(7);
  std::vector<std::uint64_t> xs = {1, 2, 3, 10, 99, 1000, 4096, 9999, 10000};
  for (int i = 0; i < 20; ++i) xs.push_back(std::uniform_int_distribution<std::uint64_t>(1, 10000)(rng));
  bad = 0;
  int cases = 0;
  for (std::uint64_t f = 1; f <= 50; ++f)
    for (auto x : xs) {
      if (f > x) continue;  // outside the domain 1 <= f <= x
      ++cases;
      if (arith::additive_divisor(x, f) != arith::additive_divisor_bruteforce(x, f)) ++bad;
      if (arith::additive_divisor(x, f, 64) != arith::additive_divisor_bruteforce(x, f)) ++bad;
    }
  r.check("additive_divisor = brute force for x <= 10^4, f <= 50", bad == 0,
          std::to_string(cases) + " (x, f) pairs, two segment sizes");

  bad = 0;
  for (long m = 1; m <= 10; ++m)
    for (long n = 1; n <= 10; ++n)
      for (long c = 1; c <= 100; ++c) {
        const auto fast = arith::kloosterman(m, n, c), slow = arith::kloosterman_bruteforce(m, n, c);
        if (fast.value != slow.value ||
            arith::kloosterman_histogram(m, n, c) != arith::kloosterman_histogram_bruteforce(m, n, c))
          ++bad;
      }
  r.check("Kloosterman fast path = definition for m, n <= 10, c <= 100 (bitwise)", bad == 0);

  const auto weil = arith::weil_audit(500, 10);
  r.check("Weil bound for c <= 500, m, n <= 10", weil.empty(), std::to_string(weil.size()) + " violations");

  const auto t0 = std::chrono::steady_clock::now();
  const auto big = arith::additive_divisor(100000000, 1);
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.check("additive_divisor(10^8, 1) under 5 minutes", s < 300, std::to_string(big) + fmt(" in %.1f s", s));
  return r.finish();
}

int spectral_suite() {
  using namespace spectral;
  Report r(7, "spectral property suite");
  const mp::PrecisionContext ctx(64);
  double worst = 0;
  for (double k : {9.5337, 12.173, 25.0})
    for (int eps : {1, -1})
      worst = std::max(worst, std::abs(cd(hecke_fe_factor(cv(0.5, 0), Real(k), eps, ctx).value) - double(eps)));
  r.check("fe factor at 1/2 equals eps", worst <= 1e-14, fmt("max deviation %.2e", worst));

  worst = 0;
  for (double sigma : {-0.5, 0.1, 0.3, 0.9, 1.5})
    for (double t : {-7.0, -1.0, 0.5, 2.0, 11.0})
      for (double k : {9.5337, 25.0})
        for (int eps : {1, -1}) {
          const auto a = cd(hecke_fe_factor(cv(sigma, t), Real(k), eps, ctx).value);
          const auto b = cd(hecke_fe_factor(cv(1 - sigma, -t), Real(k), eps, ctx).value);
          worst = std::max(worst, std::abs(a * b - 1.0));
        }
  r.check("factor involution F(s) F(1-s) = 1", worst <= 1e-12, fmt("max deviation %.2e", worst));

  double wmod = 0, wconj = 0;
  for (double y : {0.5, 3.0, 5.0, 9.5337, 40.0, 120.0}) {
    const long double Y = y;
    const long double m =
        M_PIl / 2 * std::cosh(M_PIl * Y) / std::sqrt(Y * std::sinh(2 * M_PIl * Y));
    const auto Rp = cd(r_factor(Real(y), ctx).value), Rm = cd(r_factor(Real(-y), ctx).value);
    wmod = std::max(wmod, std::fabs(std::abs(Rp) / static_cast<double>(m) - 1));
    wconj = std::max(wconj, std::abs(Rm - std::conj(Rp)) / std::abs(Rp));
  }
  r.check("|R(y)| modulus identity", wmod <= 1e-12, fmt("max relative deviation %.2e", wmod));
  r.check("R(-y) = conj R(y)", wconj <= 1e-12, fmt("max relative deviation %.2e", wconj));

  std::mt19937_64 rng(11);
  std::map<long, double> tp;
  const auto sieve = arith::divisor_sieve(10000);
  for (long p = 2; p <= 10000; ++p)
    if (sieve.d(p) == 2) {
      const double gate = std::sqrt(double(p)) + 1 / std::sqrt(double(p));
      tp[p] = std::uniform_real_distribution<double>(-gate, gate)(rng);
    }
  const auto t = hecke_extend(tp, 10000);
  int bad = 0;
  for (long m = 1; m <= 10000; ++m)
    for (long n = 1; m * n <= 10000; ++n) {
      long g = std::gcd(m, n);
      double rhs = 0;
      for (long d = 1; d <= g; ++d)
        if (g % d == 0) rhs += t[m * n / (d * d)];
      if (std::fabs(t[m] * t[n] - rhs) > 1e-9 * std::max(1.0, std::fabs(rhs))) ++bad;
    }
  r.check("Hecke relation t(m) t(n) = sum t(mn/d^2) for mn <= 10^4", bad == 0,
          std::to_string(bad) + " mismatches");

  SpectralDataset a, b;
  const double kc[][2] = {{9.5337, 0.3}, {12.173, 1.7}, {13.779, -0.4}, {14.358, 2.2}, {16.138, 0.9}};
  for (int j = 0; j < 5; ++j) {
    MaassFormRecord rec;
    rec.j = j + 1;
    rec.kappa = kc[j][0];
    rec.c = kc[j][1];
    (j < 3 ? a : b).records.push_back(rec);
  }
  const auto ab = a.concatenated(b);
  bool exact = true;
  for (double T : {100.0, 777.0}) {
    auto lin = [&](const SpectralSum& sa, const SpectralSum& sb, const SpectralSum& sab) {
      std::vector<double> joined = sa.terms;
      joined.insert(joined.end(), sb.terms.begin(), sb.terms.end());
      exact = exact && sab.terms == joined && sab.value == exact_sum(joined);
    };
    lin(motohashi_spectral_sum(T, 10, a, 0), motohashi_spectral_sum(T, 10, b, 0), motohashi_spectral_sum(T, 10, ab, 0));
    lin(laplace_E2_spectral(T, a, ExponentVariant::oscillatory, ctx),
        laplace_E2_spectral(T, b, ExponentVariant::oscillatory, ctx),
        laplace_E2_spectral(T, ab, ExponentVariant::oscillatory, ctx));
    lin(integral_E2_spectral(T, a, ctx), integral_E2_spectral(T, b, ctx), integral_E2_spectral(T, ab, ctx));
  }
  r.check("spectral sums linear over concatenated datasets (exact)", exact);
  return r.finish();
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

int spectral_comparison(const std::string& dataset) {
  if (dataset.empty() || !std::filesystem::exists(dataset)) {
    std::printf("  no starter spectral dataset at '%s'\n", dataset.c_str());
    std::printf("SKIP criterion 8: spectral comparison (dataset absent)\n");
    return kSkip;
  }
  Report r(8, "spectral comparison");
  const auto ctx = integral_ctx();
  const auto ds = spectral::load_spectral_dataset(dataset);
  r.note("dataset " + dataset + ", " + std::to_string(ds.records.size()) + " forms, checksum " + ds.checksum);
  const auto prof = sweep(2000, {4});
  const auto cal = moment::calibrate_P4(prof, moment::log_grid(200, 2000, 30), ctx);
  const auto T = moment::log_grid(200, 2000, 40);

  std::vector<double> direct, x, y, lead, full;
  for (double t : T) {
    direct.push_back(moment::integral_of_E2(prof, cal.poly, t).value);
    x.push_back(std::log(t));
    y.push_back(direct.back() / std::pow(t, 1.5));
    const auto s = spectral::integral_E2_spectral(t, ds, ctx);
    full.push_back(s.value);
    lead.push_back(s.terms.empty() ? 0.0 : s.terms[0]);
  }
  const auto trend = moment::fit_polynomial(x, y, 2, 10);
  std::vector<double> resid;
  r.note("T,direct,trend,oscillation,spectral,leading_term");
  for (std::size_t i = 0; i < T.size(); ++i) {
    double p = 0;
    for (double c : trend.coeffs) p = p * x[i] + c;
    const double tr = p * std::pow(T[i], 1.5);
    resid.push_back(direct[i] - tr);
    char line[200];
    std::snprintf(line, sizeof line, "%.4f,%.6e,%.6e,%.6e,%.6e,%.6e", T[i], direct[i], tr, resid.back(), full[i],
                  lead[i]);
    r.note(line);
  }
  const double rho = pearson(resid, lead);
  r.check("correlation of oscillation with leading spectral term >= 0.5", rho >= 0.5, fmt("%.4f", rho));
  return r.finish();
}

std::string exploratory_tables() {
  const auto ctx = integral_ctx();
  const auto prof = sweep(2000, {4, 12});
  const auto cal = moment::calibrate_P4(prof, moment::log_grid(200, 2000, 30), ctx);
  std::ostringstream out;
  char line[200];
  out << "table,T,value,err_bound\n";
  for (double T : {250.0, 500.0, 1000.0, 2000.0}) {
    const auto m = moment::mean_square_E2(prof, cal.poly, T);
    std::snprintf(line, sizeof line, "mean_square_E2_over_T2,%g,%.10e,%.3e\n", T, m.value / (T * T), m.err_bound / (T * T));
    out << line;
  }
  for (double T : {250.0, 500.0, 1000.0, 2000.0}) {
    const auto m = prof.integral(12, 0, T);
    const double scale = T * T * std::pow(std::log(T), 17);
    std::snprintf(line, sizeof line, "twelfth_moment_ratio,%g,%.10e,%.3e\n", T, m.value / scale, m.err_bound / scale);
    out << line;
  }
  const auto scan = moment::scan_error_term(prof, cal.poly, 200, 2000, 0.5, 0);
  out << "n,u_n,gap,log(gap)/log(u_n)\n";
  for (std::size_t i = 0; i + 1 < scan.crossings.size(); ++i) {
    const double u = scan.crossings[i], gap = scan.crossings[i + 1] - u;
    std::snprintf(line, sizeof line, "%zu,%.9f,%.9f,%.6f\n", i + 1, u, gap, std::log(gap) / std::log(u));
    out << line;
  }
  return out.str();
}

int exploratory() {
  Report r(9, "exploratory tables");
  const std::string first = exploratory_tables();
  const std::string second = exploratory_tables();
  std::istringstream in(first);
  std::string line;
  while (std::getline(in, line)) r.note(line);
  r.check("tables generated", !first.empty());
  r.check("byte-identical across two independent runs", first == second,
          std::to_string(first.size()) + " bytes");
  return r.finish();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zetalab acceptance runner"};
  int n = 0;
  std::string dataset = ZETALAB_STARTER_DATASET;
  app.add_option("criterion", n, "criterion number")->required()->check(CLI::Range(1, 9));
  app.add_option("--spectral", dataset, "spectral dataset for criterion 8");
  CLI11_PARSE(app, argc, argv);
  try {
    switch (n) {
      case 1: return functional_equation();
      case 2: return cross_method();
      case 3: return second_moment();
      case 4: return fourth_moment();
      case 5: return laplace_suite();
      case 6: return arithmetic();
      case 7: return spectral_suite();
      case 8: return spectral_comparison(dataset);
      default: return exploratory();
    }
  } catch (const std::exception& e) {
    std::printf("  error: %s\nFAIL criterion %d\n", e.what(), n);
    return 1;
  }
}
