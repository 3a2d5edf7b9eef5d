#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "zetalab/checkpoint.hpp"
#include "zetalab/moment_engine.hpp"

using namespace zetalab;
using namespace zetalab::moment;

namespace {

const double kGamma = 0.57721566490153286061;
const double kLog2Pi = 1.8378770664093454836;

PrecisionContext integral_ctx() { return PrecisionContext(64, 1e-10, 1e-9); }

// One shared sweep of [0, 1100] for the fourth and second moments.
const MomentProfile& profile() {
  static const MomentProfile p = [] {
    QuadConfig cfg;
    return MomentProfile::build(0, 1100, {2, 4}, default_source(integral_ctx(), cfg), cfg);
  }();
  return p;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("moment polynomials") {
  PrecisionContext ctx(64);
  auto P1 = p1(ctx);
  CHECK(P1.k == 1);
  CHECK(P1.all_exact());
  CHECK(std::fabs(P1.coeffs[1] - (2 * kGamma - 1 - kLog2Pi)) < 1e-16);
  CHECK(std::fabs(main_term(P1, M_E) - M_E * (2 * kGamma - kLog2Pi)) < 1e-15);
  CHECK(main_term(P1, 0) == 0.0);

  auto P4 = p4_exact(ctx);
  CHECK(std::fabs(P4.coeffs[0] - 1 / (2 * M_PI * M_PI)) < 1e-18);
  CHECK(std::fabs(P4.coeffs[1] - 0.123795758078899815608803543441) < 1e-17);
  CHECK(P4.provenance_summary() == "exact,exact,unset,unset,unset");
  CHECK(std::fabs(main_term(P4, M_E) - M_E * (P4.coeffs[0] + P4.coeffs[1])) < 1e-15);

  // Leading behaviour: the ratio to T log^4 T falls toward a_4.
  double prev = 1e9;
  for (double T : {1e3, 1e4, 1e5}) {
    const double r = main_term(P4, T) / (T * std::pow(std::log(T), 4));
    CHECK(r > P4.coeffs[0]);
    CHECK(r < prev);
    prev = r;
  }
  CHECK_THROWS_AS(main_term(P4, -1), Error);
}

TEST_CASE("closed-form integral of the main term") {
  PrecisionContext ctx(64);
  auto P4 = p4_with(ctx, -0.7, 2.1, 0.3, Provenance::user_supplied);
  CHECK(P4.provenance_summary() == "exact,exact,user-supplied,user-supplied,user-supplied");
  for (double T : {0.5, 3.0, 250.0}) {
    auto f = [&](double t) { return main_term(P4, t); };
    const double q = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, T, 25, 1e-14);
    CHECK(std::fabs(main_term_integral(P4, T) - q) < 1e-11 * std::max(1.0, std::fabs(q)));
  }
  CHECK(main_term_integral(P4, 0) == 0.0);
}

TEST_CASE("integrate_moment arguments") {
  PrecisionContext ctx(64);
  QuadConfig cfg;
  auto r = integrate_moment(1, 0, 0, ctx, cfg);
  CHECK(r.value == 0.0);
  CHECK(r.err_bound == 0.0);
  CHECK_THROWS_AS(integrate_moment(3, 0, 1, ctx, cfg), Error);
  CHECK_THROWS_AS(integrate_moment(1, -1, 1, ctx, cfg), Error);
  CHECK_THROWS_AS(integrate_moment(1, 2, 1, ctx, cfg), Error);
}

TEST_CASE("error terms") {
  auto ctx = integral_ctx();
  QuadConfig cfg;
  auto e0 = error_term(p1(ctx), 0.0, ctx, cfg);
  CHECK(e0.value == 0.0);
  auto cal = p4_with(ctx, 0, 0, 0, Provenance::calibrated);
  cal.k = 1;
  cal.coeffs = {1, 0};
  cal.provenance = {Provenance::exact, Provenance::calibrated};
  CHECK_THROWS_AS(error_term(profile(), cal, 100), Error);

  auto e = error_term(profile(), p1(ctx), 1000);
  CHECK(e.provenance == "exact,exact");
  CHECK(std::fabs(e.value - (e.integral - e.main)) < 1e-9);
  CHECK(e.err_bound < 1e-9);
}

// Gauss-Legendre on half-unit panels with mpmath.siegelz at 25 digits.
TEST_CASE("integrals against an independent oracle") {
  auto ctx = integral_ctx();
  QuadConfig cfg;
  auto near = [](double got, double err, double want) {
    return std::fabs(got - want) <= err + 1e-9 * std::fabs(want);
  };
  auto e1 = error_term(profile(), p1(ctx), 1000);
  CHECK(near(e1.integral, e1.err_bound, 5212.507763337782461189));
  CHECK(near(e1.value, e1.err_bound, 5212.507763337782461189 - e1.main));

  const double I4[] = {13287.14153539276258514, 42393.1529936112018144, 127162.8503014341881638};
  const double T4[] = {250, 500, 1000};
  for (int i = 0; i < 3; ++i) {
    auto r = profile().integral(4, 0, T4[i]);
    CHECK(near(r.value, r.err_bound, I4[i]));
  }

  auto P4 = p4_exact(ctx);
  auto w = integral_of_E2(profile(), P4, 1000);
  CHECK(near(w.value, w.err_bound, 49183879.15604766246025 - main_term_integral(P4, 1000)));

  auto l1 = laplace_moment(profile(), 1, {0.4, 0.0}, ctx, cfg);
  CHECK(near(l1.integral.value.real(), l1.integral.err_bound + l1.tail_bound, 1.960856369278661359145));
  auto l2 = laplace_moment(profile(), 2, {0.1, 0.0}, ctx, cfg);
  CHECK(near(l2.integral.value.real(), l2.integral.err_bound + l2.tail_bound, 40.87589024440928835821));

  auto s = smoothed_fourth(200, 20, ctx, cfg);
  CHECK(near(s.value, s.err_bound, 78.99697923833724110257));
}

TEST_CASE("smoothed fourth moment") {
  auto ctx = integral_ctx();
  QuadConfig cfg;
  auto one = smoothed_fourth(200, 20, ctx, cfg, constant_source(1));
  CHECK(std::fabs(one.value - std::erf(cfg.window)) < 1e-12);
  CHECK_THROWS_AS(smoothed_fourth(200, 0, ctx, cfg), Error);
  CHECK_THROWS_AS(smoothed_fourth(200, 200 / std::log(200.0) * 1.01, ctx, cfg), Error);
  try {
    smoothed_fourth(200, 100, ctx, cfg);
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::invalid_delta);
  }

  QuadConfig narrow = cfg;
  narrow.window = 6;
  auto w8 = smoothed_fourth(200, 5, ctx, cfg);
  auto w6 = smoothed_fourth(200, 5, ctx, narrow);
  CHECK(std::fabs(w8.value - w6.value) < w6.err_bound);
}

TEST_CASE("Laplace moments") {
  auto ctx = integral_ctx();
  QuadConfig cfg;
  auto half = laplace_moment(1, {2.0, 0.0}, ctx, cfg, constant_source(1));
  CHECK(std::fabs(half.integral.value.real() - 0.5) < 1e-12);
  CHECK(half.cmaj == cfg.laplace_cmaj);
  CHECK(half.tail_bound <= ctx.abs_tol());

  CHECK_THROWS_AS(laplace_moment(1, {0.0, 1.0}, ctx, cfg), Error);
  CHECK_THROWS_AS(laplace_moment(1, {0.1, 2.0}, ctx, cfg), Error);  // |arg s| > phi
  CHECK_THROWS_AS(laplace_moment(3, {0.1, 0.0}, ctx, cfg), Error);

  auto a = laplace_moment(profile(), 1, {0.3, 0.2}, ctx, cfg);
  auto b = laplace_moment(profile(), 1, {0.3, -0.2}, ctx, cfg);
  CHECK(std::fabs(a.integral.value.real() - b.integral.value.real()) < 1e-12);
  CHECK(std::fabs(a.integral.value.imag() + b.integral.value.imag()) < 1e-12);

  const double X = laplace_cutoff(2, 0.1, 1e-10, 10);
  CHECK(10 * std::exp(-0.1 * X) * std::pow(std::log(X), 5) <= 1e-10);
  CHECK(10 * std::exp(-0.1 * X * 0.999) * std::pow(std::log(X * 0.999), 5) > 1e-10);
}

TEST_CASE("Kober and Atkinson main terms") {
  PrecisionContext ctx(64);
  // sigma is rounded to double, which moves the numerator by ~1e-16
  CHECK(std::fabs(kober_main(std::exp(kGamma) / (4 * M_PI), ctx)) < 1e-15);
  CHECK(std::fabs(kober_main(0.1, ctx) - 1.74679242001765555697) < 1e-15);
  CHECK_THROWS_AS(kober_main(0, ctx), Error);

  auto c = atkinson_constants(ctx);
  CHECK(std::fabs(c.A - 0.0506605918211688857) < 1e-18);
  // mpmath with zeta'(2) at 30 digits
  CHECK(std::fabs(c.B - 0.209469776594130734925815201603) < 1e-15);
  auto P4 = p4_exact(ctx);
  CHECK(std::fabs(c.B - (P4.coeffs[1] + 4 * P4.coeffs[0] * (1 - kGamma))) < 1e-16);
  auto printed = atkinson_constants(ctx, BVariant::printed);
  CHECK(printed.B == -c.B);
  c.C = 0.5;
  c.D = -1;
  c.E = 2;
  const double l = std::log(1 / 0.01);
  CHECK(std::fabs(atkinson_expansion(0.01, c) -
                  (c.A * std::pow(l, 4) + c.B * std::pow(l, 3) + 0.5 * l * l - l + 2) / 0.01) < 1e-10);
}

TEST_CASE("integral and mean square of E_2") {
  auto ctx = integral_ctx();
  auto P4 = p4_with(ctx, -0.6, 1.5, -2.0, Provenance::user_supplied);
  CHECK(integral_of_E2(profile(), P4, 0).value == 0.0);
  CHECK(mean_square_E2(profile(), P4, 0).value == 0.0);

  // Single pass against leaf-by-leaf integration of E_2 inside the scan.
  auto direct = integral_of_E2(profile(), P4, 1000);
  auto scan = scan_integral_E2(profile(), P4, 999, 1000, 0, 0);
  REQUIRE(scan.above.size() + scan.below.size() > 0);
  const auto& last = scan.above.empty() ? scan.below.back() : scan.above.back();
  // The scan samples at leaf ends; extend to 1000 with the integrand E_2.
  auto tail = profile().functional(4, last.t, 1000, [&](LD t, LD F, LD& dg) {
    dg = 1;
    return F - static_cast<LD>(main_term(P4, static_cast<double>(t)));
  });
  CHECK(std::fabs(direct.value - (last.value + tail.value)) < 1e-6 * std::fabs(direct.value) + direct.err_bound);

  // Finer panels as the oracle for the mean square.
  QuadConfig fine;
  fine.panel_fraction = 0.25;
  auto prof2 = MomentProfile::build(0, 300, {4}, default_source(ctx, fine), fine);
  auto m1 = mean_square_E2(profile(), P4, 300);
  auto m2 = mean_square_E2(prof2, P4, 300);
  CHECK(std::fabs(m1.value - m2.value) <= m1.err_bound + m2.err_bound);
  CHECK(m1.value > 0);
}

TEST_CASE("sign change scans") {
  auto flat = sign_change_scan(ScanTarget::custom, [](double t) { return 1 + t * t; }, 0, 10, 0.1, 0, 0.5);
  CHECK(flat.crossings.empty());
  CHECK(flat.below.empty());
  CHECK(flat.above.size() == static_cast<std::size_t>(flat.points_scanned));

  auto wave = sign_change_scan(ScanTarget::custom, [](double t) { return std::sin(t); }, 1, 10, 0.37, 0, 0.5);
  REQUIRE(wave.crossings.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(std::fabs(wave.crossings[i] - (i + 1) * M_PI) < 1e-8);
  CHECK(wave.crossing_in(3, 3.2));
  CHECK(!wave.crossing_in(3.2, 6.2));

  auto ctx = integral_ctx();
  auto P1 = p1(ctx);
  auto r = scan_error_term(profile(), P1, 500, 1000, 0.25, 0.5);
  CHECK(r.target == ScanTarget::E1);
  CHECK(!r.above.empty());
  CHECK(!r.below.empty());
  // Reported exceedances hold when re-evaluated.
  for (std::size_t i = 0; i < r.above.size(); i += 97) {
    auto e = error_term(profile(), P1, r.above[i].t);
    CHECK(e.value > 0.5 * std::pow(r.above[i].t, 0.25));
  }
  for (std::size_t i = 0; i < r.below.size(); i += 97) {
    auto e = error_term(profile(), P1, r.below[i].t);
    CHECK(e.value < -0.5 * std::pow(r.below[i].t, 0.25));
  }
  // Refined crossings are zeros of E_1.
  REQUIRE(!r.crossings.empty());
  for (std::size_t i = 0; i < r.crossings.size(); i += 11) {
    const double t = r.crossings[i];
    const double slope = 30;  // generous bound on |E_1'| = |Z^2 - log(t/2 pi)|
    CHECK(std::fabs(error_term(profile(), P1, t).value) < slope * 1e-9 * t + 1e-9);
  }
}

TEST_CASE("P_4 calibration") {
  PrecisionContext ctx(64);
  auto truth = p4_with(ctx, -0.55, 1.25, -3.5, Provenance::user_supplied);
  auto grid = log_grid(500, 5000, 40);
  std::vector<double> F;
  for (double T : grid) F.push_back(main_term(truth, T));
  auto cal = calibrate_P4(grid, F, ctx);
  CHECK(std::fabs(cal.poly.coeffs[2] + 0.55) < 1e-8);
  CHECK(std::fabs(cal.poly.coeffs[3] - 1.25) < 1e-8);
  CHECK(std::fabs(cal.poly.coeffs[4] + 3.5) < 1e-8);
  CHECK(cal.poly.provenance_summary() == "exact,exact,calibrated,calibrated,calibrated");
  CHECK(cal.fit.max_half_drift < 1e-6);

  auto kind_of = [&](const std::vector<double>& g, const std::vector<double>& v) {
    try {
      calibrate_P4(g, v, ctx);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::io_error;
  };
  CHECK(kind_of({}, {}) == ErrorKind::ill_conditioned_fit);
  std::vector<double> narrow = log_grid(500, 4000, 40), Fn;
  for (double T : narrow) Fn.push_back(main_term(truth, T));
  CHECK(kind_of(narrow, Fn) == ErrorKind::ill_conditioned_fit);
  std::vector<double> few(grid.begin(), grid.begin() + 19), Ff(F.begin(), F.begin() + 19);
  CHECK(kind_of(few, Ff) == ErrorKind::ill_conditioned_fit);
}

TEST_CASE("Atkinson calibration recovers synthetic coefficients") {
  PrecisionContext ctx(64);
  auto c = atkinson_constants(ctx);
  c.C = -0.3;
  c.D = 1.1;
  c.E = -0.7;
  auto s = log_grid(0.005, 0.05, 12);
  std::vector<double> L;
  for (double x : s) L.push_back(atkinson_expansion(x, c));
  auto fit = calibrate_atkinson(s, L, atkinson_constants(ctx));
  CHECK(std::fabs(fit.coeffs.C + 0.3) < 1e-9);
  CHECK(std::fabs(fit.coeffs.D - 1.1) < 1e-9);
  CHECK(std::fabs(fit.coeffs.E + 0.7) < 1e-9);
  CHECK(fit.coeffs.lower == Provenance::calibrated);
}

TEST_CASE("checkpoint resume is bit-identical") {
  namespace fs = std::filesystem;
  auto ctx = integral_ctx();
  QuadConfig cfg;
  const fs::path dir = fs::temp_directory_path() / "zetalab_ckpt_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string one = (dir / "one.ckpt").string(), two = (dir / "two.ckpt").string();

  auto full = run_checkpointed(2, 120, ctx, cfg, one);
  CHECK(full.grid.size() == 12);
  CHECK(full.grid.back().T == 120.0);
  run_checkpointed(2, 45, ctx, cfg, two);  // rounds up to 50
  CHECK(read_checkpoint(two, 2, config_digest(2, ctx, cfg)).grid.back().T == 50.0);
  auto resumed = run_checkpointed(2, 120, ctx, cfg, two);
  CHECK(slurp(one) == slurp(two));
  CHECK(resumed.grid.size() == 12);

  auto prof = MomentProfile::build(0, 120, {4}, default_source(ctx, cfg), cfg);
  CHECK(std::fabs(full.grid.back().value - prof.integral(4, 0, 120).value) < 1e-9);
  for (std::size_t i = 1; i < full.grid.size(); ++i) CHECK(full.grid[i].value >= full.grid[i - 1].value);

  QuadConfig other = cfg;
  other.nodes = 12;
  CHECK(config_digest(2, ctx, other) != config_digest(2, ctx, cfg));
  CHECK_THROWS_AS(run_checkpointed(2, 130, ctx, other, one), Error);

  const std::string bad = (dir / "bad.ckpt").string();
  std::ofstream(bad) << "not a checkpoint\n";
  CHECK_THROWS_AS(read_checkpoint(bad, 2, "x"), Error);
  std::ofstream(bad) << kCheckpointHeader << "\n2,10,5,0,d\n2,20,4,0,d\n";
  try {
    read_checkpoint(bad, 2, "d");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::validation_error);
  }
  auto rec = parse_record("1, 10, 0.1, 1e-12, abc");
  CHECK(rec.k == 1);
  CHECK(rec.value == 0.1);
  CHECK(format_record(rec) == "1,10,0.10000000000000001,9.9999999999999998e-13,abc");
  fs::remove_all(dir);
}
