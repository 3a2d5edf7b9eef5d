// zetalab: command-line front end. Tables go to stdout (or --output) as CSV
// or JSON lines, preceded by the effective configuration.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <variant>

#include "zetalab/arith_kernels.hpp"
#include "zetalab/checkpoint.hpp"
#include "zetalab/run_config.hpp"
#include "zetalab/spectral.hpp"
#include "zetalab/zeta_eval.hpp"

using namespace zetalab;

namespace {

enum Exit { ok = 0, other = 1, usage = 2, precision = 3, data = 4 };

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::precision_failure: return precision;
    case ErrorKind::parse_error:
    case ErrorKind::validation_error:
    case ErrorKind::missing_prime:
    case ErrorKind::missing_eigenvalues: return data;
    case ErrorKind::invalid_range:
    case ErrorKind::invalid_argument:
    case ErrorKind::invalid_delta:
    case ErrorKind::domain_error:
    case ErrorKind::unknown_kernel:
    case ErrorKind::pole: return usage;
    default: return other;
  }
}

// Shortest text that reads back to the same double.
std::string shortest(double x) {
  char buf[40];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

using Cell = std::variant<std::monostate, double, long long, std::string>;

class Table {
 public:
  Table(std::ostream& os, const RunConfig& cfg, const std::string& command) : os_(os), cfg_(cfg) {
    if (cfg.format == OutputFormat::csv) {
      os_ << "# zetalab " << command << "\n" << config_echo(cfg);
    } else {
      nlohmann::ordered_json j;
      j["command"] = command;
      for (const auto& [k, v] : cfg.entries()) j["config"][k] = v;
      j["config"]["config_digest"] = cfg.digest();
      os_ << j.dump() << "\n";
    }
  }

  void note(const std::string& key, const std::string& value) {
    if (cfg_.format == OutputFormat::csv) os_ << "# " << key << " = " << value << "\n";
    else os_ << nlohmann::ordered_json{{"note", key}, {"value", value}}.dump() << "\n";
  }

  void columns(std::vector<std::string> cols) {
    cols_ = std::move(cols);
    if (cfg_.format == OutputFormat::csv) {
      for (std::size_t i = 0; i < cols_.size(); ++i) os_ << (i ? "," : "") << cols_[i];
      os_ << "\n";
    }
  }

  void row(const std::vector<Cell>& cells) {
    if (cfg_.format == OutputFormat::csv) {
      for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << text(cells[i]);
      os_ << "\n";
      return;
    }
    nlohmann::ordered_json j;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const auto& c = cells[i];
      if (std::holds_alternative<double>(c)) j[cols_[i]] = std::get<double>(c);
      else if (std::holds_alternative<long long>(c)) j[cols_[i]] = std::get<long long>(c);
      else if (std::holds_alternative<std::string>(c)) j[cols_[i]] = std::get<std::string>(c);
      else j[cols_[i]] = nullptr;
    }
    os_ << j.dump() << "\n";
  }

 private:
  static std::string text(const Cell& c) {
    if (std::holds_alternative<double>(c)) return shortest(std::get<double>(c));
    if (std::holds_alternative<long long>(c)) return std::to_string(std::get<long long>(c));
    if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
    return "";
  }

  std::ostream& os_;
  const RunConfig& cfg_;
  std::vector<std::string> cols_;
};

// "1,2,5..9" -> {1, 2, 5, 6, 7, 8, 9}
std::vector<long> int_list(const std::string& spec) {
  std::vector<long> out;
  std::stringstream ss(spec);
  std::string item;
  auto to_long = [&](const std::string& s) {
    std::size_t pos = 0;
    long v = 0;
    try {
      v = std::stol(s, &pos);
    } catch (...) {
      pos = std::string::npos;
    }
    if (pos != s.size()) throw Error(ErrorKind::invalid_argument, "bad integer list '" + spec + "'");
    return v;
  };
  while (std::getline(ss, item, ',')) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_long(item));
    } else {
      const long a = to_long(item.substr(0, dots)), b = to_long(item.substr(dots + 2));
      if (b < a || b - a > 10000000) throw Error(ErrorKind::invalid_argument, "bad range '" + item + "'");
      for (long v = a; v <= b; ++v) out.push_back(v);
    }
  }
  if (out.empty()) throw Error(ErrorKind::invalid_argument, "empty integer list");
  return out;
}

// "0.2,0.1" or "0.1:5" (re:im)
std::vector<std::complex<double>> s_list(const std::string& spec) {
  std::vector<std::complex<double>> out;
  std::stringstream ss(spec);
  std::string item;
  auto to_double = [&](const std::string& s) {
    std::size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(s, &pos);
    } catch (...) {
      pos = std::string::npos;
    }
    if (pos != s.size()) throw Error(ErrorKind::invalid_argument, "bad s value '" + s + "'");
    return v;
  };
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) out.emplace_back(to_double(item), 0.0);
    else out.emplace_back(to_double(item.substr(0, colon)), to_double(item.substr(colon + 1)));
  }
  if (out.empty()) throw Error(ErrorKind::invalid_argument, "empty s grid");
  return out;
}

std::optional<spectral::SpectralDataset> load_dataset(const std::string& path, bool required) {
  if (path.empty() || !std::filesystem::exists(path)) {
    if (required) throw Error(ErrorKind::invalid_argument, "a spectral dataset is required (--spectral)");
    std::cerr << "warning: no spectral dataset" << (path.empty() ? "" : " at " + path)
              << "; spectral columns left empty\n";
    return std::nullopt;
  }
  return spectral::load_spectral_dataset(path);
}

// Lower P_4 coefficients: fitted over grid points in [T/10, T] when asked,
// otherwise from the config (or left unset).
moment::MomentPolynomial resolve_p4(const RunConfig& cfg, const mp::PrecisionContext& ctx, bool calibrate,
                                    const std::vector<double>& grid, const std::vector<double>& values,
                                    Table& out) {
  if (!calibrate) {
    auto p = cfg.p4(ctx);
    if (!p.all_exact() && !(cfg.p4_a2 && cfg.p4_a1 && cfg.p4_a0))
      std::cerr << "warning: P4 lower coefficients unset; pass --calibrate or set p4_a2/p4_a1/p4_a0\n";
    return p;
  }
  auto cal = moment::calibrate_P4(grid, values, ctx);
  out.note("calibration_condition", shortest(cal.fit.condition));
  out.note("calibration_max_half_drift", shortest(cal.fit.max_half_drift));
  return cal.poly;
}

struct Global {
  std::string config_path;
  std::vector<std::string> sets;
  std::string format;
  std::string output;
};

RunConfig make_config(const Global& g) {
  RunConfig cfg;
  if (!g.config_path.empty()) cfg = load_config(g.config_path);
  for (const auto& s : g.sets) apply_assignment(cfg, s);
  if (!g.format.empty()) apply_setting(cfg, "format", g.format);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zetalab: moments of the Riemann zeta function on the critical line"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--config", g.config_path, "flat key = value config file")->check(CLI::ExistingFile);
  app.add_option("--set", g.sets, "override a config key (key=value), repeatable");
  app.add_option("--format", g.format, "csv or json-lines");
  app.add_option("--output", g.output, "write the table to this file instead of stdout");

  double t = 0;
  auto* zeta = app.add_subcommand("zeta", "zeta(1/2 + it)");
  zeta->add_option("--t", t, "height")->required();

  int k = 1;
  double T = 0;
  bool resume = false, calibrate = false;
  auto* mom = app.add_subcommand("moment", "int_0^T |zeta|^{2k} with checkpointing");
  mom->add_option("--k", k)->required()->check(CLI::IsMember({1, 2}));
  mom->add_option("--T", T)->required()->check(CLI::NonNegativeNumber);
  mom->add_flag("--resume", resume, "continue an existing checkpoint");
  mom->add_flag("--calibrate", calibrate, "fit P4 lower coefficients over [T/10, T] (k = 2)");

  std::string target;
  double from = 0, to = 0, A = 0, expo = 0.5;
  auto* scan = app.add_subcommand("scan", "sign changes and large values of E1, E2 or int E2");
  scan->add_option("--target", target)->required()->check(CLI::IsMember({"e1", "e2", "intE2"}));
  scan->add_option("--from", from)->required()->check(CLI::NonNegativeNumber);
  scan->add_option("--to", to)->required();
  scan->add_option("--A", A, "threshold factor");
  scan->add_option("--exp", expo, "threshold exponent");
  scan->add_flag("--calibrate", calibrate, "fit P4 lower coefficients over [to/10, to]");

  double delta = 0, tol = 0;
  std::string spectral_path;
  auto* moto = app.add_subcommand("motohashi", "smoothed fourth moment against its spectral sum");
  moto->add_option("--T", T)->required();
  moto->add_option("--delta", delta)->required();
  moto->add_option("--spectral", spectral_path, "spectral dataset (overrides config)");
  moto->add_option("--tol", tol, "skip forms whose Gaussian factor is below tol");

  std::string sgrid;
  auto* lap = app.add_subcommand("laplace", "Laplace transforms L_k(s)");
  lap->add_option("--k", k)->required()->check(CLI::IsMember({1, 2}));
  lap->add_option("--s-grid", sgrid, "comma list of s values, re or re:im")->required();

  std::string xs, fs;
  auto* dc = app.add_subcommand("divisor-corr", "sum_{n<=x} d(n) d(n+f)");
  dc->add_option("--x", xs)->required();
  dc->add_option("--f", fs, "shift list, e.g. 1,2,5..9")->required();

  std::string ms, ns, cs;
  auto* kl = app.add_subcommand("kloosterman", "Kloosterman sums S(m,n;c)");
  kl->add_option("--m", ms)->required();
  kl->add_option("--n", ns)->required();
  kl->add_option("--c", cs)->required();

  std::string kernel;
  double s_re = 0.05, s_im = 0;
  T = 100;
  delta = 10;
  auto* prof = app.add_subcommand("profile", "per-form term magnitudes of a spectral kernel");
  prof->add_option("--kernel", kernel)->required();
  prof->add_option("--spectral", spectral_path);
  prof->add_option("--T", T);
  prof->add_option("--delta", delta);
  prof->add_option("--s", s_re);
  prof->add_option("--s-im", s_im);

  int points = 40;
  auto* cal = app.add_subcommand("calibrate", "fit the lower coefficients of P4 or of the L2 expansion");
  cal->add_option("--target", target)->required()->check(CLI::IsMember({"p4", "atkinson"}));
  cal->add_option("--from", from)->required();
  cal->add_option("--to", to)->required();
  cal->add_option("--points", points);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return usage;
  }

  try {
    RunConfig cfg = make_config(g);
    // Buffered so a failing command leaves no partial table behind.
    std::ostringstream os;
    const auto ctx = cfg.context();
    const auto& q = cfg.quad;

    if (*zeta) {
      Table out(os, cfg, "zeta");
      const auto smp = zeta::sample_critical_line(t, ctx);
      const double re = static_cast<double>(smp.value.re), im = static_cast<double>(smp.value.im);
      out.columns({"t", "re", "im", "abs", "err"});
      out.row({t, re, im, std::hypot(re, im), smp.abs_err});
    } else if (*mom) {
      Table out(os, cfg, "moment");
      const std::string digest = moment::config_digest(k, ctx, q);
      if (!resume && !moment::read_checkpoint(cfg.checkpoint, k, digest).grid.empty())
        throw Error(ErrorKind::invalid_argument,
                    "checkpoint " + cfg.checkpoint + " already has k=" + std::to_string(k) + " records; pass --resume");
      const double S = q.segment;
      const double Tg = std::floor(T / S) * S;
      const auto src = moment::default_source(ctx, q);
      const auto cp = Tg > 0 ? moment::run_checkpointed(k, Tg, ctx, q, cfg.checkpoint, src)
                             : moment::read_checkpoint(cfg.checkpoint, k, digest);
      std::vector<double> grid = {0.0}, vals = {0.0}, errs = {0.0};
      for (const auto& r : cp.grid) {
        if (r.T > T) break;
        grid.push_back(r.T);
        vals.push_back(r.value);
        errs.push_back(r.err);
      }
      if (T > grid.back()) {
        const auto tail = moment::MomentProfile::build(grid.back(), T, {2 * k}, src, q).integral(2 * k, grid.back(), T);
        vals.push_back(vals.back() + tail.value);
        errs.push_back(errs.back() + tail.err_bound);
        grid.push_back(T);
      }
      moment::MomentPolynomial poly;
      if (k == 1) {
        poly = moment::p1(ctx);
      } else {
        std::vector<double> cg, cv;
        for (std::size_t i = 0; i < grid.size(); ++i)
          if (grid[i] >= T / 10 && grid[i] > 1) {
            cg.push_back(grid[i]);
            cv.push_back(vals[i]);
          }
        poly = resolve_p4(cfg, ctx, calibrate, cg, cv, out);
      }
      out.note("k", std::to_string(k));
      out.note("checkpoint_digest", digest);
      out.note("polynomial_provenance", poly.provenance_summary());
      std::string coeffs;
      for (double c : poly.coeffs) coeffs += (coeffs.empty() ? "" : " ") + shortest(c);
      out.note("polynomial_coefficients", coeffs);
      out.columns({"T", "integral", "main_term", "E", "err_bound"});
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double m = moment::main_term(poly, grid[i]);
        out.row({grid[i], vals[i], m, vals[i] - m, errs[i]});
      }
    } else if (*scan) {
      if (!(to > from)) throw Error(ErrorKind::invalid_range, "scan needs --to > --from");
      Table out(os, cfg, "scan");
      const int power = target == "e1" ? 2 : 4;
      const auto src = moment::default_source(ctx, q);
      const auto p = moment::MomentProfile::build(0, to, {power}, src, q);
      moment::MomentPolynomial poly;
      if (power == 2) {
        poly = moment::p1(ctx);
      } else {
        std::vector<double> cg = moment::log_grid(std::max(to / 10, 2.0), to, 40), cv;
        if (calibrate)
          for (double x : cg) cv.push_back(p.integral(4, 0, x).value);
        poly = resolve_p4(cfg, ctx, calibrate, cg, cv, out);
      }
      const auto rep = target == "intE2" ? moment::scan_integral_E2(p, poly, from, to, expo, A)
                                         : moment::scan_error_term(p, poly, from, to, expo, A);
      out.note("target", moment::to_string(rep.target));
      out.note("polynomial_provenance", poly.provenance_summary());
      out.note("threshold", shortest(A) + " * T^" + shortest(expo));
      out.note("points_scanned", std::to_string(rep.points_scanned));
      out.note("crossings", std::to_string(rep.crossings.size()));
      out.note("above", std::to_string(rep.above.size()));
      out.note("below", std::to_string(rep.below.size()));
      out.columns({"kind", "t", "value"});
      for (double c : rep.crossings) out.row({std::string("crossing"), c, 0.0});
      for (const auto& pt : rep.above) out.row({std::string("above"), pt.t, pt.value});
      for (const auto& pt : rep.below) out.row({std::string("below"), pt.t, pt.value});
    } else if (*moto) {
      Table out(os, cfg, "motohashi");
      const std::string path = spectral_path.empty() ? cfg.spectral : spectral_path;
      const auto ds = load_dataset(path, false);
      const auto direct = moment::smoothed_fourth(T, delta, ctx, q);
      out.note("weight_majorant", shortest(cfg.spectral_cfg.weight_majorant));
      if (ds) {
        out.note("dataset_checksum", ds->checksum);
        out.note("dataset_forms", std::to_string(ds->records.size()));
      }
      out.columns({"T", "delta", "direct", "direct_err", "spectral", "difference", "truncation_bound", "terms_used",
                   "delta_admissible"});
      if (ds) {
        const auto sp = spectral::motohashi_spectral_sum(T, delta, *ds, tol, cfg.spectral_cfg);
        out.row({T, delta, direct.value, direct.err_bound, sp.value, direct.value - sp.value, sp.truncation_bound,
                 static_cast<long long>(sp.terms_used), std::string(sp.delta_admissible ? "true" : "false")});
      } else {
        out.row({T, delta, direct.value, direct.err_bound, {}, {}, {}, {}, {}});
      }
    } else if (*lap) {
      Table out(os, cfg, "laplace");
      const auto grid = s_list(sgrid);
      const auto atk = cfg.atkinson(ctx);
      out.note("k", std::to_string(k));
      if (k == 2) out.note("b_variant", cfg.b_variant == moment::BVariant::consistent ? "consistent" : "printed");
      out.columns({"k", "re_s", "im_s", "re_L", "im_L", "err_bound", "cutoff", "tail_bound", "main", "difference"});
      // One shared profile for the real points.
      double smin = 0;
      for (auto s : grid)
        if (s.imag() == 0 && s.real() > 0 && (smin == 0 || s.real() < smin)) smin = s.real();
      std::optional<moment::MomentProfile> shared;
      if (smin > 0) {
        const double X = moment::laplace_cutoff(k, smin, ctx.abs_tol(), q.laplace_cmaj);
        shared = moment::MomentProfile::build(0, X, {2 * k}, moment::default_source(ctx, q), q);
      }
      for (auto s : grid) {
        const auto r = (s.imag() == 0 && shared) ? moment::laplace_moment(*shared, k, s, ctx, q)
                                                 : moment::laplace_moment(k, s, ctx, q);
        Cell main, diff;
        if (s.imag() == 0) {
          double m = NAN;
          if (k == 1 && s.real() / 2 < 1) m = moment::kober_main(s.real() / 2, ctx);
          if (k == 2 && s.real() <= 1) m = moment::atkinson_expansion(s.real(), atk);
          if (!std::isnan(m)) {
            main = m;
            diff = r.integral.value.real() - m;
          }
        }
        out.row({static_cast<long long>(k), s.real(), s.imag(), r.integral.value.real(), r.integral.value.imag(),
                 r.integral.err_bound + r.tail_bound, r.cutoff, r.tail_bound, main, diff});
      }
    } else if (*dc) {
      Table out(os, cfg, "divisor-corr");
      const auto xl = int_list(xs), fl = int_list(fs);
      out.columns({"f", "x", "sum"});
      for (long x : xl)
        for (long f : fl) {
          if (x < 1 || f < 1) throw Error(ErrorKind::invalid_argument, "x and f must be positive");
          const auto v = arith::additive_divisor(x, f, cfg.sieve_segment, q.threads);
          out.row({static_cast<long long>(f), static_cast<long long>(x), std::to_string(v)});
        }
    } else if (*kl) {
      Table out(os, cfg, "kloosterman");
      out.columns({"m", "n", "c", "re", "im"});
      for (long m : int_list(ms))
        for (long n : int_list(ns))
          for (long c : int_list(cs)) {
            if (c < 1) throw Error(ErrorKind::invalid_argument, "c must be positive");
            const auto v = arith::kloosterman(m, n, c);
            out.row({static_cast<long long>(m), static_cast<long long>(n), static_cast<long long>(c), v.value.real(),
                     v.value.imag()});
          }
    } else if (*prof) {
      const auto kern = spectral::parse_kernel(kernel);
      const auto ds = load_dataset(spectral_path.empty() ? cfg.spectral : spectral_path, true);
      Table out(os, cfg, "profile");
      spectral::KernelParams kp;
      kp.T = T;
      kp.delta = delta;
      kp.s = {s_re, s_im};
      kp.exponent = cfg.exponent_variant;
      kp.gamma = cfg.gamma_variant;
      const auto tp = spectral::term_profile(*ds, kern, kp, ctx);
      out.note("kernel", spectral::to_string(kern));
      out.note("dataset_checksum", ds->checksum);
      out.note("non_decaying", tp.non_decaying ? "true" : "false");
      out.columns({"j", "kappa", "term_magnitude", "cumulative", "decay_ratio"});
      for (const auto& r : tp.rows)
        out.row({static_cast<long long>(r.j), r.kappa, r.magnitude, r.cumulative,
                 std::isnan(r.decay_ratio) ? Cell{} : Cell{r.decay_ratio}});
    } else if (*cal) {
      if (!(to > from) || !(from > 0)) throw Error(ErrorKind::invalid_range, "calibrate needs 0 < --from < --to");
      Table out(os, cfg, "calibrate");
      const auto src = moment::default_source(ctx, q);
      const auto grid = moment::log_grid(from, to, points);
      moment::FitDiagnostics fit;
      std::vector<std::pair<std::string, double>> coeffs;
      if (target == "p4") {
        const auto p = moment::MomentProfile::build(0, to, {4}, src, q);
        const auto c = moment::calibrate_P4(p, grid, ctx);
        fit = c.fit;
        const auto& a = c.poly.coeffs;
        coeffs = {{"p4_a2", a[2]}, {"p4_a1", a[3]}, {"p4_a0", a[4]}};
      } else {
        if (to > 1) throw Error(ErrorKind::invalid_range, "atkinson calibration needs sigma <= 1");
        const double X = moment::laplace_cutoff(2, from, ctx.abs_tol(), q.laplace_cmaj);
        const auto p = moment::MomentProfile::build(0, X, {4}, src, q);
        std::vector<double> vals;
        for (double s : grid) vals.push_back(moment::laplace_moment(p, 2, {s, 0.0}, ctx, q).integral.value.real());
        const auto c = moment::calibrate_atkinson(grid, vals, cfg.atkinson(ctx));
        fit = c.fit;
        coeffs = {{"atkinson_C", c.coeffs.C}, {"atkinson_D", c.coeffs.D}, {"atkinson_E", c.coeffs.E}};
      }
      out.note("condition", shortest(fit.condition));
      out.note("residual_norm", shortest(fit.residual_norm));
      out.note("max_half_drift", shortest(fit.max_half_drift));
      out.columns({"key", "value", "first_half", "second_half"});
      for (std::size_t i = 0; i < coeffs.size(); ++i)
        out.row({coeffs[i].first, coeffs[i].second, fit.first_half[i], fit.second_half[i]});
    }
    if (g.output.empty()) {
      std::cout << os.str() << std::flush;
    } else {
      std::ofstream file(g.output, std::ios::binary | std::ios::trunc);
      if (!(file << os.str())) throw Error(ErrorKind::io_error, "cannot write " + g.output);
    }
    return ok;
  } catch (const Error& e) {
    std::cerr << "zetalab: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "zetalab: " << e.what() << "\n";
    return other;
  }
}
