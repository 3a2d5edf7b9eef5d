#include "zetalab/run_config.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace zetalab {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Shortest text that reads back to the same double.
std::string shortest(double x) {
  char buf[40];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string opt(const std::optional<double>& v) { return v ? shortest(*v) : ""; }

double num(const std::string& key, const std::string& v) {
  char* end = nullptr;
  errno = 0;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(x))
    throw Error(ErrorKind::parse_error, "config key '" + key + "': bad number '" + v + "'");
  return x;
}

long integer(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (v.empty() || *end != '\0') throw Error(ErrorKind::parse_error, "config key '" + key + "': bad integer '" + v + "'");
  return x;
}

std::optional<double> optnum(const std::string& key, const std::string& v) {
  if (v.empty()) return std::nullopt;
  return num(key, v);
}

[[noreturn]] void bad_choice(const std::string& key, const std::string& v) {
  throw Error(ErrorKind::parse_error, "config key '" + key + "': unknown value '" + v + "'");
}

}  // namespace

mp::PrecisionContext RunConfig::context() const { return mp::PrecisionContext(bits, abs_tol, rel_tol); }

moment::MomentPolynomial RunConfig::p4(const mp::PrecisionContext& ctx) const {
  if (p4_a2 && p4_a1 && p4_a0) return moment::p4_with(ctx, *p4_a2, *p4_a1, *p4_a0, moment::Provenance::user_supplied);
  return moment::p4_exact(ctx);
}

moment::AtkinsonCoefficients RunConfig::atkinson(const mp::PrecisionContext& ctx) const {
  auto c = moment::atkinson_constants(ctx, b_variant);
  if (atkinson_C && atkinson_D && atkinson_E) {
    c.C = *atkinson_C;
    c.D = *atkinson_D;
    c.E = *atkinson_E;
    c.lower = moment::Provenance::user_supplied;
  }
  return c;
}

std::vector<std::pair<std::string, std::string>> RunConfig::entries() const {
  return {
      {"version", std::to_string(version)},
      {"bits", std::to_string(bits)},
      {"abs_tol", shortest(abs_tol)},
      {"rel_tol", shortest(rel_tol)},
      {"nodes", std::to_string(quad.nodes)},
      {"panel_fraction", shortest(quad.panel_fraction)},
      {"max_panel", shortest(quad.max_panel)},
      {"max_depth", std::to_string(quad.max_depth)},
      {"quad_rel_tol", shortest(quad.rel_tol)},
      {"segment", shortest(quad.segment)},
      {"window", shortest(quad.window)},
      {"laplace_cmaj", shortest(quad.laplace_cmaj)},
      {"laplace_phi", shortest(quad.laplace_phi)},
      {"crossover", shortest(quad.zeta.crossover)},
      {"rs_terms", std::to_string(quad.zeta.rs_terms)},
      {"threads", std::to_string(quad.threads)},
      {"checkpoint", checkpoint},
      {"spectral", spectral},
      {"exponent_variant", spectral::to_string(exponent_variant)},
      {"gamma_variant", spectral::to_string(gamma_variant)},
      {"b_variant", b_variant == moment::BVariant::consistent ? "consistent" : "printed"},
      {"weight_majorant", shortest(spectral_cfg.weight_majorant)},
      {"admissible_A", shortest(spectral_cfg.admissible_A)},
      {"p4_a2", opt(p4_a2)},
      {"p4_a1", opt(p4_a1)},
      {"p4_a0", opt(p4_a0)},
      {"atkinson_C", opt(atkinson_C)},
      {"atkinson_D", opt(atkinson_D)},
      {"atkinson_E", opt(atkinson_E)},
      {"sieve_segment", std::to_string(sieve_segment)},
      {"format", format == OutputFormat::csv ? "csv" : "json-lines"},
  };
}

std::string RunConfig::digest() const {
  std::string text;
  for (const auto& [k, v] : entries()) {
    if (k == "checkpoint" || k == "spectral" || k == "format" || k == "threads") continue;
    text += k + "=" + v + ";";
  }
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "version") {
    if (integer(key, v) != 1) throw Error(ErrorKind::parse_error, "unsupported config version " + v);
  } else if (key == "bits") {
    const long b = integer(key, v);
    if (b < 53 || b > 100000) throw Error(ErrorKind::parse_error, "bits must be in [53, 100000]");
    c.bits = static_cast<unsigned>(b);
  } else if (key == "abs_tol") {
    c.abs_tol = num(key, v);
  } else if (key == "rel_tol") {
    c.rel_tol = num(key, v);
  } else if (key == "nodes") {
    const long n = integer(key, v);
    if (n != 16 && n != 32) throw Error(ErrorKind::parse_error, "nodes must be 16 or 32");
    c.quad.nodes = static_cast<int>(n);
  } else if (key == "panel_fraction") {
    c.quad.panel_fraction = num(key, v);
  } else if (key == "max_panel") {
    c.quad.max_panel = num(key, v);
  } else if (key == "max_depth") {
    c.quad.max_depth = static_cast<int>(integer(key, v));
  } else if (key == "quad_rel_tol") {
    c.quad.rel_tol = num(key, v);
  } else if (key == "segment") {
    c.quad.segment = num(key, v);
  } else if (key == "window") {
    c.quad.window = num(key, v);
  } else if (key == "laplace_cmaj") {
    c.quad.laplace_cmaj = num(key, v);
  } else if (key == "laplace_phi") {
    c.quad.laplace_phi = num(key, v);
  } else if (key == "crossover") {
    c.quad.zeta.crossover = num(key, v);
  } else if (key == "rs_terms") {
    c.quad.zeta.rs_terms = static_cast<int>(integer(key, v));
  } else if (key == "threads") {
    c.quad.threads = static_cast<int>(integer(key, v));
  } else if (key == "checkpoint") {
    c.checkpoint = v;
  } else if (key == "spectral") {
    c.spectral = v;
  } else if (key == "exponent_variant") {
    if (v == "oscillatory") c.exponent_variant = spectral::ExponentVariant::oscillatory;
    else if (v == "printed") c.exponent_variant = spectral::ExponentVariant::printed;
    else bad_choice(key, v);
  } else if (key == "gamma_variant") {
    if (v == "half-shift") c.gamma_variant = spectral::GammaVariant::half_shift;
    else if (v == "printed") c.gamma_variant = spectral::GammaVariant::printed;
    else bad_choice(key, v);
  } else if (key == "b_variant") {
    if (v == "consistent") c.b_variant = moment::BVariant::consistent;
    else if (v == "printed") c.b_variant = moment::BVariant::printed;
    else bad_choice(key, v);
  } else if (key == "weight_majorant") {
    c.spectral_cfg.weight_majorant = num(key, v);
  } else if (key == "admissible_A") {
    c.spectral_cfg.admissible_A = num(key, v);
  } else if (key == "p4_a2") {
    c.p4_a2 = optnum(key, v);
  } else if (key == "p4_a1") {
    c.p4_a1 = optnum(key, v);
  } else if (key == "p4_a0") {
    c.p4_a0 = optnum(key, v);
  } else if (key == "atkinson_C") {
    c.atkinson_C = optnum(key, v);
  } else if (key == "atkinson_D") {
    c.atkinson_D = optnum(key, v);
  } else if (key == "atkinson_E") {
    c.atkinson_E = optnum(key, v);
  } else if (key == "sieve_segment") {
    c.sieve_segment = integer(key, v);
    if (c.sieve_segment < 1) throw Error(ErrorKind::parse_error, "sieve_segment must be positive");
  } else if (key == "format") {
    if (v == "csv") c.format = OutputFormat::csv;
    else if (v == "json-lines") c.format = OutputFormat::json_lines;
    else bad_choice(key, v);
  } else {
    throw Error(ErrorKind::parse_error, "unknown config key '" + key + "'");
  }
}

void apply_assignment(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw Error(ErrorKind::parse_error, "expected key=value, got '" + assignment + "'");
  apply_setting(cfg, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

RunConfig parse_config(std::istream& in, const std::string& name, RunConfig base) {
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    try {
      apply_assignment(base, line);
    } catch (const Error& e) {
      throw Error(e.kind(), name + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_error, "cannot open config " + path);
  return parse_config(in, path, std::move(base));
}

std::string config_echo(const RunConfig& cfg) {
  std::string out;
  for (const auto& [k, v] : cfg.entries()) out += "# " + k + " = " + v + "\n";
  out += "# config_digest = " + cfg.digest() + "\n";
  return out;
}

}  // namespace zetalab
