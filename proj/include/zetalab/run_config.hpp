#pragma once

// Flat `key = value` run configuration shared by the command-line tool and
// the acceptance runner. Unknown keys are errors; `#` starts a comment.

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zetalab/moment_engine.hpp"
#include "zetalab/spectral.hpp"

namespace zetalab {

enum class OutputFormat { csv, json_lines };

struct RunConfig {
  int version = 1;
  unsigned bits = 64;
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  moment::QuadConfig quad;
  std::string checkpoint = "zetalab.ckpt";
  std::string spectral;  // empty: no dataset
  spectral::ExponentVariant exponent_variant = spectral::ExponentVariant::oscillatory;
  spectral::GammaVariant gamma_variant = spectral::GammaVariant::half_shift;
  moment::BVariant b_variant = moment::BVariant::consistent;
  spectral::SpectralConfig spectral_cfg;
  std::optional<double> p4_a2, p4_a1, p4_a0;
  std::optional<double> atkinson_C, atkinson_D, atkinson_E;
  long sieve_segment = 1L << 22;
  OutputFormat format = OutputFormat::csv;

  mp::PrecisionContext context() const;

  /// Exact a_4, a_3; lower coefficients from the config when all three are set.
  moment::MomentPolynomial p4(const mp::PrecisionContext& ctx) const;
  moment::AtkinsonCoefficients atkinson(const mp::PrecisionContext& ctx) const;

  /// Every key in canonical order, values as they would be written back.
  std::vector<std::pair<std::string, std::string>> entries() const;

  /// FNV-1a over the numerically relevant entries (not paths or format).
  std::string digest() const;
};

/// Sets one key. Throws parse-error for unknown keys or malformed values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// "key=value" or "key = value".
void apply_assignment(RunConfig& cfg, const std::string& assignment);

RunConfig parse_config(std::istream& in, const std::string& name, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

/// `# key = value` lines.
std::string config_echo(const RunConfig& cfg);

}  // namespace zetalab
