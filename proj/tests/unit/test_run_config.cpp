#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "zetalab/checkpoint.hpp"
#include "zetalab/run_config.hpp"

using namespace zetalab;

TEST_CASE("versioned default file matches built-in defaults") {
  const auto file = load_config(ZETALAB_DEFAULT_CONFIG);
  CHECK(file.entries() == RunConfig{}.entries());
  CHECK(file.digest() == RunConfig{}.digest());
}

TEST_CASE("settings, overrides and errors") {
  RunConfig c;
  apply_assignment(c, "bits = 128");
  apply_assignment(c, "gamma_variant=printed");
  apply_assignment(c, "p4_a2 = -1.5");
  CHECK(c.bits == 128);
  CHECK(c.gamma_variant == spectral::GammaVariant::printed);
  CHECK(*c.p4_a2 == -1.5);
  CHECK(!c.p4_a1);

  auto kind = [](const std::string& text) {
    try {
      std::istringstream in(text);
      parse_config(in, "t");
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::io_error;
  };
  CHECK(kind("colour = blue\n") == ErrorKind::parse_error);
  CHECK(kind("bits = many\n") == ErrorKind::parse_error);
  CHECK(kind("nodes = 20\n") == ErrorKind::parse_error);
  CHECK(kind("format = xml\n") == ErrorKind::parse_error);
  CHECK(kind("version = 2\n") == ErrorKind::parse_error);
  CHECK(kind("no equals sign\n") == ErrorKind::parse_error);

  std::istringstream in("# comment\nsegment = 20  # trailing\n\nrel_tol = 1e-8\n");
  const auto p = parse_config(in, "t");
  CHECK(p.quad.segment == 20.0);
  CHECK(p.rel_tol == 1e-8);
}

TEST_CASE("digest tracks numeric settings only") {
  RunConfig a, b;
  b.checkpoint = "elsewhere.ckpt";
  b.format = OutputFormat::json_lines;
  CHECK(a.digest() == b.digest());
  b.quad.nodes = 32;
  CHECK(a.digest() != b.digest());

  const auto ca = a.context();
  CHECK(moment::config_digest(2, ca, a.quad) != moment::config_digest(2, ca, b.quad));
}

TEST_CASE("polynomials from the config") {
  RunConfig c;
  const auto ctx = c.context();
  CHECK(c.p4(ctx).provenance_summary() == "exact,exact,unset,unset,unset");
  c.p4_a2 = 1;
  c.p4_a1 = 2;
  c.p4_a0 = 3;
  const auto p = c.p4(ctx);
  CHECK(p.provenance_summary() == "exact,exact,user-supplied,user-supplied,user-supplied");
  CHECK(p.coeffs[4] == 3.0);
  CHECK(c.atkinson(ctx).lower == moment::Provenance::unset);
  c.atkinson_C = c.atkinson_D = c.atkinson_E = 0.5;
  CHECK(c.atkinson(ctx).lower == moment::Provenance::user_supplied);
  c.b_variant = moment::BVariant::printed;
  CHECK(c.atkinson(ctx).B == doctest::Approx(-0.20946977659413074).epsilon(1e-14));
}

TEST_CASE("echo lists every key") {
  const std::string e = config_echo(RunConfig{});
  CHECK(e.find("# abs_tol = 1e-10\n") != std::string::npos);
  CHECK(e.find("# laplace_phi = 1.4\n") != std::string::npos);
  CHECK(e.find("# config_digest = ") != std::string::npos);
}
