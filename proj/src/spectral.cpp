#include "zetalab/spectral.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace zetalab::spectral {
namespace {

using LD = long double;
using CLD = std::complex<LD>;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, ',')) out.push_back(trim(cur));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string where(const std::string& name, long line) { return name + ":" + std::to_string(line); }

double to_number(const std::string& s, const std::string& name, long line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0' || !std::isfinite(v))
    throw Error(ErrorKind::parse_error, where(name, line) + ": bad number '" + s + "'");
  return v;
}

long to_integer(const std::string& s, const std::string& name, long line) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0') throw Error(ErrorKind::parse_error, where(name, line) + ": bad integer '" + s + "'");
  return v;
}

std::string fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::string read_all(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ComplexValue cplx(double re, double im) { return ComplexValue(Real(re), Real(im)); }

std::complex<double> to_std(const ComplexValue& z) {
  return {static_cast<double>(z.re), static_cast<double>(z.im)};
}

// log of sqrt(pi/2) (2^{iy} G(1/4+iy/2)/G(1/4-iy/2))^3 G(-2iy) cosh(pi y);
// caller holds a PrecisionScope.
Estimate<ComplexValue> log_r_factor(const Real& y, const PrecisionContext& ctx) {
  if (y == 0) throw Error(ErrorKind::pole, "R(y) has a pole at y = 0");
  const Real quarter = Real(1) / 4, half = Real(1) / 2;
  const Real pi = ctx.constants().pi;
  auto g1 = mp::complex_log_gamma(ComplexValue(quarter, y * half), ctx);
  auto g2 = mp::complex_log_gamma(ComplexValue(quarter, -y * half), ctx);
  auto g3 = mp::complex_log_gamma(ComplexValue(Real(0), -2 * y), ctx);
  const Real ay = abs(y);
  // log cosh(pi y) = pi|y| + log(1 + e^{-2 pi |y|}) - log 2
  const Real lcosh = pi * ay + log1p(exp(-2 * pi * ay)) - log(Real(2));
  ComplexValue acc(log(pi / 2) / 2 + lcosh, Real(0));
  acc += ComplexValue(Real(0), 3 * y * log(Real(2)));
  acc += (g1.value - g2.value) * Real(3);
  acc += g3.value;
  const double scale = static_cast<double>(abs(acc.re) + abs(acc.im) + 1);
  const double err = 3 * (g1.err + g2.err) + g3.err + 16 * scale * static_cast<double>(mp::eps_of<Real>());
  return {acc, err};
}

LD gauss_factor(double T, double delta, double kappa) {
  const LD u = static_cast<LD>(delta) * kappa / (2 * static_cast<LD>(T));
  return std::exp(-u * u);
}

LD motohashi_term(double T, double delta, const MaassFormRecord& r) {
  const LD pi = 3.141592653589793238462643383279502884L;
  const LD k = r.kappa;
  const LD phase = k * std::log(k / (4 * static_cast<LD>(M_E) * T));
  return pi / std::sqrt(2.0L) / std::sqrt(static_cast<LD>(T)) * r.c / std::sqrt(k) * std::sin(phase) *
         gauss_factor(T, delta, r.kappa);
}

// Per-record complex terms of the Laplace, integral and L_2 kernels.
std::complex<double> laplace_term(double T, const MaassFormRecord& r, ExponentVariant v, const PrecisionContext& ctx) {
  mp::PrecisionScope scope(ctx.work_bits());
  const Real k(r.kappa), lT = log(Real(T));
  auto lr = log_r_factor(k, ctx);
  auto lg = mp::complex_log_gamma(ComplexValue(Real(1) / 2, -k), ctx);
  ComplexValue e = lr.value + lg.value;
  if (v == ExponentVariant::oscillatory)
    e += ComplexValue(Real(0), -k * lT);
  else
    e += ComplexValue(-k * lT, Real(0));
  const ComplexValue z = mp::exp(e) * Real(r.c) * (2 * pow(Real(T), Real(3) / 2));
  return to_std(z);
}

std::complex<double> integral_term(double T, const MaassFormRecord& r, const PrecisionContext& ctx) {
  mp::PrecisionScope scope(ctx.work_bits());
  const Real k(r.kappa), lT = log(Real(T));
  auto lr = log_r_factor(k, ctx);
  ComplexValue z = mp::exp(lr.value + ComplexValue(Real(0), k * lT));
  const ComplexValue den = ComplexValue(Real(1) / 2, k) * ComplexValue(Real(3) / 2, k);
  z = z / den * Real(r.c) * (2 * pow(Real(T), Real(3) / 2));
  return to_std(z);
}

// Gamma(k) for real k > 0 and Gamma(-k) by reflection, as complex values.
ComplexValue printed_gamma(const Real& k, bool negative) {
  const Real g = boost::multiprecision::tgamma(k);
  if (!negative) return ComplexValue(g, Real(0));
  const Real pi = boost::math::constants::pi<Real>();
  return ComplexValue(-pi / (k * sin(pi * k) * g), Real(0));
}

std::complex<double> l2_term(std::complex<double> s, const MaassFormRecord& r, GammaVariant v,
                             const PrecisionContext& ctx) {
  mp::PrecisionScope scope(ctx.work_bits());
  const Real k(r.kappa);
  const ComplexValue sv = cplx(s.real(), s.imag());
  const ComplexValue ls = mp::log(sv);
  const ComplexValue I(Real(0), Real(1));
  ComplexValue plus, minus;  // s^{-ik} R(k) G(k), s^{ik} R(-k) G(-k)
  const ComplexValue lrp = log_r_factor(k, ctx).value, lrm = log_r_factor(-k, ctx).value;
  if (v == GammaVariant::half_shift) {
    const ComplexValue gp = mp::complex_log_gamma(ComplexValue(Real(1) / 2, -k), ctx).value;
    const ComplexValue gm = mp::complex_log_gamma(ComplexValue(Real(1) / 2, k), ctx).value;
    plus = mp::exp(lrp + gp - I * k * ls);
    minus = mp::exp(lrm + gm + I * k * ls);
  } else {
    plus = mp::exp(lrp - I * k * ls) * printed_gamma(k, false);
    minus = mp::exp(lrm + I * k * ls) * printed_gamma(k, true);
  }
  const ComplexValue z = (plus + minus) * Real(r.c) * mp::exp(ls * Real(-0.5));
  return to_std(z);
}

void require_valid_T(double T) {
  if (!(T > 0) || !std::isfinite(T)) throw Error(ErrorKind::invalid_argument, "T must be positive");
}

}  // namespace

SpectralDataset SpectralDataset::concatenated(const SpectralDataset& other) const {
  SpectralDataset out = *this;
  out.records.insert(out.records.end(), other.records.begin(), other.records.end());
  out.source = source + (source.empty() || other.source.empty() ? "" : "\n") + other.source;
  out.checksum = fnv1a(checksum + other.checksum);
  return out;
}

void validate(const SpectralDataset& ds) {
  std::set<int> seen;
  for (std::size_t i = 0; i < ds.records.size(); ++i) {
    const auto& r = ds.records[i];
    const std::string id = "record j=" + std::to_string(r.j);
    if (r.j <= 0) throw Error(ErrorKind::validation_error, id + ": j must be positive");
    if (!seen.insert(r.j).second) throw Error(ErrorKind::validation_error, id + ": duplicate j");
    if (!(r.kappa > 0)) throw Error(ErrorKind::validation_error, id + ": kappa must be positive");
    if (i > 0 && !(r.kappa > ds.records[i - 1].kappa))
      throw Error(ErrorKind::validation_error, id + ": kappa must be strictly increasing");
    if (r.eps != 1 && r.eps != -1) throw Error(ErrorKind::validation_error, id + ": eps must be +1 or -1");
    if (r.eps == -1 && r.c != 0.0)
      throw Error(ErrorKind::validation_error, id + ": odd form (eps = -1) must have c = 0");
    if (r.alpha && r.H_half) {
      const double prod = *r.alpha * std::pow(*r.H_half, 3);
      if (std::fabs(prod - r.c) > 1e-10 * std::max(1.0, std::fabs(r.c)))
        throw Error(ErrorKind::validation_error, id + ": c differs from alpha * H_half^3");
    }
    for (const auto& [p, t] : r.hecke_t_p) {
      if (!is_prime(p)) throw Error(ErrorKind::validation_error, id + ": Hecke index " + std::to_string(p) + " is not prime");
      const double gate = std::sqrt(static_cast<double>(p)) + 1 / std::sqrt(static_cast<double>(p));
      if (!(std::fabs(t) <= gate))
        throw Error(ErrorKind::validation_error, id + ": |t(" + std::to_string(p) + ")| exceeds p^1/2 + p^-1/2");
    }
  }
}

SpectralDataset parse_spectral_dataset(std::istream& in, const std::string& name) {
  const std::string bytes = read_all(in);
  SpectralDataset ds;
  ds.checksum = fnv1a(bytes);
  std::istringstream is(bytes);
  std::string raw;
  long lineno = 0;
  bool header = false, extended = false;
  while (std::getline(is, raw)) {
    ++lineno;
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string text = trim(line.substr(1));
      if (!ds.source.empty()) ds.source += "\n";
      ds.source += text;
      continue;
    }
    if (!header) {
      if (line == "j,kappa,c,eps") {
        extended = false;
      } else if (line == "j,kappa,c,eps,alpha,H_half") {
        extended = true;
      } else {
        throw Error(ErrorKind::parse_error, where(name, lineno) + ": expected header j,kappa,c,eps[,alpha,H_half]");
      }
      header = true;
      continue;
    }
    const auto f = split(line);
    if (f.size() != (extended ? 6u : 4u))
      throw Error(ErrorKind::parse_error, where(name, lineno) + ": wrong number of fields");
    MaassFormRecord r;
    r.j = static_cast<int>(to_integer(f[0], name, lineno));
    r.kappa = to_number(f[1], name, lineno);
    r.c = to_number(f[2], name, lineno);
    r.eps = static_cast<int>(to_integer(f[3], name, lineno));
    if (extended) {
      if (!f[4].empty()) r.alpha = to_number(f[4], name, lineno);
      if (!f[5].empty()) r.H_half = to_number(f[5], name, lineno);
    }
    ds.records.push_back(std::move(r));
  }
  if (!header) throw Error(ErrorKind::parse_error, name + ": missing header line");
  validate(ds);
  return ds;
}

SpectralDataset load_spectral_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io_error, "cannot open spectral dataset " + path);
  return parse_spectral_dataset(in, path);
}

void parse_hecke_eigenvalues(std::istream& in, const std::string& name, SpectralDataset& ds) {
  std::string raw;
  long lineno = 0;
  bool header = false;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "j,p,t_p") throw Error(ErrorKind::parse_error, where(name, lineno) + ": expected header j,p,t_p");
      header = true;
      continue;
    }
    const auto f = split(line);
    if (f.size() != 3) throw Error(ErrorKind::parse_error, where(name, lineno) + ": wrong number of fields");
    const long j = to_integer(f[0], name, lineno);
    const long p = to_integer(f[1], name, lineno);
    const double t = to_number(f[2], name, lineno);
    auto it = std::find_if(ds.records.begin(), ds.records.end(), [j](const MaassFormRecord& r) { return r.j == j; });
    if (it == ds.records.end())
      throw Error(ErrorKind::validation_error, where(name, lineno) + ": no form with j=" + std::to_string(j));
    it->hecke_t_p[p] = t;
  }
  if (!header) throw Error(ErrorKind::parse_error, name + ": missing header line");
  validate(ds);
}

void load_hecke_eigenvalues(const std::string& path, SpectralDataset& ds) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_error, "cannot open Hecke eigenvalue file " + path);
  parse_hecke_eigenvalues(in, path, ds);
}

std::vector<double> hecke_extend(const std::map<long, double>& t_p, long N) {
  if (N < 1) return {0.0};
  std::vector<long> spf(N + 1, 0);
  for (long i = 2; i <= N; ++i) {
    if (spf[i]) continue;
    for (long m = i; m <= N; m += i)
      if (!spf[m]) spf[m] = i;
  }
  std::vector<double> t(N + 1, 0.0);
  t[1] = 1.0;
  for (long n = 2; n <= N; ++n) {
    const long p = spf[n];
    long pk = 1, m = n;
    while (m % p == 0) {
      m /= p;
      pk *= p;
    }
    if (m != 1) {
      t[n] = t[pk] * t[m];
    } else if (pk == p) {
      auto it = t_p.find(p);
      if (it == t_p.end()) throw Error(ErrorKind::missing_prime, "no Hecke eigenvalue for p = " + std::to_string(p));
      t[n] = it->second;
    } else {
      t[n] = t[p] * t[n / p] - t[n / p / p];
    }
  }
  return t;
}

HeckePartial hecke_series_partial(const MaassFormRecord& rec, std::complex<double> s, long N) {
  if (!(s.real() > 1)) throw Error(ErrorKind::domain_error, "Hecke series needs Re s > 1");
  if (rec.hecke_t_p.empty()) throw Error(ErrorKind::missing_eigenvalues, "record has no Hecke eigenvalues");
  if (N < 1) throw Error(ErrorKind::invalid_argument, "N must be positive");
  const auto t = hecke_extend(rec.hecke_t_p, N);
  const CLD sl(s.real(), s.imag());
  CLD acc(0, 0);
  for (long n = 1; n <= N; ++n) {
    if (t[n] == 0.0) continue;
    acc += static_cast<LD>(t[n]) * std::exp(-sl * std::log(static_cast<LD>(n)));
  }
  HeckePartial out;
  out.value = {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
  out.N = N;
  const double sig = s.real();
  out.tail_bound = sig > 2 ? 2 * std::pow(static_cast<double>(N), 2 - sig) / (sig - 2)
                           : std::numeric_limits<double>::infinity();
  return out;
}

Estimate<ComplexValue> hecke_fe_factor(const ComplexValue& s, const Real& kappa, int eps,
                                       const PrecisionContext& ctx) {
  if (eps != 1 && eps != -1) throw Error(ErrorKind::invalid_argument, "eps must be +1 or -1");
  mp::PrecisionScope scope(ctx.work_bits());
  const ComplexValue sv(mp::rounded(s.re), mp::rounded(s.im));
  const Real k = mp::rounded(kappa);
  const Real pi = ctx.constants().pi;
  const ComplexValue one_minus = ComplexValue(Real(1), Real(0)) - sv;
  auto g1 = mp::complex_log_gamma(one_minus + ComplexValue(Real(0), k), ctx);
  auto g2 = mp::complex_log_gamma(one_minus - ComplexValue(Real(0), k), ctx);
  ComplexValue bracket = -mp::cos(sv * pi);
  bracket.re += eps * cosh(pi * k);
  ComplexValue lg = ComplexValue(-log(pi), Real(0)) + (sv * Real(2) - Real(1)) * Real(log(2 * pi)) + g1.value + g2.value;
  ComplexValue value = mp::exp(lg) * bracket;
  const double mag = static_cast<double>(mp::abs(value));
  const double scale = static_cast<double>(abs(lg.re) + abs(lg.im) + 1);
  const double err = mag * (g1.err + g2.err + 32 * scale * static_cast<double>(mp::eps_of<Real>()));
  ctx.check(err, mag, "Hecke functional-equation factor");
  return {value, err};
}

Estimate<ComplexValue> r_factor(const Real& y, const PrecisionContext& ctx) {
  mp::PrecisionScope scope(ctx.work_bits());
  auto l = log_r_factor(mp::rounded(y), ctx);
  ComplexValue v = mp::exp(l.value);
  const double mag = static_cast<double>(mp::abs(v));
  const double err = mag * l.err;
  ctx.check(err, mag, "R factor");
  return {v, err};
}

double exact_sum(const std::vector<double>& v) {
  // Enough bits to hold any sum of up to 2^200 doubles without rounding.
  Real acc;
  acc.precision(700);
  acc = 0;
  for (double x : v) {
    if (!std::isfinite(x)) {
      double naive = 0;
      for (double y : v) naive += y;
      return naive;
    }
    acc += Real(x);
  }
  return static_cast<double>(acc);
}

SpectralSum motohashi_spectral_sum(double T, double delta, const SpectralDataset& ds, double tol,
                                   const SpectralConfig& cfg) {
  require_valid_T(T);
  if (!(delta > 0)) throw Error(ErrorKind::invalid_delta, "delta must be positive");
  SpectralSum out;
  const LD pref = 3.141592653589793238462643383279502884L / std::sqrt(2.0L) / std::sqrt(static_cast<LD>(T));
  double skipped = 0.0;
  for (const auto& r : ds.records) {
    if (gauss_factor(T, delta, r.kappa) < tol) {
      skipped += static_cast<double>(pref * std::fabs(r.c) / std::sqrt(static_cast<LD>(r.kappa)) *
                                     gauss_factor(T, delta, r.kappa));
      out.terms.push_back(0.0);
      continue;
    }
    out.terms.push_back(static_cast<double>(motohashi_term(T, delta, r)));
    ++out.terms_used;
  }
  out.value = exact_sum(out.terms);
  // Forms beyond the last kappa: c <= C k^3 and density k/6, so the tail is
  // at most pref (C/6) int_K^inf k^{7/2} e^{-a k^2} dk, a = (delta/2T)^2.
  const double K = ds.records.empty() ? 0.0 : ds.records.back().kappa;
  const double a = std::pow(delta / (2 * T), 2);
  const double integral = 0.5 * std::pow(a, -2.25) * boost::math::tgamma(2.25, a * K * K);
  out.truncation_bound = static_cast<double>(pref) * cfg.weight_majorant / 6 * integral + skipped;
  const double lT = std::log(T);
  out.delta_admissible = lT > 0 && delta >= std::sqrt(T) / std::pow(lT, cfg.admissible_A) &&
                         delta <= T * std::exp(-std::sqrt(lT));
  return out;
}

const char* to_string(ExponentVariant v) noexcept {
  return v == ExponentVariant::oscillatory ? "oscillatory" : "printed";
}

const char* to_string(GammaVariant v) noexcept { return v == GammaVariant::half_shift ? "half-shift" : "printed"; }

SpectralSum laplace_E2_spectral(double T, const SpectralDataset& ds, ExponentVariant variant,
                                const PrecisionContext& ctx) {
  require_valid_T(T);
  SpectralSum out;
  for (const auto& r : ds.records) {
    out.terms.push_back(r.c == 0.0 ? 0.0 : laplace_term(T, r, variant, ctx).real());
    ++out.terms_used;
  }
  out.value = exact_sum(out.terms);
  return out;
}

SpectralSum integral_E2_spectral(double T, const SpectralDataset& ds, const PrecisionContext& ctx) {
  require_valid_T(T);
  SpectralSum out;
  for (const auto& r : ds.records) {
    out.terms.push_back(r.c == 0.0 ? 0.0 : integral_term(T, r, ctx).real());
    ++out.terms_used;
  }
  out.value = exact_sum(out.terms);
  return out;
}

L2Expansion l2_spectral_expansion(std::complex<double> s, const SpectralDataset& ds,
                                  const moment::AtkinsonCoefficients& m, GammaVariant variant,
                                  const PrecisionContext& ctx, double phi) {
  const double r = std::abs(s);
  if (!(r > 0 && r <= 1) || std::fabs(std::arg(s)) > phi)
    throw Error(ErrorKind::domain_error, "L_2 expansion needs 0 < |s| <= 1 and |arg s| <= phi");
  L2Expansion out;
  out.variant = variant;
  const CLD sl(s.real(), s.imag());
  const CLD l = -std::log(sl);
  const CLD main = ((((static_cast<LD>(m.A) * l + static_cast<LD>(m.B)) * l + static_cast<LD>(m.C)) * l +
                     static_cast<LD>(m.D)) * l + static_cast<LD>(m.E)) / sl;
  out.main = {static_cast<double>(main.real()), static_cast<double>(main.imag())};
  std::vector<double> re, im;
  for (const auto& rec : ds.records) {
    const std::complex<double> t = rec.c == 0.0 ? std::complex<double>(0, 0) : l2_term(s, rec, variant, ctx);
    out.terms.push_back(t);
    re.push_back(t.real());
    im.push_back(t.imag());
  }
  out.spectral = {exact_sum(re), exact_sum(im)};
  return out;
}

Kernel parse_kernel(const std::string& name) {
  if (name == "motohashi") return Kernel::motohashi;
  if (name == "laplace_e2") return Kernel::laplace_e2;
  if (name == "integral_e2") return Kernel::integral_e2;
  if (name == "l2_expansion") return Kernel::l2_expansion;
  throw Error(ErrorKind::unknown_kernel, "unknown kernel '" + name + "'");
}

const char* to_string(Kernel k) noexcept {
  switch (k) {
    case Kernel::motohashi: return "motohashi";
    case Kernel::laplace_e2: return "laplace_e2";
    case Kernel::integral_e2: return "integral_e2";
    case Kernel::l2_expansion: return "l2_expansion";
  }
  return "motohashi";
}

TermProfile term_profile(const SpectralDataset& ds, Kernel kernel, const KernelParams& p,
                         const PrecisionContext& ctx) {
  TermProfile out;
  std::vector<double> running;
  for (const auto& rec : ds.records) {
    std::complex<double> t;
    switch (kernel) {
      case Kernel::motohashi:
        t = static_cast<double>(motohashi_term(p.T, p.delta, rec));
        break;
      case Kernel::laplace_e2:
        t = rec.c == 0.0 ? 0.0 : laplace_term(p.T, rec, p.exponent, ctx);
        break;
      case Kernel::integral_e2:
        t = rec.c == 0.0 ? 0.0 : integral_term(p.T, rec, ctx);
        break;
      case Kernel::l2_expansion:
        t = rec.c == 0.0 ? 0.0 : l2_term(p.s, rec, p.gamma, ctx);
        break;
    }
    TermRow row;
    row.j = rec.j;
    row.kappa = rec.kappa;
    row.magnitude = std::abs(t);
    running.push_back(t.real());
    row.cumulative = exact_sum(running);
    row.decay_ratio = out.rows.empty() ? std::numeric_limits<double>::quiet_NaN()
                                       : row.magnitude / out.rows.back().magnitude;
    out.rows.push_back(row);
  }
  const std::size_t n = out.rows.size();
  if (n >= 4) {
    out.non_decaying = true;
    for (std::size_t i = n - 3; i < n; ++i)
      if (!(out.rows[i].decay_ratio >= 1)) out.non_decaying = false;
  }
  return out;
}

}  // namespace zetalab::spectral
