#include "zetalab/moment_profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <atomic>
#include <exception>
#include <thread>

namespace zetalab::moment {

struct MomentProfile::Piece {
  LD a = 0;
  LD b = 0;
  std::vector<LD> lo;
  std::vector<LD> hi;
  double zerr = 0.0;
};

namespace {

constexpr double kLdEps = std::numeric_limits<LD>::epsilon();

std::mutex& prefix_mutex() {
  static std::mutex m;
  return m;
}

LD powi(LD z, int p) {
  LD r = 1;
  for (int i = 0; i < p; ++i) r *= z;
  return r;
}

const quad::LegendreExpansion& expansion(int n) {
  static std::mutex m;
  static std::map<int, quad::LegendreExpansion> cache;
  std::lock_guard lock(m);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, quad::LegendreExpansion(n)).first;
  return it->second;
}

// Integration matrices of the 2n-point expansion at the 2n and n nodes.
struct NodeMatrices {
  std::vector<std::vector<LD>> at_hi;
  std::vector<std::vector<LD>> at_lo;
};

const NodeMatrices& node_matrices(int n) {
  static std::mutex m;
  static std::map<int, NodeMatrices> cache;
  std::lock_guard lock(m);
  auto it = cache.find(n);
  if (it == cache.end()) {
    const auto& ex = expansion(2 * n);
    NodeMatrices nm{ex.integration_matrix(quad::gauss_legendre(2 * n).nodes),
                    ex.integration_matrix(quad::gauss_legendre(n).nodes)};
    it = cache.emplace(n, std::move(nm)).first;
  }
  return it->second;
}

// Sum of Legendre series at u (coefficients lowest first).
LD legendre_sum(const std::vector<LD>& c, LD u) {
  LD p0 = 1, p1 = u, acc = c[0];
  if (c.size() > 1) acc += c[1] * u;
  for (std::size_t k = 2; k < c.size(); ++k) {
    const LD p2 = ((2 * k - 1) * u * p1 - (k - 1) * p0) / static_cast<LD>(k);
    acc += c[k] * p2;
    p0 = p1;
    p1 = p2;
  }
  return acc;
}

template <class V>
V pairwise(const std::vector<V>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo == 0) return V{};
  if (hi - lo == 1) return v[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise(v, lo, mid) + pairwise(v, mid, hi);
}

struct ErrSum {
  LD value = 0;
  double err = 0.0;
  ErrSum operator+(const ErrSum& o) const { return {value + o.value, err + o.err}; }
};

struct CErrSum {
  std::complex<LD> value{0, 0};
  double err = 0.0;
  CErrSum operator+(const CErrSum& o) const { return {value + o.value, err + o.err}; }
};

// Rule pair applied to samples f_lo (n nodes) and f_hi (2n nodes) on [a, b].
ErrSum rule_pair(int n, LD a, LD b, const std::vector<LD>& f_lo, const std::vector<LD>& f_hi) {
  const auto& glo = quad::gauss_legendre(n);
  const auto& ghi = quad::gauss_legendre(2 * n);
  const LD half = (b - a) / 2;
  LD ilo = 0, ihi = 0, mag = 0;
  for (int i = 0; i < n; ++i) ilo += glo.weights[i] * f_lo[i];
  for (int i = 0; i < 2 * n; ++i) {
    ihi += ghi.weights[i] * f_hi[i];
    mag += ghi.weights[i] * std::fabs(f_hi[i]);
  }
  ilo *= half;
  ihi *= half;
  mag *= std::fabs(half);
  return {ihi, static_cast<double>(std::fabs(ihi - ilo)) + 4.0 * n * kLdEps * static_cast<double>(mag)};
}

// Propagated pointwise error of Z into int Z^p on the leaf.
double eval_error(int n, LD a, LD b, const std::vector<LD>& z_hi, double zerr, int power) {
  if (zerr == 0.0 || power == 0) return 0.0;
  const auto& ghi = quad::gauss_legendre(2 * n);
  LD acc = 0;
  for (int i = 0; i < 2 * n; ++i) acc += ghi.weights[i] * power * powi(std::fabs(z_hi[i]) + zerr, power - 1);
  return static_cast<double>(acc * std::fabs((b - a) / 2)) * zerr;
}

std::vector<LD> powers_of(const std::vector<LD>& z, int p) {
  std::vector<LD> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = powi(z[i], p);
  return out;
}

struct Builder {
  const std::vector<int>& powers;
  const ZSource& source;
  const QuadConfig& cfg;

  Leaf evaluate(LD a, LD b) const {
    const int n = cfg.nodes;
    const auto& glo = quad::gauss_legendre(n);
    const auto& ghi = quad::gauss_legendre(2 * n);
    const LD mid = (a + b) / 2, half = (b - a) / 2;
    Leaf leaf;
    leaf.a = a;
    leaf.b = b;
    leaf.lo.resize(n);
    leaf.hi.resize(2 * n);
    for (int i = 0; i < n; ++i) {
      ZPoint z = source(mid + half * glo.nodes[i]);
      leaf.lo[i] = z.value;
      leaf.zerr = std::max(leaf.zerr, z.err);
    }
    for (int i = 0; i < 2 * n; ++i) {
      ZPoint z = source(mid + half * ghi.nodes[i]);
      leaf.hi[i] = z.value;
      leaf.zerr = std::max(leaf.zerr, z.err);
    }
    return leaf;
  }

  bool accept(const Leaf& leaf) const {
    for (int p : powers) {
      const auto f_lo = powers_of(leaf.lo, p);
      const auto f_hi = powers_of(leaf.hi, p);
      const auto& ghi = quad::gauss_legendre(2 * cfg.nodes);
      const auto& glo = quad::gauss_legendre(cfg.nodes);
      LD ilo = 0, ihi = 0, mag = 0;
      for (int i = 0; i < cfg.nodes; ++i) ilo += glo.weights[i] * f_lo[i];
      for (int i = 0; i < 2 * cfg.nodes; ++i) {
        ihi += ghi.weights[i] * f_hi[i];
        mag += ghi.weights[i] * std::fabs(f_hi[i]);
      }
      const LD half = (leaf.b - leaf.a) / 2;
      const double diff = static_cast<double>(std::fabs(ihi - ilo) * half);
      const double scale = static_cast<double>(mag * half);
      // Below the evaluation noise, splitting cannot help.
      const double noise = eval_error(cfg.nodes, leaf.a, leaf.b, leaf.hi, leaf.zerr, p);
      if (diff > cfg.rel_tol * scale && diff > noise && diff > 1e-300) return false;
    }
    return true;
  }

  void panel(LD a, LD b, int depth, std::vector<Leaf>& out) const {
    Leaf leaf = evaluate(a, b);
    if (depth >= cfg.max_depth || accept(leaf)) {
      out.push_back(std::move(leaf));
      return;
    }
    // Midpoints stay representable as double so that callers can address
    // leaf ends exactly.
    const LD mid = static_cast<double>((a + b) / 2);
    panel(a, mid, depth + 1, out);
    panel(mid, b, depth + 1, out);
  }

  std::vector<Leaf> segment(double lo, double hi) const {
    std::vector<Leaf> out;
    double x = lo;
    while (x < hi) {
      const double w = panel_width(x, cfg);
      const double nb = (hi - x <= w * (1 + 1e-12)) ? hi : x + w;
      panel(x, nb, 0, out);
      x = nb;
    }
    return out;
  }
};

}  // namespace

double panel_width(double t, const QuadConfig& cfg) {
  const double two_pi = 2.0 * M_PI;
  const double at = std::max(std::fabs(t), two_pi * M_E);
  return std::min(cfg.max_panel, cfg.panel_fraction * two_pi / std::log(at / two_pi));
}

ZSource default_source(const PrecisionContext& ctx, const QuadConfig& cfg) {
  const zeta::ZConfig zc = cfg.zeta;
  if (ctx.work_bits() <= 64) {
    return [zc](LD t) {
      auto r = zeta::hardy_z<LD>(std::fabs(t), zc);
      return ZPoint{r.value, r.err};
    };
  }
  return [ctx, zc](LD t) {
    mp::PrecisionScope scope(ctx.work_bits());
    auto r = zeta::hardy_Z(mp::Real(std::fabs(t)), ctx, zc);
    const LD v = static_cast<LD>(r.value);
    return ZPoint{v, r.err + static_cast<double>(std::fabs(v)) * kLdEps};
  };
}

ZSource constant_source(LD value) {
  return [value](LD) { return ZPoint{value, 0.0}; };
}

Estimate<LD> leaf_integral(const Leaf& leaf, int power) {
  const int n = static_cast<int>(leaf.lo.size());
  const auto r = rule_pair(n, leaf.a, leaf.b, powers_of(leaf.lo, power), powers_of(leaf.hi, power));
  return {r.value, r.err + eval_error(n, leaf.a, leaf.b, leaf.hi, leaf.zerr, power)};
}

MomentProfile MomentProfile::build(double a, double b, const std::vector<int>& powers,
                                   const ZSource& source, const QuadConfig& cfg) {
  if (!(a <= b)) throw Error(ErrorKind::invalid_range, "profile range must satisfy a <= b");
  if (cfg.nodes < 2 || cfg.segment <= 0 || cfg.panel_fraction <= 0 || cfg.max_panel <= 0)
    throw Error(ErrorKind::invalid_argument, "invalid quadrature configuration");
  MomentProfile prof;
  prof.begin_ = a;
  prof.end_ = b;
  prof.nodes_ = cfg.nodes;
  if (a == b) return prof;

  std::vector<std::pair<double, double>> segments;
  double lo = a;
  for (long m = static_cast<long>(std::floor(a / cfg.segment)) + 1;; ++m) {
    const double cut = static_cast<double>(m) * cfg.segment;
    if (cut >= b) break;
    if (cut > lo) {
      segments.emplace_back(lo, cut);
      lo = cut;
    }
  }
  segments.emplace_back(lo, b);

  // Warm shared caches before any worker starts.
  quad::gauss_legendre(cfg.nodes);
  quad::gauss_legendre(2 * cfg.nodes);
  node_matrices(cfg.nodes);

  Builder builder{powers, source, cfg};
  std::vector<std::vector<Leaf>> parts(segments.size());
  const unsigned threads = std::max(1u, std::min<unsigned>(cfg.threads, segments.size()));
  if (threads == 1) {
    for (std::size_t i = 0; i < segments.size(); ++i)
      parts[i] = builder.segment(segments[i].first, segments[i].second);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> failures(threads);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = next++; i < segments.size(); i = next++)
            parts[i] = builder.segment(segments[i].first, segments[i].second);
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& f : failures)
      if (f) std::rethrow_exception(f);
  }
  for (auto& p : parts)
    for (auto& leaf : p) prof.leaves_.push_back(std::move(leaf));
  return prof;
}

void MomentProfile::append(const MomentProfile& next) {
  if (leaves_.empty() && begin_ == end_) {
    *this = next;
    return;
  }
  if (next.begin_ != end_ || next.nodes_ != nodes_)
    throw Error(ErrorKind::invalid_range, "appended profile must start where this one ends");
  leaves_.insert(leaves_.end(), next.leaves_.begin(), next.leaves_.end());
  end_ = next.end_;
  std::lock_guard lock(prefix_mutex());
  prefix_.clear();
  prefix_err_.clear();
}

void MomentProfile::ensure_prefix(int power) const {
  std::lock_guard lock(prefix_mutex());
  if (prefix_.count(power)) return;
  std::vector<LD> p(leaves_.size() + 1, 0);
  std::vector<double> e(leaves_.size() + 1, 0.0);
  for (std::size_t i = 0; i < leaves_.size(); ++i) {
    const auto r = leaf_integral(leaves_[i], power);
    p[i + 1] = p[i] + r.value;
    e[i + 1] = e[i] + r.err;
  }
  prefix_[power] = std::move(p);
  prefix_err_[power] = std::move(e);
}

const std::vector<LD>& MomentProfile::prefix(int power) const {
  ensure_prefix(power);
  std::lock_guard lock(prefix_mutex());
  return prefix_.at(power);
}

const std::vector<double>& MomentProfile::prefix_err(int power) const {
  ensure_prefix(power);
  std::lock_guard lock(prefix_mutex());
  return prefix_err_.at(power);
}

std::vector<MomentProfile::Piece> MomentProfile::pieces(double a, double b) const {
  const double slack = 1e-12 * std::max(1.0, std::fabs(end_));
  if (!(a <= b) || a < begin_ - slack || b > end_ + slack)
    throw Error(ErrorKind::invalid_range, "requested range lies outside the computed profile");
  std::vector<Piece> out;
  if (a == b) return out;
  auto first = std::upper_bound(leaves_.begin(), leaves_.end(), static_cast<LD>(a),
                                [](LD x, const Leaf& l) { return x < l.b; });
  for (auto it = first; it != leaves_.end() && it->a < b; ++it) {
    const Leaf& leaf = *it;
    const LD pa = std::max<LD>(leaf.a, a), pb = std::min<LD>(leaf.b, b);
    if (!(pb > pa)) continue;
    Piece piece;
    piece.a = pa;
    piece.b = pb;
    piece.zerr = leaf.zerr;
    if (pa == leaf.a && pb == leaf.b) {
      piece.lo = leaf.lo;
      piece.hi = leaf.hi;
    } else {
      // Re-sample the leaf's interpolant of Z on the sub-interval.
      const int n = static_cast<int>(leaf.lo.size());
      const auto& ex = expansion(2 * n);
      const auto c = ex.coefficients(leaf.hi.data());
      const LD mid = (leaf.a + leaf.b) / 2, half = (leaf.b - leaf.a) / 2;
      const LD smid = (pa + pb) / 2, shalf = (pb - pa) / 2;
      auto sample = [&](const std::vector<LD>& nodes, std::vector<LD>& dst) {
        dst.resize(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i)
          dst[i] = legendre_sum(c, (smid + shalf * nodes[i] - mid) / half);
      };
      sample(quad::gauss_legendre(n).nodes, piece.lo);
      sample(quad::gauss_legendre(2 * n).nodes, piece.hi);
      // Interpolation error: size of the trailing coefficients.
      piece.zerr += static_cast<double>(std::fabs(c[2 * n - 1]) + std::fabs(c[2 * n - 2]));
    }
    out.push_back(std::move(piece));
  }
  return out;
}

IntegralResult MomentProfile::integral(int power, double a, double b) const {
  const auto ps = pieces(a, b);
  std::vector<ErrSum> parts;
  parts.reserve(ps.size());
  for (const auto& p : ps) {
    Leaf l{p.a, p.b, p.lo, p.hi, p.zerr};
    const auto r = leaf_integral(l, power);
    parts.push_back({r.value, r.err});
  }
  const ErrSum s = pairwise(parts, 0, parts.size());
  return {static_cast<double>(s.value), s.err + static_cast<double>(std::fabs(s.value)) * kLdEps * 8,
          static_cast<long>(ps.size()), a, b};
}

Estimate<LD> MomentProfile::cumulative(int power, double x) const {
  const double slack = 1e-12 * std::max(1.0, std::fabs(end_));
  if (x < begin_ - slack || x > end_ + slack)
    throw Error(ErrorKind::invalid_range, "cumulative point lies outside the computed profile");
  if (leaves_.empty() || x <= begin_) return {0, 0.0};
  const auto& p = prefix(power);
  const auto& e = prefix_err(power);
  auto it = std::upper_bound(leaves_.begin(), leaves_.end(), static_cast<LD>(x),
                             [](LD v, const Leaf& l) { return v < l.b; });
  if (it == leaves_.end()) return {p.back(), e.back()};
  const std::size_t i = static_cast<std::size_t>(it - leaves_.begin());
  const Leaf& leaf = *it;
  if (static_cast<LD>(x) <= leaf.a) return {p[i], e[i]};
  const int n = static_cast<int>(leaf.lo.size());
  const auto f = powers_of(leaf.hi, power);
  const auto c = expansion(2 * n).coefficients(f.data());
  const LD half = (leaf.b - leaf.a) / 2;
  const LD u = (2 * static_cast<LD>(x) - leaf.a - leaf.b) / (leaf.b - leaf.a);
  const LD partial = quad::LegendreExpansion::antiderivative(c, u) * half;
  const auto whole = leaf_integral(leaf, power);
  return {p[i] + partial, e[i] + whole.err};
}

IntegralResult MomentProfile::weighted(int power, const std::function<LD(LD)>& w, double a,
                                       double b) const {
  const auto ps = pieces(a, b);
  std::vector<ErrSum> parts;
  parts.reserve(ps.size());
  for (const auto& p : ps) {
    const int n = static_cast<int>(p.lo.size());
    const auto& glo = quad::gauss_legendre(n);
    const auto& ghi = quad::gauss_legendre(2 * n);
    const LD mid = (p.a + p.b) / 2, half = (p.b - p.a) / 2;
    std::vector<LD> f_lo(n), f_hi(2 * n), w_hi(2 * n);
    for (int i = 0; i < n; ++i) f_lo[i] = w(mid + half * glo.nodes[i]) * powi(p.lo[i], power);
    LD wmax = 0;
    for (int i = 0; i < 2 * n; ++i) {
      w_hi[i] = w(mid + half * ghi.nodes[i]);
      f_hi[i] = w_hi[i] * powi(p.hi[i], power);
      wmax = std::max(wmax, std::fabs(w_hi[i]));
    }
    const auto r = rule_pair(n, p.a, p.b, f_lo, f_hi);
    parts.push_back({r.value, r.err + static_cast<double>(wmax) * eval_error(n, p.a, p.b, p.hi, p.zerr, power)});
  }
  const ErrSum s = pairwise(parts, 0, parts.size());
  return {static_cast<double>(s.value), s.err + static_cast<double>(std::fabs(s.value)) * kLdEps * 8,
          static_cast<long>(ps.size()), a, b};
}

ComplexIntegralResult MomentProfile::weighted_complex(int power, const std::function<std::complex<LD>(LD)>& w,
                                                      double a, double b) const {
  const auto ps = pieces(a, b);
  std::vector<CErrSum> parts;
  parts.reserve(ps.size());
  for (const auto& p : ps) {
    const int n = static_cast<int>(p.lo.size());
    const auto& glo = quad::gauss_legendre(n);
    const auto& ghi = quad::gauss_legendre(2 * n);
    const LD mid = (p.a + p.b) / 2, half = (p.b - p.a) / 2;
    std::complex<LD> ilo{0, 0}, ihi{0, 0};
    LD mag = 0, wmax = 0;
    for (int i = 0; i < n; ++i) ilo += glo.weights[i] * w(mid + half * glo.nodes[i]) * powi(p.lo[i], power);
    for (int i = 0; i < 2 * n; ++i) {
      const std::complex<LD> wi = w(mid + half * ghi.nodes[i]);
      const LD f = powi(p.hi[i], power);
      ihi += ghi.weights[i] * wi * f;
      mag += ghi.weights[i] * std::abs(wi) * std::fabs(f);
      wmax = std::max(wmax, std::abs(wi));
    }
    ilo *= half;
    ihi *= half;
    const double err = static_cast<double>(std::abs(ihi - ilo)) +
                       4.0 * n * kLdEps * static_cast<double>(mag * std::fabs(half)) +
                       static_cast<double>(wmax) * eval_error(n, p.a, p.b, p.hi, p.zerr, power);
    parts.push_back({ihi, err});
  }
  const CErrSum s = pairwise(parts, 0, parts.size());
  return {std::complex<double>(static_cast<double>(s.value.real()), static_cast<double>(s.value.imag())),
          s.err + static_cast<double>(std::abs(s.value)) * kLdEps * 8, static_cast<long>(ps.size()), a, b};
}

IntegralResult MomentProfile::functional(int power, double a, double b,
                                         const std::function<LD(LD, LD, LD&)>& g) const {
  const auto ps = pieces(a, b);
  std::vector<ErrSum> parts;
  parts.reserve(ps.size());
  for (const auto& p : ps) {
    const int n = static_cast<int>(p.lo.size());
    const auto& glo = quad::gauss_legendre(n);
    const auto& ghi = quad::gauss_legendre(2 * n);
    const auto& nm = node_matrices(n);
    const LD mid = (p.a + p.b) / 2, half = (p.b - p.a) / 2;
    const auto start = cumulative(power, static_cast<double>(p.a));
    const auto f = powers_of(p.hi, power);
    Leaf l{p.a, p.b, p.lo, p.hi, p.zerr};
    const auto whole = leaf_integral(l, power);
    const double f_err = start.err + whole.err;

    std::vector<LD> g_lo(n), g_hi(2 * n);
    LD dmax = 0;
    for (int m = 0; m < 2 * n; ++m) {
      LD acc = 0;
      for (int i = 0; i < 2 * n; ++i) acc += nm.at_hi[m][i] * f[i];
      LD dg = 0;
      g_hi[m] = g(mid + half * ghi.nodes[m], start.value + acc * half, dg);
      dmax = std::max(dmax, std::fabs(dg));
    }
    for (int m = 0; m < n; ++m) {
      LD acc = 0;
      for (int i = 0; i < 2 * n; ++i) acc += nm.at_lo[m][i] * f[i];
      LD dg = 0;
      g_lo[m] = g(mid + half * glo.nodes[m], start.value + acc * half, dg);
      dmax = std::max(dmax, std::fabs(dg));
    }
    const auto r = rule_pair(n, p.a, p.b, g_lo, g_hi);
    parts.push_back({r.value, r.err + static_cast<double>(dmax * std::fabs(p.b - p.a)) * f_err});
  }
  const ErrSum s = pairwise(parts, 0, parts.size());
  return {static_cast<double>(s.value), s.err + static_cast<double>(std::fabs(s.value)) * kLdEps * 8,
          static_cast<long>(ps.size()), a, b};
}

std::vector<std::pair<LD, Estimate<LD>>> MomentProfile::node_cumulatives(int power) const {
  const auto& p = prefix(power);
  const auto& e = prefix_err(power);
  std::vector<std::pair<LD, Estimate<LD>>> out;
  out.reserve(leaves_.size() * 2 * nodes_);
  const auto& ghi = quad::gauss_legendre(2 * nodes_);
  const auto& nm = node_matrices(nodes_);
  for (std::size_t li = 0; li < leaves_.size(); ++li) {
    const Leaf& leaf = leaves_[li];
    const auto f = powers_of(leaf.hi, power);
    const LD mid = (leaf.a + leaf.b) / 2, half = (leaf.b - leaf.a) / 2;
    const double err = e[li] + leaf_integral(leaf, power).err;
    for (int m = 0; m < 2 * nodes_; ++m) {
      LD acc = 0;
      for (int i = 0; i < 2 * nodes_; ++i) acc += nm.at_hi[m][i] * f[i];
      out.push_back({mid + half * ghi.nodes[m], Estimate<LD>{p[li] + acc * half, err}});
    }
  }
  return out;
}

}  // namespace zetalab::moment
