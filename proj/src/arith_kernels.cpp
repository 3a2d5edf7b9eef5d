#include "zetalab/arith_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <thread>

namespace zetalab::arith {
namespace {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

void check_range(std::uint64_t hi) {
  if (hi > kMaxSieveArgument)
    throw Error(ErrorKind::capacity_exceeded, "sieve argument " + std::to_string(hi) + " exceeds 1e15");
}

long mod(long a, long c) {
  const long r = a % c;
  return r < 0 ? r + c : r;
}

long inverse_mod(long a, long c) {
  long g = c, x = 0, g1 = mod(a, c), x1 = 1;
  while (g1 != 0) {
    const long q = g / g1;
    std::tie(g, g1) = std::make_pair(g1, g - q * g1);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  return g == 1 ? mod(x, c) : -1;
}

std::vector<std::pair<long, int>> factor(long c) {
  std::vector<std::pair<long, int>> out;
  for (long p = 2; p * p <= c; ++p) {
    int k = 0;
    while (c % p == 0) {
      c /= p;
      ++k;
    }
    if (k) out.push_back({p, k});
  }
  if (c > 1) out.push_back({c, 1});
  return out;
}

ResidueHistogram to_sparse(const std::vector<long>& dense) {
  ResidueHistogram h;
  for (std::size_t r = 0; r < dense.size(); ++r)
    if (dense[r]) h.push_back({static_cast<long>(r), dense[r]});
  return h;
}

// Direct sum over units mod c.
ResidueHistogram direct_histogram(long m, long n, long c) {
  std::vector<long> dense(c, 0);
  if (c == 1) {
    dense[0] = 1;
    return to_sparse(dense);
  }
  const long mr = mod(m, c), nr = mod(n, c);
  for (long d = 1; d < c; ++d) {
    const long di = inverse_mod(d, c);
    if (di < 0) continue;
    const long r = static_cast<long>((static_cast<__int128>(mr) * d + static_cast<__int128>(nr) * di) % c);
    ++dense[r];
  }
  return to_sparse(dense);
}

KloostermanValue evaluate(long m, long n, long c, const ResidueHistogram& h) {
  // Pair residue r with c - r so the sine parts cancel exactly when counts agree.
  std::map<long, std::pair<long, long>> pairs;
  for (auto [r, cnt] : h) {
    const long k = std::min(r, c - r == c ? 0 : c - r);
    auto& e = pairs[k];
    if (r == k) e.first += cnt;
    else e.second += cnt;
  }
  const long double two_pi = 6.283185307179586476925286766559005768L;
  long double re = 0, im = 0;
  bool symmetric = true;
  for (const auto& [k, cnt] : pairs) {
    const long double a = two_pi * static_cast<long double>(k) / static_cast<long double>(c);
    if (k == 0 || 2 * k == c) {
      re += static_cast<long double>(cnt.first + cnt.second) * (k == 0 ? 1 : -1);
      continue;
    }
    if (4 * k != c) re += static_cast<long double>(cnt.first + cnt.second) * std::cos(a);
    im += static_cast<long double>(cnt.first - cnt.second) * std::sin(a);
    if (cnt.first != cnt.second) symmetric = false;
  }
  KloostermanValue v;
  v.m = m;
  v.n = n;
  v.c = c;
  v.value = {static_cast<double>(re), static_cast<double>(im)};
  v.exact_real_part_when_symmetric = symmetric;
  return v;
}

}  // namespace

void divisor_segment(std::uint64_t lo, std::uint64_t hi, std::vector<std::uint16_t>& out) {
  if (lo < 1) throw Error(ErrorKind::invalid_argument, "divisor segment must start at 1 or later");
  check_range(hi);
  out.assign(hi > lo ? hi - lo : 0, 0);
  if (hi <= lo) return;
  // Each divisor pair a < n/a is counted once from a; squares add 1.
  const std::uint64_t amax = isqrt(hi - 1);
  for (std::uint64_t a = 1; a <= amax; ++a) {
    const std::uint64_t sq = a * a;
    std::uint64_t first = (lo + a - 1) / a * a;
    if (first <= sq) {
      if (sq >= lo && sq < hi) ++out[sq - lo];
      first = sq + a;
    }
    std::uint16_t* base = out.data() - lo;
    for (std::uint64_t k = first; k < hi; k += a) base[k] += 2;
  }
}

unsigned DivisorTable::d(std::uint64_t n) const {
  if (n < 1 || n > x_max_) throw Error(ErrorKind::invalid_range, "n outside the divisor table");
  const std::uint64_t i = n - 1;
  return blocks_[i / segment_][i % segment_];
}

DivisorTable divisor_sieve(std::uint64_t x, long segment) {
  if (x < 1) throw Error(ErrorKind::invalid_argument, "divisor_sieve needs x >= 1");
  if (segment < 1) throw Error(ErrorKind::invalid_argument, "segment size must be positive");
  if (x > (1ULL << 31)) throw Error(ErrorKind::capacity_exceeded, "divisor table above 2^31 entries");
  DivisorTable t;
  t.x_max_ = x;
  t.segment_ = segment;
  for (std::uint64_t lo = 1; lo <= x; lo += segment) {
    std::vector<std::uint16_t> block;
    divisor_segment(lo, std::min<std::uint64_t>(x + 1, lo + segment), block);
    t.blocks_.push_back(std::move(block));
  }
  return t;
}

unsigned divisor_count_bruteforce(std::uint64_t n) {
  unsigned d = 0;
  for (std::uint64_t a = 1; a * a <= n; ++a)
    if (n % a == 0) d += (a * a == n) ? 1 : 2;
  return d;
}

std::uint64_t additive_divisor(std::uint64_t x, std::uint64_t f, long segment, int threads) {
  if (x < 1) throw Error(ErrorKind::invalid_argument, "additive_divisor needs x >= 1");
  if (f < 1 || f > x) throw Error(ErrorKind::invalid_argument, "additive_divisor needs 1 <= f <= x");
  if (segment < 1) throw Error(ErrorKind::invalid_argument, "segment size must be positive");
  check_range(x + f);
  const std::uint64_t S = static_cast<std::uint64_t>(segment);
  const std::uint64_t nseg = (x + S - 1) / S;
  threads = std::max(1, threads);

  auto work = [&](int tid, std::uint64_t& total) {
    std::vector<std::uint16_t> w1, w2;
    for (std::uint64_t s = tid; s < nseg; s += threads) {
      const std::uint64_t lo = 1 + s * S, hi = std::min(x + 1, lo + S);
      std::uint64_t part = 0;
      if (f < S) {
        divisor_segment(lo, hi + f, w1);
        for (std::uint64_t i = 0; i < hi - lo; ++i) part += static_cast<std::uint64_t>(w1[i]) * w1[i + f];
      } else {
        divisor_segment(lo, hi, w1);
        divisor_segment(lo + f, hi + f, w2);
        for (std::uint64_t i = 0; i < hi - lo; ++i) part += static_cast<std::uint64_t>(w1[i]) * w2[i];
      }
      if (__builtin_add_overflow(total, part, &total))
        throw Error(ErrorKind::capacity_exceeded, "additive divisor sum overflows 64 bits");
    }
  };

  std::vector<std::uint64_t> partial(threads, 0);
  if (threads == 1) {
    work(0, partial[0]);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        try {
          work(t, partial[t]);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  std::uint64_t total = 0;
  for (auto p : partial)
    if (__builtin_add_overflow(total, p, &total))
      throw Error(ErrorKind::capacity_exceeded, "additive divisor sum overflows 64 bits");
  return total;
}

std::uint64_t additive_divisor_bruteforce(std::uint64_t x, std::uint64_t f) {
  std::uint64_t s = 0;
  for (std::uint64_t n = 1; n <= x; ++n)
    s += static_cast<std::uint64_t>(divisor_count_bruteforce(n)) * divisor_count_bruteforce(n + f);
  return s;
}

ResidueHistogram kloosterman_histogram_bruteforce(long m, long n, long c) {
  if (c < 1) throw Error(ErrorKind::invalid_argument, "Kloosterman modulus must be positive");
  return direct_histogram(m, n, c);
}

ResidueHistogram kloosterman_histogram(long m, long n, long c) {
  if (c < 1) throw Error(ErrorKind::invalid_argument, "Kloosterman modulus must be positive");
  const auto fac = factor(c);
  if (fac.size() <= 1) return direct_histogram(m, n, c);
  // S(m, n; c) = prod_i S(m u_i, n u_i; q_i), u_i = (c/q_i)^{-1} mod q_i, and
  // e(r_i / q_i) combine to e(sum r_i (c/q_i) / c).
  ResidueHistogram acc = {{0, 1}};
  for (auto [p, k] : fac) {
    long q = 1;
    for (int i = 0; i < k; ++i) q *= p;
    const long rest = c / q;
    const long u = inverse_mod(rest % q, q);
    const long mq = static_cast<long>(static_cast<__int128>(mod(m, q)) * u % q);
    const long nq = static_cast<long>(static_cast<__int128>(mod(n, q)) * u % q);
    const auto h = direct_histogram(mq, nq, q);
    ResidueHistogram next;
    next.reserve(acc.size() * h.size());
    for (auto [r0, c0] : acc)
      for (auto [r1, c1] : h) {
        const long r = static_cast<long>((static_cast<__int128>(r0) + static_cast<__int128>(r1) * rest) % c);
        next.push_back({r, c0 * c1});
      }
    acc = std::move(next);
  }
  std::sort(acc.begin(), acc.end());
  return acc;
}

KloostermanValue kloosterman(long m, long n, long c) { return evaluate(m, n, c, kloosterman_histogram(m, n, c)); }

KloostermanValue kloosterman_bruteforce(long m, long n, long c) {
  return evaluate(m, n, c, kloosterman_histogram_bruteforce(m, n, c));
}

long euler_phi(long c) {
  long r = c;
  for (auto [p, k] : factor(c)) r = r / p * (p - 1);
  return r;
}

std::vector<WeilViolation> weil_audit(long c_max, long mn_max) {
  std::vector<WeilViolation> out;
  for (long c = 1; c <= c_max; ++c) {
    const double dc = divisor_count_bruteforce(static_cast<std::uint64_t>(c));
    for (long m = 1; m <= mn_max; ++m)
      for (long n = 1; n <= mn_max; ++n) {
        const long g = std::gcd(std::gcd(m, n), c);
        const double bound = dc * std::sqrt(static_cast<double>(g)) * std::sqrt(static_cast<double>(c));
        const double v = std::abs(kloosterman(m, n, c).value);
        if (v > bound * (1 + 1e-12)) out.push_back({m, n, c, v, bound});
      }
  }
  return out;
}

}  // namespace zetalab::arith
