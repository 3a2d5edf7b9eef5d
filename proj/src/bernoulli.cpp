#include <boost/multiprecision/gmp.hpp>

#include <mutex>
#include <vector>

#include "zetalab/mp_core.hpp"

namespace zetalab::mp {
namespace {

using boost::multiprecision::mpq_rational;
using boost::multiprecision::mpz_int;

// Tangent numbers by the Brent-Harvey in-place recurrence, then
// B_{2n} = (-1)^{n-1} 2n T_n / (4^n (4^n - 1)).
std::vector<mpq_rational> compute_bernoulli(unsigned count) {
  std::vector<mpz_int> tangent(count + 1);
  tangent[1] = 1;
  for (unsigned k = 2; k <= count; ++k) tangent[k] = (k - 1) * tangent[k - 1];
  for (unsigned k = 2; k <= count; ++k)
    for (unsigned j = k; j <= count; ++j)
      tangent[j] = (j - k) * tangent[j - 1] + (j - k + 2) * tangent[j];

  std::vector<mpq_rational> b(count + 1);
  b[0] = 1;
  for (unsigned n = 1; n <= count; ++n) {
    mpz_int four_n = mpz_int(1) << (2 * n);
    mpq_rational v(mpz_int(2 * n) * tangent[n], four_n * (four_n - 1));
    b[n] = (n % 2 == 1) ? v : mpq_rational(-v);
  }
  return b;
}

struct BernoulliCache {
  std::mutex mutex;
  std::vector<mpq_rational> values;

  mpq_rational get(unsigned k) {
    std::lock_guard lock(mutex);
    if (k >= values.size()) {
      unsigned want = 64;
      while (want <= k) want *= 2;
      values = compute_bernoulli(want);
    }
    return values[k];
  }
};

BernoulliCache& cache() {
  static BernoulliCache c;
  return c;
}

// Numerators and denominators exceed the double range; go through MPFR.
long double to_long_double(const mpq_rational& q) {
  mpfr_t r;
  mpfr_init2(r, 128);
  mpfr_set_q(r, q.backend().data(), MPFR_RNDN);
  long double v = mpfr_get_ld(r, MPFR_RNDN);
  mpfr_clear(r);
  return v;
}

template <class T>
const std::vector<T>& builtin_table() {
  static const std::vector<T> table = [] {
    std::vector<T> t(256);
    for (unsigned k = 0; k < t.size(); ++k) t[k] = static_cast<T>(to_long_double(cache().get(k)));
    return t;
  }();
  return table;
}

}  // namespace

template <class T>
T bernoulli_b2n(unsigned k) {
  if constexpr (is_real_v<T>) {
    return Real(cache().get(k));
  } else {
    const auto& table = builtin_table<T>();
    if (k < table.size()) return table[k];
    return static_cast<T>(to_long_double(cache().get(k)));
  }
}

template double bernoulli_b2n<double>(unsigned);
template long double bernoulli_b2n<long double>(unsigned);
template Real bernoulli_b2n<Real>(unsigned);

}  // namespace zetalab::mp
