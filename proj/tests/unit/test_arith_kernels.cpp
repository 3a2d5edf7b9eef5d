#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numeric>

#include "zetalab/arith_kernels.hpp"

using namespace zetalab;
using namespace zetalab::arith;

TEST_CASE("divisor sieve") {
  const auto t = divisor_sieve(10000, 997);  // odd segment size exercises block edges
  CHECK(t.d(1) == 1);
  CHECK(t.d(12) == 6);
  unsigned s = 0;
  for (int n = 1; n <= 8; ++n) s += t.d(n);
  CHECK(s == 20);
  int bad = 0;
  for (std::uint64_t n = 1; n <= 10000; ++n)
    if (t.d(n) != divisor_count_bruteforce(n)) ++bad;
  CHECK(bad == 0);
  for (std::uint64_t p : {2u, 3u, 9973u}) CHECK(t.d(p) == 2);
  for (auto [a, b] : {std::pair<unsigned, unsigned>{4, 9}, {7, 360}, {16, 625}})
    CHECK(t.d(a * b) == t.d(a) * t.d(b));
  CHECK_THROWS_AS(t.d(10001), Error);
  CHECK_THROWS_AS(divisor_sieve(0), Error);

  std::vector<std::uint16_t> seg;
  divisor_segment(999999000000ULL, 999999000100ULL, seg);
  for (std::uint64_t i = 0; i < 100; i += 17) CHECK(seg[i] == divisor_count_bruteforce(999999000000ULL + i));
  try {
    divisor_segment(1, kMaxSieveArgument + 2, seg);
    FAIL("expected capacity error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::capacity_exceeded);
  }
}

TEST_CASE("additive divisor sums") {
  CHECK(additive_divisor(5, 1) == 26);
  CHECK(additive_divisor(1, 1) == 2);
  for (std::uint64_t f = 1; f <= 50; ++f) {
    const auto ref = additive_divisor_bruteforce(10000, f);
    CHECK(additive_divisor(10000, f, 1000) == ref);
    CHECK(additive_divisor(10000, f, 37) == ref);  // f >= segment takes the two-window path
  }
  CHECK(additive_divisor(10000, 7, 1000, 3) == additive_divisor(10000, 7, 1000, 1));
  std::uint64_t prev = 0;
  for (std::uint64_t x = 1; x <= 300; ++x) {
    const auto v = additive_divisor(x, 1, 64);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK_THROWS_AS(additive_divisor(10, 11), Error);
  CHECK_THROWS_AS(additive_divisor(10, 0), Error);
}

TEST_CASE("Kloosterman sums") {
  CHECK(kloosterman(1, 1, 1).value == std::complex<double>(1, 0));
  CHECK(kloosterman_bruteforce(5, 3, 1).value == std::complex<double>(1, 0));
  CHECK(std::abs(kloosterman(1, 1, 2).value - 1.0) < 1e-15);
  CHECK(std::abs(kloosterman(1, 1, 3).value + 1.0) < 1e-15);
  CHECK(std::abs(kloosterman(1, 0, 4).value) < 1e-15);

  int mismatched = 0, asymmetric = 0, imag = 0;
  for (long c = 1; c <= 100; ++c)
    for (long m = 1; m <= 10; ++m)
      for (long n = 1; n <= 10; ++n) {
        const auto fast = kloosterman(m, n, c), slow = kloosterman_bruteforce(m, n, c);
        if (kloosterman_histogram(m, n, c) != kloosterman_histogram_bruteforce(m, n, c)) ++mismatched;
        if (fast.value != slow.value) ++mismatched;
        if (fast.value != kloosterman(n, m, c).value) ++asymmetric;
        if (!fast.exact_real_part_when_symmetric || fast.value.imag() != 0.0) ++imag;
      }
  CHECK(mismatched == 0);
  CHECK(asymmetric == 0);
  CHECK(imag == 0);

  for (long c : {1L, 7L, 12L, 97L, 100L, 360L})
    CHECK(std::abs(kloosterman(0, 0, c).value - static_cast<double>(euler_phi(c))) < 1e-12);
  CHECK(std::abs(kloosterman(-3, 5, 35).value - kloosterman(32, 5, 35).value) < 1e-15);
  CHECK_THROWS_AS(kloosterman(1, 1, 0), Error);
}

TEST_CASE("Weil bound audit") {
  const auto v = weil_audit(500, 10);
  CHECK(v.empty());
}
