#pragma once

// Divisor-count sieves, shifted divisor sums and Kloosterman sums. All
// integer work is exact; Kloosterman values go through an integer histogram
// of residues before the single floating-point evaluation.

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "zetalab/error.hpp"

namespace zetalab::arith {

inline constexpr long kDefaultSegment = 1L << 22;
inline constexpr std::uint64_t kMaxSieveArgument = 1000000000000000ULL;  // d(n) fits 16 bits below this

/// d(n) for n in [lo, hi), written to out[n - lo]. lo >= 1.
void divisor_segment(std::uint64_t lo, std::uint64_t hi, std::vector<std::uint16_t>& out);

class DivisorTable {
 public:
  std::uint64_t x_max() const { return x_max_; }
  /// d(n), 1 <= n <= x_max.
  unsigned d(std::uint64_t n) const;

 private:
  friend DivisorTable divisor_sieve(std::uint64_t x, long segment);
  std::uint64_t x_max_ = 0;
  long segment_ = kDefaultSegment;
  std::vector<std::vector<std::uint16_t>> blocks_;
};

/// Throws capacity-exceeded when the table would not fit in memory.
DivisorTable divisor_sieve(std::uint64_t x, long segment = kDefaultSegment);

/// Number of divisors by trial division.
unsigned divisor_count_bruteforce(std::uint64_t n);

/// sum_{n <= x} d(n) d(n + f), using two sieve windows offset by f.
/// Needs x >= 1 and 1 <= f <= x.
std::uint64_t additive_divisor(std::uint64_t x, std::uint64_t f, long segment = kDefaultSegment, int threads = 1);

std::uint64_t additive_divisor_bruteforce(std::uint64_t x, std::uint64_t f);

struct KloostermanValue {
  long m = 0, n = 0, c = 1;
  std::complex<double> value;
  bool exact_real_part_when_symmetric = false;  // residue counts pair up, imaginary part exactly 0
};

/// Counts of (m d + n d') mod c over units d; sorted by residue.
using ResidueHistogram = std::vector<std::pair<long, long>>;

/// Twisted multiplicativity over the prime-power factors of c, each factor
/// summed from the definition. S(m, n; 1) = 1.
KloostermanValue kloosterman(long m, long n, long c);

/// Direct summation over d coprime to c.
KloostermanValue kloosterman_bruteforce(long m, long n, long c);

ResidueHistogram kloosterman_histogram(long m, long n, long c);
ResidueHistogram kloosterman_histogram_bruteforce(long m, long n, long c);

struct WeilViolation {
  long m, n, c;
  double value, bound;
};

/// |S(m, n; c)| <= d(c) sqrt(gcd(m, n, c)) sqrt(c) for 1 <= m, n <= mn_max, c <= c_max.
std::vector<WeilViolation> weil_audit(long c_max, long mn_max);

long euler_phi(long c);

}  // namespace zetalab::arith
