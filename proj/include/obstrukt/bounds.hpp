#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "obstrukt/matrix.hpp"

namespace obstrukt {

class InconsistentFlags : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PrimePower {
  long p = 0;
  int n = 0;
};

bool is_prime(long n);
std::vector<long> primes_up_to(long n);
// k = p^n with n >= 1, or nullopt.
std::optional<PrimePower> prime_power(long k);
// Exponent of p in n (n != 0).
int ord_p(const BigInt& n, long p);

// gcd of binom(k, i) for 0 < i < k, computed directly. k >= 2.
BigInt binom_gcd(long k);

struct Annihilators {
  std::vector<BigInt> values;  // m^{t-r+1} (m^{r-1} - 1) per requested m
  std::string note;            // set when t < r
};
Annihilators liebermann_annihilators(int t, int r, const std::vector<long>& m_values);

// Primes p with (p - 1) | (r - 1).
std::vector<long> relevant_primes(int r);
int lambda_exponent(int t, int r, long p);
int xi_exponent(int t, int r, long p);

struct BoundTerm {
  long p;
  int exponent;
};
struct BBound {
  BigInt value;
  std::vector<BoundTerm> terms;  // empty for even r
};
BBound b_bound(int t, int r);

struct ChiEntry {
  int k;
  bool v_nonzero;
  BigInt chi;
};
struct ChiLedger {
  int r = 0, t = 0;
  std::vector<ChiEntry> entries;
  BigInt product = 1;
};
// Iterative chi evaluation for k = r..t. Missing flags count as false.
// Throws InconsistentFlags when a nonzero flag sits where the running
// product forces the class to vanish.
ChiLedger chi_product(int r, int t, const std::map<int, bool>& v_flags);

}  // namespace obstrukt
