#include "doctest.h"
#include "obstrukt/bounds.hpp"

using namespace obstrukt;

TEST_CASE("binom_gcd: examples and Lucas pattern up to 256") {
  CHECK(binom_gcd(4) == 2);
  CHECK(binom_gcd(6) == 1);
  CHECK(binom_gcd(7) == 7);
  CHECK_THROWS(binom_gcd(1));
  // Pascal's triangle row by row as the oracle.
  std::vector<BigInt> row{1};
  for (long k = 1; k <= 256; ++k) {
    std::vector<BigInt> next(k + 1);
    next[0] = next[k] = 1;
    for (long i = 1; i < k; ++i) next[i] = row[i - 1] + row[i];
    row = std::move(next);
    if (k < 2) continue;
    BigInt g = 0;
    for (long i = 1; i < k; ++i) g = gcd(g, row[i]);
    CHECK(binom_gcd(k) == g);
    auto pp = prime_power(k);
    CHECK(g == (pp ? BigInt(pp->p) : BigInt(1)));
  }
}

TEST_CASE("liebermann_annihilators") {
  auto a = liebermann_annihilators(2, 2, {2});
  CHECK(a.values == std::vector<BigInt>{2});
  a = liebermann_annihilators(3, 2, {2, 3});
  CHECK(a.values == std::vector<BigInt>{4, 18});
  a = liebermann_annihilators(2, 3, {2, 3});
  CHECK(a.values.empty());
  CHECK(!a.note.empty());
}

TEST_CASE("b_bound") {
  for (int r = 2; r <= 10; r += 2)
    for (int t = r; t <= r + 4; ++t) CHECK(b_bound(t, r).value == 2);
  CHECK(b_bound(3, 3).value == 6);
  // lambda(2) = min(3, 2 + ord_2(2)) = 3, lambda(3) = min(3, 1 + 0) = 1
  auto b = b_bound(5, 3);
  CHECK(b.value == 24);
  REQUIRE(b.terms.size() == 2);
  CHECK(b.terms[0].p == 2);
  CHECK(b.terms[0].exponent == 3);
  CHECK(b.terms[1].p == 3);
  CHECK(b.terms[1].exponent == 1);
  // r = 5: primes 2, 3, 5 ((p-1) | 4); lambda(2) = min(t-4, 2 + 2)
  CHECK(b_bound(9, 5).value == 16 * 3 * 5);
}

TEST_CASE("chi_product: examples") {
  auto led = chi_product(3, 5, {});
  CHECK(led.product == 1);
  led = chi_product(2, 4, {{2, true}, {4, true}});
  CHECK(led.entries[0].chi == 2);
  CHECK(led.entries[2].chi == 1);
  CHECK(led.product == 2);
  led = chi_product(3, 9, {{3, true}, {9, true}});
  CHECK(led.entries.front().chi == 3);
  CHECK(led.entries.back().chi == 1);
  CHECK(led.product == 3);
  // k = 6 is not a prime power and nothing precedes it.
  CHECK_THROWS_AS(chi_product(6, 6, {{6, true}}), InconsistentFlags);
  CHECK_THROWS_AS(chi_product(2, 3, {{5, true}}), std::out_of_range);
}

TEST_CASE("chi_product divides b_bound for every flag pattern") {
  for (int r = 2; r <= 5; ++r)
    for (int t = r; t <= 10; ++t) {
      const int span = t - r + 1;
      const BigInt b = b_bound(t, r).value;
      for (unsigned mask = 0; mask < (1u << span); ++mask) {
        std::map<int, bool> flags;
        for (int i = 0; i < span; ++i) flags[r + i] = (mask >> i) & 1u;
        try {
          auto led = chi_product(r, t, flags);
          CHECK(b % led.product == 0);
        } catch (const InconsistentFlags&) {
        }
      }
    }
}
