#include <functional>
#include <random>
#include <set>

#include "doctest.h"
#include "obstrukt/exactlin.hpp"

using namespace obstrukt;

namespace {

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int bound) {
  std::uniform_int_distribution<int> d(-bound, bound);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

bool is_diagonal_chain(const IntMatrix& d) {
  BigInt prev = 1;
  bool seen_zero = false;
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t j = 0; j < d.cols(); ++j) {
      if (i != j && d(i, j) != 0) return false;
      if (i == j) {
        if (d(i, i) < 0) return false;
        if (d(i, i) == 0) {
          seen_zero = true;
        } else {
          if (seen_zero) return false;
          if (d(i, i) % prev != 0) return false;
          prev = d(i, i);
        }
      }
    }
  return true;
}

// gcd of all k x k minors, by brute-force enumeration of row/column subsets.
BigInt determinantal_divisor(const IntMatrix& m, std::size_t k) {
  std::vector<std::vector<std::size_t>> rs, cs;
  std::function<void(std::size_t, std::size_t, std::vector<std::size_t>&, std::vector<std::vector<std::size_t>>&)>
      choose = [&](std::size_t n, std::size_t start, std::vector<std::size_t>& cur,
                   std::vector<std::vector<std::size_t>>& out) {
        if (cur.size() == k) {
          out.push_back(cur);
          return;
        }
        for (std::size_t i = start; i < n; ++i) {
          cur.push_back(i);
          choose(n, i + 1, cur, out);
          cur.pop_back();
        }
      };
  std::vector<std::size_t> cur;
  choose(m.rows(), 0, cur, rs);
  choose(m.cols(), 0, cur, cs);
  BigInt g = 0;
  for (auto& r : rs)
    for (auto& c : cs) g = gcd(g, determinant(m.select_rows(r).select_cols(c)));
  return g;
}

}  // namespace

TEST_CASE("smith: worked examples") {
  auto s = smith(IntMatrix{{2}});
  CHECK(s.D == IntMatrix{{2}});
  CHECK(s.U == IntMatrix{{1}});
  CHECK(s.V == IntMatrix{{1}});

  IntMatrix z(2, 3);
  CHECK(smith(z).D == z);

  IntMatrix m{{2, 4}, {6, 8}};
  s = smith(m);
  CHECK(s.D == IntMatrix{{2, 0}, {0, 4}});
  CHECK(s.U * m * s.V == s.D);
}

TEST_CASE("smith: random matrices against determinantal divisors") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 150; ++trial) {
    std::size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
    IntMatrix m = random_matrix(rng, r, c, 6);
    if (trial % 5 == 0 && r > 1) {
      for (std::size_t j = 0; j < c; ++j) m(r - 1, j) = 2 * m(0, j);  // force rank drop
    }
    auto s = smith(m);
    REQUIRE(s.U * m * s.V == s.D);
    CHECK(abs(determinant(s.U)) == 1);
    CHECK(abs(determinant(s.V)) == 1);
    CHECK(is_diagonal_chain(s.D));
    BigInt prod = 1;
    for (std::size_t k = 1; k <= std::min(r, c); ++k) {
      prod *= s.D(k - 1, k - 1);
      CHECK(determinantal_divisor(m, k) == prod);
    }
  }
}

TEST_CASE("cokernel: worked examples") {
  auto g = cokernel(IntMatrix{{2}});
  CHECK(g.torsion == std::vector<BigInt>{2});
  CHECK(g.free_rank == 0);
  g = cokernel(IntMatrix{{0}});
  CHECK(g.free_rank == 1);
  CHECK(g.torsion.empty());
  g = cokernel(IntMatrix{{2, 0}, {0, 3}});
  CHECK(g.torsion == std::vector<BigInt>{6});
  CHECK(g.free_rank == 0);
}

TEST_CASE("cokernel: element counts match enumeration of the quotient") {
  // For nonsingular M with D = |det M|, Z^m / MZ^m = (Z/D)^m / (image of M mod D).
  std::mt19937_64 rng(11);
  int checked = 0;
  while (checked < 40) {
    std::size_t m = 2 + rng() % 2;
    IntMatrix a = random_matrix(rng, m, m, 4);
    BigInt det = abs(determinant(a));
    if (det == 0 || det > 30) continue;
    const long D = det.get_si();
    auto enc = [&](const std::vector<long>& v) {
      long k = 0;
      for (auto x : v) k = k * D + x;
      return k;
    };
    std::set<long> sub{0};
    std::vector<std::vector<long>> frontier{std::vector<long>(m, 0)};
    while (!frontier.empty()) {
      auto v = frontier.back();
      frontier.pop_back();
      for (std::size_t j = 0; j < m; ++j) {
        std::vector<long> w(m);
        for (std::size_t i = 0; i < m; ++i) w[i] = ((v[i] + a(i, j).get_si()) % D + D) % D;
        if (sub.insert(enc(w)).second) frontier.push_back(w);
      }
    }
    long total = 1;
    for (std::size_t i = 0; i < m; ++i) total *= D;
    long order = total / static_cast<long>(sub.size());
    auto g = cokernel(a);
    BigInt gorder = 1;
    for (auto& d : g.torsion) gorder *= d;
    CHECK(g.free_rank == 0);
    CHECK(gorder == order);
    // k-torsion counts determine the invariant factors.
    for (long k = 2; k <= 6; ++k) {
      long killed = 0;
      std::vector<long> x(m, 0);
      std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == m) {
          std::vector<long> kx(m);
          for (std::size_t t = 0; t < m; ++t) kx[t] = (k * x[t]) % D;
          if (sub.count(enc(kx))) ++killed;
          return;
        }
        for (long v = 0; v < D; ++v) {
          x[i] = v;
          rec(i + 1);
        }
      };
      rec(0);
      BigInt expect = 1;
      for (auto& d : g.torsion) expect *= gcd(BigInt(k), d);
      CHECK(BigInt(killed / static_cast<long>(sub.size())) == expect);
    }
    ++checked;
  }
}

TEST_CASE("subquotient: worked examples") {
  auto g = subquotient(2, IntMatrix::identity(2), IntMatrix{{2}, {0}});
  CHECK(g.torsion == std::vector<BigInt>{2});
  CHECK(g.free_rank == 1);
  RatMatrix pl = *g.project * *g.lift;
  CHECK(pl == RatMatrix::identity(2));

  IntMatrix z{{1, 2}, {3, 4}};
  CHECK(subquotient(2, z, z).is_trivial());

  g = subquotient(2, IntMatrix{{1}, {1}}, IntMatrix(2, 0));
  CHECK(g.free_rank == 1);
  CHECK(g.torsion.empty());

  CHECK_THROWS_AS(subquotient(2, IntMatrix{{1}, {1}}, IntMatrix{{1}, {0}}), ContainmentViolation);
  CHECK_THROWS_AS(subquotient(2, IntMatrix{{2}, {0}}, IntMatrix{{1}, {0}}), ContainmentViolation);
}

TEST_CASE("subquotient: invariant under unimodular basis changes") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 2 + rng() % 3;
    IntMatrix z = random_matrix(rng, n, n, 3);
    IntMatrix c = random_matrix(rng, n, 2, 3);
    IntMatrix b = z * c;
    auto g1 = subquotient(n, z, b);
    // Random unimodular column operations on both generating sets.
    IntMatrix z2 = z, b2 = b;
    for (int k = 0; k < 6; ++k) {
      std::size_t i = rng() % n, j = rng() % n;
      if (i != j) z2.add_col(i, j, BigInt(static_cast<long>(rng() % 5) - 2));
      if (b2.cols() > 1) b2.add_col(0, 1, BigInt(static_cast<long>(rng() % 5) - 2));
    }
    auto g2 = subquotient(n, z2, b2);
    CHECK(g1.isomorphic(g2));
    CHECK(*g1.project * *g1.lift == RatMatrix::identity(g1.ngens()));
  }
}

TEST_CASE("element_order: examples and minimality") {
  FGAbelian z2;
  z2.torsion = {2};
  CHECK(element_order(IntVector{0}, z2).value == 1);
  CHECK(element_order(IntVector{1}, z2).value == 2);
  FGAbelian z6;
  z6.torsion = {6};
  CHECK(element_order(IntVector{2}, z6).value == 3);
  FGAbelian mixed;
  mixed.torsion = {2, 4};
  mixed.free_rank = 1;
  CHECK(element_order(IntVector{0, 0, 1}, mixed).infinite);
  CHECK_THROWS_AS(element_order(IntVector{1}, mixed), DimensionMismatch);

  FGAbelian g;
  g.torsion = {2, 6, 12};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 6; ++b)
      for (int c = 0; c < 12; ++c) {
        IntVector x{a, b, c};
        auto o = element_order(x, g);
        long found = 0;
        for (long k = 1; k <= 100 && !found; ++k) {
          RatVector kx{Rational(k * a), Rational(k * b), Rational(k * c)};
          if (g.is_zero(kx)) found = k;
        }
        CHECK(o.value == found);
      }
}

TEST_CASE("rational helpers") {
  RatMatrix m{{1, 2, 3}, {2, 4, 6}};
  CHECK(rank_q(m) == 1);
  RatMatrix k = kernel_basis_q(m);
  CHECK(k.cols() == 2);
  CHECK((m * k).is_zero());
  auto x = solve_q(m, RatVector{1, 2});
  REQUIRE(x);
  CHECK(m.apply(*x) == RatVector{1, 2});
  CHECK(!solve_q(m, RatVector{1, 3}));

  auto g = subquotient_q(3, RatMatrix::identity(3), RatMatrix{{1}, {1}, {0}});
  CHECK(g.free_rank == 2);
  CHECK(*g.project * *g.lift == RatMatrix::identity(2));
  RatVector v{1, 1, 0};
  CHECK(g.is_zero(g.coordinates_of(v)));
}

TEST_CASE("solve_integer and kernels") {
  IntMatrix m{{2, 4}, {6, 8}};
  CHECK(!solve_integer(m, IntVector{1, 0}));
  auto x = solve_integer(m, IntVector{2, 6});
  REQUIRE(x);
  CHECK(m.apply(*x) == IntVector{2, 6});
  IntMatrix a{{1, 2, 3}};
  IntMatrix k = kernel_basis(a);
  CHECK(k.cols() == 2);
  CHECK((a * k).is_zero());
  // saturation: every integer kernel vector is an integer combination
  IntMatrix b{{4, 2}};
  IntMatrix kb = kernel_basis(b);
  CHECK(solve_integer(kb, IntVector{1, -2}));
  CHECK(image_basis(IntMatrix{{2, 4}, {0, 0}}).cols() == 1);
}
