#include <algorithm>

#include "doctest.h"
#include "obstrukt/exactlin.hpp"
#include "obstrukt/hopf.hpp"

using namespace obstrukt;

namespace {

// Dual of Q[G]: delta_g delta_h = [g = h] delta_g, Delta delta_g = sum_{ab = g} delta_a (x) delta_b.
FinHopf function_algebra(const FiniteGroup& G) {
  const int n = G.order();
  Tensor3 m(n, n, n), c(n, n, n);
  RatVector u(n, Rational(1)), e(n);
  RatMatrix S(n, n);
  for (int a = 0; a < n; ++a) {
    m.at(a, a, a) = 1;
    S(G.inv(a), a) = 1;
    for (int b = 0; b < n; ++b) c.at(G.mul(a, b), a, b) = 1;
  }
  e[G.identity()] = 1;
  return FinHopf(n, m, c, u, e, S);
}

struct Split {
  std::vector<int> N, H;
};

// A normal subgroup of order n with a complement, found by search.
Split find_split(const FiniteGroup& G, int n) {
  const int h = G.order() / n;
  for (int x = 0; x < G.order(); ++x)
    for (int y = x; y < G.order(); ++y) {
      auto N = G.generated_by({x, y});
      if (static_cast<int>(N.size()) != n || !G.is_normal_subgroup(N)) continue;
      for (int z = 0; z < G.order(); ++z) {
        auto H = G.generated_by({z});
        if (static_cast<int>(H.size()) != h) continue;
        bool meet = false;
        for (int a : H)
          if (a != G.identity() && std::find(N.begin(), N.end(), a) != N.end()) meet = true;
        if (!meet) return {N, H};
      }
    }
  throw std::logic_error("no split found");
}

// Z/m x| Z/k with the generator of Z/k acting by multiplication by q.
FiniteGroup metacyclic(int m, int k, int q) {
  std::vector<int> qp(k, 1);
  for (int b = 1; b < k; ++b) qp[b] = qp[b - 1] * q % m;
  std::vector<std::vector<int>> t(m * k, std::vector<int>(m * k));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < k; ++b)
      for (int a2 = 0; a2 < m; ++a2)
        for (int b2 = 0; b2 < k; ++b2) t[a * k + b][a2 * k + b2] = ((a + qp[b] * a2) % m) * k + (b + b2) % k;
  return FiniteGroup(t);
}

bool invertible(const RatMatrix& m) { return m.rows() == m.cols() && rank_q(m) == m.rows(); }

}  // namespace

TEST_CASE("hopf: group algebras satisfy the axioms") {
  auto one = group_algebra(FiniteGroup::cyclic(1));
  CHECK(one.dim() == 1);
  CHECK(one.check_axioms().all());

  auto z2 = group_algebra(FiniteGroup::cyclic(2));
  CHECK(z2.dim() == 2);
  CHECK(z2.check_axioms().all());
  // Delta g = g (x) g, S g = g
  RatMatrix gg(2, 2);
  gg(1, 1) = 1;
  CHECK(z2.comultiply(z2.basis(1)) == gg);
  CHECK(z2.apply_antipode(z2.basis(1)) == z2.basis(1));

  auto s3 = group_algebra(FiniteGroup::symmetric(3));
  CHECK(s3.dim() == 6);
  CHECK(s3.check_axioms().all());
  CHECK(function_algebra(FiniteGroup::symmetric(3)).check_axioms().all());

  CHECK_THROWS_AS(group_algebra(std::vector<std::vector<int>>{{0, 1}, {1, 1}}), NotAGroup);
  CHECK_THROWS_AS(group_algebra(FiniteGroup::cyclic(25)), DimensionTooLarge);
  CHECK(group_algebra(FiniteGroup::cyclic(25), 30).dim() == 25);
}

TEST_CASE("hopf: axiom checker catches broken structure") {
  auto z3 = group_algebra(FiniteGroup::cyclic(3));
  RatMatrix badS = RatMatrix::identity(3);
  FinHopf noS(3, z3.mult(), z3.comult(), z3.unit(), z3.counit(), badS);
  auto ax = noS.check_axioms();
  CHECK_FALSE(ax.antipode);
  CHECK(ax.associative);
  CHECK(ax.failures() == std::vector<std::string>{"antipode"});

  Tensor3 c = z3.comult();
  c.at(1, 1, 1) = 2;
  auto bad = FinHopf(3, z3.mult(), c, z3.unit(), z3.counit(), z3.antipode()).check_axioms();
  CHECK_FALSE(bad.counital);
  CHECK_FALSE(bad.all());
  CHECK_THROWS_AS(FinHopf(3, z3.mult(), Tensor3(3, 3, 2), z3.unit(), z3.counit(), z3.antipode()),
                  DimensionMismatch);
}

TEST_CASE("hopf: adjoint actions") {
  FiniteGroup S3 = FiniteGroup::symmetric(3);
  auto H = group_algebra(S3);
  auto ad = adjoint_actions(H);
  for (int g = 0; g < 6; ++g)
    for (int h = 0; h < 6; ++h) {
      CHECK(ad.ad_l.fiber(g, h) == H.basis(S3.mul(S3.mul(g, h), S3.inv(g))));
      CHECK(ad.ad_r.fiber(h, g) == H.basis(S3.mul(S3.mul(S3.inv(g), h), g)));
    }
  for (int h = 0; h < 6; ++h) CHECK(ad.ad_l.fiber(S3.identity(), h) == H.basis(h));
  // co_l g = 1 (x) g and co_r g = g (x) 1
  for (int g = 0; g < 6; ++g)
    for (int j = 0; j < 6; ++j)
      for (int k = 0; k < 6; ++k) {
        CHECK(ad.co_l.at(g, j, k) == (j == S3.identity() && k == g ? 1 : 0));
        CHECK(ad.co_r.at(g, j, k) == (j == g && k == S3.identity() ? 1 : 0));
      }
  auto Z4 = group_algebra(FiniteGroup::cyclic(4));
  auto adz = adjoint_actions(Z4);
  for (int g = 0; g < 4; ++g)
    for (int h = 0; h < 4; ++h) CHECK(adz.ad_l.fiber(g, h) == Z4.basis(h));
}

TEST_CASE("hopf: module bialgebra checks") {
  auto A = group_algebra(FiniteGroup::cyclic(3));
  auto C = group_algebra(FiniteGroup::cyclic(2));
  CHECK(check_module_bialgebra(A, C, trivial_action(C, A)).ok());
  // inversion
  auto inv = permutation_action({{0, 1, 2}, {0, 2, 1}});
  CHECK(check_module_bialgebra(A, C, inv).ok());
  // the generator moves 1 (unit not fixed)
  auto shift = permutation_action({{0, 1, 2}, {1, 2, 0}});
  auto rs = check_module_bialgebra(A, C, shift);
  CHECK_FALSE(rs.ok());
  CHECK_FALSE(rs.unit_equivariant);
  // scaling breaks the coalgebra side and (gh).a = g.(h.a)
  ModuleAction scaled = trivial_action(C, A);
  for (int a = 0; a < 3; ++a) scaled.tau.at(1, a, a) = 2;
  auto r2 = check_module_bialgebra(A, C, scaled);
  CHECK_FALSE(r2.module_associative);
  CHECK_FALSE(r2.counit_equivariant);
  CHECK_FALSE(r2.failures().empty());
  CHECK_THROWS_AS(smash_product(A, C, scaled), NotModuleBialgebra);
  CHECK_THROWS_AS(check_module_bialgebra(A, C, ModuleAction{Tensor3(2, 3, 2)}), DimensionMismatch);
}

TEST_CASE("hopf: smash products") {
  auto A = group_algebra(FiniteGroup::cyclic(3));
  auto C = group_algebra(FiniteGroup::cyclic(2));
  // trivial action: componentwise product
  auto t = smash_product(A, C, trivial_action(C, A));
  for (int a = 0; a < 3; ++a)
    for (int g = 0; g < 2; ++g)
      for (int b = 0; b < 3; ++b)
        for (int h = 0; h < 2; ++h) {
          RatVector want(6);
          for (int x = 0; x < 3; ++x)
            for (int y = 0; y < 2; ++y) want[x * 2 + y] = A.mult().at(a, b, x) * C.mult().at(g, h, y);
          CHECK(t.mult.fiber(a * 2 + g, b * 2 + h) == want);
        }
  CHECK(t.hopf_compatible());
  CHECK(t.as_hopf().check_axioms().all());

  // Q[Z/3] x| Q[Z/2] by inversion is Q[S3]
  FiniteGroup S3 = FiniteGroup::symmetric(3);
  auto sp = find_split(S3, 3);
  auto sg = split_group_algebras(S3, sp.N, sp.H);
  auto sm = smash_product(sg.A, sg.C, sg.action);
  CHECK(sm.hopf_compatible());
  CHECK(invertible(sg.iso));
  CHECK(is_algebra_map(sm.mult, sm.unit, sg.B.mult(), sg.B.unit(), sg.iso));
  CHECK(is_coalgebra_map(sm.comult, sm.counit, sg.B.comult(), sg.B.counit(), sg.iso));
  CHECK(sm.as_hopf().check_axioms().all());
  CHECK_THROWS_AS(split_group_algebras(S3, sp.H, sp.N), NotASubgroup);

  // non-cocommutative acting algebra with the trivial action
  auto F = function_algebra(S3);
  auto tf = smash_product(A, F, trivial_action(F, A));
  CHECK(tf.hopf_compatible());
  CHECK(tf.as_hopf().check_axioms().all());
}

TEST_CASE("hopf: split extensions of order at most 12") {
  struct Case {
    const char* name;
    FiniteGroup G;
    int n;
  };
  std::vector<Case> cases{
      {"S3", FiniteGroup::symmetric(3), 3},
      {"Z2xZ3", metacyclic(3, 2, 1), 3},
      {"D4", FiniteGroup::from_permutations({{1, 2, 3, 0}, {3, 2, 1, 0}}), 4},
      {"D5", metacyclic(5, 2, 4), 5},
      {"A4", FiniteGroup::from_permutations({{1, 2, 0, 3}, {1, 0, 3, 2}}), 4},
      {"D6", metacyclic(6, 2, 5), 6},
      {"Z3xZ4", metacyclic(3, 4, 2), 3},
  };
  for (const auto& c : cases) {
    INFO(c.name);
    auto sp = find_split(c.G, c.n);
    auto sg = split_group_algebras(c.G, sp.N, sp.H);
    CHECK(check_module_bialgebra(sg.A, sg.C, sg.action).ok());
    auto sm = smash_product(sg.A, sg.C, sg.action);
    CHECK(sm.hopf_compatible());
    CHECK(invertible(sg.iso));
    CHECK(is_algebra_map(sm.mult, sm.unit, sg.B.mult(), sg.B.unit(), sg.iso));
    CHECK(is_coalgebra_map(sm.comult, sm.counit, sg.B.comult(), sg.B.counit(), sg.iso));
    // {1 (x) c} is an A-basis: sum_c (a_c (x) 1)(1 (x) c) hits everything once
    const int na = sg.A.dim(), nc = sg.C.dim();
    const int one_a = static_cast<int>(std::find(sg.A.unit().begin(), sg.A.unit().end(), 1) - sg.A.unit().begin());
    const int one_c = static_cast<int>(std::find(sg.C.unit().begin(), sg.C.unit().end(), 1) - sg.C.unit().begin());
    RatMatrix freeness(na * nc, na * nc);
    for (int a = 0; a < na; ++a)
      for (int g = 0; g < nc; ++g) {
        RatVector x = sm.mult.fiber(a * nc + one_c, one_a * nc + g);
        for (int k = 0; k < na * nc; ++k) freeness(k, a * nc + g) = x[k];
      }
    CHECK(invertible(freeness));
  }
}

TEST_CASE("hopf: normality identity") {
  FiniteGroup S3 = FiniteGroup::symmetric(3);
  auto L = group_algebra(S3);
  CHECK(check_normality_identity(L, L, RatMatrix::identity(6)));
  auto sp = find_split(S3, 3);
  auto [z3, e3] = S3.subgroup(sp.N);
  CHECK(check_normality_identity(group_algebra(z3), L, group_algebra_map(3, 6, e3)));
  auto [z2, e2] = S3.subgroup(sp.H);
  CHECK_FALSE(check_normality_identity(group_algebra(z2), L, group_algebra_map(2, 6, e2)));
  CHECK_THROWS_AS(check_normality_identity(group_algebra(z2), L, RatMatrix(6, 3)), DimensionMismatch);
}
