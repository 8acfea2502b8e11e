#include <random>

#include "doctest.h"
#include "obstrukt/groupext.hpp"

using namespace obstrukt;

namespace {

std::shared_ptr<const FiniteGroup> grp(FiniteGroup g) { return std::make_shared<const FiniteGroup>(std::move(g)); }

std::string series(const HModule& M, int top) {
  std::string s;
  for (int p = 0; p <= top; ++p) s += group_cohomology(M, p).describe() + ";";
  return s;
}

LatticeExtension corpus(const std::string& name) {
  for (auto& c : group_corpus())
    if (c.name == name) return c.ext;
  throw std::out_of_range(name);
}

RatVector random_vector(std::mt19937_64& rng, std::size_t n) {
  RatVector v(n);
  for (auto& x : v) x = static_cast<long>(rng() % 7) - 3;
  return v;
}

}  // namespace

TEST_CASE("groupext: exterior powers") {
  auto C2 = grp(FiniteGroup::cyclic(2));
  auto neg = LatticeExtension::from_generators(2, C2, {{1, IntMatrix{{-1, 0}, {0, -1}}}});
  auto L0 = exterior_power_module(neg, 0);
  CHECK(L0.rank == 1);
  CHECK(L0.action[1] == IntMatrix{{1}});
  CHECK(exterior_power_module(neg, 1).action[1] == IntMatrix{{-1, 0}, {0, -1}});
  CHECK(exterior_power_module(neg, 2).action[1] == IntMatrix{{1}});
  // top power is the determinant
  auto swap = LatticeExtension::from_generators(2, C2, {{1, IntMatrix{{0, 1}, {1, 0}}}});
  CHECK(exterior_power_module(swap, 2).action[1] == IntMatrix{{-1}});
  auto s3 = corpus("s3-perm");
  for (int h = 0; h < s3.H->order(); ++h) {
    auto m = exterior_power_module(s3, 3).action[h](0, 0);
    CHECK(m == determinant(s3.rho[h]));
    exterior_power_module(s3, 2).validate();
  }
  CHECK_THROWS_AS(exterior_power_module(neg, 3), std::out_of_range);
}

TEST_CASE("groupext: group cohomology of Z/2") {
  auto C2 = grp(FiniteGroup::cyclic(2));
  CHECK(series(HModule::trivial(C2), 4) == "Z;0;Z/2;0;Z/2;");
  CHECK(series(HModule::character(C2, {1, -1}), 3) == "0;Z/2;0;Z/2;");
  // the bar route agrees
  auto bar = FinResolution::bar(C2, 5);
  for (int p = 0; p <= 4; ++p)
    CHECK(group_cohomology(HModule::trivial(C2), p, bar).isomorphic(group_cohomology(HModule::trivial(C2), p)));
  // invariants
  auto swap = LatticeExtension::from_generators(2, C2, {{1, IntMatrix{{0, 1}, {1, 0}}}});
  CHECK(group_cohomology(exterior_power_module(swap, 1), 0).describe() == "Z");
  CHECK(group_cohomology(exterior_power_module(swap, 1), 1).describe() == "0");
}

TEST_CASE("groupext: restriction and decomposition data") {
  auto rot = corpus("z4-rot");
  auto full = restrict_to(rot, {0, 1, 2, 3});
  CHECK(full.index == 1);
  auto half = restrict_to(rot, {0, 2});
  CHECK(half.index == 2);
  CHECK(half.ext.rho[1] == IntMatrix{{-1, 0}, {0, -1}});
  auto triv = restrict_to(rot, {0});
  CHECK(triv.index == 4);
  CHECK(triv.ext.trivial_action());
  CHECK_THROWS_AS(restrict_to(rot, {0, 1}), NotASubgroup);

  auto sp = corpus("z2-sign-plus-trivial");
  auto d = decomposition_data(sp, 1);
  CHECK(d.ext1.rho[1] == IntMatrix{{-1}});
  CHECK(d.ext2.rho[1] == IntMatrix{{1}});
  Pairing w = d.wedge(1, 1);
  REQUIRE(w.terms.size() == 1);
  CHECK(w.terms[0] == std::make_tuple(0, 0, 0, 1L));
  w.check_equivariant(exterior_power_module(d.ext1, 1), exterior_power_module(d.ext2, 1), exterior_power_module(sp, 2));
  auto nd = decomposition_data(corpus("z2-neg"), 1);
  CHECK(nd.ext1.rho == nd.ext2.rho);
  auto whole = decomposition_data(sp, 2);
  CHECK(whole.n2 == 0);
  CHECK_THROWS_AS(decomposition_data(corpus("z2-swap"), 1), ActionNotBlockDiagonal);
  // wedge pairings on the full lattice are equivariant
  auto s3 = corpus("s3-perm");
  wedge_pairing(3, 1, 2).check_equivariant(exterior_power_module(s3, 1), exterior_power_module(s3, 2),
                                           exterior_power_module(s3, 3));
  Pairing bad = wedge_pairing(3, 1, 1);
  for (auto& t : bad.terms) std::get<3>(t) = 1;
  CHECK_THROWS_AS(bad.check_equivariant(exterior_power_module(s3, 1), exterior_power_module(s3, 1),
                                        exterior_power_module(s3, 2)),
                  PairingNotEquivariant);
}

TEST_CASE("groupext: LHS complex oracles") {
  auto dih = std::make_shared<const ExtensionContext>(corpus("dihedral"), 5);
  LhsComplex C(dih, HModule::trivial(dih->extension().H));
  C.complex()->validate();
  SpectralSequence ss(C.complex());
  // total H^2 of the infinite dihedral group
  auto conv = ss.convergence_check(2);
  CHECK(conv.ok);
  CHECK(conv.total == "Z/2 + Z/2");
}

TEST_CASE("groupext: E2 identification on the corpus") {
  for (const auto& c : group_corpus()) {
    auto ctx = std::make_shared<const ExtensionContext>(c.ext, 5);
    std::vector<HModule> coeffs{HModule::trivial(c.ext.H)};
    for (int t = 1; t <= c.ext.n; ++t) coeffs.push_back(exterior_power_module(c.ext, t));
    for (const auto& M : coeffs) {
      LhsComplex C(ctx, M);
      SpectralSequence ss(C.complex());
      for (int n = 0; n <= 5; ++n)
        for (int p = 0; p <= n; ++p) {
          INFO(c.name << " " << M.label << " p=" << p << " q=" << n - p);
          CHECK(ss.page(2, p, n - p)->isomorphic(C.e2_expected(p, n - p)));
        }
      for (int n = 0; n <= 4; ++n) CHECK(ss.convergence_check(n).ok);
    }
  }
}

TEST_CASE("groupext: cup product Leibniz rule") {
  std::mt19937_64 rng(5);
  for (const char* name : {"z2-neg", "z3-rot"}) {
    auto ext = corpus(name);
    auto ctx = std::make_shared<const ExtensionContext>(ext, 4);
    LhsComplex U(ctx, exterior_power_module(ext, 1)), V(ctx, HModule::trivial(ext.H)),
        W(ctx, exterior_power_module(ext, 1));
    Pairing pair;
    pair.ru = U.coefficients().rank;
    pair.rv = 1;
    pair.rw = W.coefficients().rank;
    for (int i = 0; i < pair.ru; ++i) pair.terms.emplace_back(i, 0, i, 1);
    pair.check_equivariant(U.coefficients(), V.coefficients(), W.coefficients());
    for (int a = 0; a <= 2; ++a)
      for (int b = 0; a + b + 1 <= 4; ++b) {
        RatVector f = random_vector(rng, U.complex()->rank(a)), g = random_vector(rng, V.complex()->rank(b));
        RatVector lhs = W.coboundary(a + b, cup_product(U, a, f, V, b, g, W, pair));
        RatVector r1 = cup_product(U, a + 1, U.coboundary(a, f), V, b, g, W, pair);
        RatVector r2 = cup_product(U, a, f, V, b + 1, V.coboundary(b, g), W, pair);
        for (std::size_t k = 0; k < lhs.size(); ++k) CHECK(lhs[k] == r1[k] + (a % 2 ? -1 : 1) * r2[k]);
      }
    // unit: 1 u g = g
    RatVector one(V.complex()->rank(0));
    one[0] = 1;
    RatVector g = random_vector(rng, U.complex()->rank(2));
    Pairing left;
    left.ru = 1;
    left.rv = left.rw = U.coefficients().rank;
    for (int i = 0; i < left.rv; ++i) left.terms.emplace_back(0, i, i, 1);
    CHECK(cup_product(V, 0, one, U, 2, g, W, left) == g);
  }
}
