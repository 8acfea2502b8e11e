#include "doctest.h"
#include "obstrukt/charclass.hpp"

using namespace obstrukt;

namespace {

constexpr int kN = 5;

LatticeExtension group(const std::string& name) {
  for (auto& e : group_corpus())
    if (e.name == name) return e.ext;
  throw std::out_of_range(name);
}

LieExtension lie(const std::string& name) {
  for (auto& e : lie_corpus())
    if (e.name == name) return e;
  throw std::out_of_range(name);
}

bool all_zero(const RatVector& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

bool v_vanishes(const CharClassReport& rep) {
  return rep.trivial && rep.v_order && !rep.v_order->infinite && rep.v_order->value == 1;
}

}  // namespace

TEST_CASE("charclass: identity class") {
  GroupHandle G(group("z2-neg"), kN, "z2-neg");
  // t = 0: the unit of E_2^{0,0} = Z
  auto u = identity_on_page(G, 0, 2);
  const auto& s0 = G.homology_ss(0);
  CHECK(s0.page(2, 0, 0)->isomorphic(FGAbelian{1, {}}));
  CHECK(s0.coordinates(u.cls) == RatVector{1});
  CHECK(v_vanishes(analyze(G, 0, 2)));

  // t = 1: the tautological element of Hom_{Z/2}(L, L) = Z^4 invariants = Z^4
  auto id1 = G.identity_rep(1);
  const auto& C = G.homology_complex(1);
  CHECK(all_zero(C.coboundary(1, id1)));
  const auto& s1 = G.homology_ss(1);
  CHECK(s1.page(2, 0, 1)->free_rank == 4);
  CHECK_FALSE(s1.is_zero(identity_on_page(G, 1, 2).cls));
  // f(e_i) = e_i on the bar-degree-0 generators
  const auto& P = C.resolution();
  for (int id : P.gens(1)) {
    const auto& g = P.gen(id);
    for (int j = 0; j < 2; ++j)
      CHECK(id1[C.index(id, j)] == (g.p == 0 && g.mask == (1u << j) ? 1 : 0));
  }

  LieHandle A(lie("barnes"));
  auto v = A.identity_rep(1);
  const auto& ls = A.homology_ss(1);
  CHECK_FALSE(ls.is_zero(identity_on_page(A, 1, 2).cls));
  CHECK(all_zero(ls.differential(identity_on_page(A, 1, 2).cls).rep));
  CHECK(v.size() > 0);
}

TEST_CASE("charclass: triviality") {
  for (const auto& c : group_corpus()) {
    GroupHandle G(c.ext, kN, c.name);
    CHECK(is_tr_trivial(G, 1, 2).trivial);
    if (c.ext.trivial_action())
      for (int t = 0; t <= 2; ++t)
        for (int r = 2; r <= 4; ++r) CHECK(is_tr_trivial(G, t, r).trivial);
  }
  GroupHandle G(group("z2-neg"), kN);
  CHECK_THROWS_AS(is_tr_trivial(G, kN, 2), TruncationTooSmall);

  LieHandle nil(lie("heis-nil"));
  auto tr = is_tr_trivial(nil, 2, 3);
  CHECK_FALSE(tr.trivial);
  CHECK_FALSE(tr.edge_trivial);
  REQUIRE(tr.witness);
  CHECK(tr.witness->page == 2);
  CHECK(tr.witness->t == 2);
  CHECK_THROWS_AS(characteristic_class(nil, 2, 3), NotTrivial);
  CHECK_THROWS_AS(theta(nil, 2, 3, 0, 0), NotTrivial);
  // the obstruction at r = 2 is the nonzero class itself
  auto v = characteristic_class(nil, 2, 2);
  REQUIRE(v.v_order);
  CHECK(v.v_order->infinite);
  CHECK_FALSE(analyze(nil, 2, 3).trivial);
}

TEST_CASE("charclass: edge and direct routes agree on the corpus") {
  for (const auto& c : group_corpus()) {
    GroupHandle G(c.ext, kN, c.name);
    for (int t = 0; t <= std::min(3, G.kernel_rank()); ++t)
      for (int r = 2; r <= 4; ++r) {
        INFO(c.name << " t=" << t << " r=" << r);
        CHECK(is_tr_trivial(G, t, r).routes_agree);
      }
  }
  for (const auto& e : lie_corpus()) {
    LieHandle L(e);
    for (int t = 0; t <= L.kernel_rank() && t + 1 <= L.max_degree(); ++t)
      for (int r = 2; r <= 4; ++r) {
        INFO(e.name << " t=" << t << " r=" << r);
        CHECK(is_tr_trivial(L, t, r).routes_agree);
      }
  }
}

TEST_CASE("charclass: vanishing classes") {
  GroupHandle triv(group("z2-trivial"), kN);
  for (int t = 0; t <= 2; ++t)
    for (int r = 2; r <= 4; ++r) CHECK(v_vanishes(characteristic_class(triv, t, r)));
  LieHandle red(lie("reductive"));
  LieHandle red2(lie("reductive-sl2"));
  for (const LieHandle* L : {&red, &red2})
    for (int t = 0; t <= 3; ++t)
      for (int r = 2; r <= 4; ++r) {
        INFO(L->name() << " t=" << t << " r=" << r);
        CHECK(v_vanishes(characteristic_class(*L, t, r)));
      }
  // v_r^{r-1} lands in the bottom row, which injects for split extensions
  for (const auto& c : group_corpus()) {
    GroupHandle G(c.ext, kN, c.name);
    for (int r = 2; r <= 3 && r - 1 <= G.kernel_rank(); ++r) CHECK(v_vanishes(analyze(G, r - 1, r)));
  }
}

TEST_CASE("charclass: order divides the bounds") {
  GroupHandle G(group("z2-neg"), kN, "z2-neg");
  auto rep = characteristic_class(G, 2, 2);
  REQUIRE(rep.bound_B);
  CHECK(*rep.bound_B == 2);
  CHECK(rep.divisibility_ok);
  for (const auto& c : group_corpus()) {
    GroupHandle H(c.ext, kN, c.name);
    for (int t = 2; t <= std::min(3, H.kernel_rank()); ++t)
      for (int r = 2; r <= t; ++r) {
        INFO(c.name << " t=" << t << " r=" << r);
        auto a = analyze(H, t, r);
        REQUIRE(a.trivial);
        REQUIRE(a.chi);
        CHECK(a.divisibility_ok);
      }
  }
}

TEST_CASE("charclass: theta") {
  GroupHandle G(group("z2-neg"), kN);
  for (int t = 0; t <= 2; ++t)
    for (int s = 0; s + t + 1 <= kN; ++s)
      for (int i = 0; i < G.coefficient_count(); ++i) {
        INFO("t=" << t << " s=" << s << " M=" << G.coefficient_label(i));
        auto th = theta(G, t, 2, s, i);
        CHECK(th.surjective);
        CHECK(th.source.isomorphic(th.target));
      }
  // (t, 3)-trivial case: the map to the page-3 quotient stays onto
  LieHandle hs(lie("heis-sl2"));
  for (int s = 0; s <= 2; ++s)
    for (int i = 0; i < hs.coefficient_count(); ++i) CHECK(theta(hs, 1, 3, s, i).surjective);
}

TEST_CASE("charclass: obstruction identity") {
  for (const auto& c : group_corpus()) {
    GroupHandle G(c.ext, kN, c.name);
    // s + t <= 4 is the whole range s + t + 1 <= N
    for (int t = 0; t <= std::min(4, G.kernel_rank()); ++t)
      for (int i = 0; i < G.coefficient_count(); ++i) {
        INFO(c.name << " t=" << t << " M=" << G.coefficient_label(i));
        auto rep = verify_obstruction_identity(G, t, 2, i, 10, 3);
        CHECK(rep.ok());
        CHECK(rep.checked > 0);
      }
  }
  GroupHandle Z(group("z3-rot"), kN);
  for (int i = 0; i < Z.coefficient_count(); ++i) CHECK(verify_obstruction_identity(Z, 2, 3, i, 10).ok());
  // nonzero v: both sides are genuinely nonzero for some samples
  LieHandle nil(lie("heis-nil"));
  for (int i = 0; i < nil.coefficient_count(); ++i) {
    INFO("M=" << nil.coefficient_label(i));
    CHECK(verify_obstruction_identity(nil, 2, 2, i, 10).ok());
    CHECK(verify_obstruction_identity(nil, 1, 2, i, 10).ok());
  }
}

TEST_CASE("charclass: naturality") {
  auto z4 = group("z4-rot");
  GroupHandle big(z4, kN, "z4-rot");
  GroupHandle same(z4, kN, "z4-rot");
  auto n = naturality_check(big, same, {0, 1, 2, 3}, 1, 2, 2);
  CHECK(n.maps_v_to_w);
  CHECK(n.transfer_ok);

  auto one = restrict_to(z4, {0});
  GroupHandle triv(one.ext, kN);
  auto nt = naturality_check(big, triv, one.embedding, one.index, 2, 2);
  CHECK(one.index == 4);
  CHECK(nt.maps_v_to_w);
  CHECK(all_zero(nt.w));
  CHECK(nt.transfer_ok);

  auto half = restrict_to(z4, {0, 2});
  GroupHandle sub(half.ext, kN);
  CHECK(half.index == 2);
  for (int t = 1; t <= 2; ++t)
    for (int r = 2; r <= 3; ++r) {
      INFO("t=" << t << " r=" << r);
      auto h = naturality_check(big, sub, half.embedding, half.index, t, r);
      CHECK(h.maps_v_to_w);
      CHECK(h.transfer_ok);
    }

  // restriction of sl2 to its Cartan line
  auto e = lie("heis-sl2");
  LieExtension cartan{"heis-cartan", e.n, LieAlg::abelian(1), {e.phi[2]}};
  LieHandle lbig(e), lsub(cartan);
  RatMatrix sigma(3, 1);
  sigma(2, 0) = 1;
  for (int t = 0; t <= 3; ++t) CHECK(naturality_check(lbig, lsub, sigma, t, 2).maps_v_to_w);
  LieHandle nil(lie("heis-nil"));
  CHECK(naturality_check(nil, nil, RatMatrix::identity(3), 2, 2).maps_v_to_w);
}

TEST_CASE("charclass: decomposition") {
  auto ext = group("z2-sign-plus-trivial");
  for (int t = 0; t <= 3; ++t) {
    INFO("t=" << t);
    auto rep = decomposition_check(ext, 1, t, 2, kN);
    CHECK(rep.formula_ok);
    CHECK(rep.leibniz_checked == 50);
    CHECK(rep.leibniz_failures == 0);
    CHECK(rep.cochain_failures == 0);
  }
  // zero-rank second factor
  auto d = decomposition_check(group("dihedral"), 1, 1, 2, kN);
  CHECK(d.ok());
  DecompositionOptions bad;
  bad.mutate_sign = true;
  auto m = decomposition_check(ext, 1, 2, 2, kN, bad);
  CHECK(m.cochain_failures > 0);
  CHECK_FALSE(m.ok());
  CHECK_THROWS_AS(decomposition_check(group("z2-swap"), 1, 1, 2, kN), ActionNotBlockDiagonal);
}

TEST_CASE("charclass: collapse certificates") {
  GroupHandle triv(group("z2-trivial"), kN);
  CHECK(collapse_certificate(triv, 3).verdict == "COLLAPSES_UP_TO(3)");
  CHECK_THROWS_AS(collapse_certificate(triv, 4), TruncationTooSmall);

  // dim g = 5 caps max_t at 3; the sl2 acting version reaches 4
  LieHandle red(lie("reductive"));
  CHECK(collapse_certificate(red, 3).verdict == "COLLAPSES_UP_TO(3)");
  LieHandle red2(lie("reductive-sl2"));
  auto rc = collapse_certificate(red2, 4);
  CHECK(rc.collapses);
  CHECK(rc.verdict == "COLLAPSES_UP_TO(4)");

  GroupHandle z4(group("z4-rot"), kN);
  auto zc = collapse_certificate(z4, 3);
  CHECK(zc.verdict == "COLLAPSES_UP_TO(3)");
  CHECK(zc.evidence.size() == 3);  // (1,2), (2,2), (2,3)
  for (const auto& ev : zc.evidence) {
    CHECK(ev.zero);
    REQUIRE(ev.order);
    CHECK(ev.order->value == 1);
  }
  CHECK(zc.decisive_t[2] == std::vector<int>{2});
  CHECK(zc.decisive_t[3] == std::vector<int>{3});
  CHECK(zc.decisive_t[4] == std::vector<int>{});

  LieHandle nil(lie("heis-nil"));
  auto nc = collapse_certificate(nil, 3);
  CHECK_FALSE(nc.collapses);
  CHECK(nc.verdict == "WITNESS d_2^{0,2}");
}
