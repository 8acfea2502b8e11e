#include "obstrukt/hopf.hpp"

#include <algorithm>

#include "obstrukt/exactlin.hpp"

namespace obstrukt {

namespace {

// Bare structure maps, shared by FinHopf and SmashProduct.
struct Structure {
  int dim;
  const Tensor3& m;
  const Tensor3& c;
  const RatVector& u;
  const RatVector& e;
};

RatVector mul(const Tensor3& m, const RatVector& x, const RatVector& y) {
  RatVector out(m.n2);
  for (int i = 0; i < m.n0; ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < m.n1; ++j) {
      if (y[j] == 0) continue;
      const Rational xy = x[i] * y[j];
      for (int k = 0; k < m.n2; ++k)
        if (m.at(i, j, k) != 0) out[k] += xy * m.at(i, j, k);
    }
  }
  return out;
}

RatMatrix comul(const Tensor3& c, const RatVector& x) {
  RatMatrix out(c.n1, c.n2);
  for (int i = 0; i < c.n0; ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < c.n1; ++j)
      for (int k = 0; k < c.n2; ++k)
        if (c.at(i, j, k) != 0) out(j, k) += x[i] * c.at(i, j, k);
  }
  return out;
}

Rational dot(const RatVector& a, const RatVector& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

RatVector unit_vec(int n, int i) {
  RatVector v(n);
  v[i] = 1;
  return v;
}

// Product in H (x) H of two tensors given as coefficient matrices.
RatMatrix mul_tensor(const Tensor3& m, const RatMatrix& x, const RatMatrix& y) {
  const int n = m.n2;
  RatMatrix out(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (x(a, b) == 0) continue;
      for (int a2 = 0; a2 < n; ++a2)
        for (int b2 = 0; b2 < n; ++b2) {
          if (y(a2, b2) == 0) continue;
          const Rational w = x(a, b) * y(a2, b2);
          for (int p = 0; p < n; ++p) {
            if (m.at(a, a2, p) == 0) continue;
            for (int q = 0; q < n; ++q)
              if (m.at(b, b2, q) != 0) out(p, q) += w * m.at(a, a2, p) * m.at(b, b2, q);
          }
        }
    }
  return out;
}

bool associative(const Structure& s) {
  for (int i = 0; i < s.dim; ++i)
    for (int j = 0; j < s.dim; ++j) {
      RatVector ij = s.m.fiber(i, j);
      for (int k = 0; k < s.dim; ++k)
        if (mul(s.m, ij, unit_vec(s.dim, k)) != mul(s.m, unit_vec(s.dim, i), s.m.fiber(j, k))) return false;
    }
  return true;
}

bool unital(const Structure& s) {
  for (int i = 0; i < s.dim; ++i) {
    RatVector e = unit_vec(s.dim, i);
    if (mul(s.m, s.u, e) != e || mul(s.m, e, s.u) != e) return false;
  }
  return true;
}

bool coassociative(const Structure& s) {
  const int n = s.dim;
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int cc = 0; cc < n; ++cc) {
          Rational left = 0, right = 0;
          for (int j = 0; j < n; ++j) {
            left += s.c.at(i, j, cc) * s.c.at(j, a, b);
            right += s.c.at(i, a, j) * s.c.at(j, b, cc);
          }
          if (left != right) return false;
        }
  return true;
}

bool counital(const Structure& s) {
  for (int i = 0; i < s.dim; ++i)
    for (int k = 0; k < s.dim; ++k) {
      Rational l = 0, r = 0;
      for (int j = 0; j < s.dim; ++j) {
        l += s.e[j] * s.c.at(i, j, k);
        r += s.e[j] * s.c.at(i, k, j);
      }
      if (l != (i == k ? 1 : 0) || r != (i == k ? 1 : 0)) return false;
    }
  return true;
}

bool comult_multiplicative(const Structure& s) {
  RatMatrix uu(s.dim, s.dim);
  for (int a = 0; a < s.dim; ++a)
    for (int b = 0; b < s.dim; ++b) uu(a, b) = s.u[a] * s.u[b];
  if (comul(s.c, s.u) != uu) return false;
  std::vector<RatMatrix> d;
  for (int i = 0; i < s.dim; ++i) d.push_back(comul(s.c, unit_vec(s.dim, i)));
  for (int i = 0; i < s.dim; ++i)
    for (int j = 0; j < s.dim; ++j)
      if (comul(s.c, s.m.fiber(i, j)) != mul_tensor(s.m, d[i], d[j])) return false;
  return true;
}

bool counit_multiplicative(const Structure& s) {
  if (dot(s.e, s.u) != 1) return false;
  for (int i = 0; i < s.dim; ++i)
    for (int j = 0; j < s.dim; ++j)
      if (dot(s.e, s.m.fiber(i, j)) != s.e[i] * s.e[j]) return false;
  return true;
}

// m (S (x) id) Delta = u e, and with the factors swapped when `right`.
bool antipode_law(const Structure& s, const RatMatrix& S, bool right) {
  for (int i = 0; i < s.dim; ++i) {
    RatVector acc(s.dim);
    for (int j = 0; j < s.dim; ++j)
      for (int k = 0; k < s.dim; ++k) {
        const Rational& w = s.c.at(i, j, k);
        if (w == 0) continue;
        RatVector p = right ? mul(s.m, unit_vec(s.dim, j), S.column(k)) : mul(s.m, S.column(j), unit_vec(s.dim, k));
        for (int o = 0; o < s.dim; ++o) acc[o] += w * p[o];
      }
    for (int o = 0; o < s.dim; ++o)
      if (acc[o] != s.e[i] * s.u[o]) return false;
  }
  return true;
}

// Left convolution inverse of the identity, checked to be two-sided.
std::optional<RatMatrix> solve_antipode(const Structure& s) {
  const int n = s.dim;
  RatMatrix sys(static_cast<std::size_t>(n) * n, static_cast<std::size_t>(n) * n);
  RatVector rhs(static_cast<std::size_t>(n) * n);
  for (int x = 0; x < n; ++x) {
    for (int o = 0; o < n; ++o) rhs[x * n + o] = s.e[x] * s.u[o];
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const Rational& w = s.c.at(x, j, k);
        if (w == 0) continue;
        for (int l = 0; l < n; ++l)
          for (int o = 0; o < n; ++o)
            if (s.m.at(l, k, o) != 0) sys(x * n + o, j * n + l) += w * s.m.at(l, k, o);
      }
  }
  auto sol = solve_q(sys, rhs);
  if (!sol) return std::nullopt;
  RatMatrix S(n, n);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) S(l, j) = (*sol)[j * n + l];
  if (!antipode_law(s, S, false) || !antipode_law(s, S, true)) return std::nullopt;
  return S;
}

void check_shape(const Tensor3& t, int a, int b, int c, const char* what) {
  if (t.n0 != a || t.n1 != b || t.n2 != c) throw DimensionMismatch(std::string(what) + " has the wrong shape");
}

}  // namespace

RatVector Tensor3::fiber(int i, int j) const {
  RatVector v(n2);
  for (int k = 0; k < n2; ++k) v[k] = at(i, j, k);
  return v;
}

std::vector<std::string> HopfAxioms::failures() const {
  std::vector<std::string> out;
  if (!associative) out.push_back("associativity");
  if (!unital) out.push_back("unit");
  if (!coassociative) out.push_back("coassociativity");
  if (!counital) out.push_back("counit");
  if (!comult_multiplicative) out.push_back("comultiplication is not an algebra map");
  if (!counit_multiplicative) out.push_back("counit is not an algebra map");
  if (!antipode) out.push_back("antipode");
  return out;
}

FinHopf::FinHopf(int dim, Tensor3 mult, Tensor3 comult, RatVector unit, RatVector counit, RatMatrix antipode,
                 int max_dim)
    : dim_(dim),
      mult_(std::move(mult)),
      comult_(std::move(comult)),
      unit_(std::move(unit)),
      counit_(std::move(counit)),
      S_(std::move(antipode)) {
  if (dim > max_dim)
    throw DimensionTooLarge("dimension " + std::to_string(dim) + " exceeds cap " + std::to_string(max_dim));
  check_shape(mult_, dim, dim, dim, "multiplication");
  check_shape(comult_, dim, dim, dim, "comultiplication");
  if (static_cast<int>(unit_.size()) != dim || static_cast<int>(counit_.size()) != dim)
    throw DimensionMismatch("unit or counit has the wrong length");
  if (static_cast<int>(S_.rows()) != dim || static_cast<int>(S_.cols()) != dim)
    throw DimensionMismatch("antipode has the wrong shape");
}

RatVector FinHopf::basis(int i) const { return unit_vec(dim_, i); }
RatVector FinHopf::multiply(const RatVector& x, const RatVector& y) const { return mul(mult_, x, y); }
RatMatrix FinHopf::comultiply(const RatVector& x) const { return comul(comult_, x); }
Rational FinHopf::epsilon(const RatVector& x) const { return dot(counit_, x); }

HopfAxioms FinHopf::check_axioms() const {
  Structure s{dim_, mult_, comult_, unit_, counit_};
  HopfAxioms a;
  a.associative = associative(s);
  a.unital = unital(s);
  a.coassociative = coassociative(s);
  a.counital = counital(s);
  a.comult_multiplicative = comult_multiplicative(s);
  a.counit_multiplicative = counit_multiplicative(s);
  a.antipode = antipode_law(s, S_, false) && antipode_law(s, S_, true);
  return a;
}

FinHopf group_algebra(const FiniteGroup& G, int max_dim) {
  const int n = G.order();
  if (n > max_dim) throw DimensionTooLarge("group of order " + std::to_string(n) + " exceeds cap");
  Tensor3 m(n, n, n), c(n, n, n);
  RatVector u(n), e(n, Rational(1));
  RatMatrix S(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) m.at(a, b, G.mul(a, b)) = 1;
    c.at(a, a, a) = 1;
    S(G.inv(a), a) = 1;
  }
  u[G.identity()] = 1;
  return FinHopf(n, std::move(m), std::move(c), std::move(u), std::move(e), std::move(S), max_dim);
}

FinHopf group_algebra(const std::vector<std::vector<int>>& mult_table, int max_dim) {
  if (static_cast<int>(mult_table.size()) > max_dim) throw DimensionTooLarge("group table exceeds cap");
  return group_algebra(FiniteGroup(mult_table), max_dim);
}

AdjointActions adjoint_actions(const FinHopf& H) {
  const int n = H.dim();
  const Tensor3& c = H.comult();
  std::vector<RatVector> S(n);
  for (int j = 0; j < n; ++j) S[j] = H.antipode().column(j);
  AdjointActions out{Tensor3(n, n, n), Tensor3(n, n, n), Tensor3(n, n, n), Tensor3(n, n, n)};
  for (int g = 0; g < n; ++g)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const Rational& w = c.at(g, j, k);
        if (w == 0) continue;
        for (int h = 0; h < n; ++h) {
          RatVector l = H.multiply(H.multiply(H.basis(j), H.basis(h)), S[k]);
          RatVector r = H.multiply(H.multiply(S[j], H.basis(h)), H.basis(k));
          for (int o = 0; o < n; ++o) {
            out.ad_l.at(g, h, o) += w * l[o];
            out.ad_r.at(h, g, o) += w * r[o];
          }
        }
      }
  // (id (x) Delta) Delta g = sum D(a, b, cc) e_a (x) e_b (x) e_cc
  for (int g = 0; g < n; ++g)
    for (int a = 0; a < n; ++a)
      for (int k = 0; k < n; ++k) {
        if (c.at(g, a, k) == 0) continue;
        for (int b = 0; b < n; ++b)
          for (int cc = 0; cc < n; ++cc) {
            const Rational w = c.at(g, a, k) * c.at(k, b, cc);
            if (w == 0) continue;
            RatVector l = H.multiply(H.basis(a), S[cc]);
            RatVector r = H.multiply(S[a], H.basis(cc));
            for (int o = 0; o < n; ++o) {
              out.co_l.at(g, o, b) += w * l[o];
              out.co_r.at(g, b, o) += w * r[o];
            }
          }
      }
  return out;
}

RatVector ModuleAction::act(const RatVector& c, const RatVector& a) const { return mul(tau, c, a); }

ModuleAction trivial_action(const FinHopf& C, const FinHopf& A) {
  ModuleAction act{Tensor3(C.dim(), A.dim(), A.dim())};
  for (int c = 0; c < C.dim(); ++c)
    for (int a = 0; a < A.dim(); ++a) act.tau.at(c, a, a) = C.counit()[c];
  return act;
}

ModuleAction permutation_action(const std::vector<std::vector<int>>& perm) {
  const int nc = static_cast<int>(perm.size());
  const int na = nc ? static_cast<int>(perm[0].size()) : 0;
  ModuleAction act{Tensor3(nc, na, na)};
  for (int c = 0; c < nc; ++c) {
    if (static_cast<int>(perm[c].size()) != na) throw DimensionMismatch("ragged permutation action");
    for (int a = 0; a < na; ++a) act.tau.at(c, a, perm[c][a]) = 1;
  }
  return act;
}

std::vector<std::string> ModuleBialgebraReport::failures() const {
  std::vector<std::string> out;
  if (!module_associative) out.push_back("(gh).a != g.(h.a)");
  if (!module_unital) out.push_back("1.a != a");
  if (!mult_equivariant) out.push_back("multiplication not equivariant");
  if (!unit_equivariant) out.push_back("unit not equivariant");
  if (!comult_equivariant) out.push_back("comultiplication not equivariant");
  if (!counit_equivariant) out.push_back("counit not equivariant");
  return out;
}

ModuleBialgebraReport check_module_bialgebra(const FinHopf& A, const FinHopf& C, const ModuleAction& act) {
  check_shape(act.tau, C.dim(), A.dim(), A.dim(), "action");
  const int na = A.dim(), nc = C.dim();
  ModuleBialgebraReport rep;
  auto on = [&](const RatVector& c, const RatVector& a) { return act.act(c, a); };

  rep.module_associative = true;
  for (int g = 0; g < nc && rep.module_associative; ++g)
    for (int h = 0; h < nc && rep.module_associative; ++h)
      for (int a = 0; a < na; ++a)
        if (on(C.mult().fiber(g, h), A.basis(a)) != on(C.basis(g), on(C.basis(h), A.basis(a)))) {
          rep.module_associative = false;
          break;
        }
  rep.module_unital = true;
  for (int a = 0; a < na; ++a)
    if (on(C.unit(), A.basis(a)) != A.basis(a)) rep.module_unital = false;

  rep.mult_equivariant = rep.unit_equivariant = rep.comult_equivariant = rep.counit_equivariant = true;
  for (int g = 0; g < nc; ++g) {
    const RatMatrix dg = C.comultiply(C.basis(g));
    RatVector eu = A.unit();
    for (auto& x : eu) x *= C.counit()[g];
    if (on(C.basis(g), A.unit()) != eu) rep.unit_equivariant = false;
    for (int a = 0; a < na; ++a) {
      const RatVector ga = on(C.basis(g), A.basis(a));
      if (A.epsilon(ga) != C.counit()[g] * A.counit()[a]) rep.counit_equivariant = false;
      // Delta(g.a) against sum (g1.a1) (x) (g2.a2)
      RatMatrix rhs(na, na);
      const RatMatrix da = A.comultiply(A.basis(a));
      for (int j = 0; j < nc; ++j)
        for (int k = 0; k < nc; ++k) {
          if (dg(j, k) == 0) continue;
          for (int p = 0; p < na; ++p)
            for (int q = 0; q < na; ++q) {
              if (da(p, q) == 0) continue;
              const RatVector x = on(C.basis(j), A.basis(p)), y = on(C.basis(k), A.basis(q));
              const Rational w = dg(j, k) * da(p, q);
              for (int s = 0; s < na; ++s)
                for (int t = 0; t < na; ++t) rhs(s, t) += w * x[s] * y[t];
            }
        }
      if (A.comultiply(ga) != rhs) rep.comult_equivariant = false;
      for (int b = 0; b < na && rep.mult_equivariant; ++b) {
        RatVector r(na);
        for (int j = 0; j < nc; ++j)
          for (int k = 0; k < nc; ++k) {
            if (dg(j, k) == 0) continue;
            RatVector p = A.multiply(on(C.basis(j), A.basis(a)), on(C.basis(k), A.basis(b)));
            for (int s = 0; s < na; ++s) r[s] += dg(j, k) * p[s];
          }
        if (on(C.basis(g), A.mult().fiber(a, b)) != r) rep.mult_equivariant = false;
      }
    }
  }
  return rep;
}

SmashProduct smash_product(const FinHopf& A, const FinHopf& C, const ModuleAction& act) {
  ModuleBialgebraReport rep = check_module_bialgebra(A, C, act);
  if (!rep.ok()) {
    std::string msg = "not a module bialgebra:";
    for (const auto& f : rep.failures()) msg += " " + f + ";";
    throw NotModuleBialgebra(msg);
  }
  const int na = A.dim(), nc = C.dim(), n = na * nc;
  SmashProduct sp;
  sp.dim_a = na;
  sp.dim_c = nc;
  sp.mult = Tensor3(n, n, n);
  sp.comult = Tensor3(n, n, n);
  sp.unit = RatVector(n);
  sp.counit = RatVector(n);
  for (int a = 0; a < na; ++a)
    for (int g = 0; g < nc; ++g) {
      sp.unit[a * nc + g] = A.unit()[a] * C.unit()[g];
      sp.counit[a * nc + g] = A.counit()[a] * C.counit()[g];
    }
  // (a (x) g)(b (x) h) = sum a (g1 . b) (x) g2 h
  for (int a = 0; a < na; ++a)
    for (int g = 0; g < nc; ++g) {
      const RatMatrix dg = C.comultiply(C.basis(g));
      for (int b = 0; b < na; ++b)
        for (int h = 0; h < nc; ++h) {
          const int row = a * nc + g, col = b * nc + h;
          for (int j = 0; j < nc; ++j)
            for (int k = 0; k < nc; ++k) {
              if (dg(j, k) == 0) continue;
              const RatVector left = A.multiply(A.basis(a), act.act(C.basis(j), A.basis(b)));
              const RatVector right = C.mult().fiber(k, h);
              for (int x = 0; x < na; ++x) {
                if (left[x] == 0) continue;
                for (int y = 0; y < nc; ++y)
                  if (right[y] != 0) sp.mult.at(row, col, x * nc + y) += dg(j, k) * left[x] * right[y];
              }
            }
        }
    }
  for (int a = 0; a < na; ++a)
    for (int g = 0; g < nc; ++g)
      for (int p = 0; p < na; ++p)
        for (int q = 0; q < na; ++q) {
          if (A.comult().at(a, p, q) == 0) continue;
          for (int j = 0; j < nc; ++j)
            for (int k = 0; k < nc; ++k)
              sp.comult.at(a * nc + g, p * nc + j, q * nc + k) = A.comult().at(a, p, q) * C.comult().at(g, j, k);
        }
  Structure s{n, sp.mult, sp.comult, sp.unit, sp.counit};
  sp.comult_multiplicative = comult_multiplicative(s);
  sp.counit_multiplicative = counit_multiplicative(s);
  sp.antipode = solve_antipode(s);
  return sp;
}

FinHopf SmashProduct::as_hopf(int max_dim) const {
  if (!hopf_compatible()) throw NotAHopfAlgebra("smash product is not a Hopf algebra with the tensor coalgebra");
  return FinHopf(dim_a * dim_c, mult, comult, unit, counit, *antipode, max_dim);
}

bool is_algebra_map(const Tensor3& mx, const RatVector& ux, const Tensor3& my, const RatVector& uy,
                    const RatMatrix& f) {
  if (f.apply(ux) != uy) return false;
  const int n = mx.n0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (f.apply(mx.fiber(i, j)) != mul(my, f.column(i), f.column(j))) return false;
  return true;
}

bool is_coalgebra_map(const Tensor3& cx, const RatVector& ex, const Tensor3& cy, const RatVector& ey,
                      const RatMatrix& f) {
  const int n = cx.n0, m = cy.n0;
  for (int i = 0; i < n; ++i) {
    if (dot(ey, f.column(i)) != ex[i]) return false;
    RatMatrix push = f * comul(cx, unit_vec(n, i)) * f.transpose();
    if (push != comul(cy, f.column(i))) return false;
  }
  return m == static_cast<int>(f.rows());
}

SplitGroupAlgebras split_group_algebras(const FiniteGroup& G, const std::vector<int>& N, const std::vector<int>& H) {
  if (!G.is_normal_subgroup(N)) throw NotASubgroup("N is not a normal subgroup");
  if (!G.is_subgroup(H)) throw NotASubgroup("H is not a subgroup");
  if (N.size() * H.size() != static_cast<std::size_t>(G.order())) throw NotASubgroup("|N| |H| != |G|");
  for (int x : N)
    if (x != G.identity() && std::find(H.begin(), H.end(), x) != H.end())
      throw NotASubgroup("N and H intersect nontrivially");
  auto [gn, en] = G.subgroup(N);
  auto [gh, eh] = G.subgroup(H);
  SplitGroupAlgebras out;
  out.A = group_algebra(gn);
  out.C = group_algebra(gh);
  out.B = group_algebra(G);
  std::vector<int> local(G.order(), -1);
  for (std::size_t i = 0; i < en.size(); ++i) local[en[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> perm(eh.size(), std::vector<int>(en.size()));
  for (std::size_t h = 0; h < eh.size(); ++h)
    for (std::size_t n = 0; n < en.size(); ++n) perm[h][n] = local[G.mul(G.mul(eh[h], en[n]), G.inv(eh[h]))];
  out.action = permutation_action(perm);
  const int nc = static_cast<int>(eh.size());
  out.iso = RatMatrix(G.order(), en.size() * eh.size());
  for (std::size_t n = 0; n < en.size(); ++n)
    for (int h = 0; h < nc; ++h) out.iso(G.mul(en[n], eh[h]), n * nc + h) = 1;
  return out;
}

RatMatrix group_algebra_map(int dim_k, int dim_g, const std::vector<int>& embedding) {
  if (static_cast<int>(embedding.size()) != dim_k) throw DimensionMismatch("embedding length");
  RatMatrix u(dim_g, dim_k);
  for (int k = 0; k < dim_k; ++k) u(embedding[k], k) = 1;
  return u;
}

bool check_normality_identity(const FinHopf& H, const FinHopf& L, const RatMatrix& u) {
  if (static_cast<int>(u.rows()) != L.dim() || static_cast<int>(u.cols()) != H.dim())
    throw DimensionMismatch("u has the wrong shape");
  // H+ is spanned by e_i - eps(e_i) 1
  std::vector<RatVector> cols_l, cols_r;
  for (int i = 0; i < H.dim(); ++i) {
    RatVector x = H.basis(i);
    for (int k = 0; k < H.dim(); ++k) x[k] -= H.counit()[i] * H.unit()[k];
    const RatVector ux = u.apply(x);
    for (int l = 0; l < L.dim(); ++l) {
      cols_l.push_back(L.multiply(ux, L.basis(l)));
      cols_r.push_back(L.multiply(L.basis(l), ux));
    }
  }
  auto to_matrix = [&](const std::vector<RatVector>& cols) {
    RatMatrix m(L.dim(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (int i = 0; i < L.dim(); ++i) m(i, j) = cols[j][i];
    return m;
  };
  const RatMatrix left = to_matrix(cols_l), right = to_matrix(cols_r);
  const std::size_t rl = rank_q(left), rr = rank_q(right);
  return rl == rr && rank_q(left.hcat(right)) == rl;
}

}  // namespace obstrukt
