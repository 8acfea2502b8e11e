#include "obstrukt/groupext.hpp"

#include <algorithm>

#include "obstrukt/exactlin.hpp"

namespace obstrukt {

HModule HModule::trivial(std::shared_ptr<const FiniteGroup> H, int rank) {
  HModule m;
  m.rank = rank;
  m.action.assign(H->order(), IntMatrix::identity(rank));
  m.label = rank == 1 ? "Z" : "Z^" + std::to_string(rank);
  m.H = std::move(H);
  return m;
}

HModule HModule::character(std::shared_ptr<const FiniteGroup> H, const std::vector<int>& chi, std::string label) {
  if (static_cast<int>(chi.size()) != H->order()) throw ActionNotHomomorphism("character needs one sign per element");
  HModule m;
  m.rank = 1;
  for (int c : chi) {
    if (c != 1 && c != -1) throw ActionNotHomomorphism("character values must be +1 or -1");
    m.action.push_back(IntMatrix{{BigInt(c)}});
  }
  m.label = label.empty() ? "Z(chi)" : std::move(label);
  m.H = std::move(H);
  m.validate();
  return m;
}

void HModule::validate() const {
  if (!H || static_cast<int>(action.size()) != H->order()) throw ActionNotHomomorphism("need one matrix per element");
  for (const auto& a : action)
    if (static_cast<int>(a.rows()) != rank || static_cast<int>(a.cols()) != rank)
      throw ActionNotHomomorphism("action matrix has the wrong size");
  if (!(action[H->identity()] == IntMatrix::identity(rank))) throw ActionNotHomomorphism("identity acts nontrivially");
  for (int a = 0; a < H->order(); ++a)
    for (int b = 0; b < H->order(); ++b)
      if (!(action[a] * action[b] == action[H->mul(a, b)])) throw ActionNotHomomorphism("module action is not a homomorphism");
}

HModule HModule::restricted(std::shared_ptr<const FiniteGroup> K, const std::vector<int>& embed) const {
  HModule m;
  m.rank = rank;
  for (int k = 0; k < K->order(); ++k) m.action.push_back(action[embed[k]]);
  m.label = label;
  m.H = std::move(K);
  return m;
}

IntMatrix exterior_power_matrix(const IntMatrix& m, int t) {
  const int n = static_cast<int>(m.rows());
  auto basis = subsets(n, t);
  IntMatrix out(basis.size(), basis.size());
  auto indices = [n](unsigned mask) {
    std::vector<std::size_t> r;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1u) r.push_back(i);
    return r;
  };
  for (std::size_t a = 0; a < basis.size(); ++a)
    for (std::size_t b = 0; b < basis.size(); ++b)
      out(a, b) = t == 0 ? BigInt(1) : determinant(m.select_rows(indices(basis[a])).select_cols(indices(basis[b])));
  return out;
}

HModule exterior_power_module(const LatticeExtension& ext, int t) {
  if (t < 0 || t > ext.n) throw std::out_of_range("exterior power degree outside 0..n");
  HModule m;
  m.H = ext.H;
  m.rank = static_cast<int>(subsets(ext.n, t).size());
  for (const auto& r : ext.rho) m.action.push_back(exterior_power_matrix(r, t));
  m.label = "Lambda^" + std::to_string(t) + " L";
  return m;
}

HModule hom_module(const HModule& A, const HModule& B) {
  HModule m;
  m.H = A.H;
  m.rank = A.rank * B.rank;
  for (int h = 0; h < A.H->order(); ++h) {
    const IntMatrix& ainv = A.action[A.H->inv(h)];
    const IntMatrix& b = B.action[h];
    IntMatrix act(m.rank, m.rank);
    // f' = b f ainv: f'_{j,i} = sum b_{j,j'} f_{j',i'} ainv_{i',i}
    for (int i = 0; i < A.rank; ++i)
      for (int j = 0; j < B.rank; ++j)
        for (int i2 = 0; i2 < A.rank; ++i2)
          for (int j2 = 0; j2 < B.rank; ++j2) act(i * B.rank + j, i2 * B.rank + j2) = b(j, j2) * ainv(i2, i);
    m.action.push_back(act);
  }
  m.label = "Hom(" + A.label + ", " + B.label + ")";
  return m;
}

HModule tensor_module(const HModule& A, const HModule& B) {
  HModule m;
  m.H = A.H;
  m.rank = A.rank * B.rank;
  for (int h = 0; h < A.H->order(); ++h) {
    IntMatrix act(m.rank, m.rank);
    for (int i = 0; i < A.rank; ++i)
      for (int j = 0; j < B.rank; ++j)
        for (int i2 = 0; i2 < A.rank; ++i2)
          for (int j2 = 0; j2 < B.rank; ++j2)
            act(i * B.rank + j, i2 * B.rank + j2) = A.action[h](i, i2) * B.action[h](j, j2);
    m.action.push_back(act);
  }
  m.label = A.label + " (x) " + B.label;
  return m;
}

namespace {

// delta_p : Hom_H(B_p, M) -> Hom_H(B_{p+1}, M), blocks of rank(M).
IntMatrix fin_coboundary(const FinResolution& B, const HModule& M, int p) {
  const int k = M.rank;
  IntMatrix d(static_cast<std::size_t>(B.rank(p + 1)) * k, static_cast<std::size_t>(B.rank(p)) * k);
  for (int g2 = 0; g2 < B.rank(p + 1); ++g2)
    for (const auto& [t, c] : B.boundary(p + 1, g2))
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) d(g2 * k + i, t.gen * k + j) += c * M.action[t.h](i, j);
  return d;
}

}  // namespace

FGAbelian group_cohomology(const HModule& M, int p, std::shared_ptr<const FinResolution> B) {
  if (p < 0) return FGAbelian{};
  if (!B || B->top() < p + 1) B = FinResolution::standard(M.H, p + 1);
  IntMatrix Z = kernel_basis(fin_coboundary(*B, M, p));
  IntMatrix Bd = p ? fin_coboundary(*B, M, p - 1) : IntMatrix(M.rank, 0);
  return subquotient(static_cast<std::size_t>(B->rank(p)) * M.rank, Z, Bd);
}

RatVector Pairing::apply(const RatVector& u, const RatVector& v) const {
  RatVector w(rw);
  for (const auto& [i, j, k, c] : terms)
    if (u[i] != 0 && v[j] != 0) w[k] += c * u[i] * v[j];
  return w;
}

void Pairing::check_equivariant(const HModule& U, const HModule& V, const HModule& W) const {
  if (U.rank != ru || V.rank != rv || W.rank != rw) throw PairingNotEquivariant("pairing ranks do not match the modules");
  for (int h = 0; h < U.H->order(); ++h)
    for (int i = 0; i < ru; ++i)
      for (int j = 0; j < rv; ++j) {
        RatVector u(ru), v(rv);
        u[i] = 1;
        v[j] = 1;
        RatVector lhs = apply(to_rational(U.action[h]).apply(u), to_rational(V.action[h]).apply(v));
        RatVector rhs = to_rational(W.action[h]).apply(apply(u, v));
        if (lhs != rhs) throw PairingNotEquivariant("pairing is not H-equivariant at element " + U.H->name(h));
      }
}

Pairing wedge_pairing(int n, int i, int j) {
  Pairing p;
  auto si = subsets(n, i), sj = subsets(n, j), sk = subsets(n, i + j);
  p.ru = static_cast<int>(si.size());
  p.rv = static_cast<int>(sj.size());
  p.rw = static_cast<int>(sk.size());
  for (std::size_t a = 0; a < si.size(); ++a)
    for (std::size_t b = 0; b < sj.size(); ++b) {
      if (si[a] & sj[b]) continue;
      int inversions = 0;
      for (int s = 0; s < n; ++s)
        if (si[a] >> s & 1u)
          for (int t = 0; t < s; ++t)
            if (sj[b] >> t & 1u) ++inversions;
      auto k = std::find(sk.begin(), sk.end(), si[a] | sj[b]) - sk.begin();
      p.terms.emplace_back(static_cast<int>(a), static_cast<int>(b), static_cast<int>(k), inversions % 2 ? -1 : 1);
    }
  return p;
}

Pairing evaluation_pairing(int rank_a, int rank_m) {
  Pairing p;
  p.ru = rank_a * rank_m;
  p.rv = rank_a;
  p.rw = rank_m;
  for (int i = 0; i < rank_a; ++i)
    for (int j = 0; j < rank_m; ++j) p.terms.emplace_back(i * rank_m + j, i, j, 1);
  return p;
}

ExtensionContext::ExtensionContext(LatticeExtension ext, int N) : N_(N) {
  if (N < 1) throw TruncationTooSmall("maximum degree must be at least 1");
  auto base = FinResolution::standard(ext.H, N + 1);
  P_ = std::make_shared<const PerturbedResolution>(std::move(ext), base, N + 1);
}

const Diagonal& ExtensionContext::diagonal() const {
  std::call_once(once_, [this] { diag_ = std::make_unique<Diagonal>(P_, N_); });
  return *diag_;
}

LhsComplex::LhsComplex(std::shared_ptr<const ExtensionContext> ctx, HModule M) : ctx_(std::move(ctx)), M_(std::move(M)) {
  M_.validate();
  const PerturbedResolution& P = resolution();
  if (M_.H->table() != P.group().table()) throw IncompatibleActions("coefficient module is over a different group");
  const int k = M_.rank;
  const int top = P.top();
  std::vector<std::vector<int>> levels(top + 1);
  for (int n = 0; n <= top; ++n)
    for (int id : P.gens(n))
      for (int m = 0; m < k; ++m) levels[n].push_back(P.gen(id).p);
  std::vector<RatMatrix> diffs;
  std::vector<RatMatrix> act;
  for (const auto& a : M_.action) act.push_back(to_rational(a));
  for (int n = 0; n <= top; ++n) {
    RatMatrix d(n < top ? levels[n + 1].size() : 0, levels[n].size());
    if (n < top)
      for (int id2 : P.gens(n + 1)) {
        const std::size_t row0 = static_cast<std::size_t>(P.position(id2)) * k;
        for (const auto& [cell, c] : P.d_gen(id2)) {
          const std::size_t col0 = static_cast<std::size_t>(P.position(cell.gen)) * k;
          const RatMatrix& a = act[cell.h];
          for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
              if (a(i, j) != 0) d(row0 + i, col0 + j) += c * a(i, j);
        }
      }
    diffs.push_back(std::move(d));
  }
  fc_ = std::make_shared<const FilteredComplex>(Ring::Z, std::move(levels), std::move(diffs), top - 1);
}

std::size_t LhsComplex::index(int id, int m) const {
  return static_cast<std::size_t>(resolution().position(id)) * M_.rank + m;
}

RatVector LhsComplex::value(int n, const RatVector& f, int id) const {
  (void)n;
  RatVector v(M_.rank);
  for (int m = 0; m < M_.rank; ++m) v[m] = f[index(id, m)];
  return v;
}

RatVector LhsComplex::evaluate(int n, const RatVector& f, const PChain& x) const {
  RatVector out(M_.rank);
  for (const auto& [cell, c] : x) {
    RatVector v = value(n, f, cell.gen);
    bool zero = std::all_of(v.begin(), v.end(), [](const Rational& q) { return q == 0; });
    if (zero) continue;
    RatVector hv = to_rational(M_.action[cell.h]).apply(v);
    for (int m = 0; m < M_.rank; ++m) out[m] += c * hv[m];
  }
  return out;
}

FGAbelian LhsComplex::e2_expected(int p, int q) const {
  const auto& ext = ctx_->extension();
  if (q < 0 || q > ext.n || p < 0) return FGAbelian{};
  return group_cohomology(hom_module(exterior_power_module(ext, q), M_), p, resolution().base_ptr());
}

RatVector cup_product(const LhsComplex& U, int a, const RatVector& f, const LhsComplex& V, int b, const RatVector& g,
                      const LhsComplex& W, const Pairing& pair) {
  if (&U.context() != &W.context() || &V.context() != &W.context())
    throw IncompatibleActions("cup product factors live over different resolutions");
  if (a + b > W.max_degree()) throw TruncationTooSmall("cup product degree beyond the diagonal");
  if (pair.ru != U.coefficients().rank || pair.rv != V.coefficients().rank || pair.rw != W.coefficients().rank)
    throw PairingNotEquivariant("pairing ranks do not match the modules");
  const PerturbedResolution& P = W.resolution();
  const Diagonal& D = W.context().diagonal();
  RatVector out(W.complex()->rank(a + b));
  std::vector<RatMatrix> au, av;
  for (const auto& m : U.coefficients().action) au.push_back(to_rational(m));
  for (const auto& m : V.coefficients().action) av.push_back(to_rational(m));
  for (int id : P.gens(a + b)) {
    RatVector acc(pair.rw);
    for (const auto& [cell, c] : D.on_gen(id)) {
      if (P.gen(cell.a.gen).n != a || P.gen(cell.b.gen).n != b) continue;
      RatVector u = U.value(a, f, cell.a.gen), v = V.value(b, g, cell.b.gen);
      if (std::all_of(u.begin(), u.end(), [](const Rational& x) { return x == 0; })) continue;
      if (std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; })) continue;
      RatVector w = pair.apply(au[cell.a.h].apply(u), av[cell.b.h].apply(v));
      for (int k = 0; k < pair.rw; ++k) acc[k] += c * w[k];
    }
    for (int k = 0; k < pair.rw; ++k) out[W.index(id, k)] = acc[k];
  }
  return out;
}

RatVector pullback(const ComparisonMap& phi, const LhsComplex& target, const LhsComplex& source, int n,
                   const RatVector& f) {
  if (target.coefficients().rank != source.coefficients().rank)
    throw IncompatibleActions("pullback needs the same coefficient module on both sides");
  const PerturbedResolution& S = source.resolution();
  RatVector out(source.complex()->rank(n));
  for (int id : S.gens(n)) {
    PChain x;
    x.add(PCell{id, S.group().identity(), Lat{}}, 1);
    RatVector v = target.evaluate(n, f, phi.apply(x));
    for (int m = 0; m < source.coefficients().rank; ++m) out[source.index(id, m)] = v[m];
  }
  return out;
}

Restriction restrict_to(const LatticeExtension& ext, const std::vector<int>& K) {
  auto [sub, emb] = ext.H->subgroup(K);
  Restriction r;
  r.embedding = emb;
  r.index = ext.H->order() / sub.order();
  r.ext.n = ext.n;
  r.ext.H = std::make_shared<const FiniteGroup>(std::move(sub));
  for (int k : emb) r.ext.rho.push_back(ext.rho[k]);
  r.ext.label = ext.label + "|K";
  r.ext.validate();
  return r;
}

Pairing Decomposition::wedge(int i, int j) const {
  Pairing p;
  auto si = subsets(n1, i), sj = subsets(n2, j), sk = subsets(n1 + n2, i + j);
  p.ru = static_cast<int>(si.size());
  p.rv = static_cast<int>(sj.size());
  p.rw = static_cast<int>(sk.size());
  for (std::size_t a = 0; a < si.size(); ++a)
    for (std::size_t b = 0; b < sj.size(); ++b) {
      unsigned u = si[a] | (sj[b] << n1);
      auto k = std::find(sk.begin(), sk.end(), u) - sk.begin();
      p.terms.emplace_back(static_cast<int>(a), static_cast<int>(b), static_cast<int>(k), 1);
    }
  return p;
}

Decomposition decomposition_data(const LatticeExtension& ext, int n1) {
  if (n1 < 0 || n1 > ext.n) throw std::out_of_range("split point outside 0..n");
  const int n = ext.n, n2 = n - n1;
  for (const auto& m : ext.rho)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if ((i < n1) != (j < n1) && m(i, j) != 0)
          throw ActionNotBlockDiagonal("action does not preserve the splitting L = L1 + L2");
  Decomposition d;
  d.n1 = n1;
  d.n2 = n2;
  d.ext1.n = n1;
  d.ext2.n = n2;
  d.ext1.H = d.ext2.H = ext.H;
  d.ext1.label = ext.label + "/L1";
  d.ext2.label = ext.label + "/L2";
  std::vector<std::size_t> first, second;
  for (int i = 0; i < n; ++i) (i < n1 ? first : second).push_back(i);
  for (const auto& m : ext.rho) {
    d.ext1.rho.push_back(m.select_rows(first).select_cols(first));
    d.ext2.rho.push_back(m.select_rows(second).select_cols(second));
  }
  d.proj1 = IntMatrix::identity(n).select_rows(first);
  d.proj2 = IntMatrix::identity(n).select_rows(second);
  d.ext1.validate();
  d.ext2.validate();
  return d;
}

std::vector<CorpusExtension> group_corpus() {
  auto C2 = std::make_shared<const FiniteGroup>(FiniteGroup::cyclic(2));
  auto C3 = std::make_shared<const FiniteGroup>(FiniteGroup::cyclic(3));
  auto C4 = std::make_shared<const FiniteGroup>(FiniteGroup::cyclic(4));
  auto S3 = std::make_shared<const FiniteGroup>(FiniteGroup::symmetric(3));
  auto mk = [](int n, std::shared_ptr<const FiniteGroup> H, std::map<int, IntMatrix> g, std::string label) {
    return CorpusExtension{label, LatticeExtension::from_generators(n, std::move(H), g, label)};
  };
  // S3 as generated by (0 1) [element 1] and (0 1 2) [element 2].
  IntMatrix swap01{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}};
  IntMatrix cyc{{0, 0, 1}, {1, 0, 0}, {0, 1, 0}};
  return {
      mk(1, C2, {{1, IntMatrix{{-1}}}}, "dihedral"),
      mk(2, C2, {{1, IntMatrix{{-1, 0}, {0, -1}}}}, "z2-neg"),
      mk(2, C2, {{1, IntMatrix{{0, 1}, {1, 0}}}}, "z2-swap"),
      mk(2, C4, {{1, IntMatrix{{0, -1}, {1, 0}}}}, "z4-rot"),
      mk(2, C3, {{1, IntMatrix{{0, -1}, {1, -1}}}}, "z3-rot"),
      mk(3, S3, {{1, swap01}, {2, cyc}}, "s3-perm"),
      mk(2, C2, {{1, IntMatrix{{-1, 0}, {0, 1}}}}, "z2-sign-plus-trivial"),
      mk(2, C2, {{1, IntMatrix::identity(2)}}, "z2-trivial"),
  };
}

}  // namespace obstrukt
