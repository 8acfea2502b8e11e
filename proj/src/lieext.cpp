#include "obstrukt/lieext.hpp"

#include "obstrukt/exactlin.hpp"
#include "obstrukt/subsets.hpp"

namespace obstrukt {

namespace {

// Sign of sorting the sequence (l, rest...) where rest is sorted and l not in it.
int insertion_sign(unsigned rest, int l) {
  return __builtin_popcount(rest & ((1u << l) - 1)) % 2 ? -1 : 1;
}

std::vector<int> bits(unsigned mask, int n) {
  std::vector<int> r;
  for (int i = 0; i < n; ++i)
    if (mask >> i & 1u) r.push_back(i);
  return r;
}

RatMatrix columns_to_matrix(std::size_t rows, const std::vector<RatVector>& cols) {
  return RatMatrix::from_columns(rows, cols);
}

// Derivation D of V extended to Lambda^t V.
RatMatrix lambda_derivation(const RatMatrix& D, int n, int t) {
  auto basis = subsets(n, t);
  RatMatrix out(basis.size(), basis.size());
  for (std::size_t b = 0; b < basis.size(); ++b)
    for (int s : bits(basis[b], n)) {
      unsigned rest = basis[b] & ~(1u << s);
      for (int k = 0; k < n; ++k) {
        if (D(k, s) == 0 || (rest >> k & 1u)) continue;
        // replace s by k in place: sign counts elements of rest strictly between
        int lo = std::min(s, k), hi = std::max(s, k);
        unsigned between = rest & (((1u << hi) - 1) & ~((1u << (lo + 1)) - 1));
        int sign = __builtin_popcount(between) % 2 ? -1 : 1;
        out(subset_index(basis, rest | (1u << k)), b) += sign * D(k, s);
      }
    }
  return out;
}

// CE boundary Lambda^t n -> Lambda^{t-1} n.
RatMatrix chain_boundary(const LieAlg& n, int t) {
  const int d = n.dim();
  auto src = subsets(d, t), dst = subsets(d, t - 1);
  RatMatrix out(dst.size(), src.size());
  if (t < 2) return out;
  for (std::size_t b = 0; b < src.size(); ++b) {
    auto idx = bits(src[b], d);
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = i + 1; j < idx.size(); ++j) {
        unsigned rest = src[b] & ~(1u << idx[i]) & ~(1u << idx[j]);
        int sign = (i + j) % 2 ? -1 : 1;
        const RatVector& br = n.bracket(idx[i], idx[j]);
        for (int l = 0; l < d; ++l) {
          if (br[l] == 0 || (rest >> l & 1u)) continue;
          out(subset_index(dst, rest | (1u << l)), b) += sign * insertion_sign(rest, l) * br[l];
        }
      }
  }
  return out;
}

struct Quotient {
  RatMatrix reps;  // ambient coordinates of quotient basis, columns
  RatMatrix proj;  // quotient coordinates of ambient vectors
};

// Z / B inside Q^ambient with B contained in Z.
Quotient quotient(std::size_t ambient, const RatMatrix& Z, const RatMatrix& B) {
  std::vector<RatVector> cols;
  RatMatrix bb = image_basis_q(B);
  for (std::size_t j = 0; j < bb.cols(); ++j) cols.push_back(bb.column(j));
  const std::size_t nb = cols.size();
  auto try_add = [&](const RatVector& v) {
    cols.push_back(v);
    if (rank_q(columns_to_matrix(ambient, cols)) < cols.size()) {
      cols.pop_back();
      return false;
    }
    return true;
  };
  std::vector<RatVector> reps;
  for (std::size_t j = 0; j < Z.cols(); ++j)
    if (try_add(Z.column(j))) reps.push_back(Z.column(j));
  for (std::size_t i = 0; i < ambient; ++i) {
    RatVector e(ambient);
    e[i] = 1;
    try_add(e);
  }
  RatMatrix T = columns_to_matrix(ambient, cols);
  RatMatrix Tinv = *inverse_q(T);
  Quotient q;
  q.reps = columns_to_matrix(ambient, reps);
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < reps.size(); ++i) rows.push_back(nb + i);
  q.proj = Tinv.select_rows(rows);
  return q;
}

RatMatrix induced(const Quotient& q, const RatMatrix& action) { return q.proj * action * q.reps; }

Rational trace(const RatMatrix& m) {
  Rational s = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) s += m(i, i);
  return s;
}

RatMatrix commutator(const RatMatrix& a, const RatMatrix& b) { return a * b - b * a; }

RatVector flatten(const RatMatrix& m) { return m.data(); }

RatMatrix unflatten(const RatVector& v, std::size_t n) {
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = v[i * n + j];
  return m;
}

}  // namespace

LieAlg::LieAlg(int dim, std::vector<std::vector<RatVector>> c) : dim_(dim), c_(std::move(c)) {
  if (static_cast<int>(c_.size()) != dim_) throw NotALieAlgebra("structure constants have the wrong shape");
  for (auto& row : c_) {
    if (static_cast<int>(row.size()) != dim_) throw NotALieAlgebra("structure constants have the wrong shape");
    for (auto& v : row)
      if (static_cast<int>(v.size()) != dim_) throw NotALieAlgebra("structure constants have the wrong shape");
  }
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k)
        if (c_[i][j][k] != -c_[j][i][k]) throw NotALieAlgebra("bracket is not antisymmetric");
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k) {
        RatVector ei(dim_), ej(dim_), ek(dim_);
        ei[i] = ej[j] = ek[k] = 1;
        RatVector s = bracket(ei, bracket(ej, ek));
        RatVector t = bracket(ej, bracket(ek, ei));
        RatVector u = bracket(ek, bracket(ei, ej));
        for (int l = 0; l < dim_; ++l)
          if (s[l] + t[l] + u[l] != 0) throw NotALieAlgebra("Jacobi identity fails");
      }
}

LieAlg LieAlg::abelian(int n) {
  return LieAlg(n, std::vector<std::vector<RatVector>>(n, std::vector<RatVector>(n, RatVector(n))));
}

LieAlg LieAlg::sl2() {
  std::vector<std::vector<RatVector>> c(3, std::vector<RatVector>(3, RatVector(3)));
  c[0][1][2] = 1;   // [e, f] = h
  c[1][0][2] = -1;
  c[2][0][0] = 2;   // [h, e] = 2e
  c[0][2][0] = -2;
  c[2][1][1] = -2;  // [h, f] = -2f
  c[1][2][1] = 2;
  return LieAlg(3, c);
}

LieAlg LieAlg::heis3() {
  std::vector<std::vector<RatVector>> c(3, std::vector<RatVector>(3, RatVector(3)));
  c[0][1][2] = 1;
  c[1][0][2] = -1;
  return LieAlg(3, c);
}

LieAlg LieAlg::direct_sum(const LieAlg& a, const LieAlg& b) {
  const int n = a.dim() + b.dim();
  std::vector<std::vector<RatVector>> c(n, std::vector<RatVector>(n, RatVector(n)));
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      for (int k = 0; k < a.dim(); ++k) c[i][j][k] = a.bracket(i, j)[k];
  for (int i = 0; i < b.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j)
      for (int k = 0; k < b.dim(); ++k) c[a.dim() + i][a.dim() + j][a.dim() + k] = b.bracket(i, j)[k];
  return LieAlg(n, c);
}

RatVector LieAlg::bracket(const RatVector& x, const RatVector& y) const {
  RatVector r(dim_);
  for (int i = 0; i < dim_; ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < dim_; ++j) {
      if (y[j] == 0) continue;
      Rational s = x[i] * y[j];
      for (int k = 0; k < dim_; ++k)
        if (c_[i][j][k] != 0) r[k] += s * c_[i][j][k];
    }
  }
  return r;
}

RatMatrix LieAlg::ad(int i) const {
  RatMatrix m(dim_, dim_);
  for (int j = 0; j < dim_; ++j)
    for (int k = 0; k < dim_; ++k) m(k, j) = c_[i][j][k];
  return m;
}

RatMatrix LieAlg::ad(const RatVector& x) const {
  RatMatrix m(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    if (x[i] != 0) {
      RatMatrix a = ad(i);
      for (int r = 0; r < dim_; ++r)
        for (int c = 0; c < dim_; ++c) m(r, c) += x[i] * a(r, c);
    }
  return m;
}

RatMatrix LieAlg::killing_form() const {
  RatMatrix k(dim_, dim_);
  std::vector<RatMatrix> ads;
  for (int i = 0; i < dim_; ++i) ads.push_back(ad(i));
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) k(i, j) = trace(ads[i] * ads[j]);
  return k;
}

RatMatrix LieAlg::center() const {
  // x with [x, e_j] = 0 for all j: stack ad-columns.
  RatMatrix sys(static_cast<std::size_t>(dim_) * dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k) sys(j * dim_ + k, i) = c_[i][j][k];
  return kernel_basis_q(sys);
}

RatMatrix LieAlg::derived() const {
  std::vector<RatVector> cols;
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j) cols.push_back(c_[i][j]);
  if (cols.empty()) return RatMatrix(dim_, 0);
  return image_basis_q(RatMatrix::from_columns(dim_, cols));
}

bool LieAlg::is_abelian() const {
  for (const auto& row : c_)
    for (const auto& v : row)
      for (const auto& x : v)
        if (x != 0) return false;
  return true;
}

LieModule LieModule::trivial(const LieAlg& g, int dim) {
  LieModule m;
  m.dim = dim;
  m.rho.assign(g.dim(), RatMatrix(dim, dim));
  m.label = dim == 1 ? "Q" : "Q^" + std::to_string(dim);
  return m;
}

LieModule LieModule::adjoint(const LieAlg& g) {
  LieModule m;
  m.dim = g.dim();
  for (int i = 0; i < g.dim(); ++i) m.rho.push_back(g.ad(i));
  m.label = "ad";
  return m;
}

void LieModule::validate(const LieAlg& g) const {
  if (static_cast<int>(rho.size()) != g.dim()) throw NotARepresentation("need one matrix per basis element");
  for (const auto& r : rho)
    if (static_cast<int>(r.rows()) != dim || static_cast<int>(r.cols()) != dim)
      throw NotARepresentation("action matrix has the wrong size");
  for (int i = 0; i < g.dim(); ++i)
    for (int j = 0; j < g.dim(); ++j) {
      RatMatrix lhs(dim, dim);
      for (int k = 0; k < g.dim(); ++k)
        if (g.bracket(i, j)[k] != 0)
          for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c) lhs(r, c) += g.bracket(i, j)[k] * rho[k](r, c);
      if (!(lhs == commutator(rho[i], rho[j]))) throw NotARepresentation("rho[x, y] != [rho x, rho y]");
    }
}

LieModule lie_hom_module(const LieModule& A, const LieModule& B) {
  LieModule m;
  m.dim = A.dim * B.dim;
  for (std::size_t x = 0; x < A.rho.size(); ++x) {
    RatMatrix act(m.dim, m.dim);
    // (x f)_{j,i} = sum_j2 B_{j,j2} f_{j2,i} - sum_i2 f_{j,i2} A_{i2,i}
    for (int i = 0; i < A.dim; ++i)
      for (int j = 0; j < B.dim; ++j) {
        for (int j2 = 0; j2 < B.dim; ++j2) act(i * B.dim + j, i * B.dim + j2) += B.rho[x](j, j2);
        for (int i2 = 0; i2 < A.dim; ++i2) act(i * B.dim + j, i2 * B.dim + j) -= A.rho[x](i2, i);
      }
    m.rho.push_back(act);
  }
  m.label = "Hom(" + A.label + ", " + B.label + ")";
  return m;
}

LieAlg semidirect(const LieAlg& n, const LieAlg& h, const std::vector<RatMatrix>& phi) {
  const int a = n.dim(), b = h.dim(), d = a + b;
  if (static_cast<int>(phi.size()) != b) throw NotLieHom("need one matrix per basis element of h");
  for (const auto& D : phi) {
    if (static_cast<int>(D.rows()) != a || static_cast<int>(D.cols()) != a) throw NotDerivation("phi matrix has the wrong size");
    for (int i = 0; i < a; ++i)
      for (int j = 0; j < a; ++j) {
        RatVector ei(a), ej(a);
        ei[i] = ej[j] = 1;
        RatVector lhs = D.apply(n.bracket(i, j));
        RatVector r1 = n.bracket(D.apply(ei), ej), r2 = n.bracket(ei, D.apply(ej));
        for (int k = 0; k < a; ++k)
          if (lhs[k] != r1[k] + r2[k]) throw NotDerivation("phi(x) is not a derivation of n");
      }
  }
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < b; ++j) {
      RatMatrix lhs(a, a);
      for (int k = 0; k < b; ++k)
        for (int r = 0; r < a; ++r)
          for (int c = 0; c < a; ++c) lhs(r, c) += h.bracket(i, j)[k] * phi[k](r, c);
      if (!(lhs == commutator(phi[i], phi[j]))) throw NotLieHom("phi[x, y] != [phi x, phi y]");
    }
  std::vector<std::vector<RatVector>> c(d, std::vector<RatVector>(d, RatVector(d)));
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < a; ++j)
      for (int k = 0; k < a; ++k) c[i][j][k] = n.bracket(i, j)[k];
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < b; ++j)
      for (int k = 0; k < b; ++k) c[a + i][a + j][a + k] = h.bracket(i, j)[k];
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < a; ++j)
      for (int k = 0; k < a; ++k) {
        c[a + i][j][k] = phi[i](k, j);
        c[j][a + i][k] = -phi[i](k, j);
      }
  return LieAlg(d, c);
}

RatMatrix ce_differential(const LieAlg& g, const LieModule& M, int t) {
  const int d = g.dim(), k = M.dim;
  auto src = subsets(d, t), dst = subsets(d, t + 1);
  RatMatrix out(dst.size() * k, src.size() * k);
  for (std::size_t r = 0; r < dst.size(); ++r) {
    auto idx = bits(dst[r], d);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      // x_i . f(... without x_i ...)
      unsigned rest = dst[r] & ~(1u << idx[i]);
      int s = subset_index(src, rest);
      int sign = i % 2 ? -1 : 1;
      for (int m2 = 0; m2 < k; ++m2)
        for (int m = 0; m < k; ++m)
          if (M.rho[idx[i]](m2, m) != 0) out(r * k + m2, s * k + m) += sign * M.rho[idx[i]](m2, m);
      for (std::size_t j = i + 1; j < idx.size(); ++j) {
        unsigned rest2 = rest & ~(1u << idx[j]);
        int sign2 = (i + j) % 2 ? -1 : 1;
        const RatVector& br = g.bracket(idx[i], idx[j]);
        for (int l = 0; l < d; ++l) {
          if (br[l] == 0 || (rest2 >> l & 1u)) continue;
          int s2 = subset_index(src, rest2 | (1u << l));
          Rational c = sign2 * insertion_sign(rest2, l) * br[l];
          for (int m = 0; m < k; ++m) out(r * k + m, s2 * k + m) += c;
        }
      }
    }
  }
  return out;
}

LieCohomology ce_cohomology(const LieAlg& g, const LieModule& M, int t) {
  LieCohomology h;
  if (t < 0 || t > g.dim()) {
    h.cocycles = RatMatrix(0, 0);
    return h;
  }
  const std::size_t amb = subsets(g.dim(), t).size() * M.dim;
  RatMatrix Z = kernel_basis_q(ce_differential(g, M, t));
  RatMatrix B = t ? ce_differential(g, M, t - 1) : RatMatrix(amb, 0);
  Quotient q = quotient(amb, Z, B);
  h.dim = q.reps.cols();
  h.cocycles = q.reps;
  return h;
}

RatVector ce_cup(const LieAlg& g, int du, int a, const RatVector& f, int dv, int b, const RatVector& h, int dw,
                 const std::vector<std::tuple<int, int, int, Rational>>& pairing) {
  const int d = g.dim();
  auto sa = subsets(d, a), sb = subsets(d, b), sc = subsets(d, a + b);
  RatVector out(sc.size() * dw);
  if (a + b > d) return RatVector{};
  for (std::size_t i = 0; i < sa.size(); ++i)
    for (std::size_t j = 0; j < sb.size(); ++j) {
      if (sa[i] & sb[j]) continue;
      int inv = 0;
      for (int s : bits(sa[i], d)) inv += __builtin_popcount(sb[j] & ((1u << s) - 1));
      int sign = inv % 2 ? -1 : 1;
      int w = subset_index(sc, sa[i] | sb[j]);
      for (const auto& [u, v, x, c] : pairing) {
        const Rational& fu = f[i * du + u];
        const Rational& hv = h[j * dv + v];
        if (fu == 0 || hv == 0) continue;
        out[w * dw + x] += sign * c * fu * hv;
      }
    }
  return out;
}

namespace {

LieModule extend_to_g(const LieExtension& ext, const LieModule& M) {
  LieModule e;
  e.dim = M.dim;
  e.label = M.label;
  for (int i = 0; i < ext.n.dim(); ++i) e.rho.push_back(RatMatrix(M.dim, M.dim));
  for (const auto& r : M.rho) e.rho.push_back(r);
  return e;
}

}  // namespace

std::shared_ptr<FilteredComplex> hs_complex(const LieExtension& ext, const LieModule& M) {
  M.validate(ext.h);
  LieAlg g = ext.g();
  LieModule Mg = extend_to_g(ext, M);
  const int d = g.dim(), a = ext.n.dim();
  std::vector<std::vector<int>> levels(d + 1);
  std::vector<RatMatrix> diffs;
  for (int t = 0; t <= d; ++t) {
    for (unsigned s : subsets(d, t))
      for (int m = 0; m < M.dim; ++m) levels[t].push_back(__builtin_popcount(s >> a));
    diffs.push_back(t < d ? ce_differential(g, Mg, t) : RatMatrix(0, subsets(d, t).size() * M.dim));
  }
  auto fc = std::make_shared<FilteredComplex>(Ring::Q, std::move(levels), std::move(diffs), d);
  fc->validate();
  return fc;
}

LieModule cohomology_coefficients(const LieExtension& ext, int q) {
  const LieAlg& n = ext.n;
  const int d = n.dim();
  const std::size_t amb = subsets(d, q).size();
  LieModule triv = LieModule::trivial(n);
  RatMatrix dq = ce_differential(n, triv, q);
  RatMatrix Z = kernel_basis_q(dq);
  RatMatrix B = q ? ce_differential(n, triv, q - 1) : RatMatrix(amb, 0);
  Quotient quo = quotient(amb, Z, B);
  LieModule out;
  out.dim = static_cast<int>(quo.reps.cols());
  out.label = "H^" + std::to_string(q) + "(n)";
  for (const auto& D : ext.phi) {
    RatMatrix act = lambda_derivation(D, d, q).transpose();
    for (std::size_t i = 0; i < act.rows(); ++i)
      for (std::size_t j = 0; j < act.cols(); ++j) act(i, j) = -act(i, j);
    RatMatrix next = lambda_derivation(D, d, q + 1).transpose();
    for (std::size_t i = 0; i < next.rows(); ++i)
      for (std::size_t j = 0; j < next.cols(); ++j) next(i, j) = -next(i, j);
    if (!(next * dq == dq * act)) throw ActionNotChainMap("phi does not commute with the CE differential of n");
    out.rho.push_back(induced(quo, act));
  }
  return out;
}

std::size_t hs_e2_expected(const LieExtension& ext, const LieModule& M, int p, int q) {
  if (q < 0 || q > ext.n.dim() || p < 0 || p > ext.h.dim()) return 0;
  LieModule A = cohomology_coefficients(ext, q);
  LieModule T;
  T.dim = A.dim * M.dim;
  for (int x = 0; x < ext.h.dim(); ++x) {
    RatMatrix act(T.dim, T.dim);
    for (int i = 0; i < A.dim; ++i)
      for (int j = 0; j < M.dim; ++j) {
        for (int i2 = 0; i2 < A.dim; ++i2) act(i * M.dim + j, i2 * M.dim + j) += A.rho[x](i, i2);
        for (int j2 = 0; j2 < M.dim; ++j2) act(i * M.dim + j, i * M.dim + j2) += M.rho[x](j, j2);
      }
    T.rho.push_back(act);
  }
  return ce_cohomology(ext.h, T, p).dim;
}

HomologyCoefficients homology_coefficients(const LieExtension& ext, int t) {
  const LieAlg& n = ext.n;
  const int d = n.dim();
  if (t < 0 || t > d) throw std::out_of_range("homology degree outside 0..dim n");
  const std::size_t amb = subsets(d, t).size();
  RatMatrix bt = chain_boundary(n, t);
  RatMatrix Z = t ? kernel_basis_q(bt) : RatMatrix::identity(amb);
  if (t == 1) Z = RatMatrix::identity(amb);
  RatMatrix B = t < d ? chain_boundary(n, t + 1) : RatMatrix(amb, 0);
  Quotient quo = quotient(amb, Z, B);
  HomologyCoefficients hc;
  hc.proj = quo.proj;
  hc.module.dim = static_cast<int>(quo.reps.cols());
  hc.module.label = "H_" + std::to_string(t) + "(n)";
  for (const auto& D : ext.phi) {
    RatMatrix act = lambda_derivation(D, d, t);
    if (t >= 1 && !(lambda_derivation(D, d, t - 1) * bt == bt * act))
      throw ActionNotChainMap("phi does not commute with the CE boundary of n");
    hc.module.rho.push_back(induced(quo, act));
  }
  hc.module.validate(ext.h);
  return hc;
}

bool is_reductive(const LieAlg& n) {
  RatMatrix Z = n.center(), D = n.derived();
  const std::size_t d = n.dim();
  if (Z.cols() + D.cols() != d) return false;
  if (d && rank_q(Z.hcat(D)) != d) return false;
  if (D.cols() == 0) return true;
  RatMatrix k = D.transpose() * n.killing_form() * D;
  return rank_q(k) == D.cols();
}

std::size_t image_dimension(const LieExtension& ext) {
  std::vector<RatVector> cols;
  for (const auto& D : ext.phi) cols.push_back(flatten(D));
  const std::size_t nn = static_cast<std::size_t>(ext.n.dim()) * ext.n.dim();
  return cols.empty() ? 0 : rank_q(RatMatrix::from_columns(nn, cols));
}

SemisimpleFactoring factors_through_semisimple(const LieExtension& ext) {
  const LieAlg& n = ext.n;
  const int d = n.dim();
  const std::size_t nn = static_cast<std::size_t>(d) * d;
  // Derivation equations on the entries of D (row-major).
  std::vector<RatVector> rows;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        RatVector row(nn);
        // (D[e_i, e_j])_k = sum_l D(k, l) c_ij^l
        for (int l = 0; l < d; ++l) row[k * d + l] += n.bracket(i, j)[l];
        // ([D e_i, e_j])_k = sum_l D(l, i) c_lj^k
        for (int l = 0; l < d; ++l) row[l * d + i] -= n.bracket(l, j)[k];
        for (int l = 0; l < d; ++l) row[l * d + j] -= n.bracket(i, l)[k];
        rows.push_back(row);
      }
  SemisimpleFactoring out;
  RatMatrix sys(rows.size(), nn);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < nn; ++c) sys(r, c) = rows[r][c];
  out.der_dim = rows.empty() ? nn : kernel_basis_q(sys).cols();
  // Subalgebra generated by phi(h).
  std::vector<RatVector> basis;
  auto add = [&](const RatVector& v) {
    basis.push_back(v);
    if (rank_q(RatMatrix::from_columns(nn, basis)) < basis.size()) {
      basis.pop_back();
      return false;
    }
    return true;
  };
  for (const auto& D : ext.phi) add(flatten(D));
  for (bool grew = true; grew;) {
    grew = false;
    const std::size_t m = basis.size();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        if (add(flatten(commutator(unflatten(basis[i], d), unflatten(basis[j], d))))) grew = true;
  }
  const std::size_t s = basis.size();
  out.witness = s ? RatMatrix::from_columns(nn, basis) : RatMatrix(nn, 0);
  if (s == 0) {
    out.factors = true;
    return out;
  }
  // Killing form of the subalgebra in its own basis.
  RatMatrix W = out.witness;
  std::vector<RatMatrix> ads;
  for (std::size_t i = 0; i < s; ++i) {
    RatMatrix a(s, s);
    for (std::size_t j = 0; j < s; ++j) {
      auto coords = solve_q(W, flatten(commutator(unflatten(basis[i], d), unflatten(basis[j], d))));
      for (std::size_t k = 0; k < s; ++k) a(k, j) = (*coords)[k];
    }
    ads.push_back(a);
  }
  RatMatrix kill(s, s);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) kill(i, j) = trace(ads[i] * ads[j]);
  out.factors = rank_q(kill) == s;
  return out;
}

std::vector<LieExtension> lie_corpus() {
  auto diag = [](std::vector<long> v) {
    RatMatrix m(v.size(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i) m(i, i) = v[i];
    return m;
  };
  std::vector<LieExtension> out;
  out.push_back({"affine", LieAlg::abelian(1), LieAlg::abelian(1), {RatMatrix{{1}}}});
  out.push_back({"barnes", LieAlg::abelian(2), LieAlg::abelian(1), {diag({1, -1})}});
  out.push_back({"heis-sl2", LieAlg::heis3(), LieAlg::sl2(),
                 {RatMatrix{{0, 1, 0}, {0, 0, 0}, {0, 0, 0}}, RatMatrix{{0, 0, 0}, {1, 0, 0}, {0, 0, 0}}, diag({1, -1, 0})}});
  LieAlg red = LieAlg::direct_sum(LieAlg::sl2(), LieAlg::abelian(1));
  out.push_back({"reductive", red, LieAlg::abelian(1), {diag({2, -2, 0, 1})}});
  std::vector<RatMatrix> adsl;
  for (int i = 0; i < 3; ++i) {
    RatMatrix m(4, 4);
    RatMatrix a = LieAlg::sl2().ad(i);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) m(r, c) = a(r, c);
    adsl.push_back(m);
  }
  out.push_back({"reductive-sl2", red, LieAlg::sl2(), adsl});
  out.push_back({"heis-direct", LieAlg::heis3(), LieAlg::abelian(1), {RatMatrix(3, 3)}});
  // heis3 acting on itself by y -> x, x -> z, y -> -z: d_2 is nonzero here.
  out.push_back({"heis-nil", LieAlg::heis3(), LieAlg::heis3(),
                 {RatMatrix{{0, 1, 0}, {0, 0, 0}, {0, 0, 0}}, RatMatrix{{0, 0, 0}, {0, 0, 0}, {1, 0, 0}},
                  RatMatrix{{0, 0, 0}, {0, 0, 0}, {0, -1, 0}}}});
  return out;
}

}  // namespace obstrukt
