#include "obstrukt/specseq.hpp"

#include <numeric>

namespace obstrukt {

// ---------------------------------------------------------------------------
// Ring dispatch

RatMatrix ring_kernel(Ring ring, const RatMatrix& m) {
  if (ring == Ring::Q) return kernel_basis_q(m);
  return to_rational(kernel_basis(to_integer(m)));
}

FGAbelian ring_subquotient(Ring ring, std::size_t ambient, const RatMatrix& Z, const RatMatrix& B) {
  if (ring == Ring::Q) return subquotient_q(ambient, Z, B);
  return subquotient(ambient, to_integer(Z), to_integer(B));
}

std::optional<RatVector> ring_solve(Ring ring, const RatMatrix& m, const RatVector& b) {
  if (ring == Ring::Q) return solve_q(m, b);
  if (!is_integral(b)) return std::nullopt;
  auto x = solve_integer(to_integer(m), to_integer(b));
  if (!x) return std::nullopt;
  return to_rational(*x);
}

static RatMatrix relation_matrix(const FGAbelian& g) {
  RatMatrix r(g.ngens(), g.torsion.size());
  for (std::size_t i = 0; i < g.torsion.size(); ++i) r(i, i) = g.torsion[i];
  return r;
}

FGAbelian presentation_homology(Ring ring, const FGAbelian& a, const FGAbelian& b, const RatMatrix& f,
                                const RatMatrix& g) {
  const std::size_t k = a.ngens();
  if (f.cols() != k || f.rows() != b.ngens() || g.rows() != k)
    throw DimensionMismatch("presentation_homology shapes");
  RatMatrix rb = relation_matrix(b);
  RatMatrix neg_rb = rb;
  for (std::size_t i = 0; i < rb.rows(); ++i)
    for (std::size_t j = 0; j < rb.cols(); ++j) neg_rb(i, j) = -rb(i, j);
  RatMatrix ker = ring_kernel(ring, f.hcat(neg_rb));
  std::vector<std::size_t> head(k);
  std::iota(head.begin(), head.end(), 0);
  RatMatrix kx = ker.select_rows(head);
  RatMatrix ra = relation_matrix(a);
  return ring_subquotient(ring, k, kx.hcat(ra), g.hcat(ra));
}

// ---------------------------------------------------------------------------
// FilteredComplex

FilteredComplex::FilteredComplex(Ring ring, std::vector<std::vector<int>> levels, std::vector<RatMatrix> diffs,
                                 int trusted)
    : ring_(ring), levels_(std::move(levels)), diffs_(std::move(diffs)) {
  if (levels_.empty()) levels_.push_back({});
  const int t = top();
  if (static_cast<int>(diffs_.size()) == t) diffs_.push_back(RatMatrix(0, levels_[t].size()));
  if (static_cast<int>(diffs_.size()) != t + 1) throw DimensionMismatch("need one differential per degree");
  for (int n = 0; n <= t; ++n) {
    std::size_t next = n < t ? levels_[n + 1].size() : 0;
    if (diffs_[n].rows() != next || diffs_[n].cols() != levels_[n].size())
      throw DimensionMismatch("differential d^" + std::to_string(n) + " has the wrong shape");
  }
  trusted_ = trusted < 0 ? t : trusted;
}

RatVector FilteredComplex::apply_d(int n, const RatVector& x) const {
  if (n < 0 || n > top()) return {};
  return diffs_[n].apply(x);
}

RatMatrix FilteredComplex::filtration_basis(int p, int n) const {
  std::vector<RatVector> cols;
  for (std::size_t i = 0; i < rank(n); ++i)
    if (levels_[n][i] >= p) {
      RatVector e(rank(n));
      e[i] = 1;
      cols.push_back(std::move(e));
    }
  return RatMatrix::from_columns(rank(n), cols);
}

bool FilteredComplex::in_filtration(int n, const RatVector& x, int p) const {
  if (x.size() != rank(n)) throw DimensionMismatch("cochain length");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0 && levels_[n][i] < p) return false;
  return true;
}

int FilteredComplex::filtration_of(int n, const RatVector& x) const {
  int best = n + 1;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0) best = std::min(best, levels_[n][i]);
  return best;
}

void FilteredComplex::validate() const {
  for (int n = 0; n <= top(); ++n) {
    for (int lv : levels_[n])
      if (lv < 0 || lv > n) throw std::logic_error("filtration level outside [0, n] in degree " + std::to_string(n));
    const RatMatrix& d = diffs_[n];
    if (ring_ == Ring::Z) {
      for (std::size_t i = 0; i < d.rows(); ++i)
        for (std::size_t j = 0; j < d.cols(); ++j)
          if (d(i, j).get_den() != 1) throw std::logic_error("non-integral differential over Z");
    }
    for (std::size_t i = 0; i < d.rows(); ++i)
      for (std::size_t j = 0; j < d.cols(); ++j)
        if (d(i, j) != 0 && levels_[n + 1][i] < levels_[n][j])
          throw std::logic_error("differential lowers filtration in degree " + std::to_string(n));
    if (n + 1 <= top() && !(diffs_[n + 1] * d).is_zero())
      throw std::logic_error("d^2 != 0 in degree " + std::to_string(n));
  }
}

// ---------------------------------------------------------------------------
// SpectralSequence

SpectralSequence::SpectralSequence(std::shared_ptr<const FilteredComplex> fc) : fc_(std::move(fc)) {}

void SpectralSequence::require_trusted(int n) const {
  if (n > fc_->trusted())
    throw TruncationTooSmall("total degree " + std::to_string(n) + " exceeds the trusted truncation degree " +
                             std::to_string(fc_->trusted()));
}

RatMatrix SpectralSequence::cycles(int r, int p, int n) const {
  const FilteredComplex& c = *fc_;
  if (n < 0 || n > c.top()) return RatMatrix(c.rank(n), 0);
  std::vector<std::size_t> J, I;
  for (std::size_t j = 0; j < c.rank(n); ++j)
    if (c.level(n, j) >= p) J.push_back(j);
  for (std::size_t i = 0; i < c.rank(n + 1); ++i)
    if (c.level(n + 1, i) < p + r) I.push_back(i);
  RatMatrix k = ring_kernel(c.ring(), c.d(n).select_rows(I).select_cols(J));
  RatMatrix out(c.rank(n), k.cols());
  for (std::size_t a = 0; a < J.size(); ++a)
    for (std::size_t b = 0; b < k.cols(); ++b) out(J[a], b) = k(a, b);
  return out;
}

std::shared_ptr<const FGAbelian> SpectralSequence::compute_page(int r, int p, int q) const {
  const FilteredComplex& c = *fc_;
  const int n = p + q;
  const std::size_t amb = c.rank(n);
  if (p < 0 || q < 0 || n > c.top()) {
    auto g = std::make_shared<FGAbelian>();
    g->lift = RatMatrix(amb, 0);
    g->project = RatMatrix(0, amb);
    return g;
  }
  RatMatrix z = cycles(r, p, n);
  RatMatrix lower = cycles(r - 1, p + 1, n);
  RatMatrix bnd(amb, 0);
  if (n >= 1) bnd = c.d(n - 1) * cycles(r - 1, p - r + 1, n - 1);
  return std::make_shared<FGAbelian>(ring_subquotient(c.ring(), amb, z, lower.hcat(bnd)));
}

std::shared_ptr<const FGAbelian> SpectralSequence::page(int r, int p, int q) const {
  if (r < 1) throw std::invalid_argument("page index must be >= 1");
  require_trusted(p + q);
  r = std::min(r, stable_page(p, q));
  auto key = std::make_tuple(r, p, q);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  auto g = compute_page(r, p, q);
  std::lock_guard<std::mutex> lock(mu_);
  return memo_.emplace(key, g).first->second;
}

void SpectralSequence::check_valid(const PageClass& c) const {
  const int n = c.p + c.q;
  if (c.rep.size() != fc_->rank(n)) throw InvalidRepresentative("representative has the wrong length");
  if (!fc_->in_filtration(n, c.rep, c.p)) throw InvalidRepresentative("representative not in F^p");
  if (n + 1 <= fc_->top() && !fc_->in_filtration(n + 1, fc_->apply_d(n, c.rep), c.p + c.r))
    throw InvalidRepresentative("d(rep) not in F^{p+r}");
  if (fc_->ring() == Ring::Z && !is_integral(c.rep)) throw InvalidRepresentative("non-integral representative");
}

RatVector SpectralSequence::coordinates(const PageClass& c) const {
  check_valid(c);
  return page(c.r, c.p, c.q)->coordinates_of(c.rep);
}

bool SpectralSequence::is_zero(const PageClass& c) const {
  auto g = page(c.r, c.p, c.q);
  return g->is_zero(coordinates(c));
}

PageClass SpectralSequence::generator(int r, int p, int q, std::size_t i) const {
  auto g = page(r, p, q);
  return PageClass{r, p, q, g->lift->column(i)};
}

PageClass SpectralSequence::from_coordinates(int r, int p, int q, const RatVector& coords) const {
  auto g = page(r, p, q);
  return PageClass{r, p, q, g->representative(coords)};
}

PageClass SpectralSequence::differential(const PageClass& c) const {
  check_valid(c);
  const int n = c.p + c.q;
  RatVector target = n + 1 <= fc_->top() ? fc_->apply_d(n, c.rep) : RatVector(fc_->rank(n + 1));
  return PageClass{c.r, c.p + c.r, c.q - c.r + 1, std::move(target)};
}

RatMatrix SpectralSequence::differential_matrix(int r, int p, int q) const {
  auto src = page(r, p, q);
  auto tgt = page(r, p + r, q - r + 1);
  RatMatrix m(tgt->ngens(), src->ngens());
  if (tgt->is_trivial()) return m;
  for (std::size_t i = 0; i < src->ngens(); ++i) {
    PageClass img = differential(generator(r, p, q, i));
    RatVector c = tgt->coordinates_of(img.rep);
    for (std::size_t j = 0; j < c.size(); ++j) m(j, i) = c[j];
  }
  return m;
}

LiftResult SpectralSequence::lift_to_page(int r, int p, int q, const RatVector& rep, int from) const {
  const FilteredComplex& c = *fc_;
  const int n = p + q;
  require_trusted(n);
  LiftResult res;
  PageClass cur{from, p, q, rep};
  check_valid(cur);
  for (int m = from; m < r; ++m) {
    RatVector dv = c.apply_d(n, cur.rep);
    if (c.in_filtration(n + 1, dv, p + m + 1)) continue;
    std::vector<std::size_t> I;
    for (std::size_t i = 0; i < c.rank(n + 1); ++i)
      if (c.level(n + 1, i) < p + m + 1) I.push_back(i);
    RatVector rhs(I.size());
    for (std::size_t a = 0; a < I.size(); ++a) rhs[a] = dv[I[a]];
    bool fixed = false;
    for (int jump = m; jump >= 1 && !fixed; --jump) {
      std::vector<std::size_t> J;
      for (std::size_t j = 0; j < c.rank(n); ++j)
        if (c.level(n, j) >= p + jump) J.push_back(j);
      auto y = ring_solve(c.ring(), c.d(n).select_rows(I).select_cols(J), rhs);
      if (!y) continue;
      RatVector corr(c.rank(n));
      for (std::size_t a = 0; a < J.size(); ++a) corr[J[a]] = (*y)[a];
      for (std::size_t i = 0; i < corr.size(); ++i) cur.rep[i] -= corr[i];
      res.steps.push_back({m, p + jump, std::move(corr)});
      fixed = true;
    }
    if (!fixed) throw DoesNotSurvive(m, PageClass{m, p + m, q - m + 1, std::move(dv)});
  }
  cur.r = r;
  res.cls = std::move(cur);
  return res;
}

FGAbelian SpectralSequence::homology_of_page(int r, int p, int q) const {
  auto a = page(r, p, q);
  auto b = page(r, p + r, q - r + 1);
  RatMatrix f = differential_matrix(r, p, q);
  RatMatrix g(a->ngens(), 0);
  if (p - r >= 0) g = differential_matrix(r, p - r, q + r - 1);
  return presentation_homology(ring(), *a, *b, f, g);
}

ConvergenceReport SpectralSequence::convergence_check(int n) const {
  require_trusted(n);
  const FilteredComplex& c = *fc_;
  ConvergenceReport rep;
  rep.n = n;
  RatMatrix ker = cycles(n + 2, 0, n);
  RatMatrix img = n >= 1 ? c.d(n - 1) : RatMatrix(c.rank(n), 0);
  FGAbelian h = ring_subquotient(c.ring(), c.rank(n), ker, img);
  rep.total = h.describe();
  RatMatrix rel = relation_matrix(h);

  // Image of Z ∩ F^p in the presentation of H^n, for each p.
  std::vector<RatMatrix> steps;
  for (int p = 0; p <= n + 1; ++p) steps.push_back((*h.project) * cycles(n + 2, p, n));

  std::size_t dim_sum = 0;
  for (int p = 0; p <= n; ++p) {
    auto e = page(stable_page(p, n - p), p, n - p);
    FGAbelian gr = ring_subquotient(c.ring(), h.ngens(), steps[p].hcat(rel), steps[p + 1].hcat(rel));
    rep.e_infinity.push_back(e->describe());
    rep.graded.push_back(gr.describe());
    if (!e->isomorphic(gr)) rep.ok = false;
    dim_sum += e->free_rank;
  }
  if (c.ring() == Ring::Q && dim_sum != h.free_rank) rep.ok = false;
  return rep;
}

}  // namespace obstrukt
