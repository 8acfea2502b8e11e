#include "obstrukt/charclass.hpp"

#include <random>

#include "obstrukt/exactlin.hpp"
#include "obstrukt/subsets.hpp"

namespace obstrukt {

namespace {

RatVector sub(const RatVector& a, const RatVector& b) {
  RatVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

RatVector axpy(const RatVector& a, const Rational& c, const RatVector& b) {
  RatVector r = a;
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += c * b[i];
  return r;
}

RatVector scaled(const RatVector& a, const Rational& c) {
  RatVector r = a;
  for (auto& x : r) x *= c;
  return r;
}

bool same_class(const FGAbelian& g, const RatVector& a, const RatVector& b) { return g.is_zero(sub(a, b)); }

RatVector random_coords(std::mt19937_64& rng, const FGAbelian& g) {
  RatVector c(g.ngens());
  for (auto& x : c) x = static_cast<long>(rng() % 7) - 3;
  return g.normalize(c);
}

// Solve theta y = x in the target presentation: exact over Q, modulo the
// torsion orders over Z.
std::optional<RatVector> solve_theta(Ring ring, const ThetaData& th, const RatVector& x) {
  if (th.source.ngens() == 0) {
    if (th.target.is_zero(x)) return RatVector{};
    return std::nullopt;
  }
  if (ring == Ring::Q) return solve_q(th.matrix, x);
  const std::size_t rows = th.target.ngens(), nt = th.target.torsion.size();
  IntMatrix m(rows, th.source.ngens() + nt);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < th.source.ngens(); ++j) m(i, j) = to_integer(RatVector{th.matrix(i, j)})[0];
  for (std::size_t i = 0; i < nt; ++i) m(i, th.source.ngens() + i) = th.target.torsion[i];
  auto sol = solve_integer(m, to_integer(x));
  if (!sol) return std::nullopt;
  RatVector y(th.source.ngens());
  for (std::size_t j = 0; j < y.size(); ++j) y[j] = (*sol)[j];
  return th.source.normalize(y);
}

Rational det_q(RatMatrix m) {
  const std::size_t n = m.rows();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m(piv, c) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(m(piv, k), m(c, k));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m(r, c) == 0) continue;
      Rational f = m(r, c) / m(c, c);
      for (std::size_t k = c; k < n; ++k) m(r, k) -= f * m(c, k);
    }
  }
  return det;
}

}  // namespace

// ---------------------------------------------------------------- handles

GroupHandle::GroupHandle(LatticeExtension ext, int N, std::string name)
    : ctx_(std::make_shared<const ExtensionContext>(std::move(ext), N)), N_(N), name_(std::move(name)) {
  if (name_.empty()) name_ = ctx_->extension().label;
}

std::string GroupHandle::coefficient_label(int i) const { return i == 0 ? "Z" : "L^" + std::to_string(i); }

const GroupHandle::Entry& GroupHandle::entry(int t, int i) const {
  if (i < 0 || i >= coefficient_count()) throw std::out_of_range("coefficient index");
  if (t > kernel_rank()) throw std::out_of_range("homology degree above the lattice rank");
  std::lock_guard<std::mutex> lock(mu_);
  auto& slot = cache_[{t, i}];
  if (!slot) {
    const auto& ext = ctx_->extension();
    HModule M = exterior_power_module(ext, i);
    if (t >= 0) M = hom_module(exterior_power_module(ext, t), M);
    slot = std::make_unique<Entry>();
    slot->complex = std::make_unique<LhsComplex>(ctx_, M);
    slot->ss = std::make_unique<SpectralSequence>(slot->complex->complex());
  }
  return *slot;
}

const LhsComplex& GroupHandle::homology_complex(int t) const { return *entry(-1, t).complex; }
const SpectralSequence& GroupHandle::coefficient_ss(int i) const { return *entry(-1, i).ss; }
const SpectralSequence& GroupHandle::hom_ss(int t, int i) const { return *entry(t, i).ss; }

RatVector GroupHandle::identity_rep(int t) const {
  const LhsComplex& C = homology_complex(t);
  const PerturbedResolution& P = C.resolution();
  auto basis = subsets(kernel_rank(), t);
  RatVector f(C.complex()->rank(t));
  for (int id : P.gens(t)) {
    const auto& g = P.gen(id);
    if (g.p != 0) continue;
    f[C.index(id, subset_index(basis, g.mask))] = 1;
  }
  return f;
}

RatVector GroupHandle::evaluate_product(int t, int i, int a, const RatVector& y, int b, const RatVector& v) const {
  const LhsComplex& U = *entry(t, i).complex;
  const LhsComplex& V = homology_complex(t);
  const LhsComplex& W = homology_complex(i);
  return cup_product(U, a, y, V, b, v, W, evaluation_pairing(V.coefficients().rank, W.coefficients().rank));
}

LieHandle::LieHandle(LieExtension ext) : ext_(std::move(ext)), g_(ext_.g()) {
  for (int t = 0; t <= ext_.n.dim(); ++t) hc_.push_back(homology_coefficients(ext_, t));
}

std::string LieHandle::coefficient_label(int i) const { return "H_" + std::to_string(i) + "(n)"; }

const SpectralSequence& LieHandle::ss_for(int t, int i) const {
  if (i < 0 || i >= coefficient_count()) throw std::out_of_range("coefficient index");
  if (t > kernel_rank()) throw std::out_of_range("homology degree above dim n");
  std::lock_guard<std::mutex> lock(mu_);
  auto& slot = cache_[{t, i}];
  if (!slot) {
    LieModule M = hc_[i].module;
    if (t >= 0) M = lie_hom_module(hc_[t].module, M);
    slot = std::make_unique<SpectralSequence>(hs_complex(ext_, M));
  }
  return *slot;
}

const SpectralSequence& LieHandle::coefficient_ss(int i) const { return ss_for(-1, i); }
const SpectralSequence& LieHandle::hom_ss(int t, int i) const { return ss_for(t, i); }

RatVector LieHandle::identity_rep(int t) const {
  const int a = ext_.n.dim(), d = g_.dim();
  const auto& hc = hc_.at(t);
  const int k = hc.module.dim;
  auto gb = subsets(d, t), nb = subsets(a, t);
  RatVector f(gb.size() * k);
  for (std::size_t s = 0; s < nb.size(); ++s) {
    int pos = subset_index(gb, nb[s]);
    for (int m = 0; m < k; ++m) f[pos * k + m] = hc.proj(m, s);
  }
  return f;
}

RatVector LieHandle::evaluate_product(int t, int i, int a, const RatVector& y, int b, const RatVector& v) const {
  const int kt = hc_.at(t).module.dim, km = hc_.at(i).module.dim;
  std::vector<std::tuple<int, int, int, Rational>> pairing;
  for (int u = 0; u < kt; ++u)
    for (int m = 0; m < km; ++m) pairing.emplace_back(u * km + m, u, m, Rational(1));
  return ce_cup(g_, kt * km, a, y, kt, b, v, km, pairing);
}

// ------------------------------------------------------------- triviality

TrivialityReport is_tr_trivial(const ExtensionHandle& ext, int t, int r) {
  if (r < 2) throw std::invalid_argument("r must be >= 2");
  const int N = ext.max_degree();
  if (t + 1 > N) throw TruncationTooSmall("t + 1 exceeds the trusted degree");
  TrivialityReport rep;
  rep.t = t;
  rep.r = r;
  rep.s_max = N - t - 1;
  if (t > ext.kernel_rank()) return rep;  // H_t = 0
  const SpectralSequence& ss = ext.homology_ss(t);
  for (int p = 2; p < r && rep.trivial; ++p)
    for (int s = 0; s <= rep.s_max; ++s)
      if (!ss.differential_matrix(p, s, t).is_zero()) {
        rep.trivial = false;
        rep.witness = Witness{p, s, t};
        break;
      }
  for (int p = 2; p < r; ++p)
    if (!ss.differential_matrix(p, 0, t).is_zero()) {
      rep.edge_trivial = false;
      break;
    }
  rep.routes_agree = rep.trivial == rep.edge_trivial;
  return rep;
}

LiftResult identity_on_page(const ExtensionHandle& ext, int t, int r) {
  return ext.homology_ss(t).lift_to_page(r, 0, t, ext.identity_rep(t), 1);
}

namespace {

struct VCore {
  PageClass v;
  RatVector coords;
  std::shared_ptr<const FGAbelian> target;
  Order order;
  std::vector<LiftStep> steps;
};

VCore compute_v(const ExtensionHandle& ext, int t, int r) {
  const SpectralSequence& ss = ext.homology_ss(t);
  VCore c;
  LiftResult lift = identity_on_page(ext, t, r);
  c.steps = lift.steps;
  c.v = ss.differential(lift.cls);
  c.target = ss.page(r, r, t - r + 1);
  c.coords = c.target->normalize(ss.coordinates(c.v));
  c.order = element_order(c.coords, *c.target);
  return c;
}

bool divides(const BigInt& a, const BigInt& b) { return b % a == 0; }
bool nonzero(const Order& o) { return o.infinite || o.value != 1; }

}  // namespace

CharClassReport characteristic_class(const ExtensionHandle& ext, int t, int r) {
  CharClassReport rep = analyze(ext, t, r);
  if (!rep.trivial) throw NotTrivial(t, r);
  return rep;
}

CharClassReport analyze(const ExtensionHandle& ext, int t, int r) {
  CharClassReport rep;
  rep.extension = ext.name();
  rep.kind = ext.kind();
  rep.t = t;
  rep.r = r;
  TrivialityReport tr = is_tr_trivial(ext, t, r);
  rep.trivial = tr.trivial;
  rep.witness = tr.witness;
  if (!rep.trivial) return rep;
  if (t > ext.kernel_rank()) {
    rep.v_order = Order{};
    rep.target = "0";
  } else {
    VCore c = compute_v(ext, t, r);
    rep.v_class = c.v;
    rep.v_coords = c.coords;
    rep.target = c.target->describe();
    rep.v_order = c.order;
    rep.lift_steps = c.steps;
  }
  if (ext.kind() != "group" || t < r) return rep;

  rep.bound_B = b_bound(t, r).value;
  rep.divisibility_ok = !rep.v_order->infinite && divides(rep.v_order->value, *rep.bound_B);
  // chi needs (k, r)-triviality for every 2 <= k <= t.
  std::map<int, bool> flags;
  for (int k = 2; k <= t; ++k) {
    TrivialityReport kt = is_tr_trivial(ext, k, r);
    if (!kt.trivial) {
      rep.chi_note = "not (" + std::to_string(k) + "," + std::to_string(r) + ")-trivial; chi product undefined";
      return rep;
    }
    if (k >= r) flags[k] = k <= ext.kernel_rank() && nonzero(compute_v(ext, k, r).order);
  }
  try {
    rep.chi = chi_product(r, t, flags);
  } catch (const InconsistentFlags& e) {
    rep.chi_note = e.what();
    rep.divisibility_ok = false;
    return rep;
  }
  rep.divisibility_ok = rep.divisibility_ok && divides(rep.v_order->value, rep.chi->product) &&
                        divides(rep.chi->product, *rep.bound_B);
  return rep;
}

// ------------------------------------------------------------------ theta

ThetaData theta(const ExtensionHandle& ext, int t, int r, int s, int coeff) {
  TrivialityReport tr = is_tr_trivial(ext, t, r);
  if (!tr.trivial) throw NotTrivial(t, r);
  const SpectralSequence& hs = ext.hom_ss(t, coeff);
  const SpectralSequence& cs = ext.coefficient_ss(coeff);
  ThetaData th;
  th.source = *hs.page(r, s, 0);
  th.target = *cs.page(r, s, t);
  th.matrix = RatMatrix(th.target.ngens(), th.source.ngens());
  RatVector id = identity_on_page(ext, t, r).cls.rep;
  for (std::size_t j = 0; j < th.source.ngens(); ++j) {
    RatVector y = hs.generator(r, s, 0, j).rep;
    RatVector x = ext.evaluate_product(t, coeff, s, y, t, id);
    RatVector c = cs.coordinates(PageClass{r, s, t, x});
    for (std::size_t i = 0; i < c.size(); ++i) th.matrix(i, j) = c[i];
  }
  if (th.target.ngens() == 0) {
    th.surjective = true;
  } else if (cs.ring() == Ring::Q) {
    th.surjective = rank_q(th.matrix) == th.target.ngens();
  } else {
    const std::size_t nt = th.target.torsion.size();
    IntMatrix m(th.target.ngens(), th.source.ngens() + nt);
    IntMatrix im = to_integer(th.matrix);
    for (std::size_t i = 0; i < im.rows(); ++i)
      for (std::size_t j = 0; j < im.cols(); ++j) m(i, j) = im(i, j);
    for (std::size_t i = 0; i < nt; ++i) m(i, th.source.ngens() + i) = th.target.torsion[i];
    th.surjective = cokernel(m).is_trivial();
  }
  return th;
}

ObstructionReport verify_obstruction_identity(const ExtensionHandle& ext, int t, int r, int coeff, int samples,
                                              unsigned seed) {
  ObstructionReport rep;
  rep.t = t;
  rep.r = r;
  rep.coeff = coeff;
  if (!is_tr_trivial(ext, t, r).trivial) throw NotTrivial(t, r);
  if (t > ext.kernel_rank()) return rep;
  std::mt19937_64 rng(seed);
  const SpectralSequence& hom = ext.hom_ss(t, coeff);
  const SpectralSequence& cs = ext.coefficient_ss(coeff);
  const SpectralSequence& hss = ext.homology_ss(t);
  LiftResult id = identity_on_page(ext, t, r);
  RatVector v_rep = hss.differential(id.cls).rep;

  for (int s = 0; s + t + 1 <= ext.max_degree(); ++s) {
    ThetaData th = theta(ext, t, r, s, coeff);
    if (!th.surjective) {
      ++rep.failures;
      rep.failures_detail.push_back("theta not surjective at s=" + std::to_string(s));
      continue;
    }
    auto tgt = cs.page(r, s + r, t - r + 1);
    for (int k = 0; k < samples; ++k) {
      RatVector x = k == 0 ? RatVector(th.target.ngens()) : random_coords(rng, th.target);
      auto y = solve_theta(cs.ring(), th, x);
      ++rep.checked;
      if (!y) {
        ++rep.failures;
        rep.failures_detail.push_back("no preimage under theta at s=" + std::to_string(s));
        continue;
      }
      RatVector lhs = cs.coordinates(cs.differential(cs.from_coordinates(r, s, t, x)));
      RatVector y_rep = th.source.ngens() ? hom.from_coordinates(r, s, 0, *y).rep : RatVector(hom.complex().rank(s));
      RatVector prod = ext.evaluate_product(t, coeff, s, y_rep, t + 1, v_rep);
      RatVector rhs = cs.coordinates(PageClass{r, s + r, t - r + 1, scaled(prod, s % 2 ? -1 : 1)});
      if (!same_class(*tgt, lhs, rhs)) {
        ++rep.failures;
        rep.failures_detail.push_back("d_r x != (-1)^s y.v at s=" + std::to_string(s));
      }
    }
  }

  // Uniqueness: s = 0, M = H_t, x = [id^t] recovers v.
  if (t < ext.coefficient_count()) {
    ThetaData th = theta(ext, t, r, 0, t);
    RatVector x = th.target.normalize(hss.coordinates(id.cls));
    auto y = solve_theta(hss.ring(), th, x);
    if (!y) {
      rep.uniqueness_ok = false;
    } else {
      const SpectralSequence& h0 = ext.hom_ss(t, t);
      RatVector y_rep = h0.from_coordinates(r, 0, 0, *y).rep;
      RatVector u = hss.coordinates(PageClass{r, r, t - r + 1, ext.evaluate_product(t, t, 0, y_rep, t + 1, v_rep)});
      RatVector v = hss.coordinates(PageClass{r, r, t - r + 1, v_rep});
      rep.uniqueness_ok = same_class(*hss.page(r, r, t - r + 1), u, v);
    }
  }
  return rep;
}

// ------------------------------------------------------------- naturality

NaturalityReport naturality_check(const GroupHandle& big, const GroupHandle& small, const std::vector<int>& sigma,
                                  int index, int t, int r) {
  NaturalityReport rep;
  rep.index = index;
  CharClassReport v = characteristic_class(big, t, r);
  CharClassReport w = characteristic_class(small, t, r);
  rep.w = w.v_coords;
  rep.w_order = *w.v_order;
  if (t > big.kernel_rank()) {
    rep.maps_v_to_w = true;
    return rep;
  }
  const int n = big.kernel_rank();
  ComparisonMap phi(small.context()->resolution(), big.context()->resolution(), sigma, IntMatrix::identity(n), t + 1);
  RatVector pulled = pullback(phi, big.homology_complex(t), small.homology_complex(t), t + 1, v.v_class->rep);
  const SpectralSequence& ss = small.homology_ss(t);
  auto page = ss.page(r, r, t - r + 1);
  rep.pulled = page->normalize(ss.coordinates(PageClass{r, r, t - r + 1, pulled}));
  rep.maps_v_to_w = same_class(*page, rep.pulled, rep.w);
  if (!rep.w_order.infinite) {
    auto bp = big.homology_ss(t).page(r, r, t - r + 1);
    rep.transfer_ok = bp->is_zero(scaled(v.v_coords, Rational(rep.w_order.value * index)));
  }
  return rep;
}

NaturalityReport naturality_check(const LieHandle& big, const LieHandle& small, const RatMatrix& sigma, int t, int r) {
  NaturalityReport rep;
  CharClassReport v = characteristic_class(big, t, r);
  CharClassReport w = characteristic_class(small, t, r);
  rep.w = w.v_coords;
  rep.w_order = *w.v_order;
  if (t > big.kernel_rank()) {
    rep.maps_v_to_w = true;
    return rep;
  }
  const int a = big.extension().n.dim();
  const int D = big.algebra().dim(), Ds = small.algebra().dim();
  if (static_cast<int>(sigma.rows()) != D - a || static_cast<int>(sigma.cols()) != Ds - a)
    throw std::invalid_argument("sigma has the wrong shape");
  RatMatrix psi(D, Ds);
  for (int i = 0; i < a; ++i) psi(i, i) = 1;
  for (std::size_t i = 0; i < sigma.rows(); ++i)
    for (std::size_t j = 0; j < sigma.cols(); ++j) psi(a + i, a + j) = sigma(i, j);
  const int deg = t + 1, k = big.homology(t).module.dim;
  auto bb = subsets(D, deg), sb = subsets(Ds, deg);
  RatVector pulled(sb.size() * k);
  const RatVector& f = v.v_class->rep;
  for (std::size_t j = 0; j < sb.size(); ++j) {
    std::vector<std::size_t> cols;
    for (int x = 0; x < Ds; ++x)
      if (sb[j] >> x & 1u) cols.push_back(x);
    for (std::size_t i = 0; i < bb.size(); ++i) {
      std::vector<std::size_t> rows;
      for (int x = 0; x < D; ++x)
        if (bb[i] >> x & 1u) rows.push_back(x);
      Rational m = det_q(psi.select_rows(rows).select_cols(cols));
      if (m == 0) continue;
      for (int c = 0; c < k; ++c) pulled[j * k + c] += m * f[i * k + c];
    }
  }
  const SpectralSequence& ss = small.homology_ss(t);
  auto page = ss.page(r, r, t - r + 1);
  rep.pulled = page->normalize(ss.coordinates(PageClass{r, r, t - r + 1, pulled}));
  rep.maps_v_to_w = same_class(*page, rep.pulled, rep.w);
  return rep;
}

// ---------------------------------------------------------- decomposition

DecompositionReport decomposition_check(const LatticeExtension& ext, int n1, int t, int r, int N,
                                        const DecompositionOptions& opt) {
  Decomposition d = decomposition_data(ext, n1);
  GroupHandle G(ext, N), G1(d.ext1, N), G2(d.ext2, N);
  for (int p = 2; p < r; ++p) {
    for (int i = 0; i <= std::min(t, d.n1); ++i) {
      CharClassReport c = analyze(G1, i, p);
      if (!c.trivial || (c.v_order && nonzero(*c.v_order)))
        throw HypothesisFails("first factor: v_" + std::to_string(p) + "^" + std::to_string(i) + " is not zero");
    }
    for (int j = 0; j <= std::min(t, d.n2); ++j) {
      CharClassReport c = analyze(G2, j, p);
      if (!c.trivial || (c.v_order && nonzero(*c.v_order)))
        throw HypothesisFails("second factor: v_" + std::to_string(p) + "^" + std::to_string(j) + " is not zero");
    }
  }
  DecompositionReport rep;
  rep.t = t;
  rep.r = r;
  std::vector<int> sigma(ext.H->order());
  for (int h = 0; h < ext.H->order(); ++h) sigma[h] = h;
  const auto& P = G.context()->resolution();
  ComparisonMap phi1(P, G1.context()->resolution(), sigma, d.proj1, N);
  ComparisonMap phi2(P, G2.context()->resolution(), sigma, d.proj2, N);

  // U_i = Lambda^i L1 and V_j = Lambda^j L2 over the context of ext.
  std::map<int, std::unique_ptr<LhsComplex>> Us, Vs;
  auto U = [&](int i) -> const LhsComplex& {
    auto& s = Us[i];
    if (!s) s = std::make_unique<LhsComplex>(G.context(), exterior_power_module(d.ext1, i));
    return *s;
  };
  auto V = [&](int j) -> const LhsComplex& {
    auto& s = Vs[j];
    if (!s) s = std::make_unique<LhsComplex>(G.context(), exterior_power_module(d.ext2, j));
    return *s;
  };
  auto pull1 = [&](int i, int deg, const RatVector& f) { return pullback(phi1, G1.homology_complex(i), U(i), deg, f); };
  auto pull2 = [&](int j, int deg, const RatVector& f) { return pullback(phi2, G2.homology_complex(j), V(j), deg, f); };
  auto P_ij = [&](int i, int a, const RatVector& x, int j, int b, const RatVector& y) {
    return cup_product(U(i), a, pull1(i, a, x), V(j), b, pull2(j, b, y), G.homology_complex(i + j), d.wedge(i, j));
  };

  if (t <= ext.n) {
    const SpectralSequence& ss = G.homology_ss(t);
    auto page = ss.page(r, r, t - r + 1);
    try {
      CharClassReport v = characteristic_class(G, t, r);
      rep.lhs = v.v_coords;
    } catch (const NotTrivial&) {
      return rep;
    }
    RatVector sum(G.homology_complex(t).complex()->rank(t + 1));
    for (int i = std::max(0, t - d.n2); i <= std::min(t, d.n1); ++i) {
      const int j = t - i;
      LiftResult id1 = identity_on_page(G1, i, r), id2 = identity_on_page(G2, j, r);
      RatVector v1 = G1.homology_ss(i).differential(id1.cls).rep;
      RatVector v2 = G2.homology_ss(j).differential(id2.cls).rep;
      sum = axpy(sum, 1, P_ij(i, i + 1, v1, j, j, id2.cls.rep));
      sum = axpy(sum, i % 2 ? -1 : 1, P_ij(i, i, id1.cls.rep, j, j + 1, v2));
    }
    rep.rhs = page->normalize(ss.coordinates(PageClass{r, r, t - r + 1, sum}));
    rep.formula_ok = same_class(*page, rep.lhs, rep.rhs);
  } else {
    rep.formula_ok = true;
  }

  // Leibniz for P_{i,j} on random page-r classes.
  std::mt19937_64 rng(opt.seed);
  struct Slot {
    int k, p, q;
  };
  std::vector<Slot> xs, ys;
  for (int i = 0; i <= d.n1; ++i)
    for (int n = 0; n + 1 <= N; ++n)
      for (int p = 0; p <= n; ++p)
        if (!G1.homology_ss(i).page(r, p, n - p)->is_trivial()) xs.push_back({i, p, n - p});
  for (int j = 0; j <= d.n2; ++j)
    for (int n = 0; n + 1 <= N; ++n)
      for (int p = 0; p <= n; ++p)
        if (!G2.homology_ss(j).page(r, p, n - p)->is_trivial()) ys.push_back({j, p, n - p});
  for (int attempt = 0; attempt < 20 * opt.leibniz_samples && rep.leibniz_checked < opt.leibniz_samples; ++attempt) {
    if (xs.empty() || ys.empty()) break;
    Slot x = xs[rng() % xs.size()], y = ys[rng() % ys.size()];
    const int a = x.p + x.q, b = y.p + y.q;
    if (a + b + 1 > N) continue;
    const SpectralSequence& s1 = G1.homology_ss(x.k);
    const SpectralSequence& s2 = G2.homology_ss(y.k);
    const SpectralSequence& s = G.homology_ss(x.k + y.k);
    PageClass cx = s1.from_coordinates(r, x.p, x.q, random_coords(rng, *s1.page(r, x.p, x.q)));
    PageClass cy = s2.from_coordinates(r, y.p, y.q, random_coords(rng, *s2.page(r, y.p, y.q)));
    RatVector prod = P_ij(x.k, a, cx.rep, y.k, b, cy.rep);
    RatVector lhs = s.coordinates(s.differential(PageClass{r, x.p + y.p, x.q + y.q, prod}));
    RatVector r1 = P_ij(x.k, a + 1, s1.differential(cx).rep, y.k, b, cy.rep);
    RatVector r2 = P_ij(x.k, a, cx.rep, y.k, b + 1, s2.differential(cy).rep);
    const int sign = opt.mutate_sign ? 1 : (a % 2 ? -1 : 1);
    RatVector rhs = s.coordinates(PageClass{r, x.p + y.p + r, x.q + y.q - r + 1, axpy(r1, sign, r2)});
    ++rep.leibniz_checked;
    if (!same_class(*s.page(r, x.p + y.p + r, x.q + y.q - r + 1), lhs, rhs)) ++rep.leibniz_failures;
  }

  // The same rule on raw cochains, where a sign error cannot hide.
  for (int i = 0; i <= d.n1; ++i)
    for (int j = 0; j <= d.n2; ++j)
      for (int a = 0; a <= 2; ++a)
        for (int b = 0; a + b + 1 <= std::min(N, 4); ++b) {
          const LhsComplex& W = G.homology_complex(i + j);
          RatVector f(U(i).complex()->rank(a)), g(V(j).complex()->rank(b));
          for (auto& c : f) c = static_cast<long>(rng() % 5) - 2;
          for (auto& c : g) c = static_cast<long>(rng() % 5) - 2;
          Pairing w = d.wedge(i, j);
          RatVector lhs = W.coboundary(a + b, cup_product(U(i), a, f, V(j), b, g, W, w));
          RatVector r1 = cup_product(U(i), a + 1, U(i).coboundary(a, f), V(j), b, g, W, w);
          RatVector r2 = cup_product(U(i), a, f, V(j), b + 1, V(j).coboundary(b, g), W, w);
          const int sign = opt.mutate_sign ? 1 : (a % 2 ? -1 : 1);
          ++rep.cochain_checked;
          if (lhs != axpy(r1, sign, r2)) ++rep.cochain_failures;
        }
  return rep;
}

// --------------------------------------------------------------- collapse

CollapseCertificate collapse_certificate(const ExtensionHandle& ext, int max_t) {
  if (max_t > ext.max_degree() - 2) throw TruncationTooSmall("max_t exceeds max_degree - 2");
  CollapseCertificate cert;
  cert.max_t = max_t;
  for (int t = 0; t <= std::min(max_t, ext.kernel_rank()); ++t) {
    const SpectralSequence& ss = ext.homology_ss(t);
    for (int m = 2; m <= t + 1; ++m) {
      EdgeEvidence ev{t, m, ss.differential_matrix(m, 0, t).is_zero(), std::nullopt};
      ev.order = compute_v(ext, t, m).order;
      cert.evidence.push_back(ev);
      if (!ev.zero) {
        if (cert.collapses) cert.witness = Witness{m, 0, t};
        cert.collapses = false;
        break;  // later pages at this t are not (t, m)-trivial
      }
    }
  }
  if (ext.kind() == "group")
    for (int m = 2; m <= max_t + 1; ++m)
      for (int t = std::max(2, m); t <= max_t; ++t) {
        auto pp = prime_power(t);
        if (pp && (m - 1) % (pp->p - 1) == 0) cert.decisive_t[m].push_back(t);
      }
  cert.verdict = cert.collapses ? "COLLAPSES_UP_TO(" + std::to_string(max_t) + ")"
                                : "WITNESS d_" + std::to_string(cert.witness->page) + "^{0," +
                                      std::to_string(cert.witness->t) + "}";
  return cert;
}

}  // namespace obstrukt
