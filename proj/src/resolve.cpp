#include "obstrukt/resolve.hpp"

#include <algorithm>

#include "obstrukt/exactlin.hpp"

namespace obstrukt {

long add_checked(long a, long b) {
  long r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("chain coefficient overflow");
  return r;
}

long mul_checked(long a, long b) {
  long r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("chain coefficient overflow");
  return r;
}

// ---------------------------------------------------------------------------
// Finite group resolutions

namespace {

// Z-basis index of h * gen inside B_p.
std::size_t zindex(int order, int h, int gen) { return static_cast<std::size_t>(gen) * order + h; }

IntVector to_zvector(const HChain& x, int order, int rank) {
  IntVector v(static_cast<std::size_t>(order) * rank);
  for (const auto& [t, c] : x) v[zindex(order, t.h, t.gen)] += c;
  return v;
}

HChain from_zvector(const IntVector& v, int order) {
  HChain x;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) {
      if (!v[i].fits_slong_p()) throw std::overflow_error("resolution coefficient overflow");
      x.add(HTerm{static_cast<int>(i % order), static_cast<int>(i / order)}, v[i].get_si());
    }
  return x;
}

HChain left_mul(const FiniteGroup& H, int h, const HChain& x) {
  HChain r;
  for (const auto& [t, c] : x) r.add(HTerm{H.mul(h, t.h), t.gen}, c);
  return r;
}

}  // namespace

std::shared_ptr<const FinResolution> FinResolution::bar(std::shared_ptr<const FiniteGroup> H, int top) {
  std::shared_ptr<FinResolution> r(new FinResolution(Flavor::Bar, H));
  const int e = H->identity();
  std::vector<int> nontrivial;
  for (int a = 0; a < H->order(); ++a)
    if (a != e) nontrivial.push_back(a);
  r->tuples_.push_back({{}});
  for (int p = 1; p <= top; ++p) {
    std::vector<std::vector<int>> next;
    for (const auto& t : r->tuples_[p - 1])
      for (int a : nontrivial) {
        auto u = t;
        u.push_back(a);
        next.push_back(u);
      }
    r->tuples_.push_back(std::move(next));
  }
  for (int p = 0; p <= top; ++p) {
    r->rank_.push_back(static_cast<int>(r->tuples_[p].size()));
    for (int i = 0; i < r->rank_[p]; ++i) r->tuple_index_[r->tuples_[p][i]] = i;
  }
  r->bd_.resize(top + 1);
  r->bd_[0].resize(1);
  for (int p = 1; p <= top; ++p)
    for (const auto& t : r->tuples_[p]) {
      HChain b;
      auto face = [&](std::vector<int> u, int h, long sign) {
        for (int x : u)
          if (x == e) return;
        b.add(HTerm{h, r->tuple_index_.at(u)}, sign);
      };
      face(std::vector<int>(t.begin() + 1, t.end()), t[0], 1);
      for (int i = 0; i + 1 < p; ++i) {
        std::vector<int> u(t.begin(), t.begin() + i);
        u.push_back(H->mul(t[i], t[i + 1]));
        u.insert(u.end(), t.begin() + i + 2, t.end());
        face(u, e, (i + 1) % 2 ? -1 : 1);
      }
      face(std::vector<int>(t.begin(), t.end() - 1), e, p % 2 ? -1 : 1);
      r->bd_[p].push_back(std::move(b));
    }
  return r;
}

std::shared_ptr<const FinResolution> FinResolution::periodic(std::shared_ptr<const FiniteGroup> H, int top) {
  auto g = H->cyclic_generator();
  if (!g) throw NotCyclic("periodic resolution needs a cyclic group");
  std::shared_ptr<FinResolution> r(new FinResolution(Flavor::Periodic, H));
  const int m = H->order();
  r->gen_elt_ = *g;
  r->power_.assign(m, 0);
  r->elt_.assign(m, 0);
  int x = H->identity();
  for (int i = 0; i < m; ++i) {
    r->elt_[i] = x;
    r->power_[x] = i;
    x = H->mul(x, *g);
  }
  r->rank_.assign(top + 1, 1);
  r->bd_.assign(top + 1, std::vector<HChain>(1));
  for (int p = 1; p <= top; ++p) {
    HChain b;
    if (p % 2) {
      b.add(HTerm{*g, 0}, 1);
      b.add(HTerm{H->identity(), 0}, -1);
    } else {
      for (int i = 0; i < m; ++i) b.add(HTerm{r->elt_[i], 0}, 1);
    }
    r->bd_[p][0] = b;
  }
  return r;
}

std::shared_ptr<const FinResolution> FinResolution::reduced(std::shared_ptr<const FiniteGroup> H, int top) {
  std::shared_ptr<FinResolution> r(new FinResolution(Flavor::Reduced, H));
  const int order = H->order();
  const int e = H->identity();
  r->rank_.push_back(1);
  r->bd_.push_back({HChain{}});
  // Z-matrix of the previous boundary (or augmentation), columns = Z-basis of B_{p-1}.
  IntMatrix prev(1, order);
  for (int h = 0; h < order; ++h) prev(0, h) = 1;
  std::vector<IntMatrix> dmat{prev};  // dmat[p] : B_p -> B_{p-1} (p = 0: augmentation)
  for (int p = 1; p <= top; ++p) {
    IntMatrix K = kernel_basis(dmat[p - 1]);
    const std::size_t amb = K.rows();
    IntMatrix span(amb, 0);
    std::vector<IntVector> chosen;
    auto orbit = [&](const IntVector& v) {
      HChain x = from_zvector(v, order);
      IntMatrix o(amb, order);
      for (int h = 0; h < order; ++h) {
        IntVector w = to_zvector(left_mul(*H, h, x), order, r->rank_[p - 1]);
        for (std::size_t i = 0; i < amb; ++i) o(i, h) = w[i];
      }
      return o;
    };
    std::vector<bool> covered(K.cols(), false);
    for (;;) {
      std::size_t best = K.cols();
      std::size_t best_rank = rank_q(to_rational(span));
      std::size_t base_rank = best_rank;
      for (std::size_t j = 0; j < K.cols(); ++j) {
        if (covered[j]) continue;
        if (solve_integer(span, K.column(j))) {
          covered[j] = true;
          continue;
        }
        std::size_t rk = rank_q(to_rational(span.hcat(orbit(K.column(j)))));
        if (best == K.cols() || rk > best_rank) {
          best = j;
          best_rank = rk;
        }
      }
      if (best == K.cols()) break;
      (void)base_rank;
      chosen.push_back(K.column(best));
      span = span.hcat(orbit(K.column(best)));
      covered[best] = true;
    }
    r->rank_.push_back(static_cast<int>(chosen.size()));
    std::vector<HChain> bd;
    IntMatrix dm(amb, static_cast<std::size_t>(order) * chosen.size());
    for (std::size_t k = 0; k < chosen.size(); ++k) {
      bd.push_back(from_zvector(chosen[k], order));
      IntMatrix o = orbit(chosen[k]);
      for (int h = 0; h < order; ++h)
        for (std::size_t i = 0; i < amb; ++i) dm(i, zindex(order, h, static_cast<int>(k))) = o(i, h);
    }
    r->bd_.push_back(std::move(bd));
    dmat.push_back(dm);
  }
  // Homotopy: s_p(x) solves d s_p(x) = x - s_{p-1}(d x), p < top.
  r->hom_.resize(top);
  for (int p = 0; p < top; ++p) {
    for (int gen = 0; gen < r->rank_[p]; ++gen)
      for (int h = 0; h < order; ++h) {
        HChain x;
        x.add(HTerm{h, gen}, 1);
        HChain target = x;
        if (p == 0) {
          target.add(HTerm{e, 0}, -1);
        } else {
          target -= r->homotopy(p - 1, r->d(p, x));
        }
        auto sol = solve_integer(dmat[p + 1], to_zvector(target, order, r->rank_[p]));
        if (!sol) throw std::logic_error("reduced resolution is not exact");
        r->hom_[p].push_back(from_zvector(*sol, order));
      }
  }
  return r;
}

std::shared_ptr<const FinResolution> FinResolution::standard(std::shared_ptr<const FiniteGroup> H, int top) {
  if (H->cyclic_generator()) return periodic(std::move(H), top);
  return reduced(std::move(H), top);
}

HChain FinResolution::d(int p, const HChain& x) const {
  HChain r;
  if (p == 0) return r;
  for (const auto& [t, c] : x) r.add(left_mul(*H_, t.h, bd_[p][t.gen]), c);
  return r;
}

HChain FinResolution::homotopy_cell(int p, int h, int gen) const {
  if (p >= top()) throw std::out_of_range("homotopy beyond the resolution's top degree");
  HChain r;
  switch (flavor_) {
    case Flavor::Bar: {
      if (h == H_->identity()) return r;
      std::vector<int> u{h};
      const auto& t = tuples_[p][gen];
      u.insert(u.end(), t.begin(), t.end());
      r.add(HTerm{H_->identity(), tuple_index_.at(u)}, 1);
      return r;
    }
    case Flavor::Periodic: {
      const int i = power_[h];
      if (p % 2 == 0) {
        for (int j = 0; j < i; ++j) r.add(HTerm{elt_[j], 0}, 1);
      } else if (i == H_->order() - 1) {
        r.add(HTerm{H_->identity(), 0}, 1);
      }
      return r;
    }
    case Flavor::Reduced:
      return hom_[p][zindex(H_->order(), h, gen)];
  }
  return r;
}

HChain FinResolution::homotopy(int p, const HChain& x) const {
  HChain r;
  for (const auto& [t, c] : x) r.add(homotopy_cell(p, t.h, t.gen), c);
  return r;
}

long FinResolution::augmentation(const HChain& x) const {
  long s = 0;
  for (const auto& [t, c] : x) s = add_checked(s, c);
  return s;
}

std::string FinResolution::gen_label(int p, int gen) const {
  if (flavor_ == Flavor::Bar) {
    std::string s = "[";
    const auto& t = tuples_[p][gen];
    for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "|" : "") + H_->name(t[i]);
    return s + "]";
  }
  return "b" + std::to_string(p) + "." + std::to_string(gen);
}

int FinResolution::bar_index(const std::vector<int>& tuple) const {
  auto it = tuple_index_.find(tuple);
  return it == tuple_index_.end() ? -1 : it->second;
}

std::vector<std::vector<HChain>> fin_comparison(const FinResolution& src, const FinResolution& dst,
                                                const std::vector<int>& embed, int top) {
  const FiniteGroup& Hd = dst.group();
  if (static_cast<int>(embed.size()) != src.group().order())
    throw IncompatibleActions("embedding has the wrong length");
  for (int a = 0; a < src.group().order(); ++a)
    for (int b = 0; b < src.group().order(); ++b)
      if (embed[src.group().mul(a, b)] != Hd.mul(embed[a], embed[b]))
        throw IncompatibleActions("embedding is not a homomorphism");
  if (top > src.top() || top > dst.top()) throw std::out_of_range("comparison beyond resolution top");
  std::vector<std::vector<HChain>> phi(top + 1);
  HChain base;
  base.add(HTerm{Hd.identity(), 0}, 1);
  phi[0].push_back(base);
  for (int p = 1; p <= top; ++p)
    for (int gen = 0; gen < src.rank(p); ++gen) {
      HChain z;
      for (const auto& [t, c] : src.boundary(p, gen)) z.add(left_mul(Hd, embed[t.h], phi[p - 1][t.gen]), c);
      phi[p].push_back(dst.homotopy(p - 1, z));
    }
  return phi;
}

// ---------------------------------------------------------------------------
// Koszul

namespace {

int lowest_bit(unsigned mask, int n) {
  for (int k = 0; k < n; ++k)
    if (mask >> k & 1u) return k;
  return n;
}

}  // namespace

KChain koszul_d(int n, const KChain& x) {
  KChain r;
  for (const auto& [cell, c] : x) {
    int j = 0;
    for (int s = 0; s < n; ++s) {
      if (!(cell.mask >> s & 1u)) continue;
      long sign = j % 2 ? -c : c;
      KCell up{cell.l, cell.mask & ~(1u << s)};
      up.l[s] += 1;
      r.add(up, sign);
      r.add(KCell{cell.l, cell.mask & ~(1u << s)}, -sign);
      ++j;
    }
  }
  return r;
}

KChain koszul_homotopy(int n, const KChain& x) {
  KChain r;
  for (const auto& [cell, c] : x) {
    const int lo = lowest_bit(cell.mask, n);
    for (int k = 0; k < lo; ++k) {
      const long a = cell.l[k];
      if (a == 0) continue;
      KCell out{cell.l, cell.mask | (1u << k)};
      for (int j = 0; j < k; ++j) out.l[j] = 0;
      if (a > 0) {
        for (long v = 0; v < a; ++v) {
          out.l[k] = v;
          r.add(out, c);
        }
      } else {
        for (long v = a; v < 0; ++v) {
          out.l[k] = v;
          r.add(out, -c);
        }
      }
    }
  }
  return r;
}

long koszul_augmentation(const KChain& x) {
  long s = 0;
  for (const auto& [cell, c] : x)
    if (cell.mask == 0) s = add_checked(s, c);
  return s;
}

std::vector<int> koszul_ranks(int n) {
  std::vector<int> r(n + 1, 1);
  for (int q = 1; q <= n; ++q) r[q] = r[q - 1] * (n - q + 1) / q;
  return r;
}

// ---------------------------------------------------------------------------
// Perturbed resolution

PerturbedResolution::PerturbedResolution(LatticeExtension ext, std::shared_ptr<const FinResolution> base, int top)
    : ext_(std::move(ext)), base_(std::move(base)), top_(top) {
  ext_.validate();
  const int n = ext_.n;
  if (n > kMaxLatticeRank) throw std::out_of_range("lattice rank above the supported maximum");
  if (&base_->group() != ext_.H.get() && base_->group().table() != ext_.H->table())
    throw IncompatibleActions("base resolution is over a different group");
  if (base_->top() < top) throw std::out_of_range("base resolution too short");
  for (int h = 0; h < ext_.H->order(); ++h) {
    const IntMatrix& m = ext_.rho[ext_.H->inv(h)];
    std::vector<long> flat;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) flat.push_back(m(i, j).get_si());
    rho_inv_.push_back(flat);
  }
  by_degree_.resize(top + 1);
  for (int deg = 0; deg <= top; ++deg)
    for (int p = 0; p <= deg; ++p) {
      const int q = deg - p;
      if (q > n) continue;
      for (int beta = 0; beta < base_->rank(p); ++beta)
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
          if (__builtin_popcount(mask) != q) continue;
          int id = static_cast<int>(gens_.size());
          gens_.push_back(Gen{deg, p, q, beta, mask});
          pos_.push_back(static_cast<int>(by_degree_[deg].size()));
          by_degree_[deg].push_back(id);
          lookup_[{p, beta, mask}] = id;
        }
    }
  const int e = ext_.H->identity();
  dk_.resize(gens_.size());
  dtot_.resize(gens_.size());
  for (int deg = 0; deg <= top; ++deg)
    for (int id : by_degree_[deg]) {
      const Gen& g = gens_[id];
      PChain x;
      x.add(PCell{id, e, Lat{}}, 1);
      auto& comp = dk_[id];
      comp.resize(g.p + 1);
      // d_0: Koszul
      KChain k;
      k.add(KCell{Lat{}, g.mask}, 1);
      for (const auto& [cell, c] : koszul_d(n, k)) comp[0].add(PCell{find_gen(g.p, g.beta, cell.mask), e, cell.l}, c);
      for (int kk = 1; kk <= g.p; ++kk) {
        if (kk == 1 && g.q == 0) {
          comp[1] = iota(g.p - 1, base_->boundary(g.p, g.beta));
          continue;
        }
        PChain y;
        for (int i = 1; i <= kk; ++i) y += d_k(i, comp[kk - i]);
        comp[kk] = -s0(y);
      }
      for (const auto& c : comp) dtot_[id] += c;
    }
}

int PerturbedResolution::find_gen(int p, int beta, unsigned mask) const {
  auto it = lookup_.find({p, beta, mask});
  if (it == lookup_.end()) throw std::out_of_range("generator outside the truncation");
  return it->second;
}

std::string PerturbedResolution::gen_label(int id) const {
  const Gen& g = gens_[id];
  std::string s = base_->gen_label(g.p, g.beta) + "e{";
  bool first = true;
  for (int i = 0; i < ext_.n; ++i)
    if (g.mask >> i & 1u) {
      s += (first ? "" : ",") + std::to_string(i + 1);
      first = false;
    }
  return s + "}";
}

GElt PerturbedResolution::mul(const GElt& a, const GElt& b) const {
  GElt r;
  r.h = ext_.H->mul(a.h, b.h);
  const int n = ext_.n;
  const auto& m = rho_inv_[b.h];
  for (int i = 0; i < n; ++i) {
    long s = b.l[i];
    for (int j = 0; j < n; ++j) s = add_checked(s, mul_checked(m[i * n + j], a.l[j]));
    r.l[i] = s;
  }
  return r;
}

GElt PerturbedResolution::inverse(const GElt& a) const {
  // (h t^l)^-1 = t^-l h^-1 = h^-1 t^{-rho(h) l}
  GElt r;
  r.h = ext_.H->inv(a.h);
  const int n = ext_.n;
  const auto& m = rho_inv_[r.h];  // rho(h^-1)^-1 = rho(h)
  for (int i = 0; i < n; ++i) {
    long s = 0;
    for (int j = 0; j < n; ++j) s = add_checked(s, mul_checked(m[i * n + j], a.l[j]));
    r.l[i] = -s;
  }
  return r;
}

PChain PerturbedResolution::act(const GElt& g, const PChain& x) const {
  PChain r;
  for (const auto& [cell, c] : x) {
    GElt prod = mul(g, GElt{cell.h, cell.l});
    r.add(PCell{cell.gen, prod.h, prod.l}, c);
  }
  return r;
}

const PChain& PerturbedResolution::d_component(int id, int k) const {
  static const PChain zero;
  if (k < 0 || k >= static_cast<int>(dk_[id].size())) return zero;
  return dk_[id][k];
}

PChain PerturbedResolution::d(const PChain& x) const {
  PChain r;
  for (const auto& [cell, c] : x) r.add(act(GElt{cell.h, cell.l}, dtot_[cell.gen]), c);
  return r;
}

PChain PerturbedResolution::d_k(int k, const PChain& x) const {
  PChain r;
  for (const auto& [cell, c] : x) {
    const PChain& comp = d_component(cell.gen, k);
    if (!comp.empty()) r.add(act(GElt{cell.h, cell.l}, comp), c);
  }
  return r;
}

int PerturbedResolution::max_perturbation() const {
  int best = 0;
  for (const auto& comp : dk_)
    for (int k = 0; k < static_cast<int>(comp.size()); ++k)
      if (!comp[k].empty()) best = std::max(best, k);
  return best;
}

PChain PerturbedResolution::s0(const PChain& x) const {
  PChain r;
  const int n = ext_.n;
  for (const auto& [cell, c] : x) {
    const Gen& g = gens_[cell.gen];
    KChain k;
    k.add(KCell{cell.l, g.mask}, 1);
    for (const auto& [kc, kcoef] : koszul_homotopy(n, k))
      r.add(PCell{find_gen(g.p, g.beta, kc.mask), cell.h, kc.l}, mul_checked(kcoef, c));
  }
  return r;
}

PChain PerturbedResolution::iota(int p, const HChain& x) const {
  PChain r;
  for (const auto& [t, c] : x) r.add(PCell{find_gen(p, t.gen, 0), t.h, Lat{}}, c);
  return r;
}

HChain PerturbedResolution::pi(const PChain& x) const {
  HChain r;
  for (const auto& [cell, c] : x) {
    const Gen& g = gens_[cell.gen];
    if (g.q == 0) r.add(HTerm{cell.h, g.beta}, c);
  }
  return r;
}

long PerturbedResolution::augmentation(const PChain& x) const {
  long s = 0;
  for (const auto& [cell, c] : x)
    if (gens_[cell.gen].n == 0) s = add_checked(s, c);
  return s;
}

int PerturbedResolution::degree(const PChain& x) const {
  if (x.empty()) return -1;
  return gens_[x.begin()->first.gen].n;
}

PChain PerturbedResolution::solve(const PChain& z0, int bound) const {
  PChain y, z = z0;
  if (z.empty()) return y;
  const int m = degree(z);
  if (m + 1 > top_) throw UnsolvableInFiltration("solve beyond the truncation");
  int maxp = 0;
  for (const auto& [cell, c] : z) maxp = std::max(maxp, filtration(cell));
  if (maxp > bound) throw UnsolvableInFiltration("right-hand side lies outside the filtration bound");
  auto layer = [&](int g) {
    PChain part;
    for (const auto& [cell, c] : z)
      if (filtration(cell) == g) part.add(cell, c);
    return part;
  };
  for (int g = maxp; g >= 0; --g) {
    PChain zg = layer(g);
    if (zg.empty()) continue;
    if (g == m) {
      HChain b = pi(zg);
      if (!b.empty()) {
        if (m + 1 > bound) throw UnsolvableInFiltration("bottom-row correction needs filtration " + std::to_string(m + 1));
        PChain w = iota(m + 1, base_->homotopy(m, b));
        y += w;
        z -= d(w);
        zg = layer(g);
        if (!pi(zg).empty()) throw UnsolvableInFiltration("not a boundary");
      }
    }
    PChain w = s0(zg);
    y += w;
    z -= d(w);
    if (!layer(g).empty()) throw UnsolvableInFiltration("not a cycle");
  }
  if (!z.empty()) throw UnsolvableInFiltration("residual after descending solve");
  return y;
}

PChain PerturbedResolution::homotopy(const PChain& x) const {
  if (x.empty()) return {};
  const int n = degree(x);
  PChain t = x;
  if (n == 0) {
    PChain base;
    base.add(base_cell(), augmentation(x));
    t -= base;
  } else {
    t -= homotopy(d(x));
  }
  return solve(t);
}

// ---------------------------------------------------------------------------
// Tensor square

namespace {

struct BBCell {
  int pa;
  HTerm a;
  int pb;
  HTerm b;
  friend bool operator<(const BBCell& x, const BBCell& y) {
    return std::tie(x.pa, x.a.gen, x.a.h, x.pb, x.b.gen, x.b.h) < std::tie(y.pa, y.a.gen, y.a.h, y.pb, y.b.gen, y.b.h);
  }
};

QChain tensor(const PChain& a, const PChain& b, long scale) {
  QChain r;
  for (const auto& [ca, xa] : a)
    for (const auto& [cb, xb] : b) r.add(QCell{ca, cb}, mul_checked(mul_checked(xa, xb), scale));
  return r;
}

PChain single(const PCell& c) {
  PChain r;
  r.add(c, 1);
  return r;
}

}  // namespace

QChain TensorSquare::d(const QChain& x) const {
  QChain r;
  for (const auto& [cell, c] : x) {
    const int da = P_->gen(cell.a.gen).n;
    r.add(tensor(P_->d(single(cell.a)), single(cell.b), c));
    r.add(tensor(single(cell.a), P_->d(single(cell.b)), da % 2 ? -c : c));
  }
  return r;
}

QChain TensorSquare::act(const GElt& g, const QChain& x) const {
  QChain r;
  for (const auto& [cell, c] : x) {
    GElt a = P_->mul(g, GElt{cell.a.h, cell.a.l});
    GElt b = P_->mul(g, GElt{cell.b.h, cell.b.l});
    r.add(QCell{PCell{cell.a.gen, a.h, a.l}, PCell{cell.b.gen, b.h, b.l}}, c);
  }
  return r;
}

QChain TensorSquare::s0(const QChain& x) const {
  QChain r;
  for (const auto& [cell, c] : x) {
    r.add(tensor(P_->s0(single(cell.a)), single(cell.b), c));
    const auto& ga = P_->gen(cell.a.gen);
    if (ga.q == 0) {
      PCell flat{cell.a.gen, cell.a.h, Lat{}};
      r.add(tensor(single(flat), P_->s0(single(cell.b)), ga.n % 2 ? -c : c));
    }
  }
  return r;
}

int TensorSquare::degree(const QChain& x) const {
  if (x.empty()) return -1;
  const auto& c = x.begin()->first;
  return P_->gen(c.a.gen).n + P_->gen(c.b.gen).n;
}

QChain TensorSquare::solve(const QChain& z0, int bound) const {
  QChain y, z = z0;
  if (z.empty()) return y;
  const int m = degree(z);
  const FinResolution& B = P_->base();
  const int e = P_->group().identity();
  int maxp = 0;
  for (const auto& [cell, c] : z) maxp = std::max(maxp, filtration(cell));
  if (maxp > bound) throw UnsolvableInFiltration("right-hand side lies outside the filtration bound");
  auto layer = [&](int g) {
    QChain part;
    for (const auto& [cell, c] : z)
      if (filtration(cell) == g) part.add(cell, c);
    return part;
  };
  auto project = [&](const QChain& q) {
    Lin<BBCell> r;
    for (const auto& [cell, c] : q) {
      const auto& ga = P_->gen(cell.a.gen);
      const auto& gb = P_->gen(cell.b.gen);
      if (ga.q == 0 && gb.q == 0) r.add(BBCell{ga.p, HTerm{cell.a.h, ga.beta}, gb.p, HTerm{cell.b.h, gb.beta}}, c);
    }
    return r;
  };
  for (int g = maxp; g >= 0; --g) {
    QChain zg = layer(g);
    if (zg.empty()) continue;
    if (g == m) {
      Lin<BBCell> b = project(zg);
      if (!b.empty()) {
        if (m + 1 > bound) throw UnsolvableInFiltration("bottom-row correction needs filtration " + std::to_string(m + 1));
        QChain w;
        for (const auto& [cell, c] : b) {
          HChain u, v;
          u.add(cell.a, 1);
          v.add(cell.b, 1);
          // h (x) 1 + (-1)^{|u|} eta eps (x) h
          w.add(tensor(P_->iota(cell.pa + 1, B.homotopy(cell.pa, u)), P_->iota(cell.pb, v), c));
          if (cell.pa == 0) {
            HChain base;
            base.add(HTerm{e, 0}, 1);
            w.add(tensor(P_->iota(0, base), P_->iota(cell.pb + 1, B.homotopy(cell.pb, v)), c));
          }
        }
        y += w;
        z -= d(w);
        zg = layer(g);
        if (!project(zg).empty()) throw UnsolvableInFiltration("not a boundary");
      }
    }
    QChain w = s0(zg);
    y += w;
    z -= d(w);
    if (!layer(g).empty()) throw UnsolvableInFiltration("not a cycle");
  }
  if (!z.empty()) throw UnsolvableInFiltration("residual after descending solve");
  return y;
}

// ---------------------------------------------------------------------------
// Diagonal and comparison maps

Diagonal::Diagonal(std::shared_ptr<const PerturbedResolution> P, int top) : P_(P), Q_(P), top_(top) {
  if (top > P_->top()) throw std::out_of_range("diagonal beyond the resolution's truncation");
  const PCell x0 = P_->base_cell();
  QChain d0;
  d0.add(QCell{x0, x0}, 1);
  delta_[x0.gen] = d0;
  for (int n = 1; n <= top; ++n)
    for (int id : P_->gens(n)) delta_[id] = Q_.solve(apply(P_->d_gen(id)), P_->gen(id).p);
}

QChain Diagonal::apply(const PChain& x) const {
  QChain r;
  for (const auto& [cell, c] : x) r.add(Q_.act(GElt{cell.h, cell.l}, delta_.at(cell.gen)), c);
  return r;
}

ComparisonMap::ComparisonMap(std::shared_ptr<const PerturbedResolution> src, std::shared_ptr<const PerturbedResolution> dst,
                             std::vector<int> sigma, IntMatrix A, int top)
    : src_(std::move(src)), dst_(std::move(dst)), sigma_(std::move(sigma)), top_(top) {
  const auto& es = src_->extension();
  const auto& ed = dst_->extension();
  if (static_cast<int>(sigma_.size()) != es.H->order()) throw IncompatibleActions("sigma has the wrong length");
  if (static_cast<int>(A.rows()) != ed.n || static_cast<int>(A.cols()) != es.n)
    throw IncompatibleActions("lattice map has the wrong shape");
  for (int a = 0; a < es.H->order(); ++a) {
    for (int b = 0; b < es.H->order(); ++b)
      if (sigma_[es.H->mul(a, b)] != ed.H->mul(sigma_[a], sigma_[b]))
        throw IncompatibleActions("sigma is not a homomorphism");
    if (!(A * es.rho[a] == ed.rho[sigma_[a]] * A)) throw IncompatibleActions("lattice map does not intertwine the actions");
  }
  if (top > dst_->top() || top > src_->top()) throw std::out_of_range("comparison beyond truncation");
  A_.assign(ed.n, std::vector<long>(es.n));
  for (int i = 0; i < ed.n; ++i)
    for (int j = 0; j < es.n; ++j) A_[i][j] = A(i, j).get_si();
  PChain base;
  base.add(dst_->base_cell(), 1);
  phi_[src_->base_cell().gen] = base;
  for (int n = 1; n <= top; ++n)
    for (int id : src_->gens(n)) phi_[id] = dst_->solve(apply(src_->d_gen(id)), src_->gen(id).p);
}

GElt ComparisonMap::map_elt(const GElt& g) const {
  GElt r;
  r.h = sigma_[g.h];
  for (std::size_t i = 0; i < A_.size(); ++i) {
    long s = 0;
    for (std::size_t j = 0; j < A_[i].size(); ++j) s = add_checked(s, mul_checked(A_[i][j], g.l[j]));
    r.l[i] = s;
  }
  return r;
}

PChain ComparisonMap::apply(const PChain& x) const {
  PChain r;
  for (const auto& [cell, c] : x) r.add(dst_->act(map_elt(GElt{cell.h, cell.l}), phi_.at(cell.gen)), c);
  return r;
}

}  // namespace obstrukt
