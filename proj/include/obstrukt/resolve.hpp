#pragma once

#include <array>
#include <climits>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "obstrukt/group.hpp"
#include "obstrukt/matrix.hpp"

namespace obstrukt {

class NotCyclic : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IncompatibleActions : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class PairingNotEquivariant : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A cycle that the descending solver cannot bound within the requested
// filtration, or that is not a boundary at all.
class UnsolvableInFiltration : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Overflow-checked machine arithmetic for chain coefficients.
long add_checked(long a, long b);
long mul_checked(long a, long b);

// Finite formal Z-combination of keys. Zero coefficients are never stored.
template <class K>
class Lin {
 public:
  void add(const K& k, long c) {
    if (c == 0) return;
    auto [it, fresh] = t_.try_emplace(k, c);
    if (!fresh) {
      it->second = add_checked(it->second, c);
      if (it->second == 0) t_.erase(it);
    }
  }
  void add(const Lin& o, long scale = 1) {
    for (const auto& [k, c] : o.t_) add(k, mul_checked(c, scale));
  }
  long coef(const K& k) const {
    auto it = t_.find(k);
    return it == t_.end() ? 0 : it->second;
  }
  bool empty() const { return t_.empty(); }
  std::size_t size() const { return t_.size(); }
  const std::map<K, long>& terms() const { return t_; }
  auto begin() const { return t_.begin(); }
  auto end() const { return t_.end(); }
  friend bool operator==(const Lin& a, const Lin& b) { return a.t_ == b.t_; }
  Lin operator-() const {
    Lin r;
    for (const auto& [k, c] : t_) r.t_.emplace(k, -c);
    return r;
  }
  Lin& operator+=(const Lin& o) {
    add(o);
    return *this;
  }
  Lin& operator-=(const Lin& o) {
    add(o, -1);
    return *this;
  }

 private:
  std::map<K, long> t_;
};

// ---------------------------------------------------------------------------
// Free Z[H]-resolutions of Z for a finite group H.

struct HTerm {
  int h = 0;    // group element
  int gen = 0;  // generator index in its degree
  friend bool operator<(const HTerm& a, const HTerm& b) { return a.gen != b.gen ? a.gen < b.gen : a.h < b.h; }
  friend bool operator==(const HTerm& a, const HTerm& b) { return a.h == b.h && a.gen == b.gen; }
};
using HChain = Lin<HTerm>;

class FinResolution {
 public:
  enum class Flavor { Bar, Periodic, Reduced };

  // Normalized bar resolution: generators [h1|...|hp] with every hi != e.
  static std::shared_ptr<const FinResolution> bar(std::shared_ptr<const FiniteGroup> H, int top);
  // Rank-one periodic resolution of a cyclic group. Throws NotCyclic.
  static std::shared_ptr<const FinResolution> periodic(std::shared_ptr<const FiniteGroup> H, int top);
  // Small resolution built degree by degree from kernel lattices.
  static std::shared_ptr<const FinResolution> reduced(std::shared_ptr<const FiniteGroup> H, int top);
  // Periodic for cyclic groups, reduced otherwise.
  static std::shared_ptr<const FinResolution> standard(std::shared_ptr<const FiniteGroup> H, int top);

  Flavor flavor() const { return flavor_; }
  const FiniteGroup& group() const { return *H_; }
  std::shared_ptr<const FiniteGroup> group_ptr() const { return H_; }
  // Generators exist in degrees 0..top; the homotopy is defined below top.
  int top() const { return static_cast<int>(rank_.size()) - 1; }
  int rank(int p) const { return p < 0 || p > top() ? 0 : rank_[p]; }
  const HChain& boundary(int p, int gen) const { return bd_[p][gen]; }
  // Z-linear extensions on chains.
  HChain d(int p, const HChain& x) const;
  HChain homotopy(int p, const HChain& x) const;
  long augmentation(const HChain& x) const;
  std::string gen_label(int p, int gen) const;
  // Bar generators only.
  const std::vector<int>& bar_tuple(int p, int gen) const { return tuples_[p][gen]; }
  int bar_index(const std::vector<int>& tuple) const;

 private:
  FinResolution(Flavor f, std::shared_ptr<const FiniteGroup> H) : flavor_(f), H_(std::move(H)) {}
  HChain homotopy_cell(int p, int h, int gen) const;

  Flavor flavor_;
  std::shared_ptr<const FiniteGroup> H_;
  std::vector<int> rank_;
  std::vector<std::vector<HChain>> bd_;
  // bar
  std::vector<std::vector<std::vector<int>>> tuples_;
  std::map<std::vector<int>, int> tuple_index_;
  // periodic
  int gen_elt_ = 0;
  std::vector<int> power_;  // element -> exponent of the chosen generator
  std::vector<int> elt_;    // exponent -> element
  // reduced: homotopy image of each Z-basis cell (h, gen), per degree
  std::vector<std::vector<HChain>> hom_;
};

// Chain map between resolutions of K <= H lifting the identity on Z.
// embed maps elements of the source group into the target group.
std::vector<std::vector<HChain>> fin_comparison(const FinResolution& src, const FinResolution& dst,
                                                const std::vector<int>& embed, int top);

// ---------------------------------------------------------------------------
// Koszul resolution of Z over Z[L], L = Z^n, differential by right
// multiplication: d(t^l e_S) = sum_j (-1)^j (t^{l + e_{s_j}} - t^l) e_{S - s_j}.

constexpr int kMaxLatticeRank = 6;
using Lat = std::array<long, kMaxLatticeRank>;

struct KCell {
  Lat l{};
  unsigned mask = 0;
  friend bool operator<(const KCell& a, const KCell& b) { return a.mask != b.mask ? a.mask < b.mask : a.l < b.l; }
  friend bool operator==(const KCell& a, const KCell& b) { return a.mask == b.mask && a.l == b.l; }
};
using KChain = Lin<KCell>;

KChain koszul_d(int n, const KChain& x);
KChain koszul_homotopy(int n, const KChain& x);
long koszul_augmentation(const KChain& x);
// Ranks binom(n, q) for q = 0..n.
std::vector<int> koszul_ranks(int n);

// ---------------------------------------------------------------------------
// Perturbed resolution of Z over Z[G], G = L x| H, filtered by bar degree p.
// Generators (p, q, beta, S): beta a generator of B_p, S a q-subset of the
// lattice basis. d = d_0 + d_1 + ..., d_k of bidegree (-k, k-1).

struct GElt {
  int h = 0;
  Lat l{};
};

// Z-basis cell: (h t^l) * generator.
struct PCell {
  int gen = 0;
  int h = 0;
  Lat l{};
  friend bool operator<(const PCell& a, const PCell& b) {
    if (a.gen != b.gen) return a.gen < b.gen;
    if (a.h != b.h) return a.h < b.h;
    return a.l < b.l;
  }
  friend bool operator==(const PCell& a, const PCell& b) { return a.gen == b.gen && a.h == b.h && a.l == b.l; }
};
using PChain = Lin<PCell>;

class PerturbedResolution {
 public:
  struct Gen {
    int n, p, q, beta;
    unsigned mask;
  };

  PerturbedResolution(LatticeExtension ext, std::shared_ptr<const FinResolution> base, int top);

  const LatticeExtension& extension() const { return ext_; }
  const FiniteGroup& group() const { return *ext_.H; }
  const FinResolution& base() const { return *base_; }
  std::shared_ptr<const FinResolution> base_ptr() const { return base_; }
  int lattice_rank() const { return ext_.n; }
  int top() const { return top_; }

  // Generators of total degree n, as global ids.
  const std::vector<int>& gens(int n) const { return by_degree_[n]; }
  int rank(int n) const { return n < 0 || n > top_ ? 0 : static_cast<int>(by_degree_[n].size()); }
  const Gen& gen(int id) const { return gens_[id]; }
  // Position of a generator inside gens(n).
  int position(int id) const { return pos_[id]; }
  int find_gen(int p, int beta, unsigned mask) const;
  std::string gen_label(int id) const;

  GElt mul(const GElt& a, const GElt& b) const;
  GElt inverse(const GElt& a) const;
  PChain act(const GElt& g, const PChain& x) const;

  const PChain& d_component(int id, int k) const;
  const PChain& d_gen(int id) const { return dtot_[id]; }
  PChain d(const PChain& x) const;
  PChain d_k(int k, const PChain& x) const;
  // Highest k with some nonzero d_k.
  int max_perturbation() const;

  // Column-wise Koszul contraction (Z-linear).
  PChain s0(const PChain& x) const;
  // B_p -> P_{p,0} and its left inverse on q = 0 (L acts through 1).
  PChain iota(int p, const HChain& x) const;
  HChain pi(const PChain& x) const;
  long augmentation(const PChain& x) const;
  int degree(const PChain& x) const;  // -1 for zero
  int filtration(const PCell& c) const { return gens_[c.gen].p; }

  // Some y with d y = z and every cell of y in bar degree <= bound.
  // Throws UnsolvableInFiltration.
  PChain solve(const PChain& z, int bound = INT_MAX) const;
  // Contracting homotopy S with dS + Sd = 1 - eta eps.
  PChain homotopy(const PChain& x) const;
  PCell base_cell() const { return PCell{by_degree_[0][0], ext_.H->identity(), Lat{}}; }

 private:
  LatticeExtension ext_;
  std::shared_ptr<const FinResolution> base_;
  int top_;
  std::vector<Gen> gens_;
  std::vector<std::vector<int>> by_degree_;
  std::vector<int> pos_;
  std::map<std::tuple<int, int, unsigned>, int> lookup_;
  std::vector<std::vector<PChain>> dk_;  // [id][k]
  std::vector<PChain> dtot_;
  std::vector<std::vector<long>> rho_inv_;  // flattened n x n per element
};

// ---------------------------------------------------------------------------
// P (x) P with the diagonal G-action, filtered by total bar degree.

struct QCell {
  PCell a, b;
  friend bool operator<(const QCell& x, const QCell& y) { return x.a < y.a || (x.a == y.a && x.b < y.b); }
  friend bool operator==(const QCell& x, const QCell& y) { return x.a == y.a && x.b == y.b; }
};
using QChain = Lin<QCell>;

class TensorSquare {
 public:
  explicit TensorSquare(std::shared_ptr<const PerturbedResolution> P) : P_(std::move(P)) {}
  const PerturbedResolution& base() const { return *P_; }
  QChain d(const QChain& x) const;
  QChain act(const GElt& g, const QChain& x) const;
  QChain s0(const QChain& x) const;
  QChain solve(const QChain& z, int bound = INT_MAX) const;
  int degree(const QChain& x) const;
  int filtration(const QCell& c) const { return P_->filtration(c.a) + P_->filtration(c.b); }

 private:
  std::shared_ptr<const PerturbedResolution> P_;
};

// Filtration-preserving diagonal approximation P -> P (x) P, G-equivariant,
// built on generators up to `top`.
class Diagonal {
 public:
  Diagonal(std::shared_ptr<const PerturbedResolution> P, int top);
  const QChain& on_gen(int id) const { return delta_.at(id); }
  QChain apply(const PChain& x) const;
  const TensorSquare& square() const { return Q_; }
  int top() const { return top_; }

 private:
  std::shared_ptr<const PerturbedResolution> P_;
  TensorSquare Q_;
  int top_;
  std::map<int, QChain> delta_;
};

// Filtration-preserving chain map P_src -> P_dst over the homomorphism
// (h, l) -> (sigma(h), A l), built on generators up to `top`.
class ComparisonMap {
 public:
  ComparisonMap(std::shared_ptr<const PerturbedResolution> src, std::shared_ptr<const PerturbedResolution> dst,
                std::vector<int> sigma, IntMatrix A, int top);
  const PChain& on_gen(int id) const { return phi_.at(id); }
  PChain apply(const PChain& x) const;
  GElt map_elt(const GElt& g) const;
  const PerturbedResolution& source() const { return *src_; }
  const PerturbedResolution& target() const { return *dst_; }
  int top() const { return top_; }

 private:
  std::shared_ptr<const PerturbedResolution> src_, dst_;
  std::vector<int> sigma_;
  std::vector<std::vector<long>> A_;
  int top_;
  std::map<int, PChain> phi_;
};

}  // namespace obstrukt
