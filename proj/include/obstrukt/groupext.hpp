#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "obstrukt/group.hpp"
#include "obstrukt/resolve.hpp"
#include "obstrukt/specseq.hpp"
#include "obstrukt/subsets.hpp"

namespace obstrukt {

class ActionNotBlockDiagonal : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Free Z[H]-module Z^rank, one action matrix per group element.
struct HModule {
  std::shared_ptr<const FiniteGroup> H;
  int rank = 0;
  std::vector<IntMatrix> action;
  std::string label;

  static HModule trivial(std::shared_ptr<const FiniteGroup> H, int rank = 1);
  // Rank one, h acting by chi[h] = +-1.
  static HModule character(std::shared_ptr<const FiniteGroup> H, const std::vector<int>& chi, std::string label = {});
  // Throws ActionNotHomomorphism.
  void validate() const;
  HModule restricted(std::shared_ptr<const FiniteGroup> K, const std::vector<int>& embed) const;
};

// Lambda^t of an n x n integer matrix, via t x t minors.
IntMatrix exterior_power_matrix(const IntMatrix& m, int t);
HModule exterior_power_module(const LatticeExtension& ext, int t);
// Hom(A, B) with (h f)(a) = h f(h^-1 a); basis index i * B.rank + j is the
// map sending a_i to b_j.
HModule hom_module(const HModule& A, const HModule& B);
HModule tensor_module(const HModule& A, const HModule& B);

// H^p(H, M) through a free resolution (the standard one when B is null).
FGAbelian group_cohomology(const HModule& M, int p, std::shared_ptr<const FinResolution> B = nullptr);

// Bilinear map U x V -> W given by terms (u, v, w, c): u_i (x) v_j -> c w_k.
struct Pairing {
  int ru = 0, rv = 0, rw = 0;
  std::vector<std::tuple<int, int, int, long>> terms;
  RatVector apply(const RatVector& u, const RatVector& v) const;
  // Throws PairingNotEquivariant.
  void check_equivariant(const HModule& U, const HModule& V, const HModule& W) const;
};

// Lambda^i L (x) Lambda^j L -> Lambda^{i+j} L, wedge product.
Pairing wedge_pairing(int n, int i, int j);
// Hom(A, M) (x) A -> M, evaluation.
Pairing evaluation_pairing(int rank_a, int rank_m);

// Shared machinery for one extension: perturbed resolution of Z over G up
// to degree N + 1 and a lazily built diagonal up to degree N.
class ExtensionContext {
 public:
  ExtensionContext(LatticeExtension ext, int N);
  const LatticeExtension& extension() const { return P_->extension(); }
  std::shared_ptr<const PerturbedResolution> resolution() const { return P_; }
  int max_degree() const { return N_; }
  const Diagonal& diagonal() const;

 private:
  std::shared_ptr<const PerturbedResolution> P_;
  int N_;
  mutable std::once_flag once_;
  mutable std::unique_ptr<Diagonal> diag_;
};

// Hom_G(P, M) for M with trivial L-action, filtered by bar degree. Cochain
// basis of C^n: (generator of P_n, basis vector of M), index
// position(gen) * rank(M) + m, at level p(gen).
class LhsComplex {
 public:
  LhsComplex(std::shared_ptr<const ExtensionContext> ctx, HModule M);

  const ExtensionContext& context() const { return *ctx_; }
  std::shared_ptr<const ExtensionContext> context_ptr() const { return ctx_; }
  const PerturbedResolution& resolution() const { return *ctx_->resolution(); }
  const HModule& coefficients() const { return M_; }
  std::shared_ptr<const FilteredComplex> complex() const { return fc_; }
  int max_degree() const { return ctx_->max_degree(); }
  std::size_t index(int id, int m) const;

  // f(x) in M for f in C^n and x a chain of degree n.
  RatVector evaluate(int n, const RatVector& f, const PChain& x) const;
  // f(gen) block.
  RatVector value(int n, const RatVector& f, int id) const;
  RatVector coboundary(int n, const RatVector& f) const { return fc_->apply_d(n, f); }

  // E_2^{p,q} expected from the LHS identification: H^p(H, Hom(Lambda^q L, M)).
  FGAbelian e2_expected(int p, int q) const;

 private:
  std::shared_ptr<const ExtensionContext> ctx_;
  HModule M_;
  std::shared_ptr<const FilteredComplex> fc_;
};

// (f u g)(x) = sum over the diagonal of x of pair(f(x1), g(x2)).
RatVector cup_product(const LhsComplex& U, int a, const RatVector& f, const LhsComplex& V, int b, const RatVector& g,
                      const LhsComplex& W, const Pairing& pair);

// Pull back a cochain on the target of phi to its source. Both complexes
// must carry the same coefficient module (restricted along sigma).
RatVector pullback(const ComparisonMap& phi, const LhsComplex& target, const LhsComplex& source, int n,
                   const RatVector& f);

struct Restriction {
  LatticeExtension ext;
  std::vector<int> embedding;  // K element -> H element
  int index = 1;
};
// Throws NotASubgroup.
Restriction restrict_to(const LatticeExtension& ext, const std::vector<int>& K);

struct Decomposition {
  LatticeExtension ext1, ext2;
  int n1 = 0, n2 = 0;
  IntMatrix proj1, proj2;  // n_i x n
  Pairing wedge(int i, int j) const;
};
// L = L1 + L2 with L1 the first n1 coordinates. Throws ActionNotBlockDiagonal.
Decomposition decomposition_data(const LatticeExtension& ext, int n1);

// Named corpus of lattice extensions.
struct CorpusExtension {
  std::string name;
  LatticeExtension ext;
};
std::vector<CorpusExtension> group_corpus();

}  // namespace obstrukt
