#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "obstrukt/group.hpp"
#include "obstrukt/matrix.hpp"

namespace obstrukt {

class DimensionTooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class NotModuleBialgebra : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class NotAHopfAlgebra : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kDefaultHopfMaxDim = 24;

// Dense rank-3 array of rationals.
struct Tensor3 {
  int n0 = 0, n1 = 0, n2 = 0;
  std::vector<Rational> data;

  Tensor3() = default;
  Tensor3(int a, int b, int c) : n0(a), n1(b), n2(c), data(static_cast<std::size_t>(a) * b * c) {}
  Rational& at(int i, int j, int k) { return data[(static_cast<std::size_t>(i) * n1 + j) * n2 + k]; }
  const Rational& at(int i, int j, int k) const { return data[(static_cast<std::size_t>(i) * n1 + j) * n2 + k]; }
  // The vector at (i, j, .).
  RatVector fiber(int i, int j) const;
  bool operator==(const Tensor3& o) const = default;
};

struct HopfAxioms {
  bool associative = false, unital = false;
  bool coassociative = false, counital = false;
  bool comult_multiplicative = false, counit_multiplicative = false;
  bool antipode = false;
  bool all() const {
    return associative && unital && coassociative && counital && comult_multiplicative && counit_multiplicative &&
           antipode;
  }
  std::vector<std::string> failures() const;
};

// e_i e_j = sum_k mult(i, j, k) e_k; Delta e_i = sum comult(i, j, k) e_j (x) e_k;
// column j of the antipode is S(e_j).
class FinHopf {
 public:
  FinHopf() = default;
  // Shapes are checked (DimensionMismatch, DimensionTooLarge); axioms are not.
  FinHopf(int dim, Tensor3 mult, Tensor3 comult, RatVector unit, RatVector counit, RatMatrix antipode,
          int max_dim = kDefaultHopfMaxDim);

  int dim() const { return dim_; }
  const Tensor3& mult() const { return mult_; }
  const Tensor3& comult() const { return comult_; }
  const RatVector& unit() const { return unit_; }
  const RatVector& counit() const { return counit_; }
  const RatMatrix& antipode() const { return S_; }

  RatVector basis(int i) const;
  RatVector multiply(const RatVector& x, const RatVector& y) const;
  // dim x dim matrix of coefficients of e_j (x) e_k.
  RatMatrix comultiply(const RatVector& x) const;
  Rational epsilon(const RatVector& x) const;
  RatVector apply_antipode(const RatVector& x) const { return S_.apply(x); }

  HopfAxioms check_axioms() const;

 private:
  int dim_ = 0;
  Tensor3 mult_, comult_;
  RatVector unit_, counit_;
  RatMatrix S_;
};

// Basis = group elements, Delta g = g (x) g, S g = g^-1. Throws NotAGroup.
FinHopf group_algebra(const std::vector<std::vector<int>>& mult_table, int max_dim = kDefaultHopfMaxDim);
FinHopf group_algebra(const FiniteGroup& G, int max_dim = kDefaultHopfMaxDim);

struct AdjointActions {
  Tensor3 ad_l;  // (g, h, .) = sum g1 h S(g2)
  Tensor3 ad_r;  // (h, g, .) = sum S(g1) h g2
  Tensor3 co_l;  // (g, j, k): coefficient of e_j (x) e_k in sum g1 S(g3) (x) g2
  Tensor3 co_r;  // (g, j, k): same for sum g2 (x) S(g1) g3
};
AdjointActions adjoint_actions(const FinHopf& H);

// tau(c, a, .) = c . a for basis elements c of the acting algebra.
struct ModuleAction {
  Tensor3 tau;
  RatVector act(const RatVector& c, const RatVector& a) const;
};
// c . a = eps(c) a
ModuleAction trivial_action(const FinHopf& C, const FinHopf& A);
// Basis element c sends basis element a to perm[c][a].
ModuleAction permutation_action(const std::vector<std::vector<int>>& perm);

struct ModuleBialgebraReport {
  bool module_associative = false, module_unital = false;
  bool mult_equivariant = false, unit_equivariant = false;        // module algebra
  bool comult_equivariant = false, counit_equivariant = false;    // module coalgebra
  bool module_algebra() const { return module_associative && module_unital && mult_equivariant && unit_equivariant; }
  bool module_coalgebra() const { return comult_equivariant && counit_equivariant; }
  bool ok() const { return module_algebra() && module_coalgebra(); }
  std::vector<std::string> failures() const;
};
// Throws DimensionMismatch when tau does not have shape dim C x dim A x dim A.
ModuleBialgebraReport check_module_bialgebra(const FinHopf& A, const FinHopf& C, const ModuleAction& act);

struct SmashProduct {
  int dim_a = 0, dim_c = 0;
  // Basis index a * dim_c + c for a (x) c; standard tensor coalgebra.
  Tensor3 mult, comult;
  RatVector unit, counit;
  bool comult_multiplicative = false, counit_multiplicative = false;
  std::optional<RatMatrix> antipode;  // two-sided convolution inverse of the identity, if any
  bool hopf_compatible() const { return comult_multiplicative && counit_multiplicative && antipode.has_value(); }
  // Throws NotAHopfAlgebra when not compatible.
  FinHopf as_hopf(int max_dim = kDefaultHopfMaxDim) const;
};
// Throws NotModuleBialgebra.
SmashProduct smash_product(const FinHopf& A, const FinHopf& C, const ModuleAction& act);

// f: X -> Y as a dim Y x dim X matrix.
bool is_algebra_map(const Tensor3& mx, const RatVector& ux, const Tensor3& my, const RatVector& uy,
                    const RatMatrix& f);
bool is_coalgebra_map(const Tensor3& cx, const RatVector& ex, const Tensor3& cy, const RatVector& ey,
                      const RatMatrix& f);

// Q[N], Q[H] and the conjugation action for G = N x| H, together with
// Q[G] and the map n (x) h -> nh.
struct SplitGroupAlgebras {
  FinHopf A, C, B;
  ModuleAction action;
  RatMatrix iso;  // dim B x (dim A * dim C)
};
// Throws NotASubgroup unless N is normal, H a subgroup, N n H = 1 and NH = G.
SplitGroupAlgebras split_group_algebras(const FiniteGroup& G, const std::vector<int>& N, const std::vector<int>& H);

// Q[K] -> Q[G] induced by an embedding of elements.
RatMatrix group_algebra_map(int dim_k, int dim_g, const std::vector<int>& embedding);

// u(H+) L == L u(H+) as subspaces of L; u is dim L x dim H.
bool check_normality_identity(const FinHopf& H, const FinHopf& L, const RatMatrix& u);

}  // namespace obstrukt
