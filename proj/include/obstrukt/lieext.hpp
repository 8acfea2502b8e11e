#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "obstrukt/matrix.hpp"
#include "obstrukt/specseq.hpp"

namespace obstrukt {

class NotALieAlgebra : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class NotDerivation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class NotLieHom : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class NotARepresentation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class ActionNotChainMap : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Lie algebra over Q by structure constants: [e_i, e_j] = sum_k c[i][j][k] e_k.
class LieAlg {
 public:
  LieAlg() = default;
  // Throws NotALieAlgebra on antisymmetry or Jacobi failure.
  LieAlg(int dim, std::vector<std::vector<RatVector>> c);

  static LieAlg abelian(int n);
  static LieAlg sl2();    // basis e, f, h
  static LieAlg heis3();  // basis x, y, z with [x, y] = z
  static LieAlg direct_sum(const LieAlg& a, const LieAlg& b);

  int dim() const { return dim_; }
  const RatVector& bracket(int i, int j) const { return c_[i][j]; }
  RatVector bracket(const RatVector& x, const RatVector& y) const;
  RatMatrix ad(int i) const;
  RatMatrix ad(const RatVector& x) const;
  RatMatrix killing_form() const;
  RatMatrix center() const;   // basis columns
  RatMatrix derived() const;  // basis columns of [g, g]
  bool is_abelian() const;

 private:
  int dim_ = 0;
  std::vector<std::vector<RatVector>> c_;
};

// Representation of a Lie algebra: one matrix per basis element.
struct LieModule {
  int dim = 0;
  std::vector<RatMatrix> rho;
  std::string label;

  static LieModule trivial(const LieAlg& g, int dim = 1);
  static LieModule adjoint(const LieAlg& g);
  // Throws NotARepresentation.
  void validate(const LieAlg& g) const;
};

// Hom(A, B) with (x f) = rho_B(x) f - f rho_A(x); index i * B.dim + j is
// the map a_i -> b_j.
LieModule lie_hom_module(const LieModule& A, const LieModule& B);

// n (+) h with [h1, n1] = phi(h1) n1. Basis order (n-basis, h-basis).
// Throws NotDerivation / NotLieHom.
LieAlg semidirect(const LieAlg& n, const LieAlg& h, const std::vector<RatMatrix>& phi);

// Chevalley-Eilenberg cochains Lambda^t g* (x) M. Basis index:
// (position of the t-subset among subsets(dim, t)) * M.dim + m.
RatMatrix ce_differential(const LieAlg& g, const LieModule& M, int t);

struct LieCohomology {
  std::size_t dim = 0;
  RatMatrix cocycles;  // representative cocycles, one per column
};
LieCohomology ce_cohomology(const LieAlg& g, const LieModule& M, int t);

// Wedge product of CE cochains through a bilinear pairing U x V -> W given
// as terms (u, v, w, c).
RatVector ce_cup(const LieAlg& g, int du, int a, const RatVector& f, int dv, int b, const RatVector& h, int dw,
                 const std::vector<std::tuple<int, int, int, Rational>>& pairing);

struct LieExtension {
  std::string name;
  LieAlg n, h;
  std::vector<RatMatrix> phi;
  LieAlg g() const { return semidirect(n, h, phi); }
};

// CE complex of n x| h with coefficients in an h-module (trivial on n),
// filtered by the number of h-arguments. The whole complex is built, so
// every degree is trusted.
std::shared_ptr<FilteredComplex> hs_complex(const LieExtension& ext, const LieModule& M);
// H^p(h, H^q(n, M)) computed on its own for the E_2 cross-check.
std::size_t hs_e2_expected(const LieExtension& ext, const LieModule& M, int p, int q);

// H_t(n) with the h-action induced by phi. proj maps Lambda^t n onto H_t:
// the quotient map on cycles, zero on a chosen complement.
struct HomologyCoefficients {
  LieModule module;
  RatMatrix proj;
};
// Throws ActionNotChainMap.
HomologyCoefficients homology_coefficients(const LieExtension& ext, int t);
// Cohomology H^q(n) as an h-module.
LieModule cohomology_coefficients(const LieExtension& ext, int q);

bool is_reductive(const LieAlg& n);

struct SemisimpleFactoring {
  bool factors = false;
  std::size_t der_dim = 0;
  RatMatrix witness;  // basis of the generated subalgebra, flattened n x n per column
};
SemisimpleFactoring factors_through_semisimple(const LieExtension& ext);
// dim of phi(h).
std::size_t image_dimension(const LieExtension& ext);

std::vector<LieExtension> lie_corpus();

}  // namespace obstrukt
