#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "obstrukt/matrix.hpp"

namespace obstrukt {

class ContainmentViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SmithResult {
  IntMatrix U, D, V;  // D = U * M * V
  std::size_t rank = 0;
};

// Smith normal form with smallest-absolute-value pivoting.
// Diagonal entries are nonnegative and form a divisibility chain.
SmithResult smith(const IntMatrix& m);

// Finitely generated abelian group (or Q-vector space when torsion is empty
// and the presentation came from a rational computation).
// Generators are ordered torsion first, then free.
struct FGAbelian {
  std::size_t free_rank = 0;
  std::vector<BigInt> torsion;  // each >= 2, d_1 | d_2 | ...
  // Ambient coordinates of each abstract generator (ambient x ngens).
  std::optional<RatMatrix> lift;
  // Normal-form coordinates of an ambient vector (ngens x ambient).
  std::optional<RatMatrix> project;

  std::size_t ngens() const { return torsion.size() + free_rank; }
  bool is_trivial() const { return ngens() == 0; }
  // Reduce torsion coordinates into [0, d_i). Free coordinates are left
  // alone (they are rational for Q-presentations).
  RatVector normalize(const RatVector& coords) const;
  bool is_zero(const RatVector& coords) const;
  // Ambient vector -> reduced coordinates. Requires `project`.
  RatVector coordinates_of(const RatVector& ambient) const;
  // Coordinates -> ambient representative. Requires `lift`.
  RatVector representative(const RatVector& coords) const;
  // "Z/2 + Z/4 + Z^2", "0" when trivial.
  std::string describe() const;
  // Invariant-factor equality (ignores lift/project).
  bool isomorphic(const FGAbelian& other) const {
    return free_rank == other.free_rank && torsion == other.torsion;
  }
};

struct Order {
  bool infinite = false;
  BigInt value = 1;
  std::string describe() const { return infinite ? "INFINITE" : value.get_str(); }
  friend bool operator==(const Order& a, const Order& b) {
    return a.infinite == b.infinite && (a.infinite || a.value == b.value);
  }
};

FGAbelian cokernel(const IntMatrix& m);

// span(Z) / span(B) inside Z^ambient_rank. Columns are generators.
FGAbelian subquotient(std::size_t ambient_rank, const IntMatrix& Z, const IntMatrix& B);

// Same over Q; result has free_rank = dim and no torsion.
FGAbelian subquotient_q(std::size_t ambient_rank, const RatMatrix& Z, const RatMatrix& B);

Order element_order(const RatVector& x, const FGAbelian& g);
inline Order element_order(const IntVector& x, const FGAbelian& g) {
  return element_order(to_rational(x), g);
}

// Saturated basis of the integer kernel, as columns.
IntMatrix kernel_basis(const IntMatrix& m);
// Basis of the column span over Z, as columns.
IntMatrix image_basis(const IntMatrix& m);
// Some integer solution of m x = b, or nullopt.
std::optional<IntVector> solve_integer(const IntMatrix& m, const IntVector& b);

// Rational counterparts.
std::size_t rank_q(const RatMatrix& m);
RatMatrix kernel_basis_q(const RatMatrix& m);
RatMatrix image_basis_q(const RatMatrix& m);
std::optional<RatVector> solve_q(const RatMatrix& m, const RatVector& b);
// Reduced row echelon form; pivot columns returned through `pivots`.
RatMatrix rref(const RatMatrix& m, std::vector<std::size_t>* pivots = nullptr);
// Rational left inverse of a matrix with independent columns.
RatMatrix left_inverse_q(const RatMatrix& m);
std::optional<RatMatrix> inverse_q(const RatMatrix& m);

// Integer determinant via fraction-free elimination.
BigInt determinant(const IntMatrix& m);

}  // namespace obstrukt
