#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "obstrukt/exactlin.hpp"

namespace obstrukt {

enum class Ring { Z, Q };

class TruncationTooSmall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidRepresentative : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Cochain complex C^0 -> ... -> C^top with an adapted basis: every basis
// vector carries a filtration level, and F^p C^n is spanned by the basis
// vectors of level >= p. d^top is the zero map. Pages are trusted up to
// total degree `trusted`.
class FilteredComplex {
 public:
  FilteredComplex(Ring ring, std::vector<std::vector<int>> levels, std::vector<RatMatrix> diffs,
                  int trusted = -1);

  Ring ring() const { return ring_; }
  int top() const { return static_cast<int>(levels_.size()) - 1; }
  int trusted() const { return trusted_; }
  std::size_t rank(int n) const { return n < 0 || n > top() ? 0 : levels_[n].size(); }
  int level(int n, std::size_t i) const { return levels_[n][i]; }
  const std::vector<int>& levels(int n) const { return levels_[n]; }
  // d^n : C^n -> C^{n+1}, a rank(n+1) x rank(n) matrix.
  const RatMatrix& d(int n) const { return diffs_[n]; }
  RatVector apply_d(int n, const RatVector& x) const;

  // F^p C^n as columns of standard basis vectors.
  RatMatrix filtration_basis(int p, int n) const;
  bool in_filtration(int n, const RatVector& x, int p) const;
  // Highest p with x in F^p (n + 1 for x = 0).
  int filtration_of(int n, const RatVector& x) const;

  // Throws std::logic_error naming the violated invariant.
  void validate() const;

 private:
  Ring ring_;
  std::vector<std::vector<int>> levels_;
  std::vector<RatMatrix> diffs_;
  int trusted_;
};

struct PageClass {
  int r = 2, p = 0, q = 0;
  RatVector rep;
};

class DoesNotSurvive : public std::runtime_error {
 public:
  DoesNotSurvive(int page, PageClass obstruction)
      : std::runtime_error("class does not survive past page " + std::to_string(page)),
        page(page),
        obstruction(std::move(obstruction)) {}
  int page;
  PageClass obstruction;  // d_page of the class, nonzero on E_page
};

struct LiftStep {
  int page;                 // correction made while passing from page to page+1
  int correction_level;     // filtration of the correction term
  RatVector correction;     // subtracted from the representative
};

struct LiftResult {
  PageClass cls;
  std::vector<LiftStep> steps;
};

struct ConvergenceReport {
  int n = 0;
  bool ok = true;
  std::vector<std::string> e_infinity;  // per p
  std::vector<std::string> graded;      // per p
  std::string total;
};

class SpectralSequence {
 public:
  explicit SpectralSequence(std::shared_ptr<const FilteredComplex> fc);

  const FilteredComplex& complex() const { return *fc_; }
  Ring ring() const { return fc_->ring(); }

  // E_r^{p,q}, r >= 1, as a presentation with lift/project maps into C^{p+q}.
  std::shared_ptr<const FGAbelian> page(int r, int p, int q) const;
  // Page index beyond which E_r^{p,q} no longer changes.
  static int stable_page(int p, int q) { return std::max(p + 1, q + 2); }

  // Z_r^{p} in C^n as columns.
  RatMatrix cycles(int r, int p, int n) const;

  void check_valid(const PageClass& c) const;
  RatVector coordinates(const PageClass& c) const;
  bool is_zero(const PageClass& c) const;
  PageClass generator(int r, int p, int q, std::size_t i) const;
  PageClass from_coordinates(int r, int p, int q, const RatVector& coords) const;

  PageClass differential(const PageClass& c) const;
  // d_r from E_r^{p,q} as a matrix in normal-form coordinates
  // (columns = source generators).
  RatMatrix differential_matrix(int r, int p, int q) const;

  // Push a representative valid on page `from` up to page r. Throws
  // DoesNotSurvive when some d_m is nonzero on the class.
  LiftResult lift_to_page(int r, int p, int q, const RatVector& rep, int from = 2) const;

  // ker d_r / im d_r computed from the page-r presentations.
  FGAbelian homology_of_page(int r, int p, int q) const;

  ConvergenceReport convergence_check(int n) const;

 private:
  void require_trusted(int n) const;
  std::shared_ptr<const FGAbelian> compute_page(int r, int p, int q) const;

  std::shared_ptr<const FilteredComplex> fc_;
  mutable std::mutex mu_;
  mutable std::map<std::tuple<int, int, int>, std::shared_ptr<const FGAbelian>> memo_;
};

// Generic kernel / subquotient helpers switching on the ring.
RatMatrix ring_kernel(Ring ring, const RatMatrix& m);
FGAbelian ring_subquotient(Ring ring, std::size_t ambient, const RatMatrix& Z, const RatMatrix& B);
std::optional<RatVector> ring_solve(Ring ring, const RatMatrix& m, const RatVector& b);

// Subquotient of presented groups: given a map F : A -> B between
// presentations (A = Z^k / R_A etc.) and an incoming map G : C -> A, return
// ker F / im G. Throws ContainmentViolation if F G is nonzero.
FGAbelian presentation_homology(Ring ring, const FGAbelian& a, const FGAbelian& b, const RatMatrix& f,
                                const RatMatrix& g);

}  // namespace obstrukt
