#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "obstrukt/bounds.hpp"
#include "obstrukt/groupext.hpp"
#include "obstrukt/lieext.hpp"
#include "obstrukt/specseq.hpp"

namespace obstrukt {

class NotTrivial : public std::runtime_error {
 public:
  NotTrivial(int t, int r)
      : std::runtime_error("extension is not (" + std::to_string(t) + "," + std::to_string(r) + ")-trivial"),
        t(t),
        r(r) {}
  int t, r;
};

class HypothesisFails : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One split extension with everything charclass needs: spectral sequences
// in the coefficients H_t(kernel), a list of test coefficients M_i (index t
// is H_t itself), the Hom(H_t, M_i) sequences and the evaluation product.
class ExtensionHandle {
 public:
  virtual ~ExtensionHandle() = default;
  virtual std::string kind() const = 0;
  virtual std::string name() const = 0;
  // Highest total degree whose pages are trusted.
  virtual int max_degree() const = 0;
  virtual int kernel_rank() const = 0;

  virtual const SpectralSequence& homology_ss(int t) const = 0;
  // Level-0 cochain of degree t representing the identity of H_t on E_1.
  virtual RatVector identity_rep(int t) const = 0;

  virtual int coefficient_count() const = 0;
  virtual std::string coefficient_label(int i) const = 0;
  virtual const SpectralSequence& coefficient_ss(int i) const = 0;
  virtual const SpectralSequence& hom_ss(int t, int i) const = 0;
  // y u v through Hom(H_t, M_i) x H_t -> M_i; y of degree a, v of degree b.
  virtual RatVector evaluate_product(int t, int i, int a, const RatVector& y, int b, const RatVector& v) const = 0;
};

class GroupHandle : public ExtensionHandle {
 public:
  GroupHandle(LatticeExtension ext, int N, std::string name = {});
  std::string kind() const override { return "group"; }
  std::string name() const override { return name_; }
  int max_degree() const override { return N_; }
  int kernel_rank() const override { return ctx_->extension().n; }
  const SpectralSequence& homology_ss(int t) const override { return coefficient_ss(t); }
  RatVector identity_rep(int t) const override;
  int coefficient_count() const override { return kernel_rank() + 1; }
  std::string coefficient_label(int i) const override;
  const SpectralSequence& coefficient_ss(int i) const override;
  const SpectralSequence& hom_ss(int t, int i) const override;
  RatVector evaluate_product(int t, int i, int a, const RatVector& y, int b, const RatVector& v) const override;

  std::shared_ptr<const ExtensionContext> context() const { return ctx_; }
  const LatticeExtension& extension() const { return ctx_->extension(); }
  // LHS complex with coefficients Lambda^t L.
  const LhsComplex& homology_complex(int t) const;

 private:
  struct Entry {
    std::unique_ptr<LhsComplex> complex;
    std::unique_ptr<SpectralSequence> ss;
  };
  const Entry& entry(int t, int i) const;  // t < 0: plain coefficients M_i

  std::shared_ptr<const ExtensionContext> ctx_;
  int N_;
  std::string name_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<int, int>, std::unique_ptr<Entry>> cache_;
};

class LieHandle : public ExtensionHandle {
 public:
  explicit LieHandle(LieExtension ext);
  std::string kind() const override { return "lie"; }
  std::string name() const override { return ext_.name; }
  int max_degree() const override { return g_.dim(); }
  int kernel_rank() const override { return ext_.n.dim(); }
  const SpectralSequence& homology_ss(int t) const override { return coefficient_ss(t); }
  RatVector identity_rep(int t) const override;
  int coefficient_count() const override { return kernel_rank() + 1; }
  std::string coefficient_label(int i) const override;
  const SpectralSequence& coefficient_ss(int i) const override;
  const SpectralSequence& hom_ss(int t, int i) const override;
  RatVector evaluate_product(int t, int i, int a, const RatVector& y, int b, const RatVector& v) const override;

  const LieExtension& extension() const { return ext_; }
  const LieAlg& algebra() const { return g_; }
  const HomologyCoefficients& homology(int t) const { return hc_.at(t); }

 private:
  const SpectralSequence& ss_for(int t, int i) const;

  LieExtension ext_;
  LieAlg g_;
  std::vector<HomologyCoefficients> hc_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<int, int>, std::unique_ptr<SpectralSequence>> cache_;
};

struct Witness {
  int page, s, t;
};

struct TrivialityReport {
  int t = 0, r = 2;
  bool trivial = true;       // direct route: every d_p^{s,t}, 2 <= p < r
  bool edge_trivial = true;  // edge route: d_p^{0,t} only
  bool routes_agree = true;
  int s_max = 0;             // direct route covers s + t + 1 <= max_degree
  std::optional<Witness> witness;
};
// Throws TruncationTooSmall when t + 1 exceeds the trusted degree.
TrivialityReport is_tr_trivial(const ExtensionHandle& ext, int t, int r);

struct CharClassReport {
  std::string extension, kind;
  int t = 0, r = 2;
  bool trivial = false;
  std::optional<Witness> witness;
  std::optional<PageClass> v_class;
  RatVector v_coords;
  std::string target;  // E_r^{r, t-r+1}(H_t)
  std::optional<Order> v_order;
  std::optional<BigInt> bound_B;
  std::optional<ChiLedger> chi;
  std::string chi_note;
  bool divisibility_ok = true;
  std::vector<LiftStep> lift_steps;
};

// v_r^t = d_r^{0,t}[id^t]. Throws NotTrivial.
CharClassReport characteristic_class(const ExtensionHandle& ext, int t, int r);
// Same, but records non-triviality in the report instead of throwing.
CharClassReport analyze(const ExtensionHandle& ext, int t, int r);
// [id^t] pushed to page r.
LiftResult identity_on_page(const ExtensionHandle& ext, int t, int r);

struct ThetaData {
  RatMatrix matrix;  // target coordinates of theta(source generator)
  FGAbelian source, target;
  bool surjective = false;
};
ThetaData theta(const ExtensionHandle& ext, int t, int r, int s, int coeff);

struct ObstructionReport {
  int t = 0, r = 2, coeff = 0;
  int checked = 0, failures = 0;
  bool uniqueness_ok = true;
  std::vector<std::string> failures_detail;
  bool ok() const { return failures == 0 && uniqueness_ok; }
};
// d_r(x) against (-1)^s y.v for sampled x and theta(y) = x, over every s
// within the truncation, plus the s = 0, M = H_t uniqueness route.
ObstructionReport verify_obstruction_identity(const ExtensionHandle& ext, int t, int r, int coeff, int samples,
                                              unsigned seed = 1);

struct NaturalityReport {
  bool maps_v_to_w = false;
  RatVector pulled, w;
  Order w_order;
  int index = 1;
  bool transfer_ok = true;
};
// sub is the restriction of big along sigma (K element -> H element).
NaturalityReport naturality_check(const GroupHandle& big, const GroupHandle& sub, const std::vector<int>& sigma,
                                  int index, int t, int r);
// sub = n x| d with phi o sigma; sigma is dim h x dim d.
NaturalityReport naturality_check(const LieHandle& big, const LieHandle& sub, const RatMatrix& sigma, int t, int r);

struct DecompositionReport {
  int t = 0, r = 2;
  bool formula_ok = false;
  RatVector lhs, rhs;
  int leibniz_checked = 0, leibniz_failures = 0;
  int cochain_checked = 0, cochain_failures = 0;
  bool ok() const { return formula_ok && leibniz_failures == 0 && cochain_failures == 0; }
};
struct DecompositionOptions {
  int leibniz_samples = 50;
  unsigned seed = 7;
  // Test hook: drop the (-1)^{p+q} sign in the Leibniz checks.
  bool mutate_sign = false;
};
DecompositionReport decomposition_check(const LatticeExtension& ext, int n1, int t, int r, int N,
                                        const DecompositionOptions& opt = {});

struct EdgeEvidence {
  int t, m;
  bool zero;
  std::optional<Order> order;
};
struct CollapseCertificate {
  bool collapses = true;
  int max_t = 0;
  std::string verdict;
  std::vector<EdgeEvidence> evidence;
  std::optional<Witness> witness;
  // group kind: per page m, the t <= max_t that are powers of primes p with (p-1) | (m-1)
  std::map<int, std::vector<int>> decisive_t;
};
// Throws TruncationTooSmall when max_t > max_degree - 2.
CollapseCertificate collapse_certificate(const ExtensionHandle& ext, int max_t);

}  // namespace obstrukt
