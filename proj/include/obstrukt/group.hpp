#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "obstrukt/matrix.hpp"

namespace obstrukt {

class NotAGroup : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotASubgroup : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ActionNotHomomorphism : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Finite group given by its full multiplication table. table[a][b] = a*b.
class FiniteGroup {
 public:
  explicit FiniteGroup(std::vector<std::vector<int>> table, std::vector<std::string> names = {});

  static FiniteGroup cyclic(int m);
  // Closure of a set of permutations of {0..k-1} under composition
  // ((p*q)(i) = p(q(i))). Element 0 is the identity.
  static FiniteGroup from_permutations(const std::vector<std::vector<int>>& gens);
  static FiniteGroup symmetric(int k);

  int order() const { return static_cast<int>(table_.size()); }
  int mul(int a, int b) const { return table_[a][b]; }
  int inv(int a) const { return inv_[a]; }
  int identity() const { return e_; }
  const std::string& name(int a) const { return names_[a]; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::vector<int>>& table() const { return table_; }

  int element_order(int a) const;
  bool is_abelian() const;
  std::optional<int> cyclic_generator() const;
  // Subgroup generated by the given elements, sorted.
  std::vector<int> generated_by(const std::vector<int>& gens) const;
  bool is_subgroup(const std::vector<int>& elems) const;
  bool is_normal_subgroup(const std::vector<int>& elems) const;
  // The subgroup as a group in its own right, plus the embedding into this.
  std::pair<FiniteGroup, std::vector<int>> subgroup(const std::vector<int>& elems) const;

 private:
  std::vector<std::vector<int>> table_;
  std::vector<std::string> names_;
  std::vector<int> inv_;
  int e_ = 0;
};

// Integral representation rho: H -> GL(n, Z), stored for every element.
// The lattice L = Z^n, and G = L x| H with h l h^-1 = rho(h) l.
struct LatticeExtension {
  int n = 0;
  std::shared_ptr<const FiniteGroup> H;
  std::vector<IntMatrix> rho;  // indexed by element of H
  std::string label;

  // Extend generator images to all of H, checking the homomorphism property.
  static LatticeExtension from_generators(int n, std::shared_ptr<const FiniteGroup> H,
                                          const std::map<int, IntMatrix>& gens, std::string label = {});
  // Throws ActionNotHomomorphism.
  void validate() const;
  bool trivial_action() const;
};

}  // namespace obstrukt
