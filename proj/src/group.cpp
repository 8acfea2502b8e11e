#include "obstrukt/group.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "obstrukt/exactlin.hpp"

namespace obstrukt {

FiniteGroup::FiniteGroup(std::vector<std::vector<int>> table, std::vector<std::string> names)
    : table_(std::move(table)), names_(std::move(names)) {
  const int n = order();
  if (n == 0) throw NotAGroup("empty multiplication table");
  for (const auto& row : table_) {
    if (static_cast<int>(row.size()) != n) throw NotAGroup("multiplication table is not square");
    std::vector<bool> seen(n);
    for (int x : row) {
      if (x < 0 || x >= n) throw NotAGroup("table entry out of range");
      if (seen[x]) throw NotAGroup("table row repeats an element");
      seen[x] = true;
    }
  }
  e_ = -1;
  for (int a = 0; a < n && e_ < 0; ++a) {
    bool ok = true;
    for (int b = 0; b < n && ok; ++b) ok = table_[a][b] == b && table_[b][a] == b;
    if (ok) e_ = a;
  }
  if (e_ < 0) throw NotAGroup("no identity element");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (table_[table_[a][b]][c] != table_[a][table_[b][c]]) throw NotAGroup("multiplication is not associative");
  inv_.assign(n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (table_[a][b] == e_) inv_[a] = b;
  for (int a = 0; a < n; ++a)
    if (inv_[a] < 0 || table_[inv_[a]][a] != e_) throw NotAGroup("element without two-sided inverse");
  if (names_.empty())
    for (int a = 0; a < n; ++a) names_.push_back(a == e_ ? "e" : "g" + std::to_string(a));
  if (static_cast<int>(names_.size()) != n) throw NotAGroup("wrong number of element names");
}

FiniteGroup FiniteGroup::cyclic(int m) {
  if (m < 1) throw NotAGroup("cyclic group of order < 1");
  std::vector<std::vector<int>> t(m, std::vector<int>(m));
  std::vector<std::string> names;
  for (int a = 0; a < m; ++a) {
    names.push_back(a == 0 ? "e" : a == 1 ? "g" : "g^" + std::to_string(a));
    for (int b = 0; b < m; ++b) t[a][b] = (a + b) % m;
  }
  return FiniteGroup(t, names);
}

FiniteGroup FiniteGroup::from_permutations(const std::vector<std::vector<int>>& gens) {
  if (gens.empty()) return cyclic(1);
  const std::size_t k = gens[0].size();
  std::vector<int> id(k);
  for (std::size_t i = 0; i < k; ++i) id[i] = static_cast<int>(i);
  std::vector<std::vector<int>> elems{id};
  std::map<std::vector<int>, int> index{{id, 0}};
  auto compose = [](const std::vector<int>& p, const std::vector<int>& q) {
    std::vector<int> r(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) r[i] = p[q[i]];
    return r;
  };
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (const auto& g : gens) {
      if (g.size() != k) throw NotAGroup("permutations of different degrees");
      auto x = compose(elems[i], g);
      if (!index.count(x)) {
        index[x] = static_cast<int>(elems.size());
        elems.push_back(x);
      }
    }
  const int n = static_cast<int>(elems.size());
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  std::vector<std::string> names;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) t[a][b] = index.at(compose(elems[a], elems[b]));
    std::string s = "(";
    for (std::size_t i = 0; i < k; ++i) s += (i ? " " : "") + std::to_string(elems[a][i]);
    names.push_back(s + ")");
  }
  return FiniteGroup(t, names);
}

FiniteGroup FiniteGroup::symmetric(int k) {
  if (k <= 1) return cyclic(1);
  std::vector<int> swap(k), cycle(k);
  for (int i = 0; i < k; ++i) {
    swap[i] = i;
    cycle[i] = (i + 1) % k;
  }
  std::swap(swap[0], swap[1]);
  return from_permutations({swap, cycle});
}

int FiniteGroup::element_order(int a) const {
  int k = 1;
  for (int x = a; x != e_; x = mul(x, a)) ++k;
  return k;
}

bool FiniteGroup::is_abelian() const {
  for (int a = 0; a < order(); ++a)
    for (int b = 0; b < order(); ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

std::optional<int> FiniteGroup::cyclic_generator() const {
  for (int a = 0; a < order(); ++a)
    if (element_order(a) == order()) return a;
  return std::nullopt;
}

std::vector<int> FiniteGroup::generated_by(const std::vector<int>& gens) const {
  std::set<int> seen{e_};
  std::deque<int> todo{e_};
  while (!todo.empty()) {
    int x = todo.front();
    todo.pop_front();
    for (int g : gens) {
      int y = mul(x, g);
      if (seen.insert(y).second) todo.push_back(y);
    }
  }
  return {seen.begin(), seen.end()};
}

bool FiniteGroup::is_subgroup(const std::vector<int>& elems) const {
  std::set<int> s(elems.begin(), elems.end());
  if (!s.count(e_)) return false;
  for (int a : s) {
    if (a < 0 || a >= order()) return false;
    for (int b : s)
      if (!s.count(mul(a, inv(b)))) return false;
  }
  return true;
}

bool FiniteGroup::is_normal_subgroup(const std::vector<int>& elems) const {
  if (!is_subgroup(elems)) return false;
  std::set<int> s(elems.begin(), elems.end());
  for (int g = 0; g < order(); ++g)
    for (int a : s)
      if (!s.count(mul(mul(g, a), inv(g)))) return false;
  return true;
}

std::pair<FiniteGroup, std::vector<int>> FiniteGroup::subgroup(const std::vector<int>& elems) const {
  if (!is_subgroup(elems)) throw NotASubgroup("elements do not form a subgroup");
  std::vector<int> emb(elems.begin(), elems.end());
  std::sort(emb.begin(), emb.end());
  emb.erase(std::unique(emb.begin(), emb.end()), emb.end());
  std::map<int, int> back;
  for (std::size_t i = 0; i < emb.size(); ++i) back[emb[i]] = static_cast<int>(i);
  const std::size_t k = emb.size();
  std::vector<std::vector<int>> t(k, std::vector<int>(k));
  std::vector<std::string> names;
  for (std::size_t a = 0; a < k; ++a) {
    names.push_back(names_[emb[a]]);
    for (std::size_t b = 0; b < k; ++b) t[a][b] = back.at(mul(emb[a], emb[b]));
  }
  return {FiniteGroup(t, names), emb};
}

LatticeExtension LatticeExtension::from_generators(int n, std::shared_ptr<const FiniteGroup> H,
                                                   const std::map<int, IntMatrix>& gens, std::string label) {
  LatticeExtension ext;
  ext.n = n;
  ext.H = H;
  ext.label = std::move(label);
  const int order = H->order();
  std::vector<std::optional<IntMatrix>> rho(order);
  rho[H->identity()] = IntMatrix::identity(n);
  std::deque<int> todo{H->identity()};
  for (const auto& [g, m] : gens) {
    if (g < 0 || g >= order) throw ActionNotHomomorphism("generator index out of range");
    if (static_cast<int>(m.rows()) != n || static_cast<int>(m.cols()) != n)
      throw ActionNotHomomorphism("action matrix has the wrong size");
  }
  while (!todo.empty()) {
    int a = todo.front();
    todo.pop_front();
    for (const auto& [g, m] : gens) {
      int b = H->mul(a, g);
      IntMatrix mb = *rho[a] * m;
      if (!rho[b]) {
        rho[b] = mb;
        todo.push_back(b);
      } else if (!(*rho[b] == mb)) {
        throw ActionNotHomomorphism("generator matrices violate a relation of H at element " + H->name(b));
      }
    }
  }
  for (int a = 0; a < order; ++a) {
    if (!rho[a]) throw ActionNotHomomorphism("action generators do not generate H");
    ext.rho.push_back(*rho[a]);
  }
  ext.validate();
  return ext;
}

void LatticeExtension::validate() const {
  if (!H) throw ActionNotHomomorphism("missing group");
  if (static_cast<int>(rho.size()) != H->order()) throw ActionNotHomomorphism("need one matrix per element");
  for (int a = 0; a < H->order(); ++a) {
    BigInt det = determinant(rho[a]);
    if (det != 1 && det != -1) throw ActionNotHomomorphism("action matrix is not unimodular");
    for (int b = 0; b < H->order(); ++b)
      if (!(rho[a] * rho[b] == rho[H->mul(a, b)])) throw ActionNotHomomorphism("rho(ab) != rho(a) rho(b)");
  }
}

bool LatticeExtension::trivial_action() const {
  for (const auto& m : rho)
    if (!(m == IntMatrix::identity(n))) return false;
  return true;
}

}  // namespace obstrukt
