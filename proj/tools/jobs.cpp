#include "jobs.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "obstrukt/bounds.hpp"
#include "obstrukt/charclass.hpp"
#include "obstrukt/exactlin.hpp"
#include "obstrukt/groupext.hpp"
#include "obstrukt/hopf.hpp"
#include "obstrukt/lieext.hpp"

namespace obstrukt::cli {

namespace {

// ---------------------------------------------------------------- encoding

json int_json(const BigInt& x) {
  static const BigInt limit("9007199254740992");
  if (abs(x) < limit) return json(x.get_si());
  return json(x.get_str());
}

json rat_json(const Rational& x) { return json(x.get_str()); }

json vec_json(const RatVector& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(rat_json(x));
  return a;
}

// [[index, "value"], ...] over the nonzero entries.
json sparse_json(const RatVector& v) {
  json a = json::array();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) a.push_back(json::array({i, rat_json(v[i])}));
  return a;
}

json order_json(const Order& o) { return o.infinite ? json("INFINITE") : int_json(o.value); }

json witness_json(const std::optional<Witness>& w) {
  if (!w) return nullptr;
  return json{{"page", w->page}, {"s", w->s}, {"t", w->t}};
}

json charclass_json(const CharClassReport& r) {
  json j{{"t", r.t}, {"r", r.r}, {"trivial", r.trivial}, {"witness", witness_json(r.witness)}};
  j["target"] = r.target;
  if (r.v_order) {
    const bool zero = !r.v_order->infinite && r.v_order->value == 1;
    json v{{"zero", zero}, {"coords", vec_json(r.v_coords)}, {"in", r.target}};
    if (r.v_class) v["representative"] = sparse_json(r.v_class->rep);
    j["v_class"] = zero ? json("ZERO") : v;
    j["v_presentation"] = v;
    j["v_order"] = order_json(*r.v_order);
  } else {
    j["v_class"] = nullptr;
    j["v_order"] = nullptr;
  }
  j["bound_B"] = r.bound_B ? int_json(*r.bound_B) : json(nullptr);
  if (r.chi) {
    j["bound_chi"] = int_json(r.chi->product);
    json e = json::array();
    for (const auto& c : r.chi->entries) e.push_back({{"k", c.k}, {"v_nonzero", c.v_nonzero}, {"chi", int_json(c.chi)}});
    j["chi_entries"] = e;
  } else {
    j["bound_chi"] = nullptr;
  }
  if (!r.chi_note.empty()) j["chi_note"] = r.chi_note;
  j["divisibility_ok"] = r.divisibility_ok;
  json steps = json::array();
  for (const auto& s : r.lift_steps)
    steps.push_back({{"page", s.page}, {"level", s.correction_level}, {"correction", sparse_json(s.correction)}});
  j["lift_steps"] = steps;
  return j;
}

json convergence_json(const ConvergenceReport& c) {
  return json{{"n", c.n}, {"ok", c.ok}, {"total", c.total}, {"graded", c.graded}, {"e_infinity", c.e_infinity}};
}

// ---------------------------------------------------------------- parsing

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
  return j.at(key);
}

int int_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) throw SchemaError(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

int int_field_or(const json& j, const char* key, int fallback) {
  return j.contains(key) ? int_field(j, key) : fallback;
}

std::vector<int> int_list(const json& v, const char* what) {
  if (!v.is_array()) throw SchemaError(std::string(what) + " must be an array of integers");
  std::vector<int> out;
  for (const auto& x : v) {
    if (!x.is_number_integer()) throw SchemaError(std::string(what) + " must be an array of integers");
    out.push_back(x.get<int>());
  }
  return out;
}

// Matrix entries are decimal strings ("-1", "3/2") so that no value is
// routed through a double.
Rational entry_value(const json& x) {
  if (!x.is_string()) throw SchemaError("matrix entries must be strings");
  try {
    Rational q(x.get<std::string>());
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw SchemaError("bad matrix entry '" + x.get<std::string>() + "'");
  }
}

RatMatrix rat_matrix(const json& m) {
  if (!m.is_array()) throw SchemaError("matrix must be an array of rows");
  const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  RatMatrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!m[i].is_array() || m[i].size() != cols) throw SchemaError("ragged matrix");
    for (std::size_t j = 0; j < cols; ++j) out(i, j) = entry_value(m[i][j]);
  }
  return out;
}

IntMatrix int_matrix(const json& m) {
  RatMatrix q = rat_matrix(m);
  for (std::size_t i = 0; i < q.rows(); ++i)
    for (std::size_t j = 0; j < q.cols(); ++j)
      if (q(i, j).get_den() != 1) throw SchemaError("lattice action entries must be integers");
  return to_integer(q);
}

FiniteGroup parse_group(const json& g) {
  if (g.contains("cyclic")) return FiniteGroup::cyclic(int_field(g, "cyclic"));
  if (g.contains("symmetric")) return FiniteGroup::symmetric(int_field(g, "symmetric"));
  if (g.contains("permutations")) {
    std::vector<std::vector<int>> gens;
    for (const auto& p : field(g, "permutations")) gens.push_back(int_list(p, "permutation"));
    return FiniteGroup::from_permutations(gens);
  }
  if (g.contains("table")) {
    std::vector<std::vector<int>> t;
    for (const auto& row : field(g, "table")) t.push_back(int_list(row, "table row"));
    std::vector<std::string> names;
    if (g.contains("elements"))
      for (const auto& n : g.at("elements")) {
        if (!n.is_string()) throw SchemaError("element names must be strings");
        names.push_back(n.get<std::string>());
      }
    return FiniteGroup(t, names);
  }
  throw SchemaError("group needs one of cyclic, symmetric, permutations, table");
}

LatticeExtension parse_lattice(const json& d, std::string& name) {
  if (d.contains("corpus")) {
    name = field(d, "corpus").get<std::string>();
    for (auto& c : group_corpus())
      if (c.name == name) return c.ext;
    throw SchemaError("unknown group corpus entry '" + name + "'");
  }
  const int n = int_field(d, "lattice_rank");
  auto H = std::make_shared<const FiniteGroup>(parse_group(field(d, "group")));
  std::map<int, IntMatrix> gens;
  for (const auto& [key, m] : field(d, "action").items()) {
    int g = 0;
    try {
      g = std::stoi(key);
    } catch (const std::exception&) {
      throw SchemaError("action keys are element indices");
    }
    IntMatrix a = int_matrix(m);
    if (static_cast<int>(a.rows()) != n || static_cast<int>(a.cols()) != n)
      throw SchemaError("action matrix is not lattice_rank x lattice_rank");
    gens[g] = a;
  }
  return LatticeExtension::from_generators(n, H, gens, name);
}

LieAlg parse_lie_algebra(const json& a) {
  if (a.contains("abelian")) return LieAlg::abelian(int_field(a, "abelian"));
  if (a.contains("named")) {
    const std::string s = field(a, "named").get<std::string>();
    if (s == "sl2") return LieAlg::sl2();
    if (s == "heis3") return LieAlg::heis3();
    throw SchemaError("unknown named Lie algebra '" + s + "'");
  }
  const int dim = int_field(a, "dim");
  std::vector<std::vector<RatVector>> c(dim, std::vector<RatVector>(dim, RatVector(dim)));
  for (const auto& b : field(a, "brackets")) {
    const int i = int_field(b, "i"), j = int_field(b, "j");
    if (i < 0 || j < 0 || i >= dim || j >= dim) throw SchemaError("bracket index out of range");
    const json& v = field(b, "value");
    if (!v.is_array() || static_cast<int>(v.size()) != dim) throw SchemaError("bracket value has the wrong length");
    for (int k = 0; k < dim; ++k) {
      c[i][j][k] = entry_value(v[k]);
      c[j][i][k] = -c[i][j][k];
    }
  }
  return LieAlg(dim, c);
}

LieExtension parse_lie(const json& d, std::string& name) {
  if (d.contains("corpus")) {
    name = field(d, "corpus").get<std::string>();
    for (auto& e : lie_corpus())
      if (e.name == name) return e;
    throw SchemaError("unknown Lie corpus entry '" + name + "'");
  }
  LieExtension e{name, parse_lie_algebra(field(d, "n")), parse_lie_algebra(field(d, "h")), {}};
  for (const auto& m : field(d, "phi")) {
    RatMatrix p = rat_matrix(m);
    if (static_cast<int>(p.rows()) != e.n.dim() || static_cast<int>(p.cols()) != e.n.dim())
      throw SchemaError("phi matrices must be dim n x dim n");
    e.phi.push_back(p);
  }
  if (static_cast<int>(e.phi.size()) != e.h.dim()) throw SchemaError("phi needs one matrix per basis element of h");
  e.g();  // validates
  return e;
}

const std::set<std::string> kAllTasks{"cohomology", "pages",       "charclass",  "collapse",
                                      "decompose",  "obstruction", "naturality", "bounds"};

std::vector<std::string> parse_tasks(const json& job, const std::string& kind) {
  std::vector<std::string> tasks;
  if (!job.contains("tasks")) return tasks;
  for (const auto& t : job.at("tasks")) {
    if (!t.is_string() || !kAllTasks.count(t.get<std::string>())) throw SchemaError("unknown task " + t.dump());
    tasks.push_back(t.get<std::string>());
  }
  std::set<std::string> allowed;
  if (kind == "group") allowed = kAllTasks;
  if (kind == "lie") allowed = {"cohomology", "pages", "charclass", "collapse", "obstruction"};
  if (kind == "bounds") allowed = {"bounds"};
  for (const auto& t : tasks)
    if (!allowed.count(t)) throw SchemaError("task '" + t + "' is not available for kind " + kind);
  std::sort(tasks.begin(), tasks.end());
  tasks.erase(std::unique(tasks.begin(), tasks.end()), tasks.end());
  return tasks;
}

bool has(const std::vector<std::string>& v, const char* s) { return std::find(v.begin(), v.end(), s) != v.end(); }

// ---------------------------------------------------------------- tasks

// Highest total degree the job's tables cover.
int table_degree(const ExtensionHandle& ext, int max_degree) { return std::min(max_degree, ext.max_degree()); }

json pages_json(const ExtensionHandle& ext, int D, const std::function<FGAbelian(int, int, int)>& expected) {
  json out = json::array();
  for (int i = 0; i < ext.coefficient_count(); ++i) {
    const SpectralSequence& ss = ext.coefficient_ss(i);
    json rows = json::array();
    for (int n = 0; n <= D; ++n)
      for (int p = 0; p <= n; ++p) {
        auto e2 = ss.page(2, p, n - p);
        FGAbelian want = expected(i, p, n - p);
        rows.push_back(
            {{"p", p}, {"q", n - p}, {"e2", e2->describe()}, {"expected", want.describe()}, {"match", e2->isomorphic(want)}});
      }
    out.push_back({{"coefficients", ext.coefficient_label(i)}, {"entries", rows}});
  }
  return out;
}

std::function<FGAbelian(int, int, int)> expected_fn(const ExtensionHandle& ext) {
  if (auto* g = dynamic_cast<const GroupHandle*>(&ext))
    return [g](int i, int p, int q) {
      // coefficient_ss(i) is the LHS complex of Lambda^i L
      return g->homology_complex(i).e2_expected(p, q);
    };
  auto* l = dynamic_cast<const LieHandle*>(&ext);
  return [l](int i, int p, int q) {
    FGAbelian a;
    a.free_rank = hs_e2_expected(l->extension(), l->homology(i).module, p, q);
    return a;
  };
}

json cohomology_json(const ExtensionHandle& ext, int D) {
  json out = json::array();
  for (int i = 0; i < ext.coefficient_count(); ++i) {
    json rows = json::array();
    for (int n = 0; n <= D; ++n) rows.push_back(convergence_json(ext.coefficient_ss(i).convergence_check(n)));
    out.push_back({{"coefficients", ext.coefficient_label(i)}, {"degrees", rows}});
  }
  return out;
}

json charclass_task(const ExtensionHandle& ext, int D, const json& job) {
  json out = json::array();
  if (job.contains("targets")) {
    for (const auto& tr : job.at("targets")) {
      auto v = int_list(tr, "target");
      if (v.size() != 2) throw SchemaError("targets are [t, r] pairs");
      out.push_back(charclass_json(characteristic_class(ext, v[0], v[1])));
    }
    return out;
  }
  for (int t = 0; t <= std::min(ext.kernel_rank(), D - 1); ++t)
    for (int r = 2; r <= t + 1; ++r) out.push_back(charclass_json(analyze(ext, t, r)));
  return out;
}

json collapse_json(const CollapseCertificate& c) {
  json ev = json::array();
  for (const auto& e : c.evidence)
    ev.push_back({{"t", e.t}, {"m", e.m}, {"zero", e.zero}, {"v_order", e.order ? order_json(*e.order) : json(nullptr)}});
  json dec = json::object();
  for (const auto& [m, ts] : c.decisive_t) dec[std::to_string(m)] = ts;
  return json{{"verdict", c.verdict}, {"collapses", c.collapses}, {"max_t", c.max_t},
              {"witness", witness_json(c.witness)}, {"evidence", ev}, {"decisive_prime_power_t", dec}};
}

json obstruction_task(const ExtensionHandle& ext, int D, const json& job) {
  const int samples = int_field_or(job, "samples", 10);
  const unsigned seed = static_cast<unsigned>(int_field_or(job, "seed", 1));
  std::vector<int> rs{2};
  if (job.contains("obstruction_r")) rs = int_list(job.at("obstruction_r"), "obstruction_r");
  json out = json::array();
  for (int r : rs)
    for (int t = 0; t <= std::min(ext.kernel_rank(), D - 1); ++t)
      for (int i = 0; i < ext.coefficient_count(); ++i) {
        auto rep = verify_obstruction_identity(ext, t, r, i, samples, seed);
        out.push_back({{"t", t},
                       {"r", r},
                       {"coefficients", ext.coefficient_label(i)},
                       {"checked", rep.checked},
                       {"failures", rep.failures},
                       {"uniqueness_ok", rep.uniqueness_ok},
                       {"ok", rep.ok()}});
      }
  return out;
}

json decompose_task(const LatticeExtension& e, int N, const json& job, bool mutate) {
  const int n1 = int_field(job, "n1");
  DecompositionOptions opt;
  opt.mutate_sign = mutate;
  opt.seed = static_cast<unsigned>(int_field_or(job, "seed", 7));
  json out = json::array();
  for (int t = 0; t <= std::min(3, N - 2); ++t) {
    auto d = decomposition_check(e, n1, t, 2, N, opt);
    out.push_back({{"t", t},
                   {"r", 2},
                   {"formula_ok", d.formula_ok},
                   {"lhs", vec_json(d.lhs)},
                   {"rhs", vec_json(d.rhs)},
                   {"leibniz_checked", d.leibniz_checked},
                   {"leibniz_failures", d.leibniz_failures},
                   {"cochain_checked", d.cochain_checked},
                   {"cochain_failures", d.cochain_failures},
                   {"ok", d.ok()}});
  }
  return out;
}

json naturality_task(const GroupHandle& big, int N, const json& job) {
  auto K = int_list(field(job, "subgroup"), "subgroup");
  Restriction res = restrict_to(big.extension(), K);
  GroupHandle sub(res.ext, N, big.name() + "|K");
  json out = json::array();
  for (int t = 1; t <= std::min(big.kernel_rank(), N - 2); ++t)
    for (int r = 2; r <= std::min(3, t + 1); ++r) {
      auto n = naturality_check(big, sub, res.embedding, res.index, t, r);
      out.push_back({{"t", t},
                     {"r", r},
                     {"index", n.index},
                     {"maps_v_to_w", n.maps_v_to_w},
                     {"w", vec_json(n.w)},
                     {"w_order", order_json(n.w_order)},
                     {"transfer_ok", n.transfer_ok}});
    }
  return out;
}

json hopf_job(const json& d) {
  FinHopf A, C, B;
  ModuleAction act;
  RatMatrix iso;
  if (d.contains("group")) {
    FiniteGroup G = parse_group(d.at("group"));
    auto s = split_group_algebras(G, int_list(field(d, "N"), "N"), int_list(field(d, "H"), "H"));
    A = s.A;
    C = s.C;
    B = s.B;
    act = s.action;
    iso = s.iso;
  } else {
    FiniteGroup N = parse_group(field(d, "N")), H = parse_group(field(d, "H"));
    std::vector<std::vector<int>> perm;
    for (const auto& row : field(d, "action")) perm.push_back(int_list(row, "action row"));
    if (static_cast<int>(perm.size()) != H.order()) throw SchemaError("action needs one row per element of H");
    for (const auto& row : perm)
      if (static_cast<int>(row.size()) != N.order()) throw SchemaError("action row must permute N");
    A = group_algebra(N);
    C = group_algebra(H);
    act = permutation_action(perm);
    auto mb = check_module_bialgebra(A, C, act);
    if (!mb.ok()) throw NotModuleBialgebra(mb.failures().front());
    // N x| H with (n, h)(n', h') = (n (h . n'), h h'), element index n |H| + h
    const int nn = N.order(), nh = H.order();
    std::vector<std::vector<int>> t(nn * nh, std::vector<int>(nn * nh));
    for (int a = 0; a < nn; ++a)
      for (int b = 0; b < nh; ++b)
        for (int a2 = 0; a2 < nn; ++a2)
          for (int b2 = 0; b2 < nh; ++b2) t[a * nh + b][a2 * nh + b2] = N.mul(a, perm[b][a2]) * nh + H.mul(b, b2);
    B = group_algebra(t);
    iso = RatMatrix::identity(nn * nh);
  }
  json out;
  out["N_axioms"] = A.check_axioms().all();
  out["H_axioms"] = C.check_axioms().all();
  auto mb = check_module_bialgebra(A, C, act);
  out["module_bialgebra"] = {{"module_algebra", mb.module_algebra()},
                             {"module_coalgebra", mb.module_coalgebra()},
                             {"failures", mb.failures()}};
  if (!mb.ok()) throw NotModuleBialgebra(mb.failures().front());
  auto sm = smash_product(A, C, act);
  out["smash_hopf_compatible"] = sm.hopf_compatible();
  out["smash_axioms"] = sm.hopf_compatible() && sm.as_hopf().check_axioms().all();
  const bool square = iso.rows() == iso.cols() && rank_q(iso) == iso.rows();
  out["isomorphic_to_group_algebra"] = square && is_algebra_map(sm.mult, sm.unit, B.mult(), B.unit(), iso) &&
                                       is_coalgebra_map(sm.comult, sm.counit, B.comult(), B.counit(), iso);
  out["dim"] = B.dim();
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
  return s;
}

}  // namespace

int degree_ceiling() {
  if (const char* s = std::getenv("OBSTRUKT_MAX_DEGREE")) {
    try {
      int v = std::stoi(s);
      if (v >= 0) return v;
    } catch (const std::exception&) {
    }
    throw SchemaError(std::string("OBSTRUKT_MAX_DEGREE is not a nonnegative integer: ") + s);
  }
  return kDefaultDegreeCeiling;
}

int exit_code_for(const std::exception& e, std::string& msg) {
  auto is = [&](auto* tag) { return dynamic_cast<decltype(tag)>(&e) != nullptr; };
  if (is((const SchemaError*)nullptr) || is((const MissingEntry*)nullptr) || is((const json::exception*)nullptr) ||
      is((const DimensionMismatch*)nullptr)) {
    msg = std::string("schema error: ") + e.what();
    return 2;
  }
  if (is((const DegreeCeiling*)nullptr) || is((const TruncationTooSmall*)nullptr) ||
      is((const DimensionTooLarge*)nullptr) || is((const std::overflow_error*)nullptr)) {
    msg = std::string("truncation limit: ") + e.what();
    return 4;
  }
  if (is((const NotTrivial*)nullptr)) {
    msg = std::string("precondition failed: (t,r)-triviality: ") + e.what();
    return 3;
  }
  if (is((const NotModuleBialgebra*)nullptr)) {
    msg = std::string("precondition failed: module bialgebra: ") + e.what();
    return 3;
  }
  if (is((const ActionNotBlockDiagonal*)nullptr)) {
    msg = std::string("precondition failed: block-diagonal action L = L1 + L2: ") + e.what();
    return 3;
  }
  if (is((const NotAGroup*)nullptr) || is((const NotASubgroup*)nullptr)) {
    msg = std::string("precondition failed: group structure: ") + e.what();
    return 3;
  }
  if (is((const ActionNotHomomorphism*)nullptr)) {
    msg = std::string("precondition failed: action H -> GL(n, Z) is a homomorphism: ") + e.what();
    return 3;
  }
  if (is((const NotALieAlgebra*)nullptr) || is((const NotDerivation*)nullptr) || is((const NotLieHom*)nullptr) ||
      is((const NotARepresentation*)nullptr) || is((const ActionNotChainMap*)nullptr)) {
    msg = std::string("precondition failed: split Lie extension: ") + e.what();
    return 3;
  }
  if (is((const HypothesisFails*)nullptr) || is((const InconsistentFlags*)nullptr) ||
      is((const NotAHopfAlgebra*)nullptr)) {
    msg = std::string("precondition failed: ") + e.what();
    return 3;
  }
  msg = std::string("internal error: ") + e.what();
  return 1;
}

json bounds_report(int r, int t) {
  BBound b = b_bound(t, r);
  json terms = json::array();
  for (const auto& x : b.terms) terms.push_back({{"p", x.p}, {"lambda", x.exponent}});
  json ann = json::object();
  auto a = liebermann_annihilators(t, r, {2, 3});
  for (std::size_t i = 0; i < a.values.size(); ++i) ann[std::to_string(i + 2)] = int_json(a.values[i]);
  return json{{"r", r},
              {"t", t},
              {"B", int_json(b.value)},
              {"parity", r % 2 ? "odd" : "even"},
              {"lambda", terms},
              {"relevant_primes", relevant_primes(r)},
              {"liebermann", ann}};
}

json run_job(const json& job) {
  if (!job.is_object()) throw SchemaError("job must be a JSON object");
  const std::string kind = field(job, "kind").get<std::string>();
  if (kind != "group" && kind != "lie" && kind != "hopf" && kind != "bounds")
    throw SchemaError("kind must be group, lie, hopf or bounds");
  const auto tasks = parse_tasks(job, kind);
  json report{{"kind", kind}, {"tasks", tasks}};
  std::string name = job.contains("name") ? field(job, "name").get<std::string>() : "";

  if (kind == "bounds") {
    const json& d = field(job, "descriptor");
    report["bounds"] = bounds_report(int_field(d, "r"), int_field(d, "t"));
  } else if (kind == "hopf") {
    report["hopf"] = hopf_job(field(job, "descriptor"));
  } else {
    const int N = int_field(job, "max_degree");
    if (N < 1) throw SchemaError("max_degree must be positive");
    if (N > degree_ceiling())
      throw DegreeCeiling("max_degree " + std::to_string(N) + " exceeds the ceiling " +
                         std::to_string(degree_ceiling()) + " (set OBSTRUKT_MAX_DEGREE to raise it)");
    report["max_degree"] = N;
    std::unique_ptr<ExtensionHandle> ext;
    std::optional<LatticeExtension> lattice;
    if (kind == "group") {
      lattice = parse_lattice(field(job, "descriptor"), name);
      ext = std::make_unique<GroupHandle>(*lattice, N, name);
    } else {
      ext = std::make_unique<LieHandle>(parse_lie(field(job, "descriptor"), name));
    }
    const int D = table_degree(*ext, N);
    if (has(tasks, "pages")) report["pages"] = pages_json(*ext, D, expected_fn(*ext));
    if (has(tasks, "cohomology")) report["cohomology"] = cohomology_json(*ext, D);
    if (has(tasks, "charclass")) report["charclass"] = charclass_task(*ext, D, job);
    if (has(tasks, "collapse")) {
      const int max_t = std::min(ext->max_degree() - 2, std::max(0, N - 2));
      report["collapse"] = collapse_json(collapse_certificate(*ext, max_t));
    }
    if (has(tasks, "obstruction")) report["obstruction"] = obstruction_task(*ext, D, job);
    if (has(tasks, "decompose")) report["decompose"] = decompose_task(*lattice, N, job, false);
    if (has(tasks, "naturality"))
      report["naturality"] = naturality_task(static_cast<const GroupHandle&>(*ext), N, job);
    if (has(tasks, "bounds")) {
      json b = json::array();
      for (int t = 2; t <= std::min(ext->kernel_rank(), D - 1); ++t)
        for (int r = 2; r <= t; ++r) b.push_back(bounds_report(r, t));
      report["bounds"] = b;
    }
  }
  report["name"] = name;
  report["timestamp"] = timestamp_now();
  return report;
}

// ---------------------------------------------------------------- corpus

bool CorpusResult::ok() const {
  return std::all_of(results.begin(), results.end(), [](const PropertyResult& p) { return p.pass; });
}

namespace {

struct Recorder {
  std::string entry;
  std::vector<PropertyResult>* out;
  json* props;
  void operator()(const std::string& property, bool pass, const std::string& detail = {}) {
    out->push_back({entry, property, pass, detail});
    (*props)[property] = json{{"pass", pass}, {"detail", detail}};
  }
};

// d_r^{s, r-1} = 0 wherever the target degree is trusted.
bool splitting_lemma(const ExtensionHandle& ext, int D, std::string& detail) {
  for (int i = 0; i < ext.coefficient_count(); ++i)
    for (int r = 2; r <= D; ++r)
      for (int s = 0; s + r <= D; ++s)
        if (!ext.coefficient_ss(i).differential_matrix(r, s, r - 1).is_zero()) {
          detail = "d_" + std::to_string(r) + "^{" + std::to_string(s) + "," + std::to_string(r - 1) + "} != 0 in " +
                   ext.coefficient_label(i);
          return false;
        }
  return true;
}

// m^{t-r+1} (m^{r-1} - 1) kills every d_r image out of row t, m = 2, 3.
bool liebermann(const ExtensionHandle& ext, int D, std::string& detail) {
  for (int t = 1; t <= std::min(ext.kernel_rank(), D - 1); ++t)
    for (int r = 2; r <= std::min(3, D - t); ++r) {
      if (!is_tr_trivial(ext, t, r).trivial) continue;
      auto ann = liebermann_annihilators(t, r, {2, 3});
      for (int i = 0; i < ext.coefficient_count(); ++i) {
        const SpectralSequence& ss = ext.coefficient_ss(i);
        for (int s = 0; s + t + 1 <= D; ++s) {
          auto src = ss.page(r, s, t);
          for (std::size_t g = 0; g < src->ngens(); ++g) {
            PageClass img = ss.differential(ss.generator(r, s, t, g));
            for (const auto& a : ann.values) {
              PageClass scaled = img;
              for (auto& x : scaled.rep) x *= Rational(a);
              if (!ss.is_zero(scaled)) {
                detail = "annihilator " + a.get_str() + " misses d_" + std::to_string(r) + " image at s=" +
                         std::to_string(s) + ", t=" + std::to_string(t);
                return false;
              }
            }
          }
        }
      }
    }
  return true;
}

void group_entry(const CorpusExtension& c, const CorpusOptions& opt, Recorder& rec, json& entry) {
  const int N = opt.max_degree;
  GroupHandle G(c.ext, N, c.name);
  const int D = N;
  std::string detail;

  bool e2 = true;
  for (int i = 0; i < G.coefficient_count() && e2; ++i)
    for (int n = 0; n <= D && e2; ++n)
      for (int p = 0; p <= n; ++p) {
        FGAbelian want = G.homology_complex(i).e2_expected(p, n - p);
        auto got = G.coefficient_ss(i).page(2, p, n - p);
        if (!got->isomorphic(want)) {
          e2 = false;
          detail = G.coefficient_label(i) + " E2^{" + std::to_string(p) + "," + std::to_string(n - p) +
                   "} = " + got->describe() + ", expected " + want.describe();
          break;
        }
      }
  rec("e2_identification", e2, detail);

  bool conv = true;
  for (int i = 0; i < G.coefficient_count(); ++i)
    for (int n = 0; n <= D; ++n) conv = conv && G.coefficient_ss(i).convergence_check(n).ok;
  rec("convergence", conv);

  detail.clear();
  rec("splitting_lemma", splitting_lemma(G, D, detail), detail);

  bool agree = true;
  for (int t = 0; t <= std::min(3, G.kernel_rank()); ++t)
    for (int r = 2; r <= 4; ++r) agree = agree && is_tr_trivial(G, t, r).routes_agree;
  rec("edge_route_agreement", agree);

  int checked = 0, failures = 0;
  bool unique = true;
  for (int t = 0; t <= std::min(G.kernel_rank(), D - 1); ++t)
    for (int i = 0; i < G.coefficient_count(); ++i) {
      auto o = verify_obstruction_identity(G, t, 2, i, 10, 3);
      checked += o.checked;
      failures += o.failures;
      unique = unique && o.uniqueness_ok;
    }
  rec("obstruction_identity", failures == 0 && unique && checked > 0,
      std::to_string(checked) + " samples, " + std::to_string(failures) + " failures");

  json classes = json::array();
  bool div = true;
  for (int t = 2; t <= std::min({4, G.kernel_rank(), D - 1}); ++t)
    for (int r = 2; r <= std::min(3, t); ++r) {
      auto a = analyze(G, t, r);
      classes.push_back(charclass_json(a));
      div = div && a.trivial && a.divisibility_ok;
    }
  entry["charclass"] = classes;
  rec("divisibility", div);

  detail.clear();
  rec("liebermann", liebermann(G, D, detail), detail);

  try {
    decomposition_data(c.ext, 1);
    if (c.ext.n >= 2) {
      DecompositionOptions dopt;
      dopt.mutate_sign = opt.inject_sign_error;
      bool formula = true, leib = true;
      int pairs = 0;
      for (int t = 0; t <= std::min(3, N - 2); ++t) {
        auto d = decomposition_check(c.ext, 1, t, 2, N, dopt);
        formula = formula && d.formula_ok;
        leib = leib && d.leibniz_failures == 0 && d.cochain_failures == 0;
        pairs += d.leibniz_checked;
      }
      rec("decomposition", formula);
      rec("leibniz", leib, std::to_string(pairs) + " class pairs");
    }
  } catch (const ActionNotBlockDiagonal&) {
  }

  // restriction to the trivial subgroup, and to the index-2 subgroup of Z/4
  bool nat = true, transfer = true;
  std::vector<std::vector<int>> subgroups{{c.ext.H->identity()}};
  if (c.name == "z4-rot") subgroups.push_back({0, 2});
  for (const auto& K : subgroups) {
    Restriction res = restrict_to(c.ext, K);
    GroupHandle sub(res.ext, N, c.name + "|K");
    for (int t = 1; t <= std::min(G.kernel_rank(), 2); ++t)
      for (int r = 2; r <= std::min(3, t + 1); ++r) {
        auto n = naturality_check(G, sub, res.embedding, res.index, t, r);
        nat = nat && n.maps_v_to_w;
        transfer = transfer && n.transfer_ok;
      }
  }
  rec("naturality", nat);
  rec("transfer", transfer);

  entry["collapse"] = collapse_json(collapse_certificate(G, std::min(N - 2, 3)));
}

void lie_entry(const LieExtension& e, const CorpusOptions&, Recorder& rec, json& entry) {
  LieHandle L(e);
  const int D = std::min(4, L.max_degree());
  bool e2 = true;
  for (int i = 0; i < L.coefficient_count(); ++i)
    for (int n = 0; n <= D; ++n)
      for (int p = 0; p <= n; ++p)
        e2 = e2 && L.coefficient_ss(i).page(2, p, n - p)->free_rank ==
                       hs_e2_expected(e, L.homology(i).module, p, n - p);
  rec("e2_identification", e2);

  bool conv = true;
  for (int i = 0; i < L.coefficient_count(); ++i)
    for (int n = 0; n <= std::min(5, L.max_degree()); ++n) conv = conv && L.coefficient_ss(i).convergence_check(n).ok;
  rec("convergence", conv);

  std::string detail;
  rec("splitting_lemma", splitting_lemma(L, L.max_degree(), detail), detail);

  bool agree = true;
  for (int t = 0; t <= L.kernel_rank() && t + 1 <= L.max_degree(); ++t)
    for (int r = 2; r <= 4; ++r) agree = agree && is_tr_trivial(L, t, r).routes_agree;
  rec("edge_route_agreement", agree);

  int checked = 0, failures = 0;
  for (int t = 0; t <= L.kernel_rank() && t + 1 <= L.max_degree(); ++t)
    for (int i = 0; i < L.coefficient_count(); ++i) {
      auto o = verify_obstruction_identity(L, t, 2, i, 10, 3);
      checked += o.checked;
      failures += o.failures + (o.uniqueness_ok ? 0 : 1);
    }
  rec("obstruction_identity", failures == 0, std::to_string(checked) + " samples");

  const int max_t = std::min(L.kernel_rank(), L.max_degree() - 2);
  auto cert = collapse_certificate(L, max_t);
  entry["collapse"] = collapse_json(cert);
  std::vector<std::string> reasons;
  if (e.n.is_abelian()) reasons.push_back("abelian kernel");
  if (is_reductive(e.n)) reasons.push_back("reductive kernel");
  if (image_dimension(e) <= 1) reasons.push_back("image of dimension <= 1");
  if (factors_through_semisimple(e).factors) reasons.push_back("factors through a semisimple algebra");
  if (!reasons.empty()) rec("collapse", cert.collapses, join(reasons));
  json classes = json::array();
  for (int t = 0; t <= std::min(L.kernel_rank(), L.max_degree() - 1); ++t)
    for (int r = 2; r <= t + 1; ++r) classes.push_back(charclass_json(analyze(L, t, r)));
  entry["charclass"] = classes;
}

}  // namespace

CorpusResult run_corpus(const CorpusOptions& opt) {
  CorpusResult res;
  json entries = json::array();
  auto selected = [&](const std::string& n) { return opt.filter.empty() || n.find(opt.filter) != std::string::npos; };
  for (const auto& c : group_corpus()) {
    if (!selected(c.name)) continue;
    json entry{{"name", c.name}, {"kind", "group"}, {"max_degree", opt.max_degree}};
    json props = json::object();
    Recorder rec{c.name, &res.results, &props};
    group_entry(c, opt, rec, entry);
    entry["properties"] = props;
    entries.push_back(entry);
  }
  for (const auto& e : lie_corpus()) {
    if (!selected(e.name)) continue;
    json entry{{"name", e.name}, {"kind", "lie"}};
    json props = json::object();
    Recorder rec{e.name, &res.results, &props};
    lie_entry(e, opt, rec, entry);
    entry["properties"] = props;
    entries.push_back(entry);
  }
  res.report = json{{"entries", entries},
                    {"ok", res.ok()},
                    {"checked", res.results.size()},
                    {"timestamp", timestamp_now()}};
  return res;
}

void print_corpus_table(const CorpusResult& res, std::ostream& os) {
  std::size_t w = 5;
  for (const auto& p : res.results) w = std::max(w, p.entry.size());
  for (const auto& p : res.results) {
    os << std::left << std::setw(static_cast<int>(w) + 2) << p.entry << std::setw(24) << p.property
       << (p.pass ? "PASS" : "FAIL");
    if (!p.detail.empty()) os << "  " << p.detail;
    os << "\n";
  }
  const auto failed = std::count_if(res.results.begin(), res.results.end(), [](auto& p) { return !p.pass; });
  os << res.results.size() << " checks, " << failed << " failed\n";
}

// ---------------------------------------------------------------- explain

std::string explain(const json& report, int t, int r) {
  const json* hit = nullptr;
  auto scan = [&](const json& list) {
    for (const auto& e : list)
      if (e.value("t", -1) == t && e.value("r", -1) == r) hit = &e;
  };
  if (report.contains("charclass")) scan(report.at("charclass"));
  if (!hit && report.contains("entries"))
    for (const auto& e : report.at("entries"))
      if (e.contains("charclass")) scan(e.at("charclass"));
  if (!hit) throw MissingEntry("report has no charclass entry for t=" + std::to_string(t) + ", r=" + std::to_string(r));
  const json& e = *hit;
  std::ostringstream os;
  os << "v_" << r << "^" << t << " = d_" << r << "^{0," << t << "}[id^" << t << "]\n";
  if (!e.at("trivial").get<bool>()) {
    const json& w = e.at("witness");
    os << "not (" << t << "," << r << ")-trivial: d_" << w.at("page") << "^{" << w.at("s") << "," << w.at("t")
       << "} is nonzero, so v is undefined\n";
    return os.str();
  }
  os << "target E_" << r << "^{" << r << "," << t - r + 1 << "}(H_" << t << ") = " << e.at("target").get<std::string>()
     << "\n";
  const json& steps = e.at("lift_steps");
  if (steps.empty()) {
    os << "[id^" << t << "] needed no corrections up to page " << r << "\n";
  } else {
    os << "lift of [id^" << t << "]:\n";
    for (const auto& s : steps)
      os << "  page " << s.at("page").get<int>() << " -> " << s.at("page").get<int>() + 1
         << ": correction at filtration " << s.at("level") << ", " << s.at("correction").size() << " terms "
         << s.at("correction").dump() << "\n";
  }
  const json& v = e.at("v_presentation");
  if (v.contains("representative")) os << "representative of d_" << r << " image: " << v.at("representative").dump() << "\n";
  os << "coordinates " << v.at("coords").dump() << "\n";
  const json& ord = e.at("v_order");
  if (v.at("zero").get<bool>())
    os << "class is zero in " << e.at("target").get<std::string>() << "\n";
  else
    os << "class is nonzero of order " << (ord.is_string() ? ord.get<std::string>() : ord.dump()) << " in "
       << e.at("target").get<std::string>() << "\n";
  if (!e.at("bound_B").is_null()) {
    os << "bounds: B = " << e.at("bound_B").dump();
    if (!e.at("bound_chi").is_null()) os << ", chi product = " << e.at("bound_chi").dump();
    os << ", divisibility " << (e.at("divisibility_ok").get<bool>() ? "holds" : "FAILS") << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------- output

std::string dump(const json& report, bool drop_timestamp) {
  json copy = report;
  if (drop_timestamp && copy.is_object()) copy.erase("timestamp");
  return copy.dump(2) + "\n";
}

std::string timestamp_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace obstrukt::cli
