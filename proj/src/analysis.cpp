#include "teamlog/analysis.hpp"

#include <ostream>

#include "teamlog/io.hpp"
#include "teamlog/parser.hpp"

namespace teamlog {

namespace {

std::uint64_t ipow(std::uint64_t base, std::size_t exp) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) out *= base;
  return out;
}

template <typename Fn>
void for_each_node(const Formula& f, Fn fn) {
  std::vector<const Node*> stack{f.get()};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    fn(*n);
    if (n->right) stack.push_back(n->right.get());
    if (n->left) stack.push_back(n->left.get());
  }
}

bool upward_atom(AtomKind kind) {
  switch (kind) {
    case AtomKind::NE:
    case AtomKind::All:
    case AtomKind::Geq:
    case AtomKind::NCon:
    case AtomKind::NDep:
      return true;
    default:
      return false;
  }
}

// Built from upward-closed atoms with & | exists forall ||.
bool syntactically_upward(const Formula& f) {
  bool up = true;
  for_each_node(f, [&](const Node& n) {
    switch (n.op) {
      case Op::And:
      case Op::TensorOr:
      case Op::ClassicalOr:
      case Op::Exists:
      case Op::Forall:
      case Op::Bracket:
        break;
      case Op::Atom:
        if (!upward_atom(n.atom)) up = false;
        break;
      default:
        up = false;
    }
  });
  return up;
}

void check_bounded_fragment(const Formula& f, std::size_t max_model, const Registry& reg) {
  for_each_node(f, [&](const Node& n) {
    switch (n.op) {
      case Op::ContraNeg:
      case Op::IntImpl:
      case Op::Possibly:
        throw FragmentError("boundedness is checked for FO(const, upward-closed atoms, ||) only");
      case Op::Atom:
        break;
      default:
        return;
    }
    if (n.atom == AtomKind::Const || upward_atom(n.atom)) return;
    if (n.atom == AtomKind::Dep && n.groups[0].empty()) return;
    if (n.atom == AtomKind::Custom) {
      const auto& spec = reg.at(n.name);
      if (spec.claimed_upward_closed == Claim::Yes) return;
      if (spec.claimed_upward_closed == Claim::No)
        throw FragmentError("D:" + n.name + " is declared not upward closed");
      if (spec.arity == 0) return;  // team-independent, hence upward closed
      auto verdict = check_upward_closed(spec, max_model);
      if (verdict.holds) return;
      throw FragmentError("D:" + n.name + " is not upward closed on a domain of size " +
                          std::to_string(verdict.domain_size));
    }
    throw FragmentError(std::string("atom ") + atom_keyword(n.atom) +
                        " is outside FO(const, upward-closed atoms, ||)");
  });
}

const char* filter_name(TeamFilter filter) {
  return filter == TeamFilter::All ? "all teams" : "nonempty teams";
}

}  // namespace

std::uint64_t GammaFn::at(std::uint64_t n, std::size_t arity, int parameter) const {
  switch (kind) {
    case Kind::Constant:
      return c;
    case Kind::Linear:
      return c * n;
    case Kind::ArityPower:
      return ipow(n, arity);
    case Kind::Parameter:
      return static_cast<std::uint64_t>(parameter);
  }
  return 0;
}

GammaFn GammaFn::parse(const std::string& text) {
  if (text == "nk") return {Kind::ArityPower, 0};
  auto number = [&](std::size_t from) {
    std::size_t used = 0;
    unsigned long long value = 0;
    try {
      value = std::stoull(text.substr(from), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || from + used != text.size() || text[from] == '-')
      throw Error("bad gamma bound '" + text + "'");
    return static_cast<std::uint64_t>(value);
  };
  if (text.rfind("const:", 0) == 0) return {Kind::Constant, number(6)};
  if (text.rfind("lin:", 0) == 0) return {Kind::Linear, number(4)};
  throw Error("bad gamma bound '" + text + "' (expected nk, const:c or lin:c)");
}

std::string GammaFn::describe() const {
  switch (kind) {
    case Kind::Constant:
      return std::to_string(c);
    case Kind::Linear:
      return std::to_string(c) + "n";
    case Kind::ArityPower:
      return "n^k";
    case Kind::Parameter:
      return "parameter";
  }
  return "?";
}

GammaTable GammaTable::standard() {
  GammaTable g;
  g.set(AtomKind::NE, {GammaFn::Kind::Constant, 1});
  g.set(AtomKind::Geq, {GammaFn::Kind::Parameter, 0});
  g.set(AtomKind::All, {GammaFn::Kind::ArityPower, 0});
  g.set(AtomKind::NCon, {GammaFn::Kind::Constant, 2});
  g.set(AtomKind::NDep, {GammaFn::Kind::Constant, 2});
  g.set(AtomKind::Const, {GammaFn::Kind::Constant, 0});
  return g;
}

void GammaTable::set_by_name(const std::string& name, GammaFn fn) {
  for (int i = 0; i <= static_cast<int>(AtomKind::CoCountNeq); ++i) {
    auto kind = static_cast<AtomKind>(i);
    if (name == atom_keyword(kind)) {
      set(kind, fn);
      return;
    }
  }
  set_custom(name.rfind("D:", 0) == 0 ? name.substr(2) : name, fn);
}

std::optional<std::uint64_t> GammaTable::gamma(const Node& atom, std::uint64_t n) const {
  std::size_t arity = atom.groups.empty() ? 0 : atom.groups[0].size();
  if (atom.atom == AtomKind::Custom) {
    if (auto it = custom_.find(atom.name); it != custom_.end())
      return it->second.at(n, arity, atom.parameter);
    if (custom_default_) return ipow(n, arity);
    return std::nullopt;
  }
  if (atom.atom == AtomKind::Dep && atom.groups[0].empty()) {
    if (auto it = builtin_.find(AtomKind::Const); it != builtin_.end())
      return it->second.at(n, atom.groups[1].size(), 0);
  }
  auto it = builtin_.find(atom.atom);
  if (it == builtin_.end()) return std::nullopt;
  return it->second.at(n, arity, atom.parameter);
}

std::uint64_t nu_bound(const Formula& f, std::uint64_t n, const GammaTable& g) {
  std::uint64_t total = 0;
  for_each_node(f, [&](const Node& node) {
    if (node.op != Op::Atom) return;
    auto gamma = g.gamma(node, n);
    if (!gamma) {
      std::string name =
          node.atom == AtomKind::Custom ? "D:" + node.name : atom_keyword(node.atom);
      throw Error("no gamma bound for " + name);
    }
    total += *gamma;
  });
  return total;
}

std::optional<Team> minimal_satisfying_subteam(const Model& m, const Team& t, const Formula& f,
                                               const Registry& reg, std::size_t row_limit) {
  if (t.size() > row_limit)
    throw LimitError("minimal-witness search over " + std::to_string(t.size()) +
                     " rows exceeds the limit of " + std::to_string(row_limit));
  std::optional<Team> found;
  std::vector<std::size_t> pick;
  for (std::size_t size = 0; size <= t.size() && !found; ++size) {
    pick.resize(size);
    for (std::size_t i = 0; i < size; ++i) pick[i] = i;
    while (true) {
      Team y = t.select(pick);
      if (eval(m, y, f, reg)) {
        found = std::move(y);
        break;
      }
      // Next combination in lexicographic order.
      std::size_t i = size;
      while (i > 0 && pick[i - 1] == t.size() - size + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  if (!found) return found;
  if (!eval(m, *found, f, reg)) throw Error("internal: minimal witness failed re-validation");
  if (syntactically_upward(f)) {
    Team greedy = t;
    for (std::size_t i = greedy.size(); i-- > 0;) {
      std::vector<std::size_t> keep;
      for (std::size_t j = 0; j < greedy.size(); ++j)
        if (j != i) keep.push_back(j);
      Team smaller = greedy.select(keep);
      if (eval(m, smaller, f, reg)) greedy = std::move(smaller);
    }
    if (!eval(m, greedy, f, reg) || greedy.size() < found->size())
      throw Error("internal: greedy descent contradicts the minimal witness");
  }
  return found;
}

bool BoundCheck::all_hold() const { return violations() == 0; }

std::size_t BoundCheck::violations() const {
  std::size_t count = 0;
  for (const auto& r : reports) count += r.holds ? 0 : 1;
  return count;
}

BoundCheck check_boundedness(const Formula& f, std::size_t max_model, const GammaTable& g,
                             const Registry& reg, const Signature& sig) {
  if (max_model < 1) throw Error("max model size must be at least 1");
  check_bounded_fragment(f, max_model, reg);
  for (const auto& r : relations_used(f))
    if (!sig.contains(r)) throw Error("relation " + r + " is not in the sweep signature");
  BoundCheck check;
  check.formula = f;
  auto free = free_variables(f);
  check.vars.assign(free.begin(), free.end());
  check.max_model = max_model;
  for (std::size_t n = 1; n <= max_model; ++n) {
    std::uint64_t nu = nu_bound(f, n, g);
    for (const auto& m : enumerate_models(sig, n)) {
      for (const auto& t : enumerate_teams(m, free)) {
        if (!eval(m, t, f, reg)) continue;
        BoundReport r;
        r.model_size = n;
        r.team = t;
        r.nu = nu;
        auto witness = minimal_satisfying_subteam(m, t, f, reg);
        if (!witness) throw Error("internal: satisfying team without a satisfying subteam");
        r.witness = *witness;
        r.witness_size = witness->size();
        r.holds = r.witness_size <= nu;
        check.reports.push_back(std::move(r));
      }
    }
  }
  return check;
}

HierarchyReport hierarchy_witness(int kprime, int q, int k, std::size_t row_limit) {
  if (k < 1 || kprime <= k) throw Error("hierarchy witness needs k' > k >= 1");
  if (q < 1) throw Error("hierarchy witness needs q >= 1");
  HierarchyReport r;
  r.kprime = kprime;
  r.k = k;
  r.q = q;
  std::size_t n = 1;
  while (ipow(n, static_cast<std::size_t>(kprime)) <=
         static_cast<std::uint64_t>(q) * ipow(n, static_cast<std::size_t>(k)))
    ++n;
  r.n = n;
  r.bound = static_cast<std::uint64_t>(q) * ipow(n, static_cast<std::size_t>(k));
  std::uint64_t rows = ipow(n, static_cast<std::size_t>(kprime));
  if (rows > row_limit)
    throw LimitError("hierarchy witness needs a team of " + std::to_string(rows) +
                     " rows; the limit is " + std::to_string(row_limit));
  VarSet avoid;
  VarTuple vars = fresh_variables(avoid, "v", static_cast<std::size_t>(kprime));
  Model m(n);
  Team x = full_team(n, vars);
  Formula all = Formula::All(vars);
  r.team_size = x.size();
  r.totality_holds = eval(m, x, all);
  auto witness = minimal_satisfying_subteam(m, x, all, {}, row_limit);
  r.witness_size = witness ? witness->size() : 0;
  r.exceeds = witness && r.witness_size > r.bound;
  return r;
}

EquivReport sweep_against(const Formula& f, const TeamOracle& oracle, const VarSet& vars,
                          const Signature& sig, std::size_t max_model, const Registry& reg,
                          const EquivOptions& options) {
  if (max_model < 1) throw Error("max model size must be at least 1");
  for (const auto& v : free_variables(f))
    if (!vars.count(v)) throw Error("free variable " + v + " is not among the sweep variables");
  for (const auto& r : relations_used(f))
    if (!sig.contains(r)) throw Error("relation " + r + " is not in the sweep signature");
  EquivReport report;
  report.max_model = max_model;
  report.filter = options.filter;
  report.mode = options.mode;
  for (std::size_t n = 1; n <= max_model; ++n) {
    for (const auto& m : enumerate_models(sig, n, options.models)) {
      ++report.models_checked;
      for (const auto& t : enumerate_teams(m, vars, options.row_limit)) {
        if (options.filter == TeamFilter::NonEmpty && t.empty()) continue;
        ++report.teams_checked;
        bool a = eval(m, t, f, reg, options.eval);
        bool b = oracle(m, t);
        bool bad = options.mode == Comparison::Equivalent ? a != b : (a && !b);
        if (!bad) continue;
        if (eval(m, t, f, reg, options.eval) != a || oracle(m, t) != b)
          throw Error("internal: counterexample did not re-validate");
        report.holds = false;
        report.counterexample = Counterexample{m, t, a, b};
        return report;
      }
    }
  }
  return report;
}

EquivReport equivalent(const Formula& f, const Formula& g, const VarSet& vars,
                       const Signature& sig, std::size_t max_model, const Registry& reg,
                       const EquivOptions& options) {
  for (const auto& v : free_variables(g))
    if (!vars.count(v)) throw Error("free variable " + v + " is not among the sweep variables");
  for (const auto& r : relations_used(g))
    if (!sig.contains(r)) throw Error("relation " + r + " is not in the sweep signature");
  auto oracle = [&](const Model& m, const Team& t) { return eval(m, t, g, reg, options.eval); };
  return sweep_against(f, oracle, vars, sig, max_model, reg, options);
}

void write_report(std::ostream& out, const EquivReport& report) {
  const char* relation = report.mode == Comparison::Equivalent ? "equivalent" : "implies";
  if (report.holds) {
    out << (report.mode == Comparison::Equivalent ? "equivalent" : "implication holds") << " ("
        << filter_name(report.filter) << ", |M|<=" << report.max_model << ", "
        << report.models_checked << " models, " << report.teams_checked << " teams)\n";
    return;
  }
  const auto& c = *report.counterexample;
  out << "counterexample: not " << relation << " (left " << (c.left_value ? "true" : "false")
      << ", right " << (c.right_value ? "true" : "false") << ")\n";
  out << "# model\n";
  write_model(out, c.model);
  out << "# team\n";
  write_team(out, c.team);
}

void write_report(std::ostream& out, const BoundCheck& check) {
  out << (check.all_hold() ? "bounded" : "violated") << ": " << print(check.formula) << " ("
      << check.reports.size() << " satisfying teams, |M|<=" << check.max_model << ", "
      << check.violations() << " violations)\n";
  std::map<std::size_t, std::pair<std::uint64_t, std::size_t>> per_size;  // nu, max witness
  for (const auto& r : check.reports) {
    auto& [nu, widest] = per_size[r.model_size];
    nu = r.nu;
    widest = std::max(widest, r.witness_size);
  }
  for (const auto& [n, entry] : per_size)
    out << "|M|=" << n << " nu=" << entry.first << " largest minimal witness=" << entry.second
        << '\n';
  for (const auto& r : check.reports) {
    if (r.holds) continue;
    out << "# violation at |M|=" << r.model_size << ", witness " << r.witness_size << " > nu "
        << r.nu << "\n";
    write_team(out, r.team);
  }
}

void write_report(std::ostream& out, const HierarchyReport& r) {
  out << "k'=" << r.kprime << " k=" << r.k << " q=" << r.q << '\n';
  out << "n=" << r.n << '\n';
  out << "team size=" << r.team_size << " totality holds=" << (r.totality_holds ? "yes" : "no")
      << '\n';
  out << "minimal witness=" << r.witness_size << " bound q*n^k=" << r.bound << '\n';
  out << (r.exceeds ? "witness " : "no separation: ") << r.witness_size
      << (r.exceeds ? " > " : " <= ") << r.bound << '\n';
}

}  // namespace teamlog
