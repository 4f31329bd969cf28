#include <cctype>

#include "teamlog/parser.hpp"
#include "teamlog/team_eval.hpp"

namespace teamlog {

namespace {

bool reserved_name(const std::string& name) {
  static const std::set<std::string> reserved = {
      "const", "dep",  "inc",  "ind",      "all",       "NE",         "ncon",        "ndep",
      "geq",   "ninc", "nind", "count_eq", "count_neq", "cocount_eq", "cocount_neq",
  };
  return reserved.count(name) != 0;
}

bool identifier(const std::string& name) {
  if (name.empty() || !(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_'))
    return false;
  for (char c : name)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

}  // namespace

DependencySpec make_dependency(const std::string& name, int arity, const std::string& definition,
                               Claim upward_closed) {
  if (arity < 0) throw Error("negative arity for dependency " + name);
  Signature sig;
  if (arity > 0) sig.add(kDependencyRelation, arity);
  return {name, arity, parse(definition, sig), upward_closed};
}

void Registry::add(DependencySpec spec) {
  if (!identifier(spec.name)) throw Error("invalid dependency name '" + spec.name + "'");
  if (reserved_name(spec.name)) throw Error("'" + spec.name + "' is a built-in atom name");
  if (specs_.count(spec.name)) throw Error("dependency " + spec.name + " is already registered");
  if (spec.arity < 0) throw Error("negative arity for dependency " + spec.name);
  if (!spec.definition) throw Error("dependency " + spec.name + " has no definition");
  if (!is_first_order(spec.definition))
    throw FragmentError("definition of " + spec.name + " is not first-order");
  if (!free_variables(spec.definition).empty())
    throw FragmentError("definition of " + spec.name + " is not a sentence");
  auto rels = relations_used(spec.definition);
  if (spec.arity > 0 || !options_.nullary_model_signature) {
    for (const auto& r : rels)
      if (r != kDependencyRelation || spec.arity == 0)
        throw FragmentError("definition of " + spec.name + " may only use the relation R" +
                            (spec.arity == 0 ? " (none for 0-ary dependencies)" : ""));
  }
  // Parsing against {R: arity} already fixed the arity of every R literal;
  // hand-built definitions are checked here.
  std::vector<const Node*> stack{spec.definition.get()};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    if ((n->op == Op::PosLit || n->op == Op::NegLit) && n->name == kDependencyRelation &&
        static_cast<int>(n->groups[0].size()) != spec.arity)
      throw FragmentError("R used with the wrong arity in " + spec.name);
    if (n->left) stack.push_back(n->left.get());
    if (n->right) stack.push_back(n->right.get());
  }
  auto name = spec.name;
  specs_.emplace(std::move(name), std::move(spec));
}

const DependencySpec* Registry::find(const std::string& name) const {
  auto it = specs_.find(name);
  return it == specs_.end() ? nullptr : &it->second;
}

const DependencySpec& Registry::at(const std::string& name) const {
  const auto* spec = find(name);
  if (!spec) throw Error("unregistered dependency D:" + name);
  return *spec;
}

Registry register_dependency(Registry reg, DependencySpec spec) {
  reg.add(std::move(spec));
  return reg;
}

bool dependency_holds(const DependencySpec& spec, std::size_t domain_size,
                      const std::set<Tuple>& relation) {
  Model m(domain_size);
  if (spec.arity > 0) {
    m.add_relation(kDependencyRelation, spec.arity);
    for (const auto& t : relation) m.insert(kDependencyRelation, t);
  }
  return tarski_eval(m, {}, spec.definition);
}

UpwardClosureVerdict check_upward_closed(const DependencySpec& spec, std::size_t max_size) {
  if (spec.arity < 1) throw Error("upward closure is checked for arity >= 1");
  UpwardClosureVerdict verdict;
  for (std::size_t n = 1; n <= max_size; ++n) {
    Team slots_team = full_team(n, [&] {
      std::vector<Variable> vs;
      for (int i = 0; i < spec.arity; ++i) vs.push_back("c" + std::to_string(10 + i));
      return vs;
    }());
    std::size_t slots = slots_team.size();
    if (slots > 16)
      throw LimitError("upward-closure check needs " + std::to_string(slots) +
                       " tuple slots at domain size " + std::to_string(n));
    auto relation_of = [&](std::uint64_t mask) {
      std::set<Tuple> r;
      for (std::size_t i = 0; i < slots; ++i)
        if (mask >> i & 1) r.insert(Tuple(slots_team.row(i).begin(), slots_team.row(i).end()));
      return r;
    };
    std::uint64_t count = std::uint64_t{1} << slots;
    std::vector<bool> member(count);
    for (std::uint64_t mask = 0; mask < count; ++mask)
      member[mask] = dependency_holds(spec, n, relation_of(mask));
    // Closure under single-tuple extensions implies closure under supersets.
    for (std::uint64_t mask = 0; mask < count; ++mask) {
      if (!member[mask]) continue;
      for (std::size_t i = 0; i < slots; ++i) {
        std::uint64_t bigger = mask | (std::uint64_t{1} << i);
        if (bigger != mask && !member[bigger]) {
          verdict.holds = false;
          verdict.domain_size = n;
          verdict.smaller = relation_of(mask);
          verdict.larger = relation_of(bigger);
          return verdict;
        }
      }
    }
  }
  return verdict;
}

}  // namespace teamlog
