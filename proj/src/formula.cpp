#include "teamlog/formula.hpp"

#include <algorithm>
#include <functional>

namespace teamlog {

namespace {

Formula make(Node n) { return Formula(std::make_shared<const Node>(std::move(n))); }

Formula binary(Op op, Formula a, Formula b) {
  Node n{op};
  n.left = a.ptr();
  n.right = b.ptr();
  return make(std::move(n));
}

Formula unary(Op op, Formula a) {
  Node n{op};
  n.left = a.ptr();
  return make(std::move(n));
}

bool equal_nodes(const Node* a, const Node* b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->op != b->op || a->name != b->name || a->groups != b->groups) return false;
  if (a->op == Op::Atom && (a->atom != b->atom || a->parameter != b->parameter)) return false;
  return equal_nodes(a->left.get(), b->left.get()) && equal_nodes(a->right.get(), b->right.get());
}

void collect_free(const Node& n, VarSet& bound, VarSet& out) {
  auto add = [&](const Variable& v) {
    if (!bound.count(v)) out.insert(v);
  };
  switch (n.op) {
    case Op::PosLit:
    case Op::NegLit:
    case Op::Eq:
    case Op::Neq:
    case Op::Atom:
      for (const auto& g : n.groups)
        for (const auto& v : g) add(v);
      return;
    case Op::Bracket:
      return;
    case Op::Exists:
    case Op::Forall: {
      bool fresh = bound.insert(n.name).second;
      collect_free(*n.left, bound, out);
      if (fresh) bound.erase(n.name);
      return;
    }
    default:
      if (n.left) collect_free(*n.left, bound, out);
      if (n.right) collect_free(*n.right, bound, out);
  }
}

void visit(const Node& n, const std::function<void(const Node&)>& fn) {
  fn(n);
  if (n.left) visit(*n.left, fn);
  if (n.right) visit(*n.right, fn);
}

}  // namespace

int atom_group_count(AtomKind kind) {
  switch (kind) {
    case AtomKind::NE:
      return 0;
    case AtomKind::Dep:
    case AtomKind::Inc:
    case AtomKind::NDep:
    case AtomKind::NInc:
      return 2;
    case AtomKind::Ind:
    case AtomKind::NInd:
      return 3;
    default:
      return 1;
  }
}

bool atom_has_parameter(AtomKind kind) {
  switch (kind) {
    case AtomKind::Geq:
    case AtomKind::CountEq:
    case AtomKind::CountNeq:
    case AtomKind::CoCountEq:
    case AtomKind::CoCountNeq:
      return true;
    default:
      return false;
  }
}

const char* atom_keyword(AtomKind kind) {
  switch (kind) {
    case AtomKind::Const: return "const";
    case AtomKind::Dep: return "dep";
    case AtomKind::Inc: return "inc";
    case AtomKind::Ind: return "ind";
    case AtomKind::All: return "all";
    case AtomKind::NE: return "NE";
    case AtomKind::NCon: return "ncon";
    case AtomKind::NDep: return "ndep";
    case AtomKind::Geq: return "geq";
    case AtomKind::NInc: return "ninc";
    case AtomKind::NInd: return "nind";
    case AtomKind::CountEq: return "count_eq";
    case AtomKind::CountNeq: return "count_neq";
    case AtomKind::CoCountEq: return "cocount_eq";
    case AtomKind::CoCountNeq: return "cocount_neq";
    case AtomKind::Custom: return "D";
  }
  return "?";
}

Formula Formula::Lit(std::string relation, VarTuple args) {
  Node n{Op::PosLit};
  n.name = std::move(relation);
  n.groups = {std::move(args)};
  return make(std::move(n));
}

Formula Formula::NegLit(std::string relation, VarTuple args) {
  Node n{Op::NegLit};
  n.name = std::move(relation);
  n.groups = {std::move(args)};
  return make(std::move(n));
}

Formula Formula::Eq(Variable a, Variable b) {
  Node n{Op::Eq};
  n.groups = {{std::move(a), std::move(b)}};
  return make(std::move(n));
}

Formula Formula::Neq(Variable a, Variable b) {
  Node n{Op::Neq};
  n.groups = {{std::move(a), std::move(b)}};
  return make(std::move(n));
}

Formula Formula::Or(Formula a, Formula b) { return binary(Op::TensorOr, a, b); }
Formula Formula::And(Formula a, Formula b) { return binary(Op::And, a, b); }
Formula Formula::ClassicalOr(Formula a, Formula b) { return binary(Op::ClassicalOr, a, b); }
Formula Formula::Implies(Formula a, Formula b) { return binary(Op::IntImpl, a, b); }
Formula Formula::Not(Formula a) { return unary(Op::ContraNeg, a); }
Formula Formula::Possibly(Formula a) { return unary(Op::Possibly, a); }

Formula Formula::Exists(Variable v, Formula body) {
  Node n{Op::Exists};
  n.name = std::move(v);
  n.left = body.ptr();
  return make(std::move(n));
}

Formula Formula::Forall(Variable v, Formula body) {
  Node n{Op::Forall};
  n.name = std::move(v);
  n.left = body.ptr();
  return make(std::move(n));
}

Formula Formula::Bracket(Formula body) {
  if (!is_first_order(body)) throw FragmentError("bracket body must be first-order");
  if (!free_variables(body).empty()) throw FragmentError("bracket body must be a sentence");
  return unary(Op::Bracket, body);
}

Formula Formula::MakeAtom(AtomKind kind, std::vector<VarTuple> groups, int parameter,
                          std::string custom_name) {
  if (static_cast<int>(groups.size()) != atom_group_count(kind))
    throw Error(std::string("wrong number of argument groups for ") + atom_keyword(kind));
  if (atom_has_parameter(kind) && parameter < 0)
    throw Error(std::string("negative parameter for ") + atom_keyword(kind));
  if (!atom_has_parameter(kind)) parameter = 0;
  switch (kind) {
    case AtomKind::Inc:
    case AtomKind::NInc:
      if (groups[0].size() != groups[1].size())
        throw Error("inclusion atoms need tuples of equal length");
      break;
    case AtomKind::CountEq:
    case AtomKind::CountNeq:
    case AtomKind::CoCountEq:
    case AtomKind::CoCountNeq:
      if (groups[0].size() != 1) throw Error("counting atoms take exactly one variable");
      break;
    case AtomKind::Custom:
      if (custom_name.empty()) throw Error("custom atom needs a name");
      break;
    default:
      break;
  }
  Node n{Op::Atom};
  n.atom = kind;
  n.groups = std::move(groups);
  n.parameter = parameter;
  if (kind == AtomKind::Custom) n.name = std::move(custom_name);
  return make(std::move(n));
}

Formula Formula::Const(VarTuple v) { return MakeAtom(AtomKind::Const, {std::move(v)}); }
Formula Formula::Dep(VarTuple v, VarTuple w) {
  return MakeAtom(AtomKind::Dep, {std::move(v), std::move(w)});
}
Formula Formula::Inc(VarTuple v, VarTuple w) {
  return MakeAtom(AtomKind::Inc, {std::move(v), std::move(w)});
}
Formula Formula::Ind(VarTuple u, VarTuple v, VarTuple w) {
  return MakeAtom(AtomKind::Ind, {std::move(u), std::move(v), std::move(w)});
}
Formula Formula::All(VarTuple v) { return MakeAtom(AtomKind::All, {std::move(v)}); }
Formula Formula::NE() { return MakeAtom(AtomKind::NE, {}); }
Formula Formula::NCon(VarTuple v) { return MakeAtom(AtomKind::NCon, {std::move(v)}); }
Formula Formula::NDep(VarTuple v, VarTuple w) {
  return MakeAtom(AtomKind::NDep, {std::move(v), std::move(w)});
}
Formula Formula::Geq(VarTuple v, int n) { return MakeAtom(AtomKind::Geq, {std::move(v)}, n); }
Formula Formula::NInc(VarTuple v, VarTuple w) {
  return MakeAtom(AtomKind::NInc, {std::move(v), std::move(w)});
}
Formula Formula::NInd(VarTuple u, VarTuple v, VarTuple w) {
  return MakeAtom(AtomKind::NInd, {std::move(u), std::move(v), std::move(w)});
}
Formula Formula::CountEq(Variable v, int k) { return MakeAtom(AtomKind::CountEq, {{std::move(v)}}, k); }
Formula Formula::CountNeq(Variable v, int k) {
  return MakeAtom(AtomKind::CountNeq, {{std::move(v)}}, k);
}
Formula Formula::CoCountEq(Variable v, int k) {
  return MakeAtom(AtomKind::CoCountEq, {{std::move(v)}}, k);
}
Formula Formula::CoCountNeq(Variable v, int k) {
  return MakeAtom(AtomKind::CoCountNeq, {{std::move(v)}}, k);
}
Formula Formula::Custom(std::string name, VarTuple v) {
  return MakeAtom(AtomKind::Custom, {std::move(v)}, 0, std::move(name));
}

Formula Formula::top() { return Forall("v", Eq("v", "v")); }
Formula Formula::bottom() { return Exists("v", Neq("v", "v")); }

bool operator==(const Formula& a, const Formula& b) { return equal_nodes(a.get(), b.get()); }

Signature::Signature(std::initializer_list<std::pair<const std::string, int>> rels) {
  for (const auto& [name, arity] : rels) add(name, arity);
}

void Signature::add(const std::string& name, int arity) {
  if (name.empty() || !(name[0] >= 'A' && name[0] <= 'Z'))
    throw Error("relation names start with an upper-case letter: '" + name + "'");
  if (name == "NE") throw Error("'NE' is reserved");
  if (arity < 0) throw Error("negative arity for " + name);
  auto [it, inserted] = arities_.emplace(name, arity);
  if (!inserted && it->second != arity) throw Error("conflicting arity for relation " + name);
}

int Signature::arity(const std::string& name) const {
  auto it = arities_.find(name);
  if (it == arities_.end()) throw Error("unknown relation " + name);
  return it->second;
}

VarSet free_variables(const Formula& f) {
  VarSet bound, out;
  collect_free(*f, bound, out);
  return out;
}

VarSet all_variables(const Formula& f) {
  VarSet out;
  visit(*f, [&](const Node& n) {
    if (n.op == Op::Exists || n.op == Op::Forall) out.insert(n.name);
    for (const auto& g : n.groups) out.insert(g.begin(), g.end());
  });
  return out;
}

std::set<std::string> relations_used(const Formula& f) {
  std::set<std::string> out;
  visit(*f, [&](const Node& n) {
    if (n.op == Op::PosLit || n.op == Op::NegLit) out.insert(n.name);
  });
  return out;
}

Variable fresh_variable(const VarSet& avoid, const std::string& base) {
  if (!avoid.count(base)) return base;
  for (std::size_t i = 1;; ++i) {
    Variable candidate = base + std::to_string(i);
    if (!avoid.count(candidate)) return candidate;
  }
}

VarTuple fresh_variables(VarSet& avoid, const std::string& base, std::size_t count) {
  VarTuple out;
  for (std::size_t i = 1; out.size() < count; ++i) {
    Variable candidate = base + std::to_string(i);
    if (avoid.insert(candidate).second) out.push_back(std::move(candidate));
  }
  return out;
}

bool is_first_order(const Formula& f) {
  bool fo = true;
  visit(*f, [&](const Node& n) {
    switch (n.op) {
      case Op::PosLit:
      case Op::NegLit:
      case Op::Eq:
      case Op::Neq:
      case Op::TensorOr:
      case Op::And:
      case Op::Exists:
      case Op::Forall:
        break;
      default:
        fo = false;
    }
  });
  return fo;
}

bool contains_op(const Formula& f, Op op) {
  bool found = false;
  visit(*f, [&](const Node& n) { found = found || n.op == op; });
  return found;
}

bool contains_atom(const Formula& f, AtomKind kind) {
  bool found = false;
  visit(*f, [&](const Node& n) { found = found || (n.op == Op::Atom && n.atom == kind); });
  return found;
}

std::size_t formula_size(const Formula& f) {
  std::size_t count = 0;
  visit(*f, [&](const Node&) { ++count; });
  return count;
}

Formula conjunction(const std::vector<Formula>& parts) {
  if (parts.empty()) return Formula::top();
  Formula out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = Formula::And(out, parts[i]);
  return out;
}

Formula disjunction(const std::vector<Formula>& parts) {
  if (parts.empty()) return Formula::bottom();
  Formula out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = Formula::Or(out, parts[i]);
  return out;
}

Formula classical_disjunction(const std::vector<Formula>& parts) {
  if (parts.empty()) return Formula::bottom();
  Formula out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = Formula::ClassicalOr(out, parts[i]);
  return out;
}

Formula exists_all(const VarTuple& vars, Formula body) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = Formula::Exists(*it, body);
  return body;
}

Formula forall_all(const VarTuple& vars, Formula body) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = Formula::Forall(*it, body);
  return body;
}

Formula tuple_equal(const VarTuple& a, const VarTuple& b) {
  if (a.size() != b.size()) throw Error("tuple equality needs tuples of equal length");
  std::vector<Formula> parts;
  for (std::size_t i = 0; i < a.size(); ++i) parts.push_back(Formula::Eq(a[i], b[i]));
  return conjunction(parts);
}

Formula tuple_not_equal(const VarTuple& a, const VarTuple& b) {
  if (a.size() != b.size()) throw Error("tuple inequality needs tuples of equal length");
  std::vector<Formula> parts;
  for (std::size_t i = 0; i < a.size(); ++i) parts.push_back(Formula::Neq(a[i], b[i]));
  return disjunction(parts);
}

}  // namespace teamlog
