#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace teamlog {

using Variable = std::string;
using VarTuple = std::vector<Variable>;
using VarSet = std::set<Variable>;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a construct is used outside the fragment an operation accepts.
class FragmentError : public Error {
 public:
  using Error::Error;
};

/// Raised when an exhaustive search would exceed a configured cap.
class LimitError : public Error {
 public:
  using Error::Error;
};

enum class Op : std::uint8_t {
  PosLit,       // R(x̄)
  NegLit,       // !R(x̄)
  Eq,           // x = y
  Neq,          // x != y
  TensorOr,     // |  (split disjunction)
  And,          // &
  Exists,
  Forall,
  ClassicalOr,  // ||
  ContraNeg,    // ~
  IntImpl,      // ->
  Possibly,     // <>
  Bracket,      // [sentence]
  Atom,
};

enum class AtomKind : std::uint8_t {
  Const,       // const(v̄)
  Dep,         // dep(v̄; w̄)
  Inc,         // inc(v̄; w̄)
  Ind,         // ind(ū; v̄; w̄)  v̄ independent of w̄ given ū
  All,         // all(v̄)
  NE,          // NE
  NCon,        // ncon(v̄)
  NDep,        // ndep(v̄; w̄)
  Geq,         // geq(v̄, n)
  NInc,        // ninc(v̄; w̄)
  NInd,        // nind(ū; v̄; w̄)
  CountEq,     // count_eq(v, k)
  CountNeq,    // count_neq(v, k)
  CoCountEq,   // cocount_eq(v, k)
  CoCountNeq,  // cocount_neq(v, k)
  Custom,      // D:name(v̄)
};

/// Number of tuple groups an atom kind takes (Custom and the single-tuple
/// atoms take one).
int atom_group_count(AtomKind kind);
/// Whether the atom carries an integer parameter.
bool atom_has_parameter(AtomKind kind);
/// Concrete-syntax keyword ("dep", "count_eq", ...); "NE" for NE.
const char* atom_keyword(AtomKind kind);

class Formula;

struct Node {
  Op op;
  AtomKind atom = AtomKind::NE;
  /// Relation name for literals, custom name for Custom atoms, bound
  /// variable for quantifiers.
  std::string name;
  /// Literal arguments (one group), equality operands (one group of two),
  /// or atom argument tuples.
  std::vector<VarTuple> groups;
  int parameter = 0;
  std::shared_ptr<const Node> left;
  std::shared_ptr<const Node> right;
};

/// Immutable, shareable formula handle. Equality is structural.
class Formula {
 public:
  Formula() = default;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static Formula Lit(std::string relation, VarTuple args);
  static Formula NegLit(std::string relation, VarTuple args);
  static Formula Eq(Variable a, Variable b);
  static Formula Neq(Variable a, Variable b);
  static Formula Or(Formula a, Formula b);
  static Formula And(Formula a, Formula b);
  static Formula Exists(Variable v, Formula body);
  static Formula Forall(Variable v, Formula body);
  static Formula ClassicalOr(Formula a, Formula b);
  static Formula Not(Formula a);  // contradictory negation ~
  static Formula Implies(Formula a, Formula b);
  static Formula Possibly(Formula a);
  /// Throws FragmentError unless `body` is a first-order sentence.
  static Formula Bracket(Formula body);

  static Formula Const(VarTuple v);
  static Formula Dep(VarTuple v, VarTuple w);
  static Formula Inc(VarTuple v, VarTuple w);
  static Formula Ind(VarTuple u, VarTuple v, VarTuple w);
  static Formula All(VarTuple v);
  static Formula NE();
  static Formula NCon(VarTuple v);
  static Formula NDep(VarTuple v, VarTuple w);
  static Formula Geq(VarTuple v, int n);
  static Formula NInc(VarTuple v, VarTuple w);
  static Formula NInd(VarTuple u, VarTuple v, VarTuple w);
  static Formula CountEq(Variable v, int k);
  static Formula CountNeq(Variable v, int k);
  static Formula CoCountEq(Variable v, int k);
  static Formula CoCountNeq(Variable v, int k);
  static Formula Custom(std::string name, VarTuple v);
  /// Generic atom constructor; validates group count, tuple lengths and
  /// parameter sign.
  static Formula MakeAtom(AtomKind kind, std::vector<VarTuple> groups, int parameter = 0,
                          std::string custom_name = {});

  /// ∀v (v = v)
  static Formula top();
  /// ∃v (v != v)
  static Formula bottom();

  const Node& operator*() const { return *node_; }
  const Node* operator->() const { return node_.get(); }
  const Node* get() const { return node_.get(); }
  const std::shared_ptr<const Node>& ptr() const { return node_; }
  explicit operator bool() const { return static_cast<bool>(node_); }

  Op op() const { return node_->op; }
  Formula left() const { return Formula(node_->left); }
  Formula right() const { return Formula(node_->right); }
  /// Body of a quantifier or unary operator.
  Formula body() const { return Formula(node_->left); }

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  std::shared_ptr<const Node> node_;
};

bool operator==(const Formula& a, const Formula& b);

/// Relation name → arity.
class Signature {
 public:
  Signature() = default;
  Signature(std::initializer_list<std::pair<const std::string, int>> rels);

  void add(const std::string& name, int arity);
  bool contains(const std::string& name) const { return arities_.count(name) != 0; }
  int arity(const std::string& name) const;
  const std::map<std::string, int>& relations() const { return arities_; }
  bool empty() const { return arities_.empty(); }

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::map<std::string, int> arities_;
};

VarSet free_variables(const Formula& f);
/// Every variable occurring in f, free or bound.
VarSet all_variables(const Formula& f);
/// Relation names used in literals, including inside brackets.
std::set<std::string> relations_used(const Formula& f);

/// An identifier not in `avoid`: `base` itself when unused, else base1,
/// base2, ...
Variable fresh_variable(const VarSet& avoid, const std::string& base = "v");
/// `count` distinct indexed identifiers base1, base2, ... skipping names in
/// `avoid`. The returned names are added to `avoid`.
VarTuple fresh_variables(VarSet& avoid, const std::string& base, std::size_t count);

/// No team atoms, ~, ||, ->, <> or brackets.
bool is_first_order(const Formula& f);
bool contains_op(const Formula& f, Op op);
bool contains_atom(const Formula& f, AtomKind kind);
std::size_t formula_size(const Formula& f);

/// Conjunction of the list; ⊤ when empty.
Formula conjunction(const std::vector<Formula>& parts);
/// Split disjunction of the list; ⊥ when empty.
Formula disjunction(const std::vector<Formula>& parts);
/// Classical disjunction of the list; ⊥ when empty.
Formula classical_disjunction(const std::vector<Formula>& parts);
/// Prefixes `body` with ∃ over each variable, outermost first.
Formula exists_all(const VarTuple& vars, Formula body);
Formula forall_all(const VarTuple& vars, Formula body);
/// Componentwise equality of two tuples of equal length.
Formula tuple_equal(const VarTuple& a, const VarTuple& b);
/// Disjunction of componentwise inequalities; ⊥ for empty tuples.
Formula tuple_not_equal(const VarTuple& a, const VarTuple& b);

}  // namespace teamlog
