#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "teamlog/formula.hpp"

namespace teamlog {

/// Replaces every dependency atom (NE included) by ⊤. Rejects ~, ||, ->,
/// <> and brackets.
Formula flatten(const Formula& f);

/// Negation-normal-form negation of a first-order formula.
Formula dual_negate(const Formula& f);

/// f↾θ = (¬θ) ∨ (θ ∧ f); θ must be first-order.
Formula restrict_formula(const Formula& f, const Formula& theta);

/// Pushes || to the top. The classical disjunction of the result is
/// equivalent to f and no element contains ||. Brackets and atoms are
/// leaves; ~, -> and <> are rejected.
std::vector<Formula> to_classical_dnf(const Formula& f);

/// Removes every ~ from a formula built from first-order parts, NE, ||
/// and ~. The result lies in FO(NE, ||).
Formula neg_eliminate(const Formula& f);

/// (~ψ)↾θ, the equivalent of ~(ψ↾θ).
Formula neg_restrict_commute(const Formula& psi, const Formula& theta);

/// ~((~a) & (~b)), equivalent to a || b.
Formula classical_or_via_neg(const Formula& a, const Formula& b);
/// ~⊥, equivalent to NE.
Formula ne_via_neg();

/// Definition of dep(v̄; w̄) from constancy atoms and ~, over fresh p̄, q̄1, q̄2.
Formula dep_via_neg_const(const VarTuple& v, const VarTuple& w);

/// forall q all(q) with q not in `avoid`; equivalent to NE.
Formula ne_via_totality(const VarSet& avoid = {});

/// all(v̄) as forall w̄ all(v̄ w̄).
Formula totality_via_higher_arity(const VarTuple& v, const VarTuple& w);

/// First-order sentences over the empty signature saying the domain has at
/// most / at least k elements.
Formula exists_at_most(int k);
Formula exists_at_least(int k);

enum class CountingKind { Le, Ge, CoLe, CoGe };

/// |X(v)| <= k, |X(v)| >= k, |M \ X(v)| <= k, |M \ X(v)| >= k on nonempty
/// teams, in FO(const, all, ||, [.]).
Formula counting_formula(CountingKind kind, int k, const Variable& v);

enum class CountingAtom { Eq, Neq, CoEq, CoNeq };

/// Definitions of count_eq, count_neq, cocount_eq and cocount_neq from
/// counting formulas.
Formula counting_atom_definition(CountingAtom kind, int k, const Variable& v);

/// ∃^{=k} x R(x), its negation, ∃^{=k} x ¬R(x), its negation.
struct CountLiteral {
  enum class Kind { PosCount, NegPosCount, CoCount, NegCoCount };
  Kind kind;
  int k;

  friend bool operator==(const CountLiteral&, const CountLiteral&) = default;
};

/// A unary dependency given as a disjunction of conjunctions of count
/// literals.
struct UnaryDepDescription {
  std::vector<std::vector<CountLiteral>> disjuncts;

  friend bool operator==(const UnaryDepDescription&, const UnaryDepDescription&) = default;
};

/// Text form: conjunctions of `count=K`, `count!=K`, `cocount=K`,
/// `cocount!=K` joined by `&`, disjuncts joined by `||`.
UnaryDepDescription parse_unary_description(std::string_view text);
std::string print_unary_description(const UnaryDepDescription& d);

/// The defining sentence over the unary relation R.
Formula unary_description_sentence(const UnaryDepDescription& d);

/// The dependency applied to v, in FO(const, all, ||, [.]).
Formula compile_unary_dependency(const UnaryDepDescription& d, const Variable& v);

struct BracketExtraction {
  std::vector<Formula> sentences;  // bracket bodies
  Formula core;                    // bracket-free

  /// [θ1] & ... & [θn] & core.
  Formula combined() const;
};

/// Hoists every bracket to a top-level conjunction. Throws FragmentError
/// when a bracket sits under ~, ->, or ||.
BracketExtraction extract_brackets(const Formula& f);

/// Brings f to || normal form first, then extracts brackets from each
/// disjunct.
std::vector<BracketExtraction> extract_brackets_per_disjunct(const Formula& f);

}  // namespace teamlog
