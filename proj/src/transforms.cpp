#include "teamlog/transforms.hpp"

#include <cctype>

namespace teamlog {

namespace {

Formula rebuild_binary(const Formula& f, Formula l, Formula r) {
  switch (f.op()) {
    case Op::And:
      return Formula::And(std::move(l), std::move(r));
    case Op::TensorOr:
      return Formula::Or(std::move(l), std::move(r));
    case Op::ClassicalOr:
      return Formula::ClassicalOr(std::move(l), std::move(r));
    case Op::IntImpl:
      return Formula::Implies(std::move(l), std::move(r));
    default:
      throw Error("internal: not a binary connective");
  }
}

Formula rebuild_quantifier(const Formula& f, Formula body) {
  return f.op() == Op::Exists ? Formula::Exists(f->name, std::move(body))
                              : Formula::Forall(f->name, std::move(body));
}

const char* op_name(Op op) {
  switch (op) {
    case Op::ClassicalOr:
      return "||";
    case Op::ContraNeg:
      return "~";
    case Op::IntImpl:
      return "->";
    case Op::Possibly:
      return "<>";
    case Op::Bracket:
      return "[...]";
    default:
      return "operator";
  }
}

VarTuple concat(const VarTuple& a, const VarTuple& b) {
  VarTuple out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::vector<Formula> pairwise_distinct(const VarTuple& p) {
  std::vector<Formula> out;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) out.push_back(Formula::Neq(p[i], p[j]));
  return out;
}

std::vector<Formula> constants(const VarTuple& p) {
  std::vector<Formula> out;
  for (const auto& x : p) out.push_back(Formula::Const({x}));
  return out;
}

void append(std::vector<Formula>& to, const std::vector<Formula>& from) {
  to.insert(to.end(), from.begin(), from.end());
}

void check_count(int k) {
  if (k < 0) throw Error("counting parameter must be non-negative");
}

// ∼g for g in FO(NE, ||) without ~.
Formula eliminate_negation_of(const Formula& g);

Formula eliminate_case(const Formula& g) {
  if (is_first_order(g)) return restrict_formula(Formula::NE(), dual_negate(g));
  switch (g.op()) {
    case Op::Atom:
      if (g->atom == AtomKind::NE) return Formula::bottom();
      break;
    case Op::TensorOr: {
      Formula psi = g.left(), theta = g.right();
      Formula psi_f = flatten(psi), theta_f = flatten(theta);
      return Formula::ClassicalOr(
          Formula::ClassicalOr(restrict_formula(eliminate_negation_of(psi), psi_f),
                               restrict_formula(eliminate_negation_of(theta), theta_f)),
          eliminate_negation_of(Formula::Or(psi_f, theta_f)));
    }
    case Op::And:
      return Formula::ClassicalOr(eliminate_negation_of(g.left()),
                                  eliminate_negation_of(g.right()));
    case Op::Exists: {
      Formula psi = g.body();
      Formula psi_f = flatten(psi);
      return Formula::ClassicalOr(
          eliminate_negation_of(Formula::Exists(g->name, psi_f)),
          Formula::Forall(g->name, restrict_formula(eliminate_negation_of(psi), psi_f)));
    }
    case Op::Forall:
      return Formula::Forall(g->name, eliminate_negation_of(g.body()));
    default:
      break;
  }
  throw FragmentError("~ can only be eliminated over first-order parts, NE and ||");
}

Formula eliminate_negation_of(const Formula& g) {
  auto disjuncts = to_classical_dnf(g);
  std::vector<Formula> parts;
  for (const auto& d : disjuncts) parts.push_back(eliminate_case(d));
  return conjunction(parts);
}

void check_negelim_fragment(const Formula& f) {
  switch (f.op()) {
    case Op::PosLit:
    case Op::NegLit:
    case Op::Eq:
    case Op::Neq:
      return;
    case Op::Atom:
      if (f->atom == AtomKind::NE) return;
      throw FragmentError(std::string("atom ") + atom_keyword(f->atom) +
                          " is outside FO(NE, ||, ~)");
    case Op::And:
    case Op::TensorOr:
    case Op::ClassicalOr:
      check_negelim_fragment(f.left());
      check_negelim_fragment(f.right());
      return;
    case Op::Exists:
    case Op::Forall:
    case Op::ContraNeg:
      check_negelim_fragment(f.body());
      return;
    default:
      throw FragmentError(std::string(op_name(f.op())) + " is outside FO(NE, ||, ~)");
  }
}

Formula negelim_rec(const Formula& f) {
  switch (f.op()) {
    case Op::And:
    case Op::TensorOr:
    case Op::ClassicalOr:
      return rebuild_binary(f, negelim_rec(f.left()), negelim_rec(f.right()));
    case Op::Exists:
    case Op::Forall:
      return rebuild_quantifier(f, negelim_rec(f.body()));
    case Op::ContraNeg:
      return eliminate_negation_of(negelim_rec(f.body()));
    default:
      return f;
  }
}

// ∃^{=k} x P(x) over the literal builder `lit`.
template <typename Lit>
Formula exactly(int k, Lit lit) {
  VarSet avoid{"y"};
  VarTuple xs = fresh_variables(avoid, "x", static_cast<std::size_t>(k));
  std::vector<Formula> parts = pairwise_distinct(xs);
  for (const auto& x : xs) parts.push_back(lit(x, true));
  std::vector<Formula> cover{lit("y", false)};
  for (const auto& x : xs) cover.push_back(Formula::Eq("y", x));
  parts.push_back(Formula::Forall("y", disjunction(cover)));
  return exists_all(xs, conjunction(parts));
}

Formula count_literal_sentence(const CountLiteral& c) {
  auto pos = [](const Variable& x, bool positive) {
    return positive ? Formula::Lit("R", {x}) : Formula::NegLit("R", {x});
  };
  auto neg = [](const Variable& x, bool positive) {
    return positive ? Formula::NegLit("R", {x}) : Formula::Lit("R", {x});
  };
  switch (c.kind) {
    case CountLiteral::Kind::PosCount:
      return exactly(c.k, pos);
    case CountLiteral::Kind::NegPosCount:
      return dual_negate(exactly(c.k, pos));
    case CountLiteral::Kind::CoCount:
      return exactly(c.k, neg);
    case CountLiteral::Kind::NegCoCount:
      return dual_negate(exactly(c.k, neg));
  }
  throw Error("internal: unknown count literal");
}

bool has_bracket(const Formula& f) { return contains_op(f, Op::Bracket); }

}  // namespace

Formula flatten(const Formula& f) {
  switch (f.op()) {
    case Op::PosLit:
    case Op::NegLit:
    case Op::Eq:
    case Op::Neq:
      return f;
    case Op::Atom:
      return Formula::top();
    case Op::And:
    case Op::TensorOr:
      return rebuild_binary(f, flatten(f.left()), flatten(f.right()));
    case Op::Exists:
    case Op::Forall:
      return rebuild_quantifier(f, flatten(f.body()));
    default:
      throw FragmentError(std::string("cannot flatten a formula containing ") + op_name(f.op()));
  }
}

Formula dual_negate(const Formula& f) {
  const auto& n = *f;
  switch (n.op) {
    case Op::PosLit:
      return Formula::NegLit(n.name, n.groups[0]);
    case Op::NegLit:
      return Formula::Lit(n.name, n.groups[0]);
    case Op::Eq:
      return Formula::Neq(n.groups[0][0], n.groups[0][1]);
    case Op::Neq:
      return Formula::Eq(n.groups[0][0], n.groups[0][1]);
    case Op::And:
      return Formula::Or(dual_negate(f.left()), dual_negate(f.right()));
    case Op::TensorOr:
      return Formula::And(dual_negate(f.left()), dual_negate(f.right()));
    case Op::Exists:
      return Formula::Forall(n.name, dual_negate(f.body()));
    case Op::Forall:
      return Formula::Exists(n.name, dual_negate(f.body()));
    default:
      throw FragmentError("dual negation is defined for first-order formulas only");
  }
}

Formula restrict_formula(const Formula& f, const Formula& theta) {
  if (!is_first_order(theta)) throw FragmentError("restriction needs a first-order condition");
  return Formula::Or(dual_negate(theta), Formula::And(theta, f));
}

std::vector<Formula> to_classical_dnf(const Formula& f) {
  switch (f.op()) {
    case Op::ClassicalOr: {
      auto out = to_classical_dnf(f.left());
      auto right = to_classical_dnf(f.right());
      out.insert(out.end(), right.begin(), right.end());
      return out;
    }
    case Op::And:
    case Op::TensorOr: {
      auto left = to_classical_dnf(f.left());
      auto right = to_classical_dnf(f.right());
      std::vector<Formula> out;
      for (const auto& a : left)
        for (const auto& b : right) out.push_back(rebuild_binary(f, a, b));
      return out;
    }
    case Op::Exists:
    case Op::Forall: {
      std::vector<Formula> out;
      for (const auto& b : to_classical_dnf(f.body())) out.push_back(rebuild_quantifier(f, b));
      return out;
    }
    case Op::ContraNeg:
    case Op::IntImpl:
    case Op::Possibly:
      throw FragmentError(std::string("|| normal form does not handle ") + op_name(f.op()));
    default:
      return {f};
  }
}

Formula neg_eliminate(const Formula& f) {
  check_negelim_fragment(f);
  return negelim_rec(f);
}

Formula neg_restrict_commute(const Formula& psi, const Formula& theta) {
  return restrict_formula(Formula::Not(psi), theta);
}

Formula classical_or_via_neg(const Formula& a, const Formula& b) {
  return Formula::Not(Formula::And(Formula::Not(a), Formula::Not(b)));
}

Formula ne_via_neg() { return Formula::Not(Formula::bottom()); }

Formula dep_via_neg_const(const VarTuple& v, const VarTuple& w) {
  VarSet avoid(v.begin(), v.end());
  avoid.insert(w.begin(), w.end());
  VarTuple p = fresh_variables(avoid, "p", v.size());
  VarTuple q1 = fresh_variables(avoid, "q", w.size());
  VarTuple q2 = fresh_variables(avoid, "q", w.size());
  VarTuple vw = concat(v, w);
  Formula body = conjunction({
      Formula::Const(p),
      Formula::Const(q1),
      Formula::Const(q2),
      tuple_not_equal(q1, q2),
      Formula::Not(tuple_not_equal(vw, concat(p, q1))),
      Formula::Not(tuple_not_equal(vw, concat(p, q2))),
  });
  return Formula::Not(exists_all(concat(concat(p, q1), q2), body));
}

Formula ne_via_totality(const VarSet& avoid) {
  Variable q = fresh_variable(avoid, "q");
  return Formula::Forall(q, Formula::All({q}));
}

Formula totality_via_higher_arity(const VarTuple& v, const VarTuple& w) {
  return forall_all(w, Formula::All(concat(v, w)));
}

Formula exists_at_most(int k) {
  check_count(k);
  VarSet avoid;
  VarTuple xs = fresh_variables(avoid, "x", static_cast<std::size_t>(k) + 1);
  std::vector<Formula> equal;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j) equal.push_back(Formula::Eq(xs[i], xs[j]));
  return forall_all(xs, disjunction(equal));
}

Formula exists_at_least(int k) {
  check_count(k);
  VarSet avoid;
  VarTuple xs = fresh_variables(avoid, "x", static_cast<std::size_t>(k));
  return exists_all(xs, conjunction(pairwise_distinct(xs)));
}

Formula counting_formula(CountingKind kind, int k, const Variable& v) {
  check_count(k);
  VarSet avoid{v};
  VarTuple p = fresh_variables(avoid, "p", static_cast<std::size_t>(k));
  switch (kind) {
    case CountingKind::Le: {
      std::vector<Formula> hits;
      for (const auto& pi : p) hits.push_back(Formula::Eq(v, pi));
      auto parts = constants(p);
      parts.push_back(disjunction(hits));
      return exists_all(p, conjunction(parts));
    }
    case CountingKind::Ge: {
      auto parts = constants(p);
      append(parts, pairwise_distinct(p));
      for (const auto& pi : p)
        parts.push_back(restrict_formula(Formula::NE(), Formula::Eq(v, pi)));
      return exists_all(p, conjunction(parts));
    }
    case CountingKind::CoLe: {
      Variable q = fresh_variable(avoid, "q");
      std::vector<Formula> hits;
      for (const auto& pi : p) hits.push_back(Formula::Eq(q, pi));
      hits.push_back(Formula::Eq(q, v));
      auto parts = constants(p);
      parts.push_back(
          Formula::Exists(q, Formula::And(Formula::All({q}), disjunction(hits))));
      return Formula::ClassicalOr(Formula::Bracket(exists_at_most(k)),
                                  exists_all(p, conjunction(parts)));
    }
    case CountingKind::CoGe: {
      auto parts = constants(p);
      append(parts, pairwise_distinct(p));
      for (const auto& pi : p) parts.push_back(Formula::Neq(v, pi));
      return Formula::ClassicalOr(
          Formula::And(Formula::bottom(), Formula::Bracket(exists_at_least(k))),
          Formula::And(Formula::NE(), exists_all(p, conjunction(parts))));
    }
  }
  throw Error("internal: unknown counting kind");
}

Formula counting_atom_definition(CountingAtom kind, int k, const Variable& v) {
  check_count(k);
  switch (kind) {
    case CountingAtom::Eq:
      return Formula::And(counting_formula(CountingKind::Le, k, v),
                          counting_formula(CountingKind::Ge, k, v));
    case CountingAtom::Neq:
      return Formula::ClassicalOr(
          k == 0 ? Formula::bottom() : counting_formula(CountingKind::Le, k - 1, v),
          counting_formula(CountingKind::Ge, k + 1, v));
    case CountingAtom::CoEq:
      return Formula::And(counting_formula(CountingKind::CoLe, k, v),
                          counting_formula(CountingKind::CoGe, k, v));
    case CountingAtom::CoNeq:
      return Formula::ClassicalOr(
          k == 0 ? Formula::bottom() : counting_formula(CountingKind::CoLe, k - 1, v),
          counting_formula(CountingKind::CoGe, k + 1, v));
  }
  throw Error("internal: unknown counting atom");
}

UnaryDepDescription parse_unary_description(std::string_view text) {
  UnaryDepDescription d;
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto fail = [&](const std::string& what) -> void {
    throw Error("unary description, offset " + std::to_string(pos) + ": " + what);
  };
  auto take = [&](std::string_view token) {
    skip();
    if (text.substr(pos, token.size()) == token) {
      pos += token.size();
      return true;
    }
    return false;
  };
  skip();
  if (pos == text.size()) fail("empty description");
  do {
    std::vector<CountLiteral> conj;
    do {
      skip();
      bool co = false;
      if (take("cocount"))
        co = true;
      else if (!take("count"))
        fail("expected count or cocount");
      bool negated = false;
      if (take("!="))
        negated = true;
      else if (!take("="))
        fail("expected = or !=");
      skip();
      std::size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (start == pos) fail("expected a number");
      int k = std::stoi(std::string(text.substr(start, pos - start)));
      using K = CountLiteral::Kind;
      K kind = co ? (negated ? K::NegCoCount : K::CoCount) : (negated ? K::NegPosCount : K::PosCount);
      conj.push_back({kind, k});
    } while (take("&"));
    d.disjuncts.push_back(std::move(conj));
  } while (take("||"));
  skip();
  if (pos != text.size()) fail("unexpected trailing input");
  return d;
}

std::string print_unary_description(const UnaryDepDescription& d) {
  std::string out;
  for (std::size_t i = 0; i < d.disjuncts.size(); ++i) {
    if (i) out += " || ";
    for (std::size_t j = 0; j < d.disjuncts[i].size(); ++j) {
      const auto& c = d.disjuncts[i][j];
      if (j) out += " & ";
      using K = CountLiteral::Kind;
      bool co = c.kind == K::CoCount || c.kind == K::NegCoCount;
      bool negated = c.kind == K::NegPosCount || c.kind == K::NegCoCount;
      out += co ? "cocount" : "count";
      out += negated ? "!=" : "=";
      out += std::to_string(c.k);
    }
  }
  return out;
}

Formula unary_description_sentence(const UnaryDepDescription& d) {
  std::vector<Formula> disjuncts;
  for (const auto& conj : d.disjuncts) {
    std::vector<Formula> parts;
    for (const auto& c : conj) {
      check_count(c.k);
      parts.push_back(count_literal_sentence(c));
    }
    disjuncts.push_back(conjunction(parts));
  }
  return disjunction(disjuncts);
}

Formula compile_unary_dependency(const UnaryDepDescription& d, const Variable& v) {
  std::vector<Formula> disjuncts;
  for (const auto& conj : d.disjuncts) {
    std::vector<Formula> parts;
    for (const auto& c : conj) {
      using K = CountLiteral::Kind;
      CountingAtom atom = c.kind == K::PosCount      ? CountingAtom::Eq
                          : c.kind == K::NegPosCount ? CountingAtom::Neq
                          : c.kind == K::CoCount     ? CountingAtom::CoEq
                                                     : CountingAtom::CoNeq;
      parts.push_back(counting_atom_definition(atom, c.k, v));
    }
    disjuncts.push_back(conjunction(parts));
  }
  return classical_disjunction(disjuncts);
}

Formula BracketExtraction::combined() const {
  std::vector<Formula> parts;
  for (const auto& s : sentences) parts.push_back(Formula::Bracket(s));
  parts.push_back(core);
  return conjunction(parts);
}

BracketExtraction extract_brackets(const Formula& f) {
  switch (f.op()) {
    case Op::Bracket:
      return {{f.body()}, Formula::top()};
    case Op::And:
    case Op::TensorOr: {
      auto l = extract_brackets(f.left());
      auto r = extract_brackets(f.right());
      l.sentences.insert(l.sentences.end(), r.sentences.begin(), r.sentences.end());
      if (f.op() == Op::And && l.core == Formula::top()) return {std::move(l.sentences), r.core};
      if (f.op() == Op::And && r.core == Formula::top()) return {std::move(l.sentences), l.core};
      return {std::move(l.sentences), rebuild_binary(f, l.core, r.core)};
    }
    case Op::Exists:
    case Op::Forall: {
      auto b = extract_brackets(f.body());
      return {std::move(b.sentences), rebuild_quantifier(f, b.core)};
    }
    case Op::Possibly: {
      auto b = extract_brackets(f.body());
      return {std::move(b.sentences), Formula::Possibly(b.core)};
    }
    case Op::ClassicalOr:
    case Op::ContraNeg:
    case Op::IntImpl:
      if (has_bracket(f))
        throw FragmentError(std::string("brackets under ") + op_name(f.op()) +
                            " cannot be hoisted");
      return {{}, f};
    default:
      return {{}, f};
  }
}

std::vector<BracketExtraction> extract_brackets_per_disjunct(const Formula& f) {
  std::vector<BracketExtraction> out;
  for (const auto& d : to_classical_dnf(f)) out.push_back(extract_brackets(d));
  return out;
}

}  // namespace teamlog
