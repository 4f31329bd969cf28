#pragma once

// Shared test helpers: a literal, unoptimised team-semantics evaluator used
// as an independent oracle, and small random generators.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "teamlog/formula.hpp"
#include "teamlog/structures.hpp"
#include "teamlog/team_eval.hpp"

namespace teamlog::testing {

using Row = std::map<Variable, int>;
using NaiveTeam = std::set<Row>;

inline NaiveTeam to_naive(const Team& t) {
  NaiveTeam out;
  for (const auto& a : t.assignments()) out.insert(Row(a.values().begin(), a.values().end()));
  return out;
}

// Straight from the satisfaction clauses: splits, choice functions and
// subteams are enumerated exhaustively.
class NaiveEvaluator {
 public:
  NaiveEvaluator(const Model& m, const Registry& reg = {}) : m_(m), reg_(reg) {}

  bool tarski(const Node& n, const Row& s) const {
    switch (n.op) {
      case Op::PosLit:
      case Op::NegLit: {
        Tuple args;
        for (const auto& v : n.groups[0]) args.push_back(s.at(v));
        bool in = m_.relation(n.name).tuples.count(args) != 0;
        return n.op == Op::PosLit ? in : !in;
      }
      case Op::Eq:
        return s.at(n.groups[0][0]) == s.at(n.groups[0][1]);
      case Op::Neq:
        return s.at(n.groups[0][0]) != s.at(n.groups[0][1]);
      case Op::And:
        return tarski(*n.left, s) && tarski(*n.right, s);
      case Op::TensorOr:
        return tarski(*n.left, s) || tarski(*n.right, s);
      case Op::Exists:
      case Op::Forall: {
        for (int e = 0; e < static_cast<int>(m_.size()); ++e) {
          Row r = s;
          r[n.name] = e;
          bool b = tarski(*n.left, r);
          if (n.op == Op::Exists && b) return true;
          if (n.op == Op::Forall && !b) return false;
        }
        return n.op == Op::Forall;
      }
      default:
        throw Error("naive tarski: not first-order");
    }
  }

  bool sat(const NaiveTeam& x, const Node& n) const {
    switch (n.op) {
      case Op::PosLit:
      case Op::NegLit:
      case Op::Eq:
      case Op::Neq:
        return std::all_of(x.begin(), x.end(), [&](const Row& s) { return tarski(n, s); });
      case Op::And:
        return sat(x, *n.left) && sat(x, *n.right);
      case Op::TensorOr: {
        std::vector<Row> rows(x.begin(), x.end());
        std::uint64_t total = 1;
        for (std::size_t i = 0; i < rows.size(); ++i) total *= 3;
        for (std::uint64_t code = 0; code < total; ++code) {
          NaiveTeam y, z;
          std::uint64_t c = code;
          for (const auto& r : rows) {
            int side = static_cast<int>(c % 3);
            c /= 3;
            if (side != 1) y.insert(r);
            if (side != 0) z.insert(r);
          }
          if (sat(y, *n.left) && sat(z, *n.right)) return true;
        }
        return false;
      }
      case Op::Exists: {
        std::vector<Row> rows(x.begin(), x.end());
        const std::uint64_t choices = (std::uint64_t{1} << m_.size()) - 1;
        std::uint64_t total = 1;
        for (std::size_t i = 0; i < rows.size(); ++i) total *= choices;
        for (std::uint64_t code = 0; code < total; ++code) {
          NaiveTeam y;
          std::uint64_t c = code;
          for (const auto& r : rows) {
            std::uint64_t set = c % choices + 1;
            c /= choices;
            for (int e = 0; e < static_cast<int>(m_.size()); ++e) {
              if (!(set >> e & 1)) continue;
              Row s = r;
              s[n.name] = e;
              y.insert(s);
            }
          }
          if (sat(y, *n.left)) return true;
        }
        return false;
      }
      case Op::Forall: {
        NaiveTeam y;
        for (const auto& r : x)
          for (int e = 0; e < static_cast<int>(m_.size()); ++e) {
            Row s = r;
            s[n.name] = e;
            y.insert(s);
          }
        return sat(y, *n.left);
      }
      case Op::ClassicalOr:
        return sat(x, *n.left) || sat(x, *n.right);
      case Op::ContraNeg:
        return !sat(x, *n.left);
      case Op::IntImpl:
        return for_subteams(x, [&](const NaiveTeam& y) {
          return !sat(y, *n.left) || sat(y, *n.right);
        });
      case Op::Possibly:
        return !for_subteams(x, [&](const NaiveTeam& y) {
          return y.empty() || !sat(y, *n.left);
        });
      case Op::Bracket:
        return tarski(*n.left, Row{});
      case Op::Atom:
        return atom(x, n);
    }
    return false;
  }

  bool sat(const Team& t, const Formula& f) const { return sat(to_naive(t), *f); }

 private:
  // True when pred holds for every subteam.
  static bool for_subteams(const NaiveTeam& x, const std::function<bool(const NaiveTeam&)>& pred) {
    std::vector<Row> rows(x.begin(), x.end());
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << rows.size()); ++mask) {
      NaiveTeam y;
      for (std::size_t i = 0; i < rows.size(); ++i)
        if (mask >> i & 1) y.insert(rows[i]);
      if (!pred(y)) return false;
    }
    return true;
  }

  static Tuple values(const Row& s, const VarTuple& vars) {
    Tuple out;
    for (const auto& v : vars) out.push_back(s.at(v));
    return out;
  }

  static std::set<Tuple> relation(const NaiveTeam& x, const VarTuple& vars) {
    std::set<Tuple> out;
    for (const auto& s : x) out.insert(values(s, vars));
    return out;
  }

  bool independent(const NaiveTeam& x, const VarTuple& u, const VarTuple& v,
                   const VarTuple& w) const {
    for (const auto& s : x)
      for (const auto& s2 : x) {
        if (values(s, u) != values(s2, u)) continue;
        bool found = false;
        for (const auto& s3 : x)
          if (values(s3, u) == values(s, u) && values(s3, v) == values(s, v) &&
              values(s3, w) == values(s2, w))
            found = true;
        if (!found) return false;
      }
    return true;
  }

  bool atom(const NaiveTeam& x, const Node& n) const {
    const auto& g = n.groups;
    const auto n_elems = static_cast<std::size_t>(m_.size());
    switch (n.atom) {
      case AtomKind::Const:
        return relation(x, g[0]).size() <= 1;
      case AtomKind::Dep:
        for (const auto& s : x)
          for (const auto& s2 : x)
            if (values(s, g[0]) == values(s2, g[0]) && values(s, g[1]) != values(s2, g[1]))
              return false;
        return true;
      case AtomKind::Inc: {
        auto a = relation(x, g[0]), b = relation(x, g[1]);
        return std::includes(b.begin(), b.end(), a.begin(), a.end());
      }
      case AtomKind::Ind:
        return independent(x, g[0], g[1], g[2]);
      case AtomKind::All: {
        std::size_t want = 1;
        for (std::size_t i = 0; i < g[0].size(); ++i) want *= n_elems;
        return relation(x, g[0]).size() == want;
      }
      case AtomKind::NE:
        return !x.empty();
      case AtomKind::NCon:
        return relation(x, g[0]).size() > 1;
      case AtomKind::NDep:
        for (const auto& s : x)
          for (const auto& s2 : x)
            if (values(s, g[0]) == values(s2, g[0]) && values(s, g[1]) != values(s2, g[1]))
              return true;
        return false;
      case AtomKind::Geq:
        return relation(x, g[0]).size() >= static_cast<std::size_t>(n.parameter);
      case AtomKind::NInc: {
        auto a = relation(x, g[0]), b = relation(x, g[1]);
        return !std::includes(b.begin(), b.end(), a.begin(), a.end());
      }
      case AtomKind::NInd:
        return !independent(x, g[0], g[1], g[2]);
      case AtomKind::CountEq:
        return relation(x, g[0]).size() == static_cast<std::size_t>(n.parameter);
      case AtomKind::CountNeq:
        return relation(x, g[0]).size() != static_cast<std::size_t>(n.parameter);
      case AtomKind::CoCountEq:
        return n_elems - relation(x, g[0]).size() == static_cast<std::size_t>(n.parameter);
      case AtomKind::CoCountNeq:
        return n_elems - relation(x, g[0]).size() != static_cast<std::size_t>(n.parameter);
      case AtomKind::Custom: {
        const auto& spec = reg_.at(n.name);
        Model r(m_.size());
        r.add_relation(kDependencyRelation, spec.arity);
        for (const auto& tup : relation(x, g[0])) r.insert(kDependencyRelation, tup);
        if (spec.arity == 0) {
          Model bare(m_.size());
          return NaiveEvaluator(bare).tarski(*spec.definition, Row{});
        }
        return NaiveEvaluator(r).tarski(*spec.definition, Row{});
      }
    }
    return false;
  }

  const Model& m_;
  const Registry& reg_;
};

// Random formulas over a fixed variable pool and a unary P.
struct FormulaGen {
  std::mt19937 rng;
  std::vector<Variable> free_vars = {"x", "y"};
  std::vector<Variable> bound_vars = {"z"};
  bool with_relation = true;
  bool first_order_only = false;
  bool allow_neg = true;       // ~, ->, <>
  bool allow_brackets = true;
  bool allow_atoms = true;

  explicit FormulaGen(unsigned seed) : rng(seed) {}

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  Variable var(const std::vector<Variable>& scope) {
    return scope[static_cast<std::size_t>(pick(static_cast<int>(scope.size())))];
  }

  VarTuple tuple(const std::vector<Variable>& scope, int len) {
    VarTuple out;
    for (int i = 0; i < len; ++i) out.push_back(var(scope));
    return out;
  }

  Formula literal(const std::vector<Variable>& scope) {
    switch (pick(with_relation ? 4 : 2)) {
      case 0:
        return Formula::Eq(var(scope), var(scope));
      case 1:
        return Formula::Neq(var(scope), var(scope));
      case 2:
        return Formula::Lit("P", {var(scope)});
      default:
        return Formula::NegLit("P", {var(scope)});
    }
  }

  Formula atom(const std::vector<Variable>& scope) {
    switch (pick(16)) {
      case 0:
        return Formula::Const(tuple(scope, 1 + pick(2)));
      case 1:
        return Formula::Dep(tuple(scope, pick(2)), tuple(scope, 1));
      case 2:
        return Formula::Inc(tuple(scope, 1), tuple(scope, 1));
      case 3:
        return Formula::Ind(tuple(scope, pick(2)), tuple(scope, 1), tuple(scope, 1));
      case 4:
        return Formula::All(tuple(scope, 1 + pick(2)));
      case 5:
        return Formula::NE();
      case 6:
        return Formula::NCon(tuple(scope, 1));
      case 7:
        return Formula::NDep(tuple(scope, 1), tuple(scope, 1));
      case 8:
        return Formula::Geq(tuple(scope, 1 + pick(2)), pick(4));
      case 9:
        return Formula::NInc(tuple(scope, 1), tuple(scope, 1));
      case 10:
        return Formula::NInd(tuple(scope, pick(2)), tuple(scope, 1), tuple(scope, 1));
      case 11:
        return Formula::CountEq(var(scope), pick(3));
      case 12:
        return Formula::CountNeq(var(scope), pick(3));
      case 13:
        return Formula::CoCountEq(var(scope), pick(3));
      case 14:
        return Formula::CoCountNeq(var(scope), pick(3));
      default:
        return Formula::Dep(tuple(scope, 1), tuple(scope, 1));
    }
  }

  Formula sentence(int depth) {
    std::vector<Variable> scope = {"u"};
    Formula body = depth > 0 && pick(2) ? Formula::Exists("w", Formula::Or(literal({"u", "w"}),
                                                                          literal({"u", "w"})))
                                        : literal(scope);
    return pick(2) ? Formula::Forall("u", body) : Formula::Exists("u", body);
  }

  Formula formula(int depth) { return formula(depth, free_vars, 0); }

  Formula formula(int depth, std::vector<Variable> scope, std::size_t bound_used) {
    if (depth <= 0) {
      if (!first_order_only && allow_atoms && pick(2)) return atom(scope);
      return literal(scope);
    }
    int choices = first_order_only ? 4 : 9;
    switch (pick(choices)) {
      case 0:
        return Formula::And(formula(depth - 1, scope, bound_used),
                            formula(depth - 1, scope, bound_used));
      case 1:
        return Formula::Or(formula(depth - 1, scope, bound_used),
                           formula(depth - 1, scope, bound_used));
      case 2:
      case 3: {
        Variable v = bound_used < bound_vars.size() ? bound_vars[bound_used] : var(scope);
        std::size_t next = bound_used < bound_vars.size() ? bound_used + 1 : bound_used;
        auto inner = scope;
        if (std::find(inner.begin(), inner.end(), v) == inner.end()) inner.push_back(v);
        Formula body = formula(depth - 1, inner, next);
        return pick(2) ? Formula::Exists(v, body) : Formula::Forall(v, body);
      }
      case 4:
        return Formula::ClassicalOr(formula(depth - 1, scope, bound_used),
                                    formula(depth - 1, scope, bound_used));
      case 5:
        if (allow_neg) return Formula::Not(formula(depth - 1, scope, bound_used));
        return formula(depth - 1, scope, bound_used);
      case 6:
        if (allow_neg)
          return Formula::Implies(formula(depth - 1, scope, bound_used),
                                  formula(depth - 1, scope, bound_used));
        return formula(depth - 1, scope, bound_used);
      case 7:
        if (allow_neg) return Formula::Possibly(formula(depth - 1, scope, bound_used));
        return formula(depth - 1, scope, bound_used);
      default:
        if (allow_brackets)
          return Formula::And(Formula::Bracket(sentence(1)), formula(depth - 1, scope, bound_used));
        return formula(depth - 1, scope, bound_used);
    }
  }
};

// Random team over `vars` on an n-element domain, at most max_rows rows.
inline Team random_team(std::mt19937& rng, std::size_t n, const std::vector<Variable>& vars,
                        std::size_t max_rows) {
  Team full = full_team(n, vars);
  std::vector<std::size_t> idx(full.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  std::size_t rows = std::uniform_int_distribution<std::size_t>(0, std::min(max_rows, idx.size()))(rng);
  idx.resize(rows);
  return full.select(idx);
}

inline Model random_unary_model(std::mt19937& rng, std::size_t n) {
  Model m(n);
  m.add_relation("P", 1);
  for (std::size_t e = 0; e < n; ++e)
    if (rng() & 1) m.insert("P", {static_cast<Element>(e)});
  return m;
}

inline Signature unary_signature() { return Signature{{"P", 1}}; }

}  // namespace teamlog::testing
