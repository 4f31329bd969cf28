#include "teamlog/team_eval.hpp"

#include <algorithm>
#include <unordered_map>

namespace teamlog {

namespace {

// An alternative (a, σ) of a formula f: f is the classical disjunction of its
// alternatives, every team satisfying a lies pointwise inside σ, and any
// superteam still inside σ satisfies a again. A null σ stands for ⊤.
struct Alt {
  Formula formula;
  Formula support;
};

constexpr std::size_t kMaxAlternatives = 64;
constexpr std::size_t kMaxEnumeratedRows = 24;
constexpr std::size_t kMemoCap = 4'000'000;

struct Info {
  bool fo = false;
  bool down = false;  // downward closed
  bool up = false;    // upward closed
  bool raisable = false;
  std::vector<Alt> alts;
  VarSet const_vars;  // variables forced constant on every satisfying team
};

Formula support_and(const Formula& a, const Formula& b) {
  if (!a) return b;
  if (!b) return a;
  return Formula::And(a, b);
}

Formula support_or(const Formula& a, const Formula& b) {
  if (!a || !b) return {};
  return Formula::Or(a, b);
}

struct MemoKey {
  const Node* node;
  Team team;
  bool operator==(const MemoKey&) const = default;
};

struct MemoKeyHash {
  std::size_t operator()(const MemoKey& k) const {
    return std::hash<const void*>()(k.node) * 0x9e3779b97f4a7c15ULL ^ k.team.hash();
  }
};

std::set<Tuple> tuples_of(const Team& x, const VarTuple& vars) {
  std::vector<std::size_t> cols;
  cols.reserve(vars.size());
  for (const auto& v : vars) cols.push_back(x.column_of(v));
  std::set<Tuple> out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto row = x.row(i);
    Tuple t;
    t.reserve(cols.size());
    for (auto c : cols) t.push_back(row[c]);
    out.insert(std::move(t));
  }
  return out;
}

std::vector<Tuple> rows_of(const Team& x, const VarTuple& vars) {
  std::vector<std::size_t> cols;
  for (const auto& v : vars) cols.push_back(x.column_of(v));
  std::vector<Tuple> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto row = x.row(i);
    for (auto c : cols) out[i].push_back(row[c]);
  }
  return out;
}

Tuple concat(const Tuple& a, const Tuple& b) {
  Tuple out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

bool dependence_holds(const Team& x, const VarTuple& v, const VarTuple& w) {
  auto vs = rows_of(x, v);
  auto ws = rows_of(x, w);
  std::map<Tuple, Tuple> image;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    auto [it, inserted] = image.emplace(vs[i], ws[i]);
    if (!inserted && it->second != ws[i]) return false;
  }
  return true;
}

bool independence_holds(const Team& x, const VarTuple& u, const VarTuple& v, const VarTuple& w) {
  VarTuple uvw = u;
  uvw.insert(uvw.end(), v.begin(), v.end());
  uvw.insert(uvw.end(), w.begin(), w.end());
  auto present = tuples_of(x, uvw);
  auto us = rows_of(x, u);
  auto vs = rows_of(x, v);
  auto ws = rows_of(x, w);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j)
      if (us[i] == us[j] && !present.count(concat(concat(us[i], vs[i]), ws[j]))) return false;
  return true;
}

std::size_t power(std::size_t base, std::size_t exp) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) out *= base;
  return out;
}

class Evaluator {
 public:
  Evaluator(const Model& m, const Registry& reg, const EvalOptions& options)
      : m_(m), reg_(reg), options_(options) {}

  bool sat(const Team& x, const Formula& f) {
    if (++work_ > options_.work_limit)
      throw LimitError("evaluation exceeded the work limit of " +
                       std::to_string(options_.work_limit) + " steps");
    const Info& in = info(f);
    if (in.fo && options_.flat_shortcut) return pointwise(x, f);
    switch (f.op()) {
      case Op::PosLit:
      case Op::NegLit:
      case Op::Eq:
      case Op::Neq:
        return pointwise(x, f);
      case Op::And:
        return sat(x, f.left()) && sat(x, f.right());
      case Op::ClassicalOr:
        return sat(x, f.left()) || sat(x, f.right());
      case Op::ContraNeg:
        return !sat(x, f.body());
      case Op::Forall:
        return sat(universal_extend(m_, x, f->name), f.body());
      case Op::Bracket:
        return bracket(f);
      case Op::Atom:
        return atom(x, f);
      case Op::Exists:
      case Op::TensorOr:
      case Op::IntImpl:
      case Op::Possibly:
        break;
    }
    if (!options_.memoize) return sat_compound(x, f);
    MemoKey key{f.get(), x};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool result = sat_compound(x, f);
    if (memo_.size() >= kMemoCap) memo_.clear();
    memo_.emplace(std::move(key), result);
    return result;
  }

 private:
  const Info& info(const Formula& f) {
    if (auto it = info_.find(f.get()); it != info_.end()) return it->second;
    Info in = compute_info(f);
    keep_.push_back(f);
    return info_.emplace(f.get(), std::move(in)).first->second;
  }

  Info compute_info(const Formula& f) {
    Info in;
    switch (f.op()) {
      case Op::PosLit:
      case Op::NegLit:
      case Op::Eq:
      case Op::Neq:
        in.fo = in.down = true;
        break;
      case Op::Bracket:
        in.down = in.up = true;
        break;
      case Op::Atom:
        switch (f->atom) {
          case AtomKind::Const:
            in.down = true;
            in.const_vars.insert(f->groups[0].begin(), f->groups[0].end());
            break;
          case AtomKind::Dep:
            in.down = true;
            if (f->groups[0].empty())
              in.const_vars.insert(f->groups[1].begin(), f->groups[1].end());
            break;
          case AtomKind::All:
          case AtomKind::NE:
          case AtomKind::NCon:
          case AtomKind::NDep:
          case AtomKind::Geq:
            in.up = true;
            break;
          default:
            break;
        }
        break;
      case Op::And:
      case Op::TensorOr:
      case Op::ClassicalOr: {
        const Info& l = info(f.left());
        const Info& r = info(f.right());
        in.fo = f.op() != Op::ClassicalOr && l.fo && r.fo;
        in.down = l.down && r.down;
        // Lax splits absorb new rows into an upward-closed disjunct.
        in.up = f.op() == Op::TensorOr ? l.up || r.up : l.up && r.up;
        if (f.op() == Op::And) {
          in.const_vars = l.const_vars;
          in.const_vars.insert(r.const_vars.begin(), r.const_vars.end());
        } else if (f.op() == Op::ClassicalOr) {
          std::set_intersection(l.const_vars.begin(), l.const_vars.end(), r.const_vars.begin(),
                                r.const_vars.end(),
                                std::inserter(in.const_vars, in.const_vars.end()));
        }
        break;
      }
      case Op::Exists:
      case Op::Forall: {
        const Info& b = info(f.body());
        in.fo = b.fo;
        in.down = b.down;
        in.up = b.up;
        in.const_vars = b.const_vars;
        in.const_vars.erase(f->name);
        break;
      }
      case Op::ContraNeg: {
        const Info& b = info(f.body());
        in.down = b.up;
        in.up = b.down;
        break;
      }
      case Op::IntImpl:
        in.down = true;
        break;
      case Op::Possibly:
        in.up = true;
        break;
    }

    if (in.fo) {
      if (options_.flat_shortcut) {
        in.raisable = true;
        in.alts.push_back({f, f});
      }
    } else if (in.up) {
      in.raisable = true;
      in.alts.push_back({f, {}});
    } else {
      compute_alternatives(f, in);
    }
    return in;
  }

  void compute_alternatives(const Formula& f, Info& in) {
    switch (f.op()) {
      case Op::And:
      case Op::TensorOr: {
        const Info& l = info(f.left());
        const Info& r = info(f.right());
        if (!l.raisable || !r.raisable || l.alts.size() * r.alts.size() > kMaxAlternatives)
          return;
        for (const auto& a : l.alts)
          for (const auto& b : r.alts) {
            if (f.op() == Op::And)
              in.alts.push_back({Formula::And(a.formula, b.formula),
                                 support_and(a.support, b.support)});
            else
              in.alts.push_back({Formula::Or(a.formula, b.formula),
                                 support_or(a.support, b.support)});
          }
        in.raisable = true;
        return;
      }
      case Op::ClassicalOr: {
        const Info& l = info(f.left());
        const Info& r = info(f.right());
        if (!l.raisable || !r.raisable || l.alts.size() + r.alts.size() > kMaxAlternatives)
          return;
        in.alts = l.alts;
        in.alts.insert(in.alts.end(), r.alts.begin(), r.alts.end());
        in.raisable = true;
        return;
      }
      case Op::Exists:
      case Op::Forall: {
        const Info& b = info(f.body());
        if (!b.raisable) return;
        const auto& v = f->name;
        for (const auto& a : b.alts) {
          if (f.op() == Op::Exists)
            in.alts.push_back({Formula::Exists(v, a.formula),
                               a.support ? Formula::Exists(v, a.support) : Formula{}});
          else
            in.alts.push_back({Formula::Forall(v, a.formula),
                               a.support ? Formula::Forall(v, a.support) : Formula{}});
        }
        in.raisable = true;
        return;
      }
      default:
        return;
    }
  }

  bool pointwise(const Team& x, const Formula& f) {
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!tarski_eval_row(m_, x, i, f)) return false;
    return true;
  }

  Team restrict_to(const Team& x, const Formula& support) {
    return support ? restrict(m_, x, support) : x;
  }

  bool bracket(const Formula& f) {
    auto it = brackets_.find(f.get());
    if (it != brackets_.end()) return it->second;
    bool value = tarski_eval(m_, {}, f.body());
    brackets_.emplace(f.get(), value);
    keep_.push_back(f);
    return value;
  }

  bool sat_compound(const Team& x, const Formula& f) {
    switch (f.op()) {
      case Op::Exists:
        return sat_exists(x, f->name, f.body());
      case Op::TensorOr:
        return sat_or(x, f.left(), f.right());
      case Op::IntImpl:
        return implication(x, f.left(), f.right());
      case Op::Possibly:
        return possibly(x, f.body());
      default:
        throw Error("internal: unexpected operator in compound evaluation");
    }
  }

  void tick(std::uint64_t amount = 1) {
    work_ += amount;
    if (work_ > options_.work_limit)
      throw LimitError("evaluation exceeded the work limit of " +
                       std::to_string(options_.work_limit) + " steps");
  }

  static void check_enumerable(std::size_t rows) {
    if (rows > kMaxEnumeratedRows)
      throw LimitError("subteam enumeration over " + std::to_string(rows) + " rows");
  }

  // TS-∃ as: some Y ⊆ X[M/v] satisfies ψ and restricts back onto X.
  bool sat_exists(const Team& x, const Variable& v, const Formula& body) {
    Team base = x.without_variable(v);
    if (base.empty()) {
      Team empty = base.with_constant(v, 0);
      return sat(empty, body);
    }
    const Info& in = info(body);
    if (in.const_vars.count(v)) {
      for (std::size_t m = 0; m < m_.size(); ++m)
        if (sat(base.with_constant(v, static_cast<Element>(m)), body)) return true;
      return false;
    }
    if (body.op() == Op::ClassicalOr)
      return sat_exists(x, v, body.left()) || sat_exists(x, v, body.right());
    Team extended = universal_extend(m_, base, v);
    if (in.raisable) {
      std::vector<Alt> alts = in.alts;
      for (const auto& a : alts) {
        Team w = restrict_to(extended, a.support);
        if (w.without_variable(v).size() != base.size()) continue;
        if (sat(w, a.formula)) return true;
      }
      return false;
    }
    return in.down ? exists_singletons(base, v, body) : exists_generic(base, v, body);
  }

  struct Extension {
    std::vector<Variable> vars;
    std::size_t pos = 0;
    Tuple row(std::span<const Element> base_row, Element m) const {
      Tuple out(base_row.begin(), base_row.end());
      out.insert(out.begin() + static_cast<std::ptrdiff_t>(pos), m);
      return out;
    }
  };

  Extension extension_of(const Team& base, const Variable& v) {
    Extension e;
    e.vars = base.variables();
    auto at = std::lower_bound(e.vars.begin(), e.vars.end(), v);
    e.pos = static_cast<std::size_t>(at - e.vars.begin());
    e.vars.insert(at, v);
    return e;
  }

  // Downward-closed bodies: one value per row suffices.
  bool exists_singletons(const Team& base, const Variable& v, const Formula& body) {
    Extension ext = extension_of(base, v);
    std::vector<std::vector<Tuple>> options(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
      for (std::size_t m = 0; m < m_.size(); ++m) {
        Tuple row = ext.row(base.row(i), static_cast<Element>(m));
        if (sat(Team(ext.vars, {row}), body)) options[i].push_back(std::move(row));
      }
      if (options[i].empty()) return false;
    }
    std::vector<Tuple> chosen;
    auto search = [&](auto&& self, std::size_t i) -> bool {
      if (i == options.size()) return true;
      for (const auto& row : options[i]) {
        chosen.push_back(row);
        if (sat(Team(ext.vars, chosen), body) && self(self, i + 1)) return true;
        chosen.pop_back();
      }
      return false;
    };
    return search(search, 0);
  }

  // Every row picks a nonempty set of values.
  bool exists_generic(const Team& base, const Variable& v, const Formula& body) {
    Extension ext = extension_of(base, v);
    std::size_t n = m_.size();
    if (n >= 16) throw LimitError("generic existential search over a domain of size " +
                                  std::to_string(n));
    std::uint32_t top = (1u << n) - 1;
    std::vector<std::uint32_t> choice(base.size(), 1);
    while (true) {
      tick();
      std::vector<Tuple> rows;
      for (std::size_t i = 0; i < base.size(); ++i)
        for (std::size_t m = 0; m < n; ++m)
          if (choice[i] >> m & 1) rows.push_back(ext.row(base.row(i), static_cast<Element>(m)));
      if (sat(Team(ext.vars, rows), body)) return true;
      std::size_t i = 0;
      while (i < choice.size() && choice[i] == top) choice[i++] = 1;
      if (i == choice.size()) return false;
      ++choice[i];
    }
  }

  bool sat_or(const Team& x, const Formula& l, const Formula& r) {
    if (x.empty()) return sat(x, l) && sat(x, r);
    if (l.op() == Op::ClassicalOr)
      return sat_or(x, l.left(), r) || sat_or(x, l.right(), r);
    if (r.op() == Op::ClassicalOr)
      return sat_or(x, l, r.left()) || sat_or(x, l, r.right());
    const Info& li = info(l);
    const Info& ri = info(r);
    if (li.raisable || ri.raisable) {
      const Formula& raised = li.raisable ? l : r;
      const Formula& other = li.raisable ? r : l;
      std::vector<Alt> alts = info(raised).alts;
      for (const auto& a : alts) {
        Team z = restrict_to(x, a.support);
        if (sat(z, a.formula) && exists_between(x.minus(z), x, other)) return true;
      }
      return false;
    }
    if (li.down && ri.down) return split_down(x, l, r);
    check_enumerable(x.size());
    std::uint64_t count = std::uint64_t{1} << x.size();
    for (std::uint64_t mask = 0; mask < count; ++mask) {
      tick();
      Team y = x.select(mask);
      if (sat(y, l) && exists_between(x.minus(y), x, r)) return true;
    }
    return false;
  }

  // Both disjuncts downward closed: a partition of X suffices.
  bool split_down(const Team& x, const Formula& l, const Formula& r) {
    std::vector<int> side(x.size());  // 1 left only, 2 right only, 3 either
    for (std::size_t i = 0; i < x.size(); ++i) {
      Team single = x.select(std::vector<std::size_t>{i});
      side[i] = (sat(single, l) ? 1 : 0) | (sat(single, r) ? 2 : 0);
      if (side[i] == 0) return false;
    }
    std::vector<std::size_t> left, right;
    auto search = [&](auto&& self, std::size_t i) -> bool {
      if (i == x.size()) return sat(x.select(left), l) && sat(x.select(right), r);
      for (int s : {1, 2}) {
        if (!(side[i] & s)) continue;
        auto& bucket = s == 1 ? left : right;
        bucket.push_back(i);
        bool ok = sat(x.select(bucket), s == 1 ? l : r) && self(self, i + 1);
        bucket.pop_back();
        if (ok) return true;
      }
      return false;
    };
    return search(search, 0);
  }

  // Some Z with lower ⊆ Z ⊆ upper satisfies f.
  bool exists_between(const Team& lower, const Team& upper, const Formula& f) {
    if (lower.size() == upper.size()) return sat(upper, f);
    if (f.op() == Op::ClassicalOr)
      return exists_between(lower, upper, f.left()) || exists_between(lower, upper, f.right());
    const Info& in = info(f);
    if (in.raisable) {
      std::vector<Alt> alts = in.alts;
      for (const auto& a : alts) {
        Team w = restrict_to(upper, a.support);
        if (lower.is_subteam_of(w) && sat(w, a.formula)) return true;
      }
      return false;
    }
    if (in.down) return sat(lower, f);
    Team free = upper.minus(lower);
    check_enumerable(free.size());
    std::uint64_t count = std::uint64_t{1} << free.size();
    for (std::uint64_t mask = 0; mask < count; ++mask) {
      tick();
      if (sat(lower.unite(free.select(mask)), f)) return true;
    }
    return false;
  }

  bool possibly(const Team& x, const Formula& f) {
    if (x.empty()) return false;
    if (f.op() == Op::ClassicalOr) return possibly(x, f.left()) || possibly(x, f.right());
    const Info& in = info(f);
    if (in.raisable) {
      std::vector<Alt> alts = in.alts;
      for (const auto& a : alts) {
        Team w = restrict_to(x, a.support);
        if (!w.empty() && sat(w, a.formula)) return true;
      }
      return false;
    }
    if (in.down) {
      for (std::size_t i = 0; i < x.size(); ++i)
        if (sat(x.select(std::vector<std::size_t>{i}), f)) return true;
      return false;
    }
    check_enumerable(x.size());
    std::uint64_t count = std::uint64_t{1} << x.size();
    for (std::uint64_t mask = 1; mask < count; ++mask) {
      tick();
      if (sat(x.select(mask), f)) return true;
    }
    return false;
  }

  bool implication(const Team& x, const Formula& l, const Formula& r) {
    if (l.op() == Op::ClassicalOr)
      return implication(x, l.left(), r) && implication(x, l.right(), r);
    check_enumerable(x.size());
    std::uint64_t count = std::uint64_t{1} << x.size();
    for (std::uint64_t mask = 0; mask < count; ++mask) {
      tick();
      Team y = x.select(mask);
      if (sat(y, l) && !sat(y, r)) return false;
    }
    return true;
  }

  bool atom(const Team& x, const Formula& f) {
    const auto& g = f->groups;
    const std::size_t n = m_.size();
    switch (f->atom) {
      case AtomKind::Const:
        return tuples_of(x, g[0]).size() <= 1;
      case AtomKind::Dep:
        return dependence_holds(x, g[0], g[1]);
      case AtomKind::NDep:
        return !dependence_holds(x, g[0], g[1]);
      case AtomKind::Inc:
      case AtomKind::NInc: {
        auto left = tuples_of(x, g[0]);
        auto right = tuples_of(x, g[1]);
        bool included = std::includes(right.begin(), right.end(), left.begin(), left.end());
        return f->atom == AtomKind::Inc ? included : !included;
      }
      case AtomKind::Ind:
        return independence_holds(x, g[0], g[1], g[2]);
      case AtomKind::NInd:
        return !independence_holds(x, g[0], g[1], g[2]);
      case AtomKind::All:
        return tuples_of(x, g[0]).size() == power(n, g[0].size());
      case AtomKind::NE:
        return !x.empty();
      case AtomKind::NCon:
        return tuples_of(x, g[0]).size() > 1;
      case AtomKind::Geq:
        return tuples_of(x, g[0]).size() >= static_cast<std::size_t>(f->parameter);
      case AtomKind::CountEq:
      case AtomKind::CountNeq:
      case AtomKind::CoCountEq:
      case AtomKind::CoCountNeq: {
        std::size_t seen = tuples_of(x, g[0]).size();
        std::size_t k = static_cast<std::size_t>(f->parameter);
        bool co = f->atom == AtomKind::CoCountEq || f->atom == AtomKind::CoCountNeq;
        bool eq = f->atom == AtomKind::CountEq || f->atom == AtomKind::CoCountEq;
        std::size_t measured = co ? n - seen : seen;
        return eq ? measured == k : measured != k;
      }
      case AtomKind::Custom:
        return custom(x, f);
    }
    throw Error("internal: unknown atom kind");
  }

  bool custom(const Team& x, const Formula& f) {
    const DependencySpec& spec = reg_.at(f->name);
    const VarTuple& args = f->groups[0];
    if (static_cast<int>(args.size()) != spec.arity)
      throw Error("D:" + spec.name + " expects " + std::to_string(spec.arity) + " arguments, got " +
                  std::to_string(args.size()));
    if (spec.arity == 0 && reg_.options().nullary_model_signature)
      return tarski_eval(m_, {}, spec.definition);
    std::set<Tuple> relation;
    if (spec.arity > 0) relation = tuples_of(x, args);
    auto key = std::make_pair(spec.name, std::move(relation));
    if (auto it = customs_.find(key); it != customs_.end()) return it->second;
    bool value = dependency_holds(spec, m_.size(), key.second);
    customs_.emplace(std::move(key), value);
    return value;
  }

  const Model& m_;
  const Registry& reg_;
  EvalOptions options_;
  std::uint64_t work_ = 0;
  std::unordered_map<const Node*, Info> info_;
  std::unordered_map<const Node*, bool> brackets_;
  std::map<std::pair<std::string, std::set<Tuple>>, bool> customs_;
  std::unordered_map<MemoKey, bool, MemoKeyHash> memo_;
  // Keeps every node whose address is used as a key alive.
  std::vector<Formula> keep_;
};

void check_inputs(const Team& t, const Formula& f, const Registry& reg) {
  if (!f) throw Error("empty formula");
  for (const auto& v : free_variables(f))
    if (!t.has_variable(v)) throw Error("free variable " + v + " is not in the team's domain");
  std::vector<const Node*> stack{f.get()};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    if (n->op == Op::Atom && n->atom == AtomKind::Custom) {
      const auto& spec = reg.at(n->name);
      if (static_cast<int>(n->groups[0].size()) != spec.arity)
        throw Error("D:" + n->name + " expects " + std::to_string(spec.arity) + " arguments");
    }
    if (n->left) stack.push_back(n->left.get());
    if (n->right) stack.push_back(n->right.get());
  }
}

}  // namespace

bool eval(const Model& m, const Team& t, const Formula& f, const Registry& reg,
          const EvalOptions& options) {
  check_inputs(t, f, reg);
  Evaluator e(m, reg, options);
  return e.sat(t, f);
}

std::vector<Team> satisfying_subteams(const Model& m, const Team& t, const Formula& f,
                                      const Registry& reg, std::size_t row_limit) {
  check_inputs(t, f, reg);
  if (t.size() > row_limit || t.size() >= 64)
    throw LimitError("team has " + std::to_string(t.size()) + " rows; the subteam limit is " +
                     std::to_string(row_limit));
  Evaluator e(m, reg, {});
  std::vector<Team> out;
  std::uint64_t count = std::uint64_t{1} << t.size();
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    Team y = t.select(mask);
    if (e.sat(y, f)) out.push_back(std::move(y));
  }
  return out;
}

}  // namespace teamlog
