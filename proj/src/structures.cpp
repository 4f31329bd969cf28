#include "teamlog/structures.hpp"

#include <algorithm>
#include <numeric>
#include <string_view>

namespace teamlog {

Model::Model(std::size_t size) : size_(size) {
  if (size == 0) throw Error("models have non-empty domains");
}

void Model::add_relation(const std::string& name, int arity) {
  Signature check;
  check.add(name, arity);
  auto [it, inserted] = relations_.try_emplace(name, Relation{arity, {}});
  if (!inserted && it->second.arity != arity) throw Error("conflicting arity for " + name);
}

void Model::insert(const std::string& name, Tuple tuple) {
  auto it = relations_.find(name);
  if (it == relations_.end()) throw Error("unknown relation " + name);
  if (static_cast<int>(tuple.size()) != it->second.arity)
    throw Error("tuple of wrong arity for " + name);
  for (Element e : tuple)
    if (e < 0 || static_cast<std::size_t>(e) >= size_)
      throw Error("element " + std::to_string(e) + " outside the domain");
  it->second.tuples.insert(std::move(tuple));
}

bool Model::holds(const std::string& name, std::span<const Element> args) const {
  const Relation& r = relation(name);
  if (static_cast<int>(args.size()) != r.arity) throw Error("arity mismatch for " + name);
  return r.tuples.count(Tuple(args.begin(), args.end())) != 0;
}

const Relation& Model::relation(const std::string& name) const {
  auto it = relations_.find(name);
  if (it == relations_.end()) throw Error("relation " + name + " is not interpreted by the model");
  return it->second;
}

Signature Model::signature() const {
  Signature sig;
  for (const auto& [name, rel] : relations_) sig.add(name, rel.arity);
  return sig;
}

Element Assignment::at(const Variable& v) const {
  auto it = values_.find(v);
  if (it == values_.end()) throw Error("variable " + v + " is not assigned");
  return it->second;
}

// ---------------------------------------------------------------- Team

Team::Team(std::vector<Variable> vars) : vars_(std::move(vars)) {
  std::sort(vars_.begin(), vars_.end());
  if (std::adjacent_find(vars_.begin(), vars_.end()) != vars_.end())
    throw Error("duplicate variable in team domain");
}

Team::Team(std::vector<Variable> vars, const std::vector<Tuple>& rows) {
  // Rows are given in the caller's variable order; permute into sorted order.
  std::vector<std::size_t> order(vars.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return vars[a] < vars[b]; });
  for (auto i : order) vars_.push_back(vars[i]);
  if (std::adjacent_find(vars_.begin(), vars_.end()) != vars_.end())
    throw Error("duplicate variable in team domain");
  Tuple buf(vars_.size());
  for (const auto& r : rows) {
    if (r.size() != vars_.size()) throw Error("assignment has the wrong number of values");
    for (std::size_t c = 0; c < order.size(); ++c) buf[c] = r[order[c]];
    push_row(buf);
  }
  normalize();
}

Team Team::unit() {
  Team t;
  t.rows_ = 1;
  return t;
}

Team Team::from_assignments(std::vector<Variable> vars, const std::vector<Assignment>& rows) {
  Team t(std::move(vars));
  Tuple buf(t.width());
  for (const auto& a : rows) {
    if (a.values().size() != t.width()) throw Error("assignment domain differs from team domain");
    for (std::size_t c = 0; c < t.width(); ++c) buf[c] = a.at(t.vars_[c]);
    t.push_row(buf);
  }
  t.normalize();
  return t;
}

Assignment Team::assignment(std::size_t i) const {
  Assignment a;
  auto r = row(i);
  for (std::size_t c = 0; c < vars_.size(); ++c) a.set(vars_[c], r[c]);
  return a;
}

std::vector<Assignment> Team::assignments() const {
  std::vector<Assignment> out;
  for (std::size_t i = 0; i < rows_; ++i) out.push_back(assignment(i));
  return out;
}

std::optional<std::size_t> Team::column(const Variable& v) const {
  auto it = std::lower_bound(vars_.begin(), vars_.end(), v);
  if (it == vars_.end() || *it != v) return std::nullopt;
  return static_cast<std::size_t>(it - vars_.begin());
}

std::size_t Team::column_of(const Variable& v) const {
  auto c = column(v);
  if (!c) throw Error("variable " + v + " is not in the team's domain");
  return *c;
}

namespace {

bool row_less(std::span<const Element> a, std::span<const Element> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

bool Team::contains(std::span<const Element> r) const {
  std::size_t lo = 0, hi = rows_;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (row_less(row(mid), r))
      lo = mid + 1;
    else
      hi = mid;
  }
  return lo < rows_ && std::equal(r.begin(), r.end(), row(lo).begin());
}

bool Team::is_subteam_of(const Team& other) const {
  if (vars_ != other.vars_) throw Error("subteam test across different domains");
  for (std::size_t i = 0; i < rows_; ++i)
    if (!other.contains(row(i))) return false;
  return true;
}

Team Team::select(std::uint64_t mask) const {
  Team out;
  out.vars_ = vars_;
  for (std::size_t i = 0; i < rows_ && i < 64; ++i)
    if (mask >> i & 1) out.push_row(row(i));
  return out;  // rows stay sorted
}

Team Team::select(const std::vector<std::size_t>& rows) const {
  Team out;
  out.vars_ = vars_;
  for (auto i : rows) out.push_row(row(i));
  out.normalize();
  return out;
}

Team Team::minus(const Team& other) const {
  Team out;
  out.vars_ = vars_;
  for (std::size_t i = 0; i < rows_; ++i)
    if (!other.contains(row(i))) out.push_row(row(i));
  return out;
}

Team Team::unite(const Team& other) const {
  if (vars_ != other.vars_) throw Error("union across different domains");
  Team out = *this;
  for (std::size_t i = 0; i < other.rows_; ++i) out.push_row(other.row(i));
  out.normalize();
  return out;
}

Team Team::without_variable(const Variable& v) const {
  auto c = column(v);
  if (!c) return *this;
  Team out;
  out.vars_ = vars_;
  out.vars_.erase(out.vars_.begin() + static_cast<std::ptrdiff_t>(*c));
  Tuple buf;
  for (std::size_t i = 0; i < rows_; ++i) {
    auto r = row(i);
    buf.assign(r.begin(), r.end());
    buf.erase(buf.begin() + static_cast<std::ptrdiff_t>(*c));
    out.push_row(buf);
  }
  out.normalize();
  return out;
}

Team Team::restricted_to(const std::vector<Variable>& vars) const {
  Team out(vars);
  std::vector<std::size_t> cols;
  for (const auto& v : out.vars_) cols.push_back(column_of(v));
  Tuple buf(cols.size());
  for (std::size_t i = 0; i < rows_; ++i) {
    auto r = row(i);
    for (std::size_t c = 0; c < cols.size(); ++c) buf[c] = r[cols[c]];
    out.push_row(buf);
  }
  out.normalize();
  return out;
}

Team Team::with_constant(const Variable& v, Element e) const {
  Team base = without_variable(v);
  Team out;
  out.vars_ = base.vars_;
  auto pos = std::lower_bound(out.vars_.begin(), out.vars_.end(), v);
  std::size_t c = static_cast<std::size_t>(pos - out.vars_.begin());
  out.vars_.insert(pos, v);
  Tuple buf;
  for (std::size_t i = 0; i < base.rows_; ++i) {
    auto r = base.row(i);
    buf.assign(r.begin(), r.end());
    buf.insert(buf.begin() + static_cast<std::ptrdiff_t>(c), e);
    out.push_row(buf);
  }
  return out;  // inserting a constant column preserves order
}

std::size_t Team::hash() const {
  std::size_t h = rows_ * 0x9e3779b97f4a7c15ULL;
  for (const auto& v : vars_) h = h * 31 + std::hash<std::string>{}(v);
  for (Element e : cells_) h = h * 1000003 + static_cast<std::size_t>(e);
  return h;
}

void Team::push_row(std::span<const Element> r) {
  if (r.size() != vars_.size()) throw Error("row width differs from team domain");
  cells_.insert(cells_.end(), r.begin(), r.end());
  ++rows_;
}

void Team::normalize() {
  std::size_t w = vars_.size();
  if (w == 0) {
    rows_ = std::min<std::size_t>(rows_, 1);
    return;
  }
  std::vector<std::size_t> idx(rows_);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return row_less(row(a), row(b)); });
  std::vector<Element> cells;
  cells.reserve(cells_.size());
  std::size_t count = 0;
  for (auto i : idx) {
    auto r = row(i);
    if (count && std::equal(r.begin(), r.end(), cells.end() - static_cast<std::ptrdiff_t>(w)))
      continue;
    cells.insert(cells.end(), r.begin(), r.end());
    ++count;
  }
  cells_ = std::move(cells);
  rows_ = count;
}

// ---------------------------------------------------------------- Tarski

namespace {

struct Tarski {
  const Model& m;
  std::vector<std::pair<std::string_view, Element>> env;

  Element lookup(const Variable& v) const {
    for (auto it = env.rbegin(); it != env.rend(); ++it)
      if (it->first == v) return it->second;
    throw Error("variable " + v + " is not assigned");
  }

  bool eval(const Node& n) {
    switch (n.op) {
      case Op::PosLit:
      case Op::NegLit: {
        Tuple args;
        for (const auto& v : n.groups[0]) args.push_back(lookup(v));
        bool in = m.holds(n.name, args);
        return n.op == Op::PosLit ? in : !in;
      }
      case Op::Eq:
        return lookup(n.groups[0][0]) == lookup(n.groups[0][1]);
      case Op::Neq:
        return lookup(n.groups[0][0]) != lookup(n.groups[0][1]);
      case Op::TensorOr:
        return eval(*n.left) || eval(*n.right);
      case Op::And:
        return eval(*n.left) && eval(*n.right);
      case Op::Exists:
      case Op::Forall: {
        bool existential = n.op == Op::Exists;
        env.emplace_back(n.name, 0);
        bool result = !existential;
        for (std::size_t e = 0; e < m.size(); ++e) {
          env.back().second = static_cast<Element>(e);
          if (eval(*n.left) == existential) {
            result = existential;
            break;
          }
        }
        env.pop_back();
        return result;
      }
      default:
        throw FragmentError("Tarski evaluation applies to first-order formulas only");
    }
  }
};

}  // namespace

bool tarski_eval(const Model& m, const Assignment& s, const Formula& f) {
  Tarski t{m, {}};
  for (const auto& [v, e] : s.values()) t.env.emplace_back(v, e);
  return t.eval(*f);
}

bool tarski_eval_row(const Model& m, const Team& team, std::size_t i, const Formula& f) {
  Tarski t{m, {}};
  auto r = team.row(i);
  for (std::size_t c = 0; c < team.width(); ++c) t.env.emplace_back(team.variables()[c], r[c]);
  return t.eval(*f);
}

std::set<Tuple> project(const Team& t, const VarTuple& vars) {
  std::vector<std::size_t> cols;
  for (const auto& v : vars) cols.push_back(t.column_of(v));
  std::set<Tuple> out;
  Tuple buf(cols.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    auto r = t.row(i);
    for (std::size_t c = 0; c < cols.size(); ++c) buf[c] = r[cols[c]];
    out.insert(buf);
  }
  return out;
}

Team restrict(const Model& m, const Team& t, const Formula& theta) {
  if (!is_first_order(theta)) throw FragmentError("restriction needs a first-order formula");
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (tarski_eval_row(m, t, i, theta)) keep.push_back(i);
  return t.select(keep);
}

Team universal_extend(const Model& m, const Team& t, const Variable& v) {
  Team base = t.without_variable(v);
  Team out;
  for (std::size_t e = 0; e < m.size(); ++e) {
    Team layer = base.with_constant(v, static_cast<Element>(e));
    out = e == 0 ? layer : out.unite(layer);
  }
  return out;
}

Team full_team(std::size_t domain_size, std::vector<Variable> vars) {
  Team t(std::move(vars));
  std::size_t w = t.width();
  Tuple r(w, 0);
  while (true) {
    t.push_row(r);
    std::size_t c = w;
    while (c > 0) {
      --c;
      if (static_cast<std::size_t>(++r[c]) < domain_size) break;
      r[c] = 0;
      if (c == 0) return t;
    }
    if (w == 0) return t;
  }
}

TeamEnumeration::TeamEnumeration(std::size_t domain_size, std::vector<Variable> vars,
                                 std::size_t row_limit) {
  std::size_t rows = 1;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    rows *= domain_size;
    if (rows > row_limit) break;
  }
  if (rows > row_limit || rows > 62)
    throw LimitError("team enumeration over " + std::to_string(vars.size()) +
                     " variables and domain size " + std::to_string(domain_size) +
                     " exceeds the row limit of " + std::to_string(row_limit));
  full_ = full_team(domain_size, std::move(vars));
}

TeamEnumeration enumerate_teams(const Model& m, const VarSet& vars, std::size_t row_limit) {
  return TeamEnumeration(m.size(), std::vector<Variable>(vars.begin(), vars.end()), row_limit);
}

// ---------------------------------------------------------------- models

namespace {

struct Slot {
  std::string relation;
  Tuple tuple;
};

std::vector<Slot> slots_for(const Signature& sig, std::size_t size) {
  std::vector<Slot> slots;
  for (const auto& [name, arity] : sig.relations()) {
    Team all = full_team(size, [&] {
      std::vector<Variable> vs;
      for (int i = 0; i < arity; ++i) vs.push_back("a" + std::to_string(100 + i));
      return vs;
    }());
    for (std::size_t i = 0; i < all.size(); ++i) {
      auto r = all.row(i);
      slots.push_back({name, Tuple(r.begin(), r.end())});
    }
  }
  return slots;
}

Model model_from_mask(const Signature& sig, std::size_t size, const std::vector<Slot>& slots,
                      std::uint64_t mask) {
  Model m(size);
  for (const auto& [name, arity] : sig.relations()) m.add_relation(name, arity);
  for (std::size_t i = 0; i < slots.size(); ++i)
    if (mask >> i & 1) m.insert(slots[i].relation, slots[i].tuple);
  return m;
}

Model permuted(const Model& m, const std::vector<Element>& perm) {
  Model out(m.size());
  for (const auto& [name, rel] : m.relations()) {
    out.add_relation(name, rel.arity);
    for (const auto& t : rel.tuples) {
      Tuple p;
      for (Element e : t) p.push_back(perm[static_cast<std::size_t>(e)]);
      out.insert(name, p);
    }
  }
  return out;
}

// Orders models by their relation contents; any fixed total order works.
bool model_less(const Model& a, const Model& b) {
  auto ia = a.relations().begin();
  auto ib = b.relations().begin();
  for (; ia != a.relations().end(); ++ia, ++ib) {
    if (ia->second.tuples != ib->second.tuples) return ia->second.tuples < ib->second.tuples;
  }
  return false;
}

}  // namespace

std::vector<Model> enumerate_models(const Signature& sig, std::size_t size,
                                    const ModelEnumerationOptions& options) {
  if (size == 0) throw Error("models have non-empty domains");
  auto slots = slots_for(sig, size);
  if (slots.size() > options.slot_limit || slots.size() > 62)
    throw LimitError("model enumeration needs " + std::to_string(slots.size()) +
                     " tuple slots; limit is " + std::to_string(options.slot_limit));
  std::vector<Model> out;
  std::vector<Element> perm(size);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
    Model m = model_from_mask(sig, size, slots, mask);
    if (options.up_to_isomorphism && !sig.empty()) {
      std::iota(perm.begin(), perm.end(), 0);
      bool minimal = true;
      while (std::next_permutation(perm.begin(), perm.end())) {
        if (model_less(permuted(m, perm), m)) {
          minimal = false;
          break;
        }
      }
      if (!minimal) continue;
    }
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace teamlog
