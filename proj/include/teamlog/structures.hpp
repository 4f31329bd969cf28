#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "teamlog/formula.hpp"

namespace teamlog {

/// Domain elements are the integers 0..n-1.
using Element = int;
using Tuple = std::vector<Element>;

struct Relation {
  int arity = 0;
  std::set<Tuple> tuples;

  friend bool operator==(const Relation&, const Relation&) = default;
};

/// Finite relational structure over the domain {0, ..., size-1}.
class Model {
 public:
  /// Model of the empty signature with `size` elements (size >= 1).
  explicit Model(std::size_t size);

  std::size_t size() const { return size_; }
  void add_relation(const std::string& name, int arity);
  /// Adds `tuple` to relation `name`; validates arity and element range.
  void insert(const std::string& name, Tuple tuple);
  bool holds(const std::string& name, std::span<const Element> args) const;
  const Relation& relation(const std::string& name) const;
  const std::map<std::string, Relation>& relations() const { return relations_; }
  Signature signature() const;

  friend bool operator==(const Model&, const Model&) = default;

 private:
  std::size_t size_;
  std::map<std::string, Relation> relations_;
};

/// Total assignment over a fixed variable domain.
class Assignment {
 public:
  Assignment() = default;
  Assignment(std::initializer_list<std::pair<const Variable, Element>> values)
      : values_(values) {}
  explicit Assignment(std::map<Variable, Element> values) : values_(std::move(values)) {}

  void set(const Variable& v, Element e) { values_[v] = e; }
  Element at(const Variable& v) const;
  bool has(const Variable& v) const { return values_.count(v) != 0; }
  const std::map<Variable, Element>& values() const { return values_; }

  friend bool operator==(const Assignment&, const Assignment&) = default;
  friend auto operator<=>(const Assignment&, const Assignment&) = default;

 private:
  std::map<Variable, Element> values_;
};

/// A set of assignments over a shared variable domain.
///
/// Canonical form: variables are sorted, rows are sorted and unique, so
/// equality is extensional. Row i holds the values of variables() in order.
class Team {
 public:
  /// The empty team over the empty variable domain.
  Team() = default;
  /// The empty team over `vars`.
  explicit Team(std::vector<Variable> vars);
  Team(std::vector<Variable> vars, const std::vector<Tuple>& rows);
  /// {∅}: one empty assignment.
  static Team unit();
  static Team from_assignments(std::vector<Variable> vars, const std::vector<Assignment>& rows);

  const std::vector<Variable>& variables() const { return vars_; }
  std::size_t width() const { return vars_.size(); }
  std::size_t size() const { return rows_; }
  bool empty() const { return rows_ == 0; }
  std::span<const Element> row(std::size_t i) const {
    return {cells_.data() + i * vars_.size(), vars_.size()};
  }
  Assignment assignment(std::size_t i) const;
  std::vector<Assignment> assignments() const;

  std::optional<std::size_t> column(const Variable& v) const;
  /// Throws Error when `v` is not in the domain.
  std::size_t column_of(const Variable& v) const;
  bool has_variable(const Variable& v) const { return column(v).has_value(); }

  bool contains(std::span<const Element> row) const;
  /// Subset test; both teams must share the variable domain.
  bool is_subteam_of(const Team& other) const;

  /// Rows whose bit is set in `mask` (row count <= 64).
  Team select(std::uint64_t mask) const;
  Team select(const std::vector<std::size_t>& rows) const;
  /// Rows of this team not in `other` (same domain).
  Team minus(const Team& other) const;
  Team unite(const Team& other) const;
  /// Drops variable `v` from the domain (no-op when absent).
  Team without_variable(const Variable& v) const;
  /// Restriction of every assignment to `vars` (which must be a subset).
  Team restricted_to(const std::vector<Variable>& vars) const;
  /// Sets v := e in every row, adding v to the domain if needed.
  Team with_constant(const Variable& v, Element e) const;

  std::size_t hash() const;
  friend bool operator==(const Team&, const Team&) = default;

  /// Appends a row without re-canonicalising; call normalize() afterwards.
  void push_row(std::span<const Element> row);
  void normalize();

 private:
  std::vector<Variable> vars_;
  std::vector<Element> cells_;
  std::size_t rows_ = 0;
};

struct TeamHash {
  std::size_t operator()(const Team& t) const { return t.hash(); }
};

/// Tarski satisfaction of a first-order formula. Throws FragmentError on
/// non-first-order constructs and Error on unassigned variables.
bool tarski_eval(const Model& m, const Assignment& s, const Formula& f);
/// Tarski satisfaction for row `i` of `t`.
bool tarski_eval_row(const Model& m, const Team& t, std::size_t i, const Formula& f);

/// X(v̄) = {s(v̄) : s ∈ X}.
std::set<Tuple> project(const Team& t, const VarTuple& vars);
/// X↾θ: the rows of t that satisfy the first-order formula θ.
Team restrict(const Model& m, const Team& t, const Formula& theta);
/// X[M/v].
Team universal_extend(const Model& m, const Team& t, const Variable& v);

/// The full team {∅}[M/v1]...[M/vk] over `vars`, rows in lexicographic
/// order.
Team full_team(std::size_t domain_size, std::vector<Variable> vars);

/// All 2^(|M|^|V|) teams over V, indexed by subset rank of the full team's
/// rows: rank 0 is the empty team.
class TeamEnumeration {
 public:
  static constexpr std::size_t kDefaultRowLimit = 16;

  TeamEnumeration(std::size_t domain_size, std::vector<Variable> vars,
                  std::size_t row_limit = kDefaultRowLimit);

  std::uint64_t count() const { return std::uint64_t{1} << full_.size(); }
  Team at(std::uint64_t rank) const { return full_.select(rank); }
  const Team& full() const { return full_; }

  class iterator {
   public:
    using value_type = Team;
    using difference_type = std::ptrdiff_t;
    iterator() = default;
    iterator(const TeamEnumeration* owner, std::uint64_t rank) : owner_(owner), rank_(rank) {}
    Team operator*() const { return owner_->at(rank_); }
    iterator& operator++() {
      ++rank_;
      return *this;
    }
    iterator operator++(int) {
      auto copy = *this;
      ++rank_;
      return copy;
    }
    bool operator==(const iterator& o) const { return rank_ == o.rank_; }

   private:
    const TeamEnumeration* owner_ = nullptr;
    std::uint64_t rank_ = 0;
  };
  iterator begin() const { return {this, 0}; }
  iterator end() const { return {this, count()}; }

 private:
  Team full_;
};

TeamEnumeration enumerate_teams(const Model& m, const VarSet& vars,
                                std::size_t row_limit = TeamEnumeration::kDefaultRowLimit);

struct ModelEnumerationOptions {
  /// Keep one representative per isomorphism class (lexicographically
  /// least under domain permutations).
  bool up_to_isomorphism = false;
  /// Cap on the total number of tuple slots Σ size^arity.
  std::size_t slot_limit = 20;
};

/// Every interpretation of `sig` over the domain {0..size-1}, in rank order
/// of the slot bitmask. Exactly one model for the empty signature.
std::vector<Model> enumerate_models(const Signature& sig, std::size_t size,
                                    const ModelEnumerationOptions& options = {});

}  // namespace teamlog
