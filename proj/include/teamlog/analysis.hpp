#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "teamlog/formula.hpp"
#include "teamlog/structures.hpp"
#include "teamlog/team_eval.hpp"

namespace teamlog {

/// A closed-form bound n ↦ γ(n).
struct GammaFn {
  enum class Kind {
    Constant,    // c
    Linear,      // c·n
    ArityPower,  // n^k, k the number of atom arguments
    Parameter,   // the atom's numeric parameter
  };
  Kind kind = Kind::Constant;
  std::uint64_t c = 0;

  std::uint64_t at(std::uint64_t n, std::size_t arity, int parameter) const;
  /// Parses `nk`, `const:c` or `lin:c`.
  static GammaFn parse(const std::string& text);
  std::string describe() const;
};

class GammaTable {
 public:
  /// NE ↦ 1, geq ↦ its parameter, all ↦ n^k, ncon and ndep ↦ 2,
  /// const ↦ 0; custom atoms default to n^k.
  static GammaTable standard();

  void set(AtomKind kind, GammaFn fn) { builtin_[kind] = fn; }
  void set_custom(const std::string& name, GammaFn fn) { custom_[name] = fn; }
  /// Whether a custom atom without an explicit entry gets n^k.
  void set_custom_default(bool enabled) { custom_default_ = enabled; }

  /// Sets an entry by atom keyword ("NE", "all", ...) or custom name.
  void set_by_name(const std::string& name, GammaFn fn);

  /// γ for one atom occurrence; nullopt when the table has no entry.
  std::optional<std::uint64_t> gamma(const Node& atom, std::uint64_t n) const;

 private:
  std::map<AtomKind, GammaFn> builtin_;
  std::map<std::string, GammaFn> custom_;
  bool custom_default_ = true;
};

/// ν_f(n): the sum of γ over every atom occurrence in f. First-order
/// literals and brackets count 0. Throws Error on a missing entry.
std::uint64_t nu_bound(const Formula& f, std::uint64_t n, const GammaTable& g);

/// A smallest Y ⊆ t with M ⊨_Y f (ties broken by row order), or nullopt.
std::optional<Team> minimal_satisfying_subteam(const Model& m, const Team& t, const Formula& f,
                                               const Registry& reg = {},
                                               std::size_t row_limit = 20);

struct BoundReport {
  std::size_t model_size = 0;
  Team team;
  std::uint64_t nu = 0;
  std::size_t witness_size = 0;
  Team witness;
  bool holds = false;
};

struct BoundCheck {
  Formula formula;
  std::vector<Variable> vars;
  std::size_t max_model = 0;
  std::vector<BoundReport> reports;  // one per satisfying (model, team)

  bool all_hold() const;
  std::size_t violations() const;
};

/// Sweeps every model of `sig` with 1..max_model elements and every team
/// over the free variables of f. f must lie in FO(const, upward-closed
/// atoms, ||); a custom atom whose upward closure is unclaimed is checked
/// exhaustively up to max_model.
BoundCheck check_boundedness(const Formula& f, std::size_t max_model, const GammaTable& g,
                             const Registry& reg = {}, const Signature& sig = {});

struct HierarchyReport {
  int kprime = 0;
  int k = 0;
  int q = 0;
  std::size_t n = 0;
  std::uint64_t bound = 0;       // q·n^k
  std::size_t team_size = 0;     // n^k'
  bool totality_holds = false;   // all(v̄) on the full team
  std::size_t witness_size = 0;  // smallest satisfying subteam
  bool exceeds = false;          // witness_size > bound
};

/// Least n with n^k' > q·n^k, the full team over k' variables on an n-element
/// model, and its smallest subteam satisfying all of those variables.
HierarchyReport hierarchy_witness(int kprime, int q, int k, std::size_t row_limit = 20);

enum class TeamFilter { All, NonEmpty };
enum class Comparison { Equivalent, Implies };

struct EquivOptions {
  TeamFilter filter = TeamFilter::All;
  Comparison mode = Comparison::Equivalent;
  ModelEnumerationOptions models;
  std::size_t row_limit = TeamEnumeration::kDefaultRowLimit;
  EvalOptions eval;
};

struct Counterexample {
  Model model{1};
  Team team;
  bool left_value = false;
  bool right_value = false;
};

struct EquivReport {
  bool holds = true;
  std::optional<Counterexample> counterexample;
  std::size_t max_model = 0;
  std::uint64_t models_checked = 0;
  std::uint64_t teams_checked = 0;
  TeamFilter filter = TeamFilter::All;
  Comparison mode = Comparison::Equivalent;
};

/// Compares f and g on every model of `sig` with 1..max_model elements and
/// every team over `vars`. The first disagreement is re-checked and returned.
EquivReport equivalent(const Formula& f, const Formula& g, const VarSet& vars,
                       const Signature& sig, std::size_t max_model, const Registry& reg = {},
                       const EquivOptions& options = {});

/// Ground truth for a sweep: the expected truth value on (model, team).
using TeamOracle = std::function<bool(const Model&, const Team&)>;

/// Like equivalent(), with g replaced by an arbitrary oracle; the report's
/// right value is the oracle's answer.
EquivReport sweep_against(const Formula& f, const TeamOracle& oracle, const VarSet& vars,
                          const Signature& sig, std::size_t max_model, const Registry& reg = {},
                          const EquivOptions& options = {});

/// Verdict line, then the counterexample model and team in file format.
void write_report(std::ostream& out, const EquivReport& report);
void write_report(std::ostream& out, const BoundCheck& check);
void write_report(std::ostream& out, const HierarchyReport& report);

}  // namespace teamlog
