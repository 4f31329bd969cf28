#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "teamlog/formula.hpp"
#include "teamlog/structures.hpp"

namespace teamlog {

enum class Claim { Yes, No, Unknown };

/// A first-order dependency notion: D v̄ holds in a team X over a model
/// with domain M iff (M, X(v̄)) satisfies `definition`, a sentence whose
/// only relation symbol is the `arity`-ary R.
struct DependencySpec {
  std::string name;
  int arity = 0;
  Formula definition;
  Claim claimed_upward_closed = Claim::Unknown;
};

/// Name of the relation symbol a custom definition talks about.
inline constexpr const char* kDependencyRelation = "R";

/// Parses `definition` over the signature {R: arity}.
DependencySpec make_dependency(const std::string& name, int arity, const std::string& definition,
                               Claim upward_closed = Claim::Unknown);

class Registry {
 public:
  struct Options {
    /// Lets 0-ary definitions mention the evaluation model's relations
    /// instead of being restricted to the empty signature.
    bool nullary_model_signature = false;
  };

  Registry() = default;
  explicit Registry(Options options) : options_(options) {}

  /// Throws on duplicate or reserved names and malformed definitions.
  void add(DependencySpec spec);
  const DependencySpec* find(const std::string& name) const;
  const DependencySpec& at(const std::string& name) const;
  const std::map<std::string, DependencySpec>& specs() const { return specs_; }
  const Options& options() const { return options_; }

 private:
  Options options_;
  std::map<std::string, DependencySpec> specs_;
};

/// Functional form of Registry::add.
Registry register_dependency(Registry reg, DependencySpec spec);

struct EvalOptions {
  /// Evaluate first-order subformulas pointwise (Tarski per assignment)
  /// instead of through the team rules.
  bool flat_shortcut = true;
  bool memoize = true;
  /// Upper bound on recursive satisfaction checks per top-level call.
  std::uint64_t work_limit = 200'000'000;
};

/// M ⊨_X f under lax team semantics.
bool eval(const Model& m, const Team& t, const Formula& f, const Registry& reg = {},
          const EvalOptions& options = {});

/// Every Y ⊆ t with M ⊨_Y f, in subset-rank order (empty team first).
std::vector<Team> satisfying_subteams(const Model& m, const Team& t, const Formula& f,
                                      const Registry& reg = {}, std::size_t row_limit = 20);

struct UpwardClosureVerdict {
  bool holds = true;
  /// Set when a counterexample (M, R) ∈ D, R ⊆ S, (M, S) ∉ D was found.
  std::size_t domain_size = 0;
  std::set<Tuple> smaller;
  std::set<Tuple> larger;
};

/// Exhaustively tests upward closure over all domains of size 1..max_size.
UpwardClosureVerdict check_upward_closed(const DependencySpec& spec, std::size_t max_size);

/// Membership of (domain, relation) in the dependency.
bool dependency_holds(const DependencySpec& spec, std::size_t domain_size,
                      const std::set<Tuple>& relation);

}  // namespace teamlog
