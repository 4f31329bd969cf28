#pragma once

#include <iosfwd>
#include <string>

#include "teamlog/structures.hpp"

namespace teamlog {

// Model files:
//
//   domain 3
//   rel P arity 1
//   0
//   2
//   end
//
// Team files:
//
//   vars x y
//   0 1
//   2 2
//
// Tuples and assignments are space-separated element indices. A line
// holding just "()" stands for the empty tuple (0-ary relations, or the
// single assignment of {∅}). Blank lines and lines starting with '#' are
// ignored.

/// Reads a model; when `sig` is non-empty the model must interpret exactly
/// the relations of `sig` with matching arities.
Model read_model(std::istream& in, const Signature& sig = {});
Model read_model_file(const std::string& path, const Signature& sig = {});
void write_model(std::ostream& out, const Model& m);

Team read_team(std::istream& in, std::size_t domain_size);
Team read_team_file(const std::string& path, std::size_t domain_size);
void write_team(std::ostream& out, const Team& t);

}  // namespace teamlog
