#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "teamlog/formula.hpp"

namespace teamlog {

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at offset " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Parses the concrete formula syntax.
///
///   impl    := cor ( "->" impl )?
///   cor     := tor ( "||" tor )*
///   tor     := conj ( "|" conj )*
///   conj    := prefix ( "&" prefix )*
///   prefix  := "~" prefix | "<>" prefix | ("exists"|"forall") var prefix | primary
///   primary := "(" impl ")" | "[" impl "]" | "NE" | "top" | "bot"
///            | var ("=" | "!=") var | "!"? Rel ( "(" vars ")" )?
///            | keyword "(" groups ")" | "D:" name "(" vars ")"
///
/// Tuple elements may be separated by commas or blanks; ";" separates
/// argument groups; geq and the counting atoms end with ", n".
/// Literals are checked against `sig`.
Formula parse(std::string_view text, const Signature& sig = {});

/// Inverse of parse: parse(print(f), sig) == f for every well-formed f.
std::string print(const Formula& f);

}  // namespace teamlog
