#include "teamlog/parser.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <vector>

namespace teamlog {

namespace {

enum class Tok {
  Ident,
  Int,
  LParen,
  RParen,
  LBrack,
  RBrack,
  Comma,
  Semi,
  Colon,
  Amp,
  Bar,
  BarBar,
  Arrow,
  Tilde,
  Diamond,
  Bang,
  Equal,
  NotEqual,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      out.push_back({Tok::Ident, std::string(s.substr(start, i - start)), start});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      out.push_back({Tok::Int, std::string(s.substr(start, i - start)), start});
      continue;
    }
    auto two = [&](char next) { return i + 1 < s.size() && s[i + 1] == next; };
    Tok kind;
    std::size_t len = 1;
    switch (c) {
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case '[': kind = Tok::LBrack; break;
      case ']': kind = Tok::RBrack; break;
      case ',': kind = Tok::Comma; break;
      case ';': kind = Tok::Semi; break;
      case ':': kind = Tok::Colon; break;
      case '&': kind = Tok::Amp; break;
      case '~': kind = Tok::Tilde; break;
      case '=': kind = Tok::Equal; break;
      case '|':
        if (two('|')) {
          kind = Tok::BarBar;
          len = 2;
        } else {
          kind = Tok::Bar;
        }
        break;
      case '-':
        if (!two('>')) throw ParseError("expected '->'", i);
        kind = Tok::Arrow;
        len = 2;
        break;
      case '<':
        if (!two('>')) throw ParseError("expected '<>'", i);
        kind = Tok::Diamond;
        len = 2;
        break;
      case '!':
        if (two('=')) {
          kind = Tok::NotEqual;
          len = 2;
        } else {
          kind = Tok::Bang;
        }
        break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", i);
    }
    out.push_back({kind, std::string(s.substr(i, len)), start});
    i += len;
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

const std::map<std::string, AtomKind>& atom_keywords() {
  static const std::map<std::string, AtomKind> table = {
      {"const", AtomKind::Const},         {"dep", AtomKind::Dep},
      {"inc", AtomKind::Inc},             {"ind", AtomKind::Ind},
      {"all", AtomKind::All},             {"ncon", AtomKind::NCon},
      {"ndep", AtomKind::NDep},           {"geq", AtomKind::Geq},
      {"ninc", AtomKind::NInc},           {"nind", AtomKind::NInd},
      {"count_eq", AtomKind::CountEq},    {"count_neq", AtomKind::CountNeq},
      {"cocount_eq", AtomKind::CoCountEq}, {"cocount_neq", AtomKind::CoCountNeq},
  };
  return table;
}

bool is_reserved(const std::string& word) {
  return word == "exists" || word == "forall" || word == "top" || word == "bot";
}

bool is_variable_name(const std::string& word) {
  return !word.empty() && word[0] >= 'a' && word[0] <= 'z' && !is_reserved(word);
}

bool is_relation_name(const std::string& word) {
  return !word.empty() && word[0] >= 'A' && word[0] <= 'Z' && word != "NE";
}

class Parser {
 public:
  Parser(std::string_view text, const Signature& sig) : tokens_(tokenize(text)), sig_(sig) {}

  Formula run() {
    Formula f = implication();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }
  const Token& next() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  bool accept(Tok kind) {
    if (peek().kind != kind) return false;
    next();
    return true;
  }
  void expect(Tok kind, const char* what) {
    if (!accept(kind)) fail(std::string("expected ") + what);
  }
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, peek().pos);
  }

  Formula implication() {
    Formula lhs = classical_or();
    if (accept(Tok::Arrow)) return Formula::Implies(lhs, implication());
    return lhs;
  }

  Formula classical_or() {
    Formula f = tensor_or();
    while (accept(Tok::BarBar)) f = Formula::ClassicalOr(f, tensor_or());
    return f;
  }

  Formula tensor_or() {
    Formula f = conjunction_level();
    while (accept(Tok::Bar)) f = Formula::Or(f, conjunction_level());
    return f;
  }

  Formula conjunction_level() {
    Formula f = prefix();
    while (accept(Tok::Amp)) f = Formula::And(f, prefix());
    return f;
  }

  Formula prefix() {
    if (accept(Tok::Tilde)) return Formula::Not(prefix());
    if (accept(Tok::Diamond)) return Formula::Possibly(prefix());
    if (peek().kind == Tok::Ident && (peek().text == "exists" || peek().text == "forall")) {
      bool existential = next().text == "exists";
      Variable v = variable();
      Formula body = prefix();
      return existential ? Formula::Exists(v, body) : Formula::Forall(v, body);
    }
    return primary();
  }

  Variable variable() {
    if (peek().kind != Tok::Ident || !is_variable_name(peek().text)) fail("expected a variable");
    return next().text;
  }

  Formula primary() {
    const Token& t = peek();
    if (accept(Tok::LParen)) {
      Formula f = implication();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (t.kind == Tok::LBrack) {
      std::size_t at = t.pos;
      next();
      Formula body = implication();
      expect(Tok::RBrack, "']'");
      try {
        return Formula::Bracket(body);
      } catch (const FragmentError& e) {
        throw ParseError(e.what(), at);
      }
    }
    if (accept(Tok::Bang)) {
      if (peek().kind != Tok::Ident || !is_relation_name(peek().text))
        fail("'!' applies only to relation literals");
      return literal(false);
    }
    if (t.kind != Tok::Ident) fail("expected a formula");
    if (t.text == "NE") {
      next();
      return Formula::NE();
    }
    if (t.text == "top") {
      next();
      return Formula::top();
    }
    if (t.text == "bot") {
      next();
      return Formula::bottom();
    }
    if (t.text == "D" && peek(1).kind == Tok::Colon) return custom_atom();
    if (is_relation_name(t.text)) return literal(true);
    if (peek(1).kind == Tok::LParen) {
      auto it = atom_keywords().find(t.text);
      if (it == atom_keywords().end()) fail("unknown atom '" + t.text + "'");
      return builtin_atom(it->second);
    }
    Variable a = variable();
    if (accept(Tok::Equal)) return Formula::Eq(a, variable());
    if (accept(Tok::NotEqual)) return Formula::Neq(a, variable());
    fail("expected '=' or '!='");
  }

  Formula literal(bool positive) {
    std::size_t at = peek().pos;
    std::string rel = next().text;
    VarTuple args;
    if (accept(Tok::LParen)) {
      args = tuple();
      expect(Tok::RParen, "')'");
    }
    if (!sig_.contains(rel)) throw ParseError("unknown relation " + rel, at);
    if (sig_.arity(rel) != static_cast<int>(args.size()))
      throw ParseError("arity mismatch for " + rel + ": expected " +
                           std::to_string(sig_.arity(rel)) + ", got " + std::to_string(args.size()),
                       at);
    return positive ? Formula::Lit(rel, args) : Formula::NegLit(rel, args);
  }

  // Variables separated by blanks or commas; stops before ';', ')' or an
  // integer parameter.
  VarTuple tuple() {
    VarTuple out;
    while (peek().kind == Tok::Ident) {
      out.push_back(variable());
      if (peek().kind == Tok::Comma && peek(1).kind == Tok::Ident) next();
    }
    return out;
  }

  Formula builtin_atom(AtomKind kind) {
    std::size_t at = peek().pos;
    next();
    expect(Tok::LParen, "'('");
    std::vector<VarTuple> groups;
    int groups_wanted = atom_group_count(kind);
    for (int g = 0; g < groups_wanted; ++g) {
      if (g > 0) expect(Tok::Semi, "';'");
      groups.push_back(tuple());
    }
    int parameter = 0;
    if (atom_has_parameter(kind)) {
      expect(Tok::Comma, "','");
      if (peek().kind != Tok::Int) fail("expected a non-negative integer");
      parameter = std::stoi(next().text);
    }
    expect(Tok::RParen, "')'");
    try {
      return Formula::MakeAtom(kind, std::move(groups), parameter);
    } catch (const Error& e) {
      throw ParseError(e.what(), at);
    }
  }

  Formula custom_atom() {
    next();  // D
    next();  // :
    if (peek().kind != Tok::Ident) fail("expected a dependency name");
    std::string name = next().text;
    VarTuple args;
    if (accept(Tok::LParen)) {
      args = tuple();
      expect(Tok::RParen, "')'");
    }
    return Formula::Custom(name, args);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const Signature& sig_;
};

}  // namespace

Formula parse(std::string_view text, const Signature& sig) { return Parser(text, sig).run(); }

}  // namespace teamlog
