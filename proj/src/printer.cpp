#include "teamlog/parser.hpp"

namespace teamlog {

namespace {

// Binding strength, loosest first. Must mirror the parser's grammar levels.
int level(const Node& n) {
  switch (n.op) {
    case Op::IntImpl: return 1;
    case Op::ClassicalOr: return 2;
    case Op::TensorOr: return 3;
    case Op::And: return 4;
    case Op::ContraNeg:
    case Op::Possibly:
    case Op::Exists:
    case Op::Forall: return 5;
    default: return 6;
  }
}

std::string join(const VarTuple& vars, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) out += sep;
    out += vars[i];
  }
  return out;
}

void emit(const Node& n, std::string& out);

void emit_wrapped(const Node& n, bool parens, std::string& out) {
  if (parens) out += '(';
  emit(n, out);
  if (parens) out += ')';
}

void emit_atom(const Node& n, std::string& out) {
  if (n.atom == AtomKind::NE) {
    out += "NE";
    return;
  }
  if (n.atom == AtomKind::Custom) {
    out += "D:" + n.name + "(" + join(n.groups[0], ", ") + ")";
    return;
  }
  out += atom_keyword(n.atom);
  out += '(';
  if (n.groups.size() == 1) {
    out += join(n.groups[0], atom_has_parameter(n.atom) ? " " : ", ");
  } else {
    for (std::size_t g = 0; g < n.groups.size(); ++g) {
      if (g) out += "; ";
      out += join(n.groups[g], " ");
    }
  }
  if (atom_has_parameter(n.atom)) out += ", " + std::to_string(n.parameter);
  out += ')';
}

void emit(const Node& n, std::string& out) {
  int lv = level(n);
  switch (n.op) {
    case Op::PosLit:
    case Op::NegLit:
      if (n.op == Op::NegLit) out += '!';
      out += n.name + "(" + join(n.groups[0], ", ") + ")";
      return;
    case Op::Eq:
      out += n.groups[0][0] + " = " + n.groups[0][1];
      return;
    case Op::Neq:
      out += n.groups[0][0] + " != " + n.groups[0][1];
      return;
    case Op::Atom:
      emit_atom(n, out);
      return;
    case Op::Bracket:
      out += '[';
      emit(*n.left, out);
      out += ']';
      return;
    case Op::ContraNeg:
    case Op::Possibly:
      out += n.op == Op::ContraNeg ? "~" : "<>";
      emit_wrapped(*n.left, level(*n.left) < 5 || n.left->op == Op::Eq || n.left->op == Op::Neq,
                   out);
      return;
    case Op::Exists:
    case Op::Forall:
      out += n.op == Op::Exists ? "exists " : "forall ";
      out += n.name + " ";
      emit_wrapped(*n.left, n.left->op != Op::Exists && n.left->op != Op::Forall, out);
      return;
    case Op::IntImpl:
      emit_wrapped(*n.left, level(*n.left) <= lv, out);
      out += " -> ";
      emit_wrapped(*n.right, level(*n.right) < lv, out);
      return;
    case Op::ClassicalOr:
    case Op::TensorOr:
    case Op::And: {
      const char* sym = n.op == Op::And ? " & " : n.op == Op::TensorOr ? " | " : " || ";
      emit_wrapped(*n.left, level(*n.left) < lv, out);
      out += sym;
      emit_wrapped(*n.right, level(*n.right) <= lv, out);
      return;
    }
  }
}

}  // namespace

std::string print(const Formula& f) {
  std::string out;
  emit(*f, out);
  return out;
}

}  // namespace teamlog
