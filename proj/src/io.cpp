#include "teamlog/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace teamlog {

namespace {

struct LineReader {
  std::istream& in;
  std::size_t number = 0;

  // Next meaningful line, trimmed; false at end of input.
  bool next(std::string& line) {
    while (std::getline(in, line)) {
      ++number;
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      auto last = line.find_last_not_of(" \t\r");
      line = line.substr(first, last - first + 1);
      if (line[0] == '#') continue;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw Error("line " + std::to_string(number) + ": " + message);
  }
};

Tuple parse_tuple(LineReader& r, const std::string& line, std::size_t width,
                  std::size_t domain_size) {
  Tuple out;
  if (line == "()") {
    if (width != 0) r.fail("empty tuple where " + std::to_string(width) + " values are needed");
    return out;
  }
  std::istringstream words(line);
  std::string w;
  while (words >> w) {
    std::size_t used = 0;
    long value = 0;
    try {
      value = std::stol(w, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != w.size() || value < 0) r.fail("expected an element index, got '" + w + "'");
    if (static_cast<std::size_t>(value) >= domain_size)
      r.fail("element " + w + " outside the domain");
    out.push_back(static_cast<Element>(value));
  }
  if (out.size() != width)
    r.fail("expected " + std::to_string(width) + " values, got " + std::to_string(out.size()));
  return out;
}

void write_tuple(std::ostream& out, std::span<const Element> t) {
  if (t.empty()) {
    out << "()\n";
    return;
  }
  for (std::size_t i = 0; i < t.size(); ++i) out << (i ? " " : "") << t[i];
  out << '\n';
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return in;
}

}  // namespace

Model read_model(std::istream& in, const Signature& sig) {
  LineReader r{in};
  std::string line;
  if (!r.next(line)) r.fail("empty model file");
  std::istringstream head(line);
  std::string keyword;
  long size = 0;
  if (!(head >> keyword >> size) || keyword != "domain" || size < 1)
    r.fail("expected 'domain n' with n >= 1");
  Model m(static_cast<std::size_t>(size));
  while (r.next(line)) {
    std::istringstream words(line);
    std::string rel_kw, name, arity_kw;
    long arity = -1;
    if (!(words >> rel_kw >> name >> arity_kw >> arity) || rel_kw != "rel" ||
        arity_kw != "arity" || arity < 0)
      r.fail("expected 'rel NAME arity k'");
    if (m.relations().count(name)) r.fail("relation " + name + " declared twice");
    try {
      m.add_relation(name, static_cast<int>(arity));
    } catch (const Error& e) {
      r.fail(e.what());
    }
    bool closed = false;
    while (r.next(line)) {
      if (line == "end") {
        closed = true;
        break;
      }
      m.insert(name, parse_tuple(r, line, static_cast<std::size_t>(arity), m.size()));
    }
    if (!closed) r.fail("relation " + name + " is not terminated by 'end'");
  }
  if (!sig.empty()) {
    for (const auto& [name, arity] : sig.relations()) {
      auto it = m.relations().find(name);
      if (it == m.relations().end()) throw Error("model does not interpret relation " + name);
      if (it->second.arity != arity)
        throw Error("relation " + name + " has arity " + std::to_string(it->second.arity) +
                    " in the model but " + std::to_string(arity) + " in the signature");
    }
    for (const auto& [name, rel] : m.relations())
      if (!sig.contains(name)) throw Error("model interprets undeclared relation " + name);
  }
  return m;
}

Model read_model_file(const std::string& path, const Signature& sig) {
  auto in = open(path);
  return read_model(in, sig);
}

void write_model(std::ostream& out, const Model& m) {
  out << "domain " << m.size() << '\n';
  for (const auto& [name, rel] : m.relations()) {
    out << "rel " << name << " arity " << rel.arity << '\n';
    for (const auto& t : rel.tuples) write_tuple(out, t);
    out << "end\n";
  }
}

Team read_team(std::istream& in, std::size_t domain_size) {
  LineReader r{in};
  std::string line;
  if (!r.next(line)) r.fail("empty team file");
  std::istringstream head(line);
  std::string keyword;
  head >> keyword;
  if (keyword != "vars") r.fail("expected 'vars ...'");
  std::vector<Variable> vars;
  for (std::string v; head >> v;) vars.push_back(v);
  std::vector<Tuple> rows;
  while (r.next(line)) rows.push_back(parse_tuple(r, line, vars.size(), domain_size));
  return Team(vars, rows);
}

Team read_team_file(const std::string& path, std::size_t domain_size) {
  auto in = open(path);
  return read_team(in, domain_size);
}

void write_team(std::ostream& out, const Team& t) {
  out << "vars";
  for (const auto& v : t.variables()) out << ' ' << v;
  out << '\n';
  for (std::size_t i = 0; i < t.size(); ++i) write_tuple(out, t.row(i));
}

}  // namespace teamlog
