#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "teamlog/analysis.hpp"
#include "teamlog/io.hpp"
#include "teamlog/parser.hpp"
#include "teamlog/team_eval.hpp"
#include "teamlog/transforms.hpp"

namespace teamlog::cli {

namespace {

struct Config {
  std::vector<std::string> rels;
  std::vector<std::string> customs;
  std::vector<std::string> upward;
  std::string model_path;
  std::string team_path;
  std::size_t domain = 0;
  std::size_t max_model = 3;
  std::string vars;
  bool nonempty = false;
  bool implies = false;
  std::size_t verify = 0;
  std::vector<std::string> gammas;
  std::string cex_prefix;
};

std::string read_text(const std::string& arg) {
  if (arg.empty() || arg[0] != '@') return arg;
  std::ifstream in(arg.substr(1));
  if (!in) throw Error("cannot open " + arg.substr(1));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Signature signature_of(const Config& cfg) {
  Signature sig;
  for (const auto& decl : cfg.rels) {
    auto colon = decl.find(':');
    if (colon == std::string::npos) throw Error("--rel expects NAME:ARITY, got '" + decl + "'");
    int arity = 0;
    try {
      std::size_t used = 0;
      arity = std::stoi(decl.substr(colon + 1), &used);
      if (used != decl.size() - colon - 1) throw Error("");
    } catch (const std::exception&) {
      throw Error("--rel expects NAME:ARITY, got '" + decl + "'");
    }
    if (sig.contains(decl.substr(0, colon)))
      throw Error("relation " + decl.substr(0, colon) + " declared twice");
    sig.add(decl.substr(0, colon), arity);
  }
  return sig;
}

Registry registry_of(const Config& cfg) {
  Registry reg;
  for (const auto& decl : cfg.customs) {
    auto first = decl.find(':');
    auto second = first == std::string::npos ? first : decl.find(':', first + 1);
    if (second == std::string::npos)
      throw Error("--custom expects NAME:ARITY:SENTENCE, got '" + decl + "'");
    std::string name = decl.substr(0, first);
    int arity = 0;
    try {
      arity = std::stoi(decl.substr(first + 1, second - first - 1));
    } catch (const std::exception&) {
      throw Error("--custom expects NAME:ARITY:SENTENCE, got '" + decl + "'");
    }
    Claim claim = std::count(cfg.upward.begin(), cfg.upward.end(), name) ? Claim::Yes
                                                                         : Claim::Unknown;
    reg.add(make_dependency(name, arity, read_text(decl.substr(second + 1)), claim));
  }
  for (const auto& name : cfg.upward)
    if (!reg.find(name)) throw Error("--upward-closed names unknown dependency " + name);
  return reg;
}

VarSet parse_vars(const std::string& text) {
  VarSet out;
  std::string cur;
  for (char c : text + ",") {
    if (c == ',' || c == ' ') {
      if (!cur.empty()) out.insert(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

VarTuple parse_tuple(const std::string& text) {
  VarTuple out;
  std::string cur;
  for (char c : text + ",") {
    if (c == ',' || c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  body(out);
}

// Prints the verification outcome; returns the exit code.
int report_verification(const EquivReport& r, const Formula& left, const std::string& right,
                        const Config& cfg, std::ostream& out, bool headline = true) {
  if (r.holds) {
    out << (r.mode == Comparison::Implies ? "verified implication (" : "verified (")
        << (r.filter == TeamFilter::NonEmpty ? "nonempty teams" : "all teams")
        << ", |M|<=" << r.max_model << ")\n";
    return 0;
  }
  if (headline) out << "verification failed\n";
  out << "left: " << print(left) << '\n';
  out << "right: " << right << '\n';
  write_report(out, r);
  if (!cfg.cex_prefix.empty()) {
    write_file(cfg.cex_prefix + ".model", [&](std::ostream& o) {
      write_model(o, r.counterexample->model);
    });
    write_file(cfg.cex_prefix + ".team", [&](std::ostream& o) {
      write_team(o, r.counterexample->team);
    });
  }
  return 1;
}

EquivOptions equiv_options(const Config& cfg, TeamFilter default_filter = TeamFilter::All) {
  EquivOptions o;
  o.filter = cfg.nonempty ? TeamFilter::NonEmpty : default_filter;
  o.mode = cfg.implies ? Comparison::Implies : Comparison::Equivalent;
  return o;
}

VarSet sweep_vars(const Config& cfg, const std::vector<Formula>& formulas) {
  if (!cfg.vars.empty()) return parse_vars(cfg.vars);
  VarSet out;
  for (const auto& f : formulas) {
    auto fv = free_variables(f);
    out.insert(fv.begin(), fv.end());
  }
  return out;
}

int cmd_eval(const Config& cfg, const std::string& text, std::ostream& out) {
  Signature sig = signature_of(cfg);
  Registry reg = registry_of(cfg);
  if (!cfg.model_path.empty() && cfg.domain)
    throw Error("give either --model or --domain, not both");
  if (cfg.model_path.empty() && !cfg.domain) throw Error("eval needs --model or --domain");
  Model m = !cfg.model_path.empty() ? read_model_file(cfg.model_path, sig) : Model(cfg.domain);
  if (cfg.model_path.empty())
    for (const auto& [name, arity] : sig.relations()) m.add_relation(name, arity);
  if (sig.empty()) sig = m.signature();
  Formula f = parse(read_text(text), sig);
  Team t = cfg.team_path.empty() ? Team::unit() : read_team_file(cfg.team_path, m.size());
  bool value = eval(m, t, f, reg);
  out << (value ? "true" : "false") << '\n';
  return value ? 0 : 1;
}

int cmd_parse(const Config& cfg, const std::string& text, std::ostream& out) {
  Signature sig = signature_of(cfg);
  Formula f = parse(read_text(text), sig);
  std::string printed = print(f);
  out << printed << '\n';
  if (!(parse(printed, sig) == f)) throw Error("printed form does not re-parse to the same formula");
  return 0;
}

CountingAtom counting_atom_of(const std::string& kind) {
  if (kind == "eq") return CountingAtom::Eq;
  if (kind == "neq") return CountingAtom::Neq;
  if (kind == "co_eq" || kind == "coeq") return CountingAtom::CoEq;
  if (kind == "co_neq" || kind == "coneq") return CountingAtom::CoNeq;
  throw Error("unknown counting kind " + kind);
}

int parse_count(const std::string& s) {
  try {
    std::size_t used = 0;
    int k = std::stoi(s, &used);
    if (used == s.size() && k >= 0) return k;
  } catch (const std::exception&) {
  }
  throw Error("expected a non-negative count, got '" + s + "'");
}

// Formula stating the same cardinality condition with built-in atoms.
Formula counting_reference(const std::string& kind, int k, const Variable& v) {
  auto cocount_at_most = [&](int bound) {
    std::vector<Formula> parts;
    for (int j = 0; j <= bound; ++j) parts.push_back(Formula::CoCountEq(v, j));
    return classical_disjunction(parts);
  };
  if (kind == "le") return Formula::Not(Formula::Geq({v}, k + 1));
  if (kind == "ge") return Formula::Geq({v}, k);
  if (kind == "co_le" || kind == "cole") return cocount_at_most(k);
  if (kind == "co_ge" || kind == "coge")
    return k == 0 ? Formula::top() : Formula::Not(cocount_at_most(k - 1));
  CountingAtom atom = counting_atom_of(kind);
  switch (atom) {
    case CountingAtom::Eq:
      return Formula::CountEq(v, k);
    case CountingAtom::Neq:
      return Formula::CountNeq(v, k);
    case CountingAtom::CoEq:
      return Formula::CoCountEq(v, k);
    case CountingAtom::CoNeq:
      return Formula::CoCountNeq(v, k);
  }
  throw Error("unknown counting kind " + kind);
}

int cmd_transform(const Config& cfg, const std::string& name, const std::vector<std::string>& args,
                  std::ostream& out) {
  Signature sig = signature_of(cfg);
  Registry reg = registry_of(cfg);
  auto need = [&](std::size_t count, const char* usage) {
    if (args.size() != count) throw Error(std::string("usage: transform ") + name + " " + usage);
  };
  auto formula_arg = [&](std::size_t i) { return parse(read_text(args[i]), sig); };

  Formula input;       // what the output is compared against
  Formula output;
  TeamFilter filter = TeamFilter::All;
  bool implication = false;
  std::optional<TeamOracle> oracle;
  std::string oracle_name;

  if (name == "flatten") {
    need(1, "FORMULA");
    input = formula_arg(0);
    output = flatten(input);
    implication = true;
  } else if (name == "dualneg") {
    need(1, "FORMULA");
    Formula f = formula_arg(0);
    output = dual_negate(f);
    // Pointwise falsity of a flat formula: no nonempty subteam satisfies it.
    input = Formula::Not(Formula::Possibly(f));
  } else if (name == "restrict") {
    need(2, "FORMULA THETA");
    Formula f = formula_arg(0);
    Formula theta = formula_arg(1);
    output = restrict_formula(f, theta);
    input = output;
    oracle = [f, theta, &reg](const Model& m, const Team& t) {
      return eval(m, restrict(m, t, theta), f, reg);
    };
    oracle_name = print(f) + " on the team restricted to " + print(theta);
  } else if (name == "dnf") {
    need(1, "FORMULA");
    input = formula_arg(0);
    auto parts = to_classical_dnf(input);
    for (const auto& p : parts) out << print(p) << '\n';
    output = classical_disjunction(parts);
  } else if (name == "negelim") {
    need(1, "FORMULA");
    input = formula_arg(0);
    output = neg_eliminate(input);
  } else if (name == "depdef") {
    need(2, "\"V...\" \"W...\"");
    VarTuple v = parse_tuple(args[0]), w = parse_tuple(args[1]);
    output = dep_via_neg_const(v, w);
    input = Formula::Dep(v, w);
  } else if (name == "nedef") {
    if (args.size() > 1) throw Error("usage: transform nedef [neg|all]");
    std::string how = args.empty() ? "all" : args[0];
    if (how == "all")
      output = ne_via_totality();
    else if (how == "neg")
      output = ne_via_neg();
    else
      throw Error("nedef takes 'all' or 'neg'");
    input = Formula::NE();
  } else if (name == "countdef") {
    need(3, "eq|neq|co_eq|co_neq|le|ge|co_le|co_ge K VAR");
    const std::string& kind = args[0];
    int k = parse_count(args[1]);
    const Variable& v = args[2];
    if (kind == "le" || kind == "ge" || kind == "co_le" || kind == "cole" || kind == "co_ge" ||
        kind == "coge") {
      CountingKind ck = kind == "le"   ? CountingKind::Le
                        : kind == "ge" ? CountingKind::Ge
                        : (kind == "co_le" || kind == "cole") ? CountingKind::CoLe
                                                              : CountingKind::CoGe;
      output = counting_formula(ck, k, v);
    } else {
      output = counting_atom_definition(counting_atom_of(kind), k, v);
    }
    input = counting_reference(kind, k, v);
    filter = TeamFilter::NonEmpty;
  } else if (name == "compile-unary") {
    need(2, "DESCRIPTION VAR");
    auto d = parse_unary_description(read_text(args[0]));
    output = compile_unary_dependency(d, args[1]);
    Variable dname = "compiled";
    while (reg.find(dname)) dname += "_";
    reg.add({dname, 1, unary_description_sentence(d), Claim::Unknown});
    input = Formula::Custom(dname, {args[1]});
    filter = TeamFilter::NonEmpty;
  } else if (name == "brackets") {
    need(1, "FORMULA");
    input = formula_arg(0);
    std::vector<BracketExtraction> parts;
    try {
      parts.push_back(extract_brackets(input));
    } catch (const FragmentError&) {
      if (contains_op(input, Op::ContraNeg) || contains_op(input, Op::IntImpl)) throw;
      parts = extract_brackets_per_disjunct(input);
    }
    std::vector<Formula> combined;
    for (const auto& p : parts) {
      out << "sentences:";
      for (const auto& s : p.sentences) out << " [" << print(s) << "]";
      out << "\ncore: " << print(p.core) << '\n';
      combined.push_back(p.combined());
    }
    output = classical_disjunction(combined);
  } else {
    throw Error("unknown transform '" + name + "'");
  }

  if (name != "dnf" && name != "brackets") out << print(output) << '\n';
  if (!cfg.verify) return 0;

  Config vcfg = cfg;
  if (implication) vcfg.implies = true;
  EquivOptions options = equiv_options(vcfg, filter);
  VarSet vars = sweep_vars(cfg, {input, output});
  if (oracle) {
    auto r = sweep_against(output, *oracle, vars, sig, cfg.verify, reg, options);
    return report_verification(r, output, oracle_name, cfg, out);
  }
  // Left side is the input so --implies reads "input implies output".
  auto r = equivalent(input, output, vars, sig, cfg.verify, reg, options);
  return report_verification(r, input, print(output), cfg, out);
}

int cmd_equiv(const Config& cfg, const std::string& a, const std::string& b, std::ostream& out) {
  Signature sig = signature_of(cfg);
  Registry reg = registry_of(cfg);
  Formula f = parse(read_text(a), sig);
  Formula g = parse(read_text(b), sig);
  VarSet vars = sweep_vars(cfg, {f, g});
  auto r = equivalent(f, g, vars, sig, cfg.max_model, reg, equiv_options(cfg));
  if (r.holds) {
    write_report(out, r);
    return 0;
  }
  return report_verification(r, f, print(g), cfg, out, false);
}

int cmd_bounds_check(const Config& cfg, const std::string& text, std::ostream& out) {
  Signature sig = signature_of(cfg);
  Registry reg = registry_of(cfg);
  Formula f = parse(read_text(text), sig);
  GammaTable g = GammaTable::standard();
  g.set_custom_default(false);
  for (const auto& entry : cfg.gammas) {
    auto eq = entry.find('=');
    if (eq == std::string::npos) throw Error("--gamma expects NAME=BOUND, got '" + entry + "'");
    g.set_by_name(entry.substr(0, eq), GammaFn::parse(entry.substr(eq + 1)));
  }
  nu_bound(f, 1, g);  // fails early on a missing entry
  auto check = check_boundedness(f, cfg.max_model, g, reg, sig);
  write_report(out, check);
  return check.all_hold() ? 0 : 1;
}

int cmd_bounds_hierarchy(const std::vector<std::string>& args, std::ostream& out) {
  if (args.size() != 3) throw Error("usage: bounds hierarchy K' K Q");
  int kprime = parse_count(args[0]);
  int k = parse_count(args[1]);
  int q = parse_count(args[2]);
  auto r = hierarchy_witness(kprime, q, k);
  write_report(out, r);
  return r.totality_holds && r.exceeds ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Team-semantics workbench: evaluation, rewriting and brute-force checks", "teamlog"};
  app.require_subcommand(1);
  Config cfg;

  auto add_sig = [&](CLI::App* sub) {
    sub->add_option("--rel", cfg.rels, "Relation declaration NAME:ARITY (repeatable)");
    sub->add_option("--custom", cfg.customs,
                    "Dependency NAME:ARITY:SENTENCE over the relation R (repeatable)");
    sub->add_option("--upward-closed", cfg.upward, "Declare a custom dependency upward closed");
  };
  auto add_sweep = [&](CLI::App* sub) {
    sub->add_option("--vars", cfg.vars, "Team variables for the sweep, e.g. x,y");
    sub->add_flag("--nonempty-teams", cfg.nonempty, "Skip the empty team");
    sub->add_option("--cex", cfg.cex_prefix, "Write a counterexample to PREFIX.model/.team");
  };

  std::string formula, formula2, transform_name;
  std::vector<std::string> rest;

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a formula on a model and team");
  eval_cmd->add_option("formula", formula, "Formula text or @file")->required();
  eval_cmd->add_option("--model", cfg.model_path, "Model file");
  eval_cmd->add_option("--domain", cfg.domain, "Use an empty-signature model of this size");
  eval_cmd->add_option("--team", cfg.team_path, "Team file (default: the team {∅})");
  add_sig(eval_cmd);

  auto* parse_cmd = app.add_subcommand("parse", "Parse and pretty-print a formula");
  parse_cmd->add_option("formula", formula, "Formula text or @file")->required();
  add_sig(parse_cmd);

  auto* transform_cmd = app.add_subcommand("transform", "Apply a formula rewriter");
  transform_cmd
      ->add_option("name", transform_name,
                   "flatten, dualneg, restrict, dnf, negelim, depdef, nedef, countdef, "
                   "compile-unary or brackets")
      ->required();
  transform_cmd->add_option("args", rest, "Rewriter arguments");
  transform_cmd->add_option("--verify", cfg.verify, "Check the result on models up to size N");
  transform_cmd->add_flag("--implies", cfg.implies, "Check only input => output");
  add_sig(transform_cmd);
  add_sweep(transform_cmd);

  auto* equiv_cmd = app.add_subcommand("equiv", "Brute-force equivalence check");
  equiv_cmd->add_option("left", formula, "Formula text or @file")->required();
  equiv_cmd->add_option("right", formula2, "Formula text or @file")->required();
  equiv_cmd->add_option("--max-model", cfg.max_model, "Largest model size")->check(CLI::PositiveNumber);
  equiv_cmd->add_flag("--implies", cfg.implies, "Check only left => right");
  add_sig(equiv_cmd);
  add_sweep(equiv_cmd);

  auto* bounds_cmd = app.add_subcommand("bounds", "Boundedness analysis");
  bounds_cmd->require_subcommand(1);
  auto* check_cmd = bounds_cmd->add_subcommand("check", "Sweep witness sizes against nu");
  check_cmd->add_option("formula", formula, "Formula text or @file")->required();
  check_cmd->add_option("--max-model", cfg.max_model, "Largest model size")->check(CLI::PositiveNumber);
  check_cmd->add_option("--gamma", cfg.gammas, "Bound NAME=nk|const:c|lin:c (repeatable)");
  add_sig(check_cmd);
  auto* hierarchy_cmd = bounds_cmd->add_subcommand("hierarchy", "Totality hierarchy witness");
  hierarchy_cmd->add_option("numbers", rest, "K' K Q")->expected(3)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (eval_cmd->parsed()) return cmd_eval(cfg, formula, out);
    if (parse_cmd->parsed()) return cmd_parse(cfg, formula, out);
    if (transform_cmd->parsed()) return cmd_transform(cfg, transform_name, rest, out);
    if (equiv_cmd->parsed()) return cmd_equiv(cfg, formula, formula2, out);
    if (check_cmd->parsed()) return cmd_bounds_check(cfg, formula, out);
    if (hierarchy_cmd->parsed()) return cmd_bounds_hierarchy(rest, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  err << "error: no command\n";
  return 2;
}

}  // namespace teamlog::cli
