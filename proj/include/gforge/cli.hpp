#pragma once
// Unified command-line front end. dispatch() parses an argument vector,
// routes to a module, and writes plain text to `out` (or a JSON envelope
// with --json). Exit codes: 0 success, 1 domain error (message on err),
// 2 usage error (message on err). Output is byte-deterministic.
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gforge/cutelim.hpp"
#include "gforge/error.hpp"
#include "gforge/kruskal.hpp"
#include "gforge/recipe.hpp"
#include "gforge/search.hpp"
#include "gforge/serialize.hpp"
#include "gforge/syntax_io.hpp"

namespace gforge {
namespace cli {

struct Parsed {
  std::vector<std::string> positional;
  std::map<std::string, std::string> options;
  std::set<std::string> flags;

  const std::string& option(const std::string& name) const {
    auto it = options.find(name);
    if (it == options.end()) throw ParseError("missing required option --" + name);
    return it->second;
  }
  std::string optionOr(const std::string& name, const std::string& dflt) const {
    auto it = options.find(name);
    return it == options.end() ? dflt : it->second;
  }
  bool flag(const std::string& name) const { return flags.count(name) > 0; }
  const std::string& pos(std::size_t i, const char* what) const {
    if (i >= positional.size()) throw ParseError(std::string("missing argument: ") + what);
    return positional[i];
  }
  void expectPositional(std::size_t n) const {
    if (positional.size() != n)
      throw ParseError("expected " + std::to_string(n) + " argument(s), got " +
                       std::to_string(positional.size()));
  }
};

// valued: options that take a value; bare: boolean flags.
inline Parsed parseArgs(const std::vector<std::string>& args, std::size_t from,
                        const std::set<std::string>& valued, const std::set<std::string>& bare) {
  Parsed p;
  for (std::size_t i = from; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.size() >= 2 && a[0] == '-' && a[1] == '-') {
      std::string name = a.substr(2);
      if (valued.count(name)) {
        if (i + 1 >= args.size()) throw ParseError("option --" + name + " needs a value");
        p.options[name] = args[++i];
      } else if (bare.count(name)) {
        p.flags.insert(name);
      } else {
        throw ParseError("unknown option --" + name);
      }
    } else {
      p.positional.push_back(a);
    }
  }
  return p;
}

inline std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void writeFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path);
  out << content;
}

inline std::string boolText(bool b) { return b ? "true" : "false"; }

inline std::uint64_t parseNat(const std::string& s, const char* what) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError(std::string(what) + " must be a nonnegative integer, got '" + s + "'");
  return std::stoull(s);
}

inline std::size_t probeBudget(const Parsed& p) {
  if (p.options.count("probe")) return parseNat(p.option("probe"), "--probe");
  if (const char* env = std::getenv("GFORGE_PROBE_BUDGET")) return parseNat(env, "GFORGE_PROBE_BUDGET");
  return 16;
}

inline std::string formatInfPath(const std::vector<InfIndex>& path) {
  std::string out = "[";
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i > 0) out += ",";
    out += printInfIndex(path[i]);
  }
  return out + "]";
}

inline void failOnViolations(const std::vector<InfViolation>& vs) {
  if (vs.empty()) return;
  std::string msg = "probe found " + std::to_string(vs.size()) + " violation(s):";
  for (const InfViolation& v : vs) msg += "\n  at " + formatInfPath(v.path) + ": " + v.message;
  throw Error(msg);
}

inline void failOnFinViolations(const std::vector<FinViolation>& vs) {
  if (vs.empty()) return;
  std::string msg = "derivation check failed with " + std::to_string(vs.size()) + " violation(s):";
  for (const FinViolation& v : vs) {
    msg += "\n  at [";
    for (std::size_t i = 0; i < v.path.size(); ++i) {
      if (i > 0) msg += ",";
      msg += std::to_string(v.path[i]);
    }
    msg += "]: " + v.message;
  }
  throw Error(msg);
}

inline std::shared_ptr<const CodedOrder> orderFromArgs(const Parsed& p) {
  if (p.options.count("size"))
    return std::make_shared<const CodedOrder>(
        codedOrderOfSize(parseNat(p.option("size"), "--size")));
  if (p.options.count("bound"))
    return std::make_shared<const CodedOrder>(
        buildCodedOrder(parseNat(p.option("bound"), "--bound")));
  throw ParseError("need --size N or --bound B to pick a coded order");
}

// Probe paths: ';'-separated walks, each a ','-separated list of indices.
// '#k' is a rule-local index (binary premise or chosen component); anything
// else is parsed as a closed term.
inline std::vector<std::vector<InfIndex>> parsePaths(const std::string& spec) {
  std::vector<std::vector<InfIndex>> paths;
  std::istringstream walks(spec);
  std::string walk;
  while (std::getline(walks, walk, ';')) {
    std::vector<InfIndex> path;
    std::istringstream toks(walk);
    std::string tok;
    while (std::getline(toks, tok, ',')) {
      std::size_t b = tok.find_first_not_of(" \t");
      if (b == std::string::npos) throw ParseError("empty path component in --paths");
      std::size_t e = tok.find_last_not_of(" \t");
      tok = tok.substr(b, e - b + 1);
      if (tok[0] == '#')
        path.push_back(static_cast<int>(parseNat(tok.substr(1), "path index")));
      else
        path.push_back(parseTerm(tok));
    }
    if (!path.empty()) paths.push_back(path);
  }
  return paths;
}

// ---- ord ---------------------------------------------------------------------------

inline void runOrd(const std::vector<std::string>& args, std::ostream& out) {
  if (args.size() < 2) throw ParseError("ord needs a subcommand: cmp, add, omega, tower, fromnat, succ, validate, enum, code");
  const std::string& sub = args[1];
  Parsed p = parseArgs(args, 2, {}, {"decode"});
  if (sub == "cmp") {
    p.expectPositional(2);
    Cmp c = compare(parseOrdinal(p.positional[0]), parseOrdinal(p.positional[1]));
    out << (c == Cmp::LT ? "LT" : c == Cmp::EQ ? "EQ" : "GT") << "\n";
  } else if (sub == "add") {
    p.expectPositional(2);
    out << printOrdinal(add(parseOrdinal(p.positional[0]), parseOrdinal(p.positional[1]))) << "\n";
  } else if (sub == "omega") {
    p.expectPositional(1);
    out << printOrdinal(omegaPow(parseOrdinal(p.positional[0]))) << "\n";
  } else if (sub == "tower") {
    p.expectPositional(2);
    out << printOrdinal(omegaTower(parseOrdinal(p.positional[0]),
                                   parseNat(p.positional[1], "tower height")))
        << "\n";
  } else if (sub == "fromnat") {
    p.expectPositional(1);
    out << printOrdinal(fromNat(parseNat(p.positional[0], "fromnat argument"))) << "\n";
  } else if (sub == "succ") {
    p.expectPositional(1);
    out << printOrdinal(succ(parseOrdinal(p.positional[0]))) << "\n";
  } else if (sub == "validate") {
    p.expectPositional(1);
    Ordinal a = parseOrdinal(p.positional[0], OrdParseMode::Raw);
    if (isNotation(a))
      out << "valid lengthL=" << lengthL(a) << "\n";
    else
      out << "invalid\n";
  } else if (sub == "enum") {
    p.expectPositional(1);
    for (const Ordinal& a : enumerateUpTo(parseNat(p.positional[0], "enum bound")))
      out << printOrdinal(a) << "\n";
  } else if (sub == "code") {
    p.expectPositional(1);
    if (p.flag("decode")) {
      std::optional<Ordinal> a = ordDecode(parseNat(p.positional[0], "code"));
      if (!a) throw Error("not a notation code: " + p.positional[0]);
      out << printOrdinal(*a) << "\n";
    } else {
      out << ordCode(parseOrdinal(p.positional[0])) << "\n";
    }
  } else {
    throw ParseError("unknown ord subcommand '" + sub + "'");
  }
}

// ---- fm ----------------------------------------------------------------------------

inline void runFm(const std::vector<std::string>& args, std::ostream& out) {
  if (args.size() < 2) throw ParseError("fm needs a subcommand: parse, negate, rank, subst, eval, decompose, jump");
  const std::string& sub = args[1];
  Parsed p = parseArgs(args, 2, {"size", "bound"}, {});
  if (sub == "parse") {
    p.expectPositional(1);
    out << printFormula(parseFormula(p.positional[0])) << "\n";
  } else if (sub == "negate") {
    p.expectPositional(1);
    out << printFormula(negate(parseFormula(p.positional[0]))) << "\n";
  } else if (sub == "rank") {
    p.expectPositional(1);
    out << rank(parseFormula(p.positional[0])) << "\n";
  } else if (sub == "subst") {
    p.expectPositional(3);
    out << printFormula(substitute(parseFormula(p.positional[0]), p.positional[1],
                                   parseTerm(p.positional[2])))
        << "\n";
  } else if (sub == "eval") {
    p.expectPositional(1);
    Formula f = parseFormula(p.positional[0]);
    if (!f.isLiteral()) throw Error("eval expects a closed arithmetical literal");
    out << boolText(evalLiteral(f)) << "\n";
  } else if (sub == "decompose") {
    p.expectPositional(1);
    Decomposition d = decompose(parseFormula(p.positional[0]));
    switch (d.kind) {
      case Decomposition::Kind::Conjunctive: out << "conjunctive"; break;
      case Decomposition::Kind::Disjunctive: out << "disjunctive"; break;
      case Decomposition::Kind::AtomicX: out << "atomic-x"; break;
    }
    if (d.indices == Decomposition::Indices::Pair)
      out << " components: " << printFormula(d.at(0)) << " | " << printFormula(d.at(1));
    else if (d.indices == Decomposition::Indices::ClosedTerms)
      out << " components: one per closed term, e.g. " << printFormula(d.at(Term::zero()));
    out << "\n";
  } else if (sub == "jump") {
    if (p.positional.size() != 2) throw ParseError("fm jump needs <formula> <var> and --size/--bound");
    auto ord = orderFromArgs(p);
    out << printFormula(jump(parseFormula(p.positional[0]), p.positional[1], *ord)) << "\n";
  } else {
    throw ParseError("unknown fm subcommand '" + sub + "'");
  }
}

// ---- prove / check / herbrand --------------------------------------------------------

inline void runProve(const std::vector<std::string>& args, std::ostream& out) {
  Parsed p = parseArgs(args, 1, {"fuel", "emit", "probe"}, {});
  p.expectPositional(1);
  Formula goal = parseFormula(p.positional[0]);
  std::size_t fuel = parseNat(p.option("fuel"), "--fuel");
  SearchOutcome r = proofSearch(Sequent{{goal}}, fuel);
  if (r.kind == SearchOutcome::Kind::Found) {
    out << "Found\n";
    out << "height: " << r.derivation->height() << "\n";
    failOnFinViolations(checkDerivation(r.derivation));
    if (p.options.count("emit")) {
      writeFile(p.option("emit"), writeFinDerivation(r.derivation));
      out << "wrote " << p.option("emit") << "\n";
    }
  } else {
    out << "Exhausted\n";
    const TermModel& m = *r.model;
    out << "countermodel false literals: "
        << (m.falseSet.empty() ? std::string("(none)") : printSequent(m.falseSet)) << "\n";
    out << "goal in countermodel: " << boolText(evalInModel(m, goal, probeBudget(p))) << "\n";
  }
}

inline void runCheck(const std::vector<std::string>& args, std::ostream& out) {
  Parsed p = parseArgs(args, 1, {"weaken-by"}, {});
  p.expectPositional(1);
  FinPtr d = readFinDerivation(readFile(p.positional[0]));
  if (p.options.count("weaken-by")) {
    std::vector<Formula> extra;
    std::istringstream in(p.option("weaken-by"));
    std::string part;
    while (std::getline(in, part, ';'))
      if (part.find_first_not_of(" \t") != std::string::npos) extra.push_back(parseFormula(part));
    d = weaken(d, Sequent{extra});
    out << "weakened conclusion: " << printSequent(d->conclusion()) << "\n";
  }
  failOnFinViolations(checkDerivation(d));
  out << "ok\n";
  out << "conclusion: " << printSequent(d->conclusion()) << "\n";
  out << "height: " << d->height() << "\n";
}

inline void runHerbrand(const std::vector<std::string>& args, std::ostream& out) {
  Parsed p = parseArgs(args, 1, {}, {});
  p.expectPositional(1);
  FinPtr d = readFinDerivation(readFile(p.positional[0]));
  HerbrandResult h = herbrand(d);
  out << "instances:";
  for (const Term& t : h.terms) out << " " << printTerm(t);
  out << "\n";
  failOnFinViolations(checkDerivation(h.derivation));
  out << "instance sequent: " << printSequent(h.derivation->conclusion()) << "\n";
}

// ---- inf ---------------------------------------------------------------------------

inline void printInfSummary(const InfPtr& d, std::ostream& out) {
  out << "end: " << printSequent(d->end()) << "\n";
  out << "bound: " << printOrdinal(d->bound()) << "\n";
  out << "cutRank: " << d->cutRank() << "\n";
}

inline void runInf(const std::vector<std::string>& args, std::ostream& out) {
  if (args.size() < 2) throw ParseError("inf needs a subcommand: embed, cutelim, check, prog, ti, order");
  const std::string& sub = args[1];
  Parsed p = parseArgs(args, 2,
                       {"subst", "probe", "paths", "size", "bound", "n"},
                       {"assemble", "cutelim", "extract"});
  if (sub == "embed") {
    p.expectPositional(1);
    FinPtr fin = readFinDerivation(readFile(p.positional[0]));
    VarSubst subst;
    if (p.options.count("subst")) {
      std::istringstream in(p.option("subst"));
      std::string pair;
      while (std::getline(in, pair, ',')) {
        std::size_t eq = pair.find('=');
        if (eq == std::string::npos) throw ParseError("--subst entries look like x=term");
        std::string var = pair.substr(0, eq);
        std::size_t b = var.find_first_not_of(" \t");
        std::size_t e = var.find_last_not_of(" \t");
        if (b == std::string::npos) throw ParseError("--subst has an empty variable name");
        subst[var.substr(b, e - b + 1)] = parseTerm(pair.substr(eq + 1));
      }
    }
    InfPtr d = embedFin(fin, subst);
    printInfSummary(d, out);
    failOnViolations(localCheck(d, ProbePlan{probeBudget(p), {}}));
    out << "localCheck: ok\n";
  } else if (sub == "cutelim") {
    p.expectPositional(1);
    RecipeResult r = readRecipe(readFile(p.positional[0]));
    InfPtr freed = cutElimFull(r.derivation);
    out << "input bound: " << printOrdinal(r.derivation->bound()) << "\n";
    out << "input cutRank: " << r.derivation->cutRank() << "\n";
    printInfSummary(freed, out);
    failOnViolations(localCheck(freed, ProbePlan{probeBudget(p), {}}));
    out << "localCheck: ok\n";
  } else if (sub == "check") {
    p.expectPositional(1);
    RecipeResult r = readRecipe(readFile(p.positional[0]));
    printInfSummary(r.derivation, out);
    ProbePlan plan{probeBudget(p), {}};
    if (p.options.count("paths")) plan.paths = parsePaths(p.option("paths"));
    failOnViolations(localCheck(r.derivation, plan));
    out << "localCheck: ok\n";
  } else if (sub == "prog") {
    auto ord = orderFromArgs(p);
    InfPtr d = deriveProg(ord);
    printInfSummary(d, out);
    failOnViolations(localCheck(d, ProbePlan{probeBudget(p), {}}));
    out << "localCheck: ok\n";
  } else if (sub == "ti") {
    auto ord = orderFromArgs(p);
    InfPtr ti = deriveTI(ord);
    out << "ti bound: " << printOrdinal(ti->bound()) << "\n";
    InfPtr cur = ti;
    if (p.flag("assemble") || p.flag("cutelim") || p.flag("extract")) {
      InfPtr prog = deriveProg(ord);
      if (!ordLeq(prog->bound(), ti->bound()))
        cur = weaken(ti, Sequent{}, prog->bound(), ti->cutRank());
      std::uint64_t n = p.options.count("n") ? parseNat(p.option("n"), "--n")
                                             : (ord->size() ? ord->size() - 1 : 0);
      cur = assembleTI(cur, prog, n);
      out << "assembled bound: " << printOrdinal(cur->bound()) << "\n";
      out << "assembled cutRank: " << cur->cutRank() << "\n";
    }
    if (p.flag("cutelim") || p.flag("extract")) {
      cur = cutElimFull(cur);
      out << "cut-free bound: " << printOrdinal(cur->bound()) << "\n";
    }
    printInfSummary(cur, out);
    failOnViolations(localCheck(cur, ProbePlan{probeBudget(p), {}}));
    out << "localCheck: ok\n";
    if (p.flag("extract")) {
      RankCertificate cert = rankExtract(cur, ord);
      for (const auto& [v, o] : cert.assignment)
        out << "o(" << v << ") = " << printOrdinal(o) << "\n";
      out << "witness bound: " << printOrdinal(cert.witnessBound) << "\n";
    }
  } else if (sub == "order") {
    auto ord = orderFromArgs(p);
    out << "size: " << ord->size() << "\n";
    out << "bound: " << ord->bound() << "\n";
    out << "codes:";
    for (std::size_t m = 0; m < ord->size(); ++m) out << " " << ord->e(m);
    out << "\n";
    out << "defining rank: " << ord->definingRank() << "\n";
    out << "defining formula: " << printFormula(ord->definingFormula("v0", "v1")) << "\n";
    out << "prog formula: " << printFormula(ord->progFormula()) << "\n";
    out << "ti formula: " << printFormula(ord->tiFormula()) << "\n";
  } else {
    throw ParseError("unknown inf subcommand '" + sub + "'");
  }
}

// ---- tree / kruskal -----------------------------------------------------------------

inline void runTree(const std::vector<std::string>& args, std::ostream& out) {
  if (args.size() < 2) throw ParseError("tree needs a subcommand: embed, uembed, eq, qembed, height");
  const std::string& sub = args[1];
  Parsed p = parseArgs(args, 2, {}, {});
  if (sub == "embed") {
    p.expectPositional(2);
    out << boolText(embeds(parseTree(p.positional[0]), parseTree(p.positional[1]))) << "\n";
  } else if (sub == "uembed") {
    p.expectPositional(2);
    out << boolText(embedsUnordered(parseTree(p.positional[0]), parseTree(p.positional[1])))
        << "\n";
  } else if (sub == "eq") {
    p.expectPositional(2);
    out << boolText(treeEq(parseTree(p.positional[0]), parseTree(p.positional[1]))) << "\n";
  } else if (sub == "qembed") {
    p.expectPositional(1);
    out << printTree(quasiEmbed(parseOrdinal(p.positional[0]))) << "\n";
  } else if (sub == "height") {
    p.expectPositional(1);
    out << height(parseTree(p.positional[0])) << "\n";
  } else {
    throw ParseError("unknown tree subcommand '" + sub + "'");
  }
}

inline void runKruskal(const std::vector<std::string>& args, std::ostream& out) {
  if (args.size() < 2) throw ParseError("kruskal needs a subcommand: bad, longest-bad, wpo, check-reif");
  const std::string& sub = args[1];
  Parsed p = parseArgs(args, 2, {"nodes", "height"}, {});
  if (sub == "bad") {
    if (p.positional.empty()) throw ParseError("kruskal bad needs at least one tree");
    std::vector<BinaryTree> seq;
    for (const std::string& s : p.positional) seq.push_back(parseTree(s));
    out << boolText(isBad(seq)) << "\n";
  } else if (sub == "longest-bad") {
    BadSearchResult r = longestBadSequence(parseNat(p.option("nodes"), "--nodes"));
    out << "length: " << r.length << "\n";
    out << "witness: " << printTreeSeq(r.witness) << "\n";
  } else if (sub == "wpo") {
    WpoReport r = wpoCheck(treesUpToHeight(parseNat(p.option("height"), "--height")));
    out << "reflexive: " << boolText(r.reflexive) << "\n";
    out << "antisymmetric: " << boolText(r.antisymmetric) << "\n";
    out << "transitive: " << boolText(r.transitive) << "\n";
    out << "partial order: " << boolText(r.partialOrder()) << "\n";
    out << "longest bad length: " << r.longestBadLength << "\n";
    out << "witness: " << printTreeSeq(r.badWitness) << "\n";
  } else if (sub == "check-reif") {
    p.expectPositional(1);
    ReifCheckResult r = checkReification(parseReificationTable(readFile(p.positional[0])));
    if (!r.ok) throw Error(r.message);
    out << "ok\n";
  } else {
    throw ParseError("unknown kruskal subcommand '" + sub + "'");
  }
}

inline const char* usageText() {
  return "usage: gforge <command> ...\n"
         "  ord cmp|add|omega|tower|fromnat|succ|validate|enum|code ...\n"
         "  fm parse|negate|rank|subst|eval|decompose|jump ...\n"
         "  prove \"<formula>\" --fuel N [--emit file]\n"
         "  check <file> [--weaken-by \"f1; f2\"]\n"
         "  herbrand <file>\n"
         "  inf embed|cutelim|check|prog|ti|order ...\n"
         "  tree embed|uembed|eq|qembed|height ...\n"
         "  kruskal bad|longest-bad|wpo|check-reif ...\n";
}

}  // namespace cli

inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> rest;
  bool json = false;
  for (const std::string& a : args) {
    if (a == "--json")
      json = true;
    else
      rest.push_back(a);
  }
  std::ostringstream buf;
  try {
    if (rest.empty()) throw ParseError(std::string("no command given\n") + cli::usageText());
    const std::string& cmd = rest[0];
    if (cmd == "ord")
      cli::runOrd(rest, buf);
    else if (cmd == "fm")
      cli::runFm(rest, buf);
    else if (cmd == "prove")
      cli::runProve(rest, buf);
    else if (cmd == "check")
      cli::runCheck(rest, buf);
    else if (cmd == "herbrand")
      cli::runHerbrand(rest, buf);
    else if (cmd == "inf")
      cli::runInf(rest, buf);
    else if (cmd == "tree")
      cli::runTree(rest, buf);
    else if (cmd == "kruskal")
      cli::runKruskal(rest, buf);
    else if (cmd == "help" || cmd == "--help") {
      buf << cli::usageText();
    } else {
      throw ParseError("unknown command '" + cmd + "'\n" + cli::usageText());
    }
  } catch (const ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  if (json) {
    Json env;
    env["ok"] = true;
    env["output"] = buf.str();
    out << env.dump() << "\n";
  } else {
    out << buf.str();
  }
  return 0;
}

}  // namespace gforge
