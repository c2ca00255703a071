// Acceptance gate: one pass/fail line per criterion, exit 1 when any fails.
// Each criterion re-derives its expectations independently of the unit suite.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "gforge/cli.hpp"
#include "test_util.hpp"

using namespace gforge;

namespace {

int failures = 0;

// capSeconds <= 0 means the criterion carries no time budget.
void criterion(int n, const char* label, double capSeconds,
               const std::function<void()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  std::string note;
  bool ok = true;
  try {
    body();
  } catch (const std::exception& e) {
    ok = false;
    note = e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (ok && capSeconds > 0 && secs > capSeconds) {
    ok = false;
    note = "exceeded the " + std::to_string(capSeconds) + "s budget";
  }
  std::printf("%s %d %s (%.2fs)\n", ok ? "PASS" : "FAIL", n, label, secs);
  if (!ok) {
    std::printf("  note: %s\n", note.c_str());
    ++failures;
  }
}

void require(bool cond, const std::string& what) {
  if (!cond) throw Error(what);
}

// Independent enumeration of raw ordinal expressions by node count: a forest
// of k trees where each tree costs one node plus its own forest.
void rawForestsExactly(std::uint64_t nodes, std::vector<Ordinal>& out) {
  if (nodes == 0) {
    out.push_back(Ordinal{});
    return;
  }
  for (std::uint64_t headCost = 1; headCost <= nodes; ++headCost) {
    std::vector<Ordinal> heads, tails;
    rawForestsExactly(headCost - 1, heads);
    rawForestsExactly(nodes - headCost, tails);
    for (const Ordinal& h : heads)
      for (const Ordinal& t : tails) {
        Ordinal f;
        f.exps.push_back(h);
        f.exps.insert(f.exps.end(), t.exps.begin(), t.exps.end());
        out.push_back(f);
      }
  }
}

std::vector<Ordinal> rawForestsUpTo(std::uint64_t maxNodes) {
  std::vector<Ordinal> out;
  for (std::uint64_t n = 0; n <= maxNodes; ++n) rawForestsExactly(n, out);
  return out;
}

bool hasCut(const FinPtr& d) {
  if (d->rule() == FinRule::Cut) return true;
  for (const FinPtr& p : d->premises())
    if (hasCut(p)) return true;
  return false;
}

void requireClean(const InfPtr& d, std::size_t budget, const std::string& what) {
  std::vector<InfViolation> vs = localCheck(d, ProbePlan{budget, {}});
  require(vs.empty(), what + ": " + (vs.empty() ? "" : vs[0].message));
}

InfPtr descendDisj(InfPtr d) {
  while (d->rule() == InfRule::Disj) d = d->premiseAt(*d->chosen());
  return d;
}

struct CliCapture {
  int code = 0;
  std::string out;
  std::string err;
};

CliCapture runCli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliCapture r;
  r.code = dispatch(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

void crOrdinalLaws() {
  std::vector<Ordinal> pool;
  for (const Ordinal& a : rawForestsUpTo(5))
    if (isNotation(a)) pool.push_back(a);
  require(!pool.empty(), "no notations enumerated");
  for (const Ordinal& a : pool)
    for (const Ordinal& b : pool) {
      Cmp ab = compare(a, b);
      Cmp ba = compare(b, a);
      require((ab == Cmp::EQ) == (a == b), "EQ must coincide with structural equality");
      require((ab == Cmp::LT) == (ba == Cmp::GT), "compare must be antisymmetric");
    }
  for (const Ordinal& a : pool)
    for (const Ordinal& b : pool)
      for (const Ordinal& c : pool)
        if (compare(a, b) == Cmp::LT && compare(b, c) == Cmp::LT)
          require(compare(a, c) == Cmp::LT, "compare must be transitive");
  for (const Ordinal& a : pool) {
    require(add(a, zeroOrd()) == a, "a + 0 must be a");
    require(add(zeroOrd(), a) == a, "0 + a must be a");
    require(compare(a, succ(a)) == Cmp::LT, "a must precede its successor");
    for (const Ordinal& b : pool) {
      if (compare(a, b) == Cmp::LT) {
        require(compare(omegaPow(a), omegaPow(b)) == Cmp::LT, "omegaPow must be monotone");
        require(compare(b, succ(a)) != Cmp::LT || b == a,
                "nothing fits strictly between a and succ(a)");
      }
      require(compare(b, add(a, b)) != Cmp::GT, "addition must dominate its right argument");
      for (const Ordinal& c : pool)
        require(add(add(a, b), c) == add(a, add(b, c)), "addition must be associative");
    }
  }
}

void crPinnedIdentities() {
  require(add(oneOrd(), omegaOrd()) == omegaOrd(), "1 + w must collapse to w");
  require(compare(omegaOrd(), succ(omegaOrd())) == Cmp::LT, "w must precede w+1");
  require(omegaPow(zeroOrd()) == oneOrd(), "w^0 must be 1");
  require(omegaPow(oneOrd()) == omegaOrd(), "w^1 must be w");
  for (const Ordinal& a : enumerateUpTo(4))
    require(omegaTower(a, 0) == a, "a tower of height 0 must be its base");
}

void crEnumeration() {
  std::vector<Ordinal> pool = enumerateUpTo(6);
  for (std::size_t i = 0; i + 1 < pool.size(); ++i)
    require(compare(pool[i], pool[i + 1]) == Cmp::LT, "enumeration must ascend strictly");
  std::vector<Ordinal> oracle;
  for (const Ordinal& a : rawForestsUpTo(6))
    if (isNotation(a)) oracle.push_back(a);
  std::sort(oracle.begin(), oracle.end(),
            [](const Ordinal& a, const Ordinal& b) { return compare(a, b) == Cmp::LT; });
  require(oracle.size() == pool.size(), "enumeration must match the brute-force oracle count");
  for (std::size_t i = 0; i < pool.size(); ++i)
    require(oracle[i] == pool[i], "enumeration must list exactly the valid notations in order");
  // Greedy descent: from the top, step to the largest strictly smaller
  // notation; this must reach 0 within |pool| steps.
  Ordinal cur = pool.back();
  std::size_t steps = 0;
  while (!(cur == zeroOrd())) {
    require(++steps <= pool.size(), "descent must terminate");
    Ordinal next = zeroOrd();
    for (const Ordinal& a : pool)
      if (compare(a, cur) == Cmp::LT && compare(next, a) != Cmp::GT) next = a;
    cur = next;
  }
}

void crSearchVerdicts() {
  Formula drinker = parseFormula("ex x. (X(x) -> all y. X(y))");
  SearchOutcome found = proofSearch(Sequent{{drinker}}, 50);
  require(found.kind == SearchOutcome::Kind::Found, "the drinker sentence must be provable");
  require(!hasCut(found.derivation), "search output must be cut-free");
  require(checkDerivation(found.derivation).empty(), "the found derivation must check");

  Formula allX = parseFormula("all x. X(x)");
  SearchOutcome open = proofSearch(Sequent{{allX}}, 50);
  require(open.kind == SearchOutcome::Kind::Exhausted, "a bare universal goal must exhaust");
  require(open.model.has_value(), "an exhausted search must carry a countermodel");
  require(!evalInModel(*open.model, allX, 20), "the countermodel must falsify the goal");
}

void crHerbrand() {
  Formula goal = parseFormula("ex x. (X(x) -> X(S(x)))");
  SearchOutcome r = proofSearch(Sequent{{goal}}, 50);
  require(r.kind == SearchOutcome::Kind::Found, "the herbrand sample goal must be provable");
  HerbrandResult h = herbrand(r.derivation);
  require(!h.terms.empty(), "the instance list must be nonempty");
  require(checkDerivation(h.derivation).empty(), "the instance derivation must check");
  std::vector<Formula> disjuncts;
  for (const Formula& f : h.derivation->conclusion()) disjuncts.push_back(f);
  require(isTautology(disjuncts), "the instance disjunction must be a truth-table tautology");
}

void crCalibratedBounds() {
  InfPtr eq = deriveEqualityAxiomX();
  require(eq->bound() == fromNat(6), "the equality axiom bound must be 6");
  requireClean(eq, 20, "equality axiom");

  for (const Formula& psi :
       {Formula::xatom(Term::var("x")), parseFormula("(x=x & X(x))")}) {
    InfPtr ind = deriveInduction(psi, "x");
    require(ind->bound() == add(omegaOrd(), fromNat(4)), "the induction bound must be w+4");
    requireClean(ind, 20, "induction");
    InfPtr omega = descendDisj(ind);
    require(omega->rule() == InfRule::Conj, "induction must pass through an omega node");
    for (std::uint64_t n = 0; n <= 10; ++n)
      require(omega->premiseAt(numeral(n))->bound() == fromNat(2 * (rank(psi) + n)),
              "numeral premise bounds must be 2(rank + n)");
  }

  auto ord = std::make_shared<const CodedOrder>(codedOrderOfSize(3));
  InfPtr prog = deriveProg(ord);
  require(prog->bound() == fromNat(ord->definingRank() + 5),
          "the progressiveness bound must be the defining rank plus 5");
  requireClean(prog, 20, "progressiveness");

  testutil::Gen g(901);
  for (int i = 0; i < 20; ++i) {
    Formula f = g.closedFormula(3);
    InfPtr em = deriveExcludedMiddle(f);
    require(em->bound() == fromNat(2 * rank(f)), "excluded middle must cost twice the rank");
    requireClean(em, 20, "excluded middle");
  }
}

void crTowerPipeline() {
  auto ord = std::make_shared<const CodedOrder>(codedOrderOfSize(3));
  InfPtr prog = deriveProg(ord);
  InfPtr ti = weaken(deriveTI(ord), Sequent{}, prog->bound(), 0);
  InfPtr asmb = assembleTI(ti, prog, 2);
  require(asmb->bound() == add(ti->bound(), fromNat(2)), "assembly must cost two steps");
  InfPtr freed = cutElimFull(asmb);
  require(freed->cutRank() == 0, "full elimination must reach cut rank 0");
  require(freed->bound() == omegaTower(add(ti->bound(), fromNat(2)), asmb->cutRank()),
          "the cut-free bound must be the omega tower of the assembly");
  requireClean(freed, 8, "cut-free pipeline output");
  RankCertificate cert = rankExtract(freed, ord);
  for (std::uint64_t m = 0; m < ord->size(); ++m)
    for (std::uint64_t n = 0; n < ord->size(); ++n)
      if (ord->before(m, n))
        require(ordLess(cert.assignment.at(m), cert.assignment.at(n)),
                "extracted ranks must be strictly monotone along the order");
  for (const auto& [v, o] : cert.assignment)
    require(ordLeq(o, freed->bound()), "every extracted rank must sit below the root bound");
  require(cert.witnessBound == freed->bound(), "the witness bound must be the root bound");
}

void crInversionReduction() {
  struct Case {
    InfPtr d;
    Formula phi;
    InfIndex ix;
  };
  std::vector<Case> cases;
  Formula allEq = parseFormula("all x. x=x");
  cases.push_back({deriveTruth(allEq), allEq, InfIndex{numeral(3)}});
  Formula allLe = parseFormula("all x. x<=(x+S(0))");
  cases.push_back({deriveTruth(allLe), allLe, InfIndex{numeral(7)}});
  Formula conj = parseFormula("(0=0 & 0<=0)");
  cases.push_back({deriveTruth(conj), conj, InfIndex{0}});
  Formula allX = parseFormula("all x. X(x)");
  cases.push_back({deriveExcludedMiddle(allX), allX, InfIndex{numeral(2)}});
  Formula nested = parseFormula("all x. (x=x & x<=x)");
  cases.push_back({deriveTruth(nested), nested, InfIndex{numeral(1)}});
  for (const Case& c : cases) {
    InfPtr inv = invert(c.d, c.phi, c.ix);
    require(inv->bound() == c.d->bound(), "inversion must preserve the bound");
    require(inv->cutRank() == c.d->cutRank(), "inversion must preserve the cut rank");
    requireClean(inv, 20, "inverted derivation");
  }

  Formula phi = parseFormula("!X(0)");
  Sequent gamma{{parseFormula("X(S(0))"), parseFormula("!X(S(0))")}};
  InfPtr dPos = mkAxiomX(gamma.with(phi), fromNat(2), 0);
  InfPtr dNeg = mkAxiomX(gamma.with(negate(phi)), fromNat(1), 0);
  InfPtr r1 = reduce(dNeg, dPos, phi);
  require(r1->bound() == add(dNeg->bound(), dPos->bound()),
          "reduction must add the input bounds");
  requireClean(r1, 10, "axiom reduction");

  Formula f = parseFormula("(X(0) | X(S(0)))");
  InfPtr em = weaken(deriveExcludedMiddle(f), Sequent{}, fromNat(2 * rank(f)),
                     static_cast<int>(rank(f)));
  InfPtr r2 = reduce(em, em, f);
  require(r2->bound() == add(em->bound(), em->bound()),
          "reduction must add the input bounds exactly");
  requireClean(r2, 10, "disjunction reduction");
}

void crQuasiEmbedding() {
  std::vector<Ordinal> pool = enumerateUpTo(7);
  std::vector<BinaryTree> img;
  img.reserve(pool.size());
  for (const Ordinal& a : pool) img.push_back(quasiEmbed(a));
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = 0; j < pool.size(); ++j) {
      if (embeds(img[i], img[j]))
        require(compare(pool[i], pool[j]) != Cmp::GT,
                "an embedding between images must reflect the notation order");
      if (i != j)
        require(img[i] != img[j], "the quasi-embedding must be injective");
    }
}

void crBadSequences() {
  BadSearchResult r = longestBadSequence(3);
  require(r.length == 2, "the longest bad sequence over 3 nodes must have length 2");
  require(printTreeSeq(r.witness) == "(o,o) o", "the witness must be the pinned one");

  WpoReport rep = wpoCheck(treesUpToHeight(2));
  require(rep.partialOrder(), "embedding must be a partial order on small trees");
  require(rep.longestBadLength == 5, "the longest bad sequence over height 2 must be 5");
  require(isBad(rep.badWitness), "the reported witness must be bad");

  std::vector<Ordinal> pool = enumerateUpTo(6);
  std::vector<BinaryTree> seq;
  for (auto it = pool.rbegin(); it != pool.rend(); ++it) seq.push_back(quasiEmbed(*it));
  require(isBad(seq), "descending notations must map to a bad sequence");
}

void crCliDeterminism() {
  cli::writeFile("gforge_accept_prog.json", "{\"order\":2,\"build\":{\"op\":\"prog\"}}");
  cli::writeFile("gforge_accept_reif.txt", "(o,o) ; w\n(o,o) o ; 1\n");
  CliCapture emit = runCli({"prove", "ex x. (X(x) -> X(S(x)))", "--fuel", "50", "--emit",
                            "gforge_accept_step.json"});
  require(emit.code == 0, "emitting the sample derivation must succeed");
  std::vector<std::vector<std::string>> battery = {
      {"ord", "cmp", "w+1", "w^2"},
      {"ord", "add", "w", "w+1"},
      {"ord", "omega", "w+1"},
      {"ord", "tower", "2", "3"},
      {"ord", "fromnat", "12"},
      {"ord", "succ", "w^w"},
      {"ord", "validate", "<1,0>"},
      {"ord", "enum", "4"},
      {"ord", "code", "w+1"},
      {"ord", "code", "52", "--decode"},
      {"fm", "parse", "all x. (X(x) | !X(x))"},
      {"fm", "negate", "(0=0 & X(S(0)))"},
      {"fm", "rank", "ex x. (X(x) -> all y. X(y))"},
      {"fm", "subst", "all y. x=y", "x", "S(y)"},
      {"fm", "eval", "(S(0)*S(S(0)))=S(S(0))"},
      {"fm", "decompose", "!(X(0) & X(1))"},
      {"fm", "jump", "X(x)", "x", "--size", "2"},
      {"prove", "ex x. (X(x) -> all y. X(y))", "--fuel", "50"},
      {"prove", "all x. X(x)", "--fuel", "20"},
      {"check", "gforge_accept_step.json"},
      {"herbrand", "gforge_accept_step.json"},
      {"inf", "prog", "--size", "2"},
      {"inf", "ti", "--size", "2", "--assemble", "--probe", "4"},
      {"inf", "check", "gforge_accept_prog.json", "--probe", "4"},
      {"inf", "order", "--size", "3"},
      {"inf", "embed", "gforge_accept_step.json"},
      {"tree", "embed", "((o,o),o)", "(o,(o,o))"},
      {"tree", "uembed", "((o,o),o)", "(o,(o,o))"},
      {"tree", "eq", "((o,o),o)", "(o,(o,o))"},
      {"tree", "qembed", "w^w"},
      {"tree", "height", "((o,o),(o,o))"},
      {"kruskal", "bad", "((o,o),o)", "(o,o)", "o"},
      {"kruskal", "longest-bad", "--nodes", "5"},
      {"kruskal", "wpo", "--height", "2"},
      {"kruskal", "check-reif", "gforge_accept_reif.txt"},
      {"--json", "ord", "enum", "3"},
      {"ord", "cmp", "w^", "w"},
      {"fm", "eval", "X(0)"},
      {"help"},
  };
  for (const auto& args : battery) {
    CliCapture a = runCli(args);
    CliCapture b = runCli(args);
    require(a.code == b.code && a.out == b.out && a.err == b.err,
            "two runs of '" + args[0] + " ...' must agree byte for byte");
  }
}

}  // namespace

int main() {
  criterion(1, "ordinal order laws (lengthL <= 5)", 30, crOrdinalLaws);
  criterion(2, "pinned arithmetic identities", 0, crPinnedIdentities);
  criterion(3, "enumeration ranking and descent (lengthL <= 6)", 30, crEnumeration);
  criterion(4, "proof search verdicts", 5, crSearchVerdicts);
  criterion(5, "herbrand disjunction tautology", 0, crHerbrand);
  criterion(6, "calibrated derivation bounds", 60, crCalibratedBounds);
  criterion(7, "tower bound pipeline (3-element order)", 60, crTowerPipeline);
  criterion(8, "inversion and reduction bookkeeping", 0, crInversionReduction);
  criterion(9, "quasi-embedding order reflection (lengthL <= 7)", 60, crQuasiEmbedding);
  criterion(10, "bad sequences and the wpo oracle", 60, crBadSequences);
  criterion(11, "CLI byte determinism", 0, crCliDeterminism);
  return failures == 0 ? 0 : 1;
}
