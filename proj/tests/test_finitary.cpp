#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "gforge/search.hpp"
#include "gforge/serialize.hpp"
#include "gforge/syntax_io.hpp"
#include "test_util.hpp"

using namespace gforge;
using testutil::FinInterp;
using testutil::Gen;

namespace {

// Hand transcription of the classic drinker derivation: two existential
// instances, one universal step with eigenvariable y.
FinPtr drinkerByHand() {
  Formula drinker = parseFormula("ex x. (X(x) -> all y. X(y))");
  Formula xy = Formula::xatom(Term::var("y"));
  Formula allY = Formula::all("y", xy);
  Formula bodyY = Formula::disj(negate(xy), allY);            // instance at y
  Formula bodyZero = Formula::disj(negate(Formula::xatom(Term::zero())), allY);

  FinPtr ax = finAxiom(Sequent{{negate(xy), xy, drinker}});
  FinPtr or0 = finOrIntro(Sequent{{bodyY, xy, drinker}}, bodyY, 0, ax);
  FinPtr ex1 = finExIntro(Sequent{{xy, drinker}}, drinker, Term::var("y"), or0);
  FinPtr all1 = finAllIntro(Sequent{{allY, drinker}}, allY, "y", ex1);
  FinPtr or1 = finOrIntro(Sequent{{bodyZero, drinker}}, bodyZero, 1, all1);
  return finExIntro(Sequent{{drinker}}, drinker, Term::zero(), or1);
}

}  // namespace

TEST_CASE("checkDerivation accepts the drinker transcription") {
  FinPtr d = drinkerByHand();
  CHECK(checkDerivation(d).empty());
  CHECK(d->conclusion() == Sequent{{parseFormula("ex x. (X(x) -> all y. X(y))")}});
}

TEST_CASE("checkDerivation flags a broken eigenvariable condition") {
  Formula xy = Formula::xatom(Term::var("y"));
  FinPtr ax = finAxiom(Sequent{{xy, negate(xy)}});
  // y stays free in the side formula !X(y): the eigencondition fails.
  FinPtr bad = finAllIntro(Sequent{{Formula::all("y", xy), negate(xy)}},
                           Formula::all("y", xy), "y", ax);
  std::vector<FinViolation> vs = checkDerivation(bad);
  REQUIRE_FALSE(vs.empty());
  CHECK(vs[0].path.empty());  // the violation is at the AllIntro root
  CHECK(vs[0].message.find("eigen") != std::string::npos);
}

TEST_CASE("a bare axiom checks") {
  FinPtr ax = finAxiom(Sequent{{Formula::xatom(Term::zero()),
                                negate(Formula::xatom(Term::zero()))}});
  CHECK(checkDerivation(ax).empty());
  CHECK(ax->height() == 0);

  FinPtr notAx = finAxiom(Sequent{{Formula::xatom(Term::zero())}});
  CHECK_FALSE(checkDerivation(notAx).empty());
}

TEST_CASE("weakening enlarges conclusions and preserves height") {
  FinPtr ax = finAxiom(Sequent{{Formula::xatom(Term::zero()),
                                negate(Formula::xatom(Term::zero()))}});
  CHECK(weaken(ax, Sequent{})->conclusion() == ax->conclusion());
  CHECK(weaken(ax, Sequent{{parseFormula("0=0")}})->conclusion().size() == 3);

  Gen g(201);
  int done = 0;
  for (int i = 0; i < 100 && done < 50; ++i) {
    Formula f = g.formula(2, {});
    SearchOutcome r = proofSearch(Sequent{{f, negate(f)}}, 60);
    if (r.kind != SearchOutcome::Kind::Found) continue;
    ++done;
    Sequent extra{{g.formula(1, {}), g.formula(1, {})}};
    FinPtr w = weaken(r.derivation, extra);
    CHECK(w->height() == r.derivation->height());
    CHECK(checkDerivation(w).empty());
    CHECK(r.derivation->conclusion().subsetOf(w->conclusion()));
  }
  REQUIRE(done == 50);
}

TEST_CASE("proofSearch finds the drinker cut-free") {
  SearchOutcome r = proofSearch(Sequent{{parseFormula("ex x. (X(x) -> all y. X(y))")}}, 40);
  REQUIRE(r.kind == SearchOutcome::Kind::Found);
  CHECK(checkDerivation(r.derivation).empty());
  // cut-free by construction
  std::vector<FinPtr> stack{r.derivation};
  while (!stack.empty()) {
    FinPtr d = stack.back();
    stack.pop_back();
    CHECK(d->rule() != FinRule::Cut);
    for (const FinPtr& p : d->premises()) stack.push_back(p);
  }
}

TEST_CASE("an immediate axiom closes at depth zero") {
  Formula p = parseFormula("X(S(0))");
  SearchOutcome r = proofSearch(Sequent{{p, negate(p)}}, 10);
  REQUIRE(r.kind == SearchOutcome::Kind::Found);
  CHECK(r.derivation->rule() == FinRule::Axiom);
  CHECK(r.derivation->height() == 0);
}

TEST_CASE("an unprovable universal goal exhausts into a countermodel") {
  Formula goal = parseFormula("all x. X(x)");
  SearchOutcome r = proofSearch(Sequent{{goal}}, 50);
  REQUIRE(r.kind == SearchOutcome::Kind::Exhausted);
  REQUIRE(r.model.has_value());
  CHECK_FALSE(evalInModel(*r.model, goal, 20));
  // Every literal collected on the branch is false in the model.
  for (const auto& seq : r.branch)
    for (const Formula& f : seq)
      if (f.isLiteral()) CHECK_FALSE(evalInModel(*r.model, f, 20));
  // Branch sequents grow monotonically.
  for (std::size_t i = 0; i + 1 < r.branch.size(); ++i) {
    Sequent a = detail::toSequent(r.branch[i]);
    Sequent b = detail::toSequent(r.branch[i + 1]);
    CHECK(a.subsetOf(b));
  }
}

TEST_CASE("extractCountermodel rejects closable branches") {
  Formula p = Formula::xatom(Term::zero());
  OrderedSeq closing{p, negate(p)};
  CHECK_THROWS_WITH(extractCountermodel({closing}), "branch is closable");

  OrderedSeq open{p};
  TermModel m = extractCountermodel({open});
  CHECK_FALSE(evalInModel(m, p, 5));
}

TEST_CASE("found derivations are sound in random finite structures") {
  std::vector<std::string> goals = {
      "ex x. (X(x) -> all y. X(y))",
      "ex x. (X(x) -> X(S(x)))",
      "all x. (X(x) -> X(x))",
      "all x. ((X(x) & x=x) -> (x=x & X(x)))",
      "(ex y. X(y) | all x. !X(x))",
      "all x. ex y. (X(x) -> X(y))",
  };
  std::size_t namedCount = goals.size();
  Gen g(202);
  for (int i = 0; i < 10; ++i) goals.push_back(printFormula(g.formula(2, {})));
  Gen gm(203);
  for (std::size_t gi = 0; gi < goals.size(); ++gi) {
    const std::string& text = goals[gi];
    Formula f = parseFormula(text);
    // Named goals are valid outright; random ones are made valid as
    // excluded-middle pairs.
    Sequent goal = gi < namedCount ? Sequent{{f}} : Sequent{{f, negate(f)}};
    SearchOutcome r = proofSearch(goal, 60);
    if (r.kind != SearchOutcome::Kind::Found) continue;  // validity not guaranteed for random f
    REQUIRE(checkDerivation(r.derivation).empty());
    for (int k = 0; k < 20; ++k) {
      FinInterp m = FinInterp::random(gm, 3);
      INFO("goal " << text << " structure " << k);
      CHECK(testutil::sequentTrueIn(m, r.derivation->conclusion()));
    }
  }
}

TEST_CASE("proofSearch is deterministic") {
  Sequent goal{{parseFormula("ex x. (X(x) -> all y. X(y))")}};
  SearchOutcome a = proofSearch(goal, 40);
  SearchOutcome b = proofSearch(goal, 40);
  REQUIRE(a.kind == SearchOutcome::Kind::Found);
  REQUIRE(b.kind == SearchOutcome::Kind::Found);
  CHECK(writeFinDerivation(a.derivation) == writeFinDerivation(b.derivation));
}

TEST_CASE("herbrand extraction yields a tautological instance disjunction") {
  SearchOutcome r = proofSearch(Sequent{{parseFormula("ex x. (X(x) -> X(S(x)))")}}, 40);
  REQUIRE(r.kind == SearchOutcome::Kind::Found);
  HerbrandResult h = herbrand(r.derivation);
  REQUIRE_FALSE(h.terms.empty());
  CHECK(checkDerivation(h.derivation).empty());
  std::vector<Formula> disjuncts(h.derivation->conclusion().begin(),
                                 h.derivation->conclusion().end());
  CHECK(isTautology(disjuncts));

  // Count ExIntro nodes: the witness list cannot be longer.
  std::size_t exIntros = 0;
  std::vector<FinPtr> stack{r.derivation};
  while (!stack.empty()) {
    FinPtr d = stack.back();
    stack.pop_back();
    if (d->rule() == FinRule::ExIntro) ++exIntros;
    for (const FinPtr& p : d->premises()) stack.push_back(p);
  }
  CHECK(h.terms.size() <= exIntros);
}

TEST_CASE("herbrand keeps a hand-built single-instance proof at one term") {
  Formula goal = parseFormula("ex x. (X(x) | !X(x))");
  Formula inst = parseFormula("(X(0) | !X(0))");
  FinPtr ax = finAxiom(Sequent{{parseFormula("X(0)"), parseFormula("!X(0)")}});
  FinPtr left = finOrIntro(Sequent{{inst, parseFormula("!X(0)")}}, inst, 0, ax);
  FinPtr both = finOrIntro(Sequent{{inst}}, inst, 1, left);
  FinPtr d = finExIntro(Sequent{{goal}}, goal, Term::zero(), both);
  REQUIRE(checkDerivation(d).empty());
  HerbrandResult h = herbrand(d);
  REQUIRE(h.terms.size() == 1);
  CHECK(printTerm(h.terms[0]) == "0");
  std::vector<Formula> disjuncts(h.derivation->conclusion().begin(),
                                 h.derivation->conclusion().end());
  CHECK(isTautology(disjuncts));

  // The search proof of the same goal may use more instances, but they still
  // collapse to a tautologous disjunction.
  SearchOutcome r = proofSearch(Sequent{{goal}}, 20);
  REQUIRE(r.kind == SearchOutcome::Kind::Found);
  HerbrandResult hs = herbrand(r.derivation);
  CHECK(hs.terms.size() >= 1);
  std::vector<Formula> searchDisjuncts(hs.derivation->conclusion().begin(),
                                       hs.derivation->conclusion().end());
  CHECK(isTautology(searchDisjuncts));
}

TEST_CASE("herbrand rejects cuts and nested quantifiers") {
  Formula p = Formula::xatom(Term::zero());
  Formula goal = parseFormula("ex x. (X(x) | !X(x))");
  SearchOutcome r = proofSearch(Sequent{{goal}}, 20);
  REQUIRE(r.kind == SearchOutcome::Kind::Found);
  FinPtr lhs = weaken(r.derivation, Sequent{{p}});
  FinPtr rhs = finAxiom(Sequent{{goal, p, negate(p)}});
  FinPtr cut = finCut(Sequent{{goal, p}}, p, lhs, rhs);
  REQUIRE(checkDerivation(cut).empty());
  CHECK_THROWS_AS(herbrand(cut), Error);

  SearchOutcome nested = proofSearch(Sequent{{parseFormula("ex x. (X(x) -> all y. X(y))")}}, 40);
  REQUIRE(nested.kind == SearchOutcome::Kind::Found);
  CHECK_THROWS_AS(herbrand(nested.derivation), Error);
}

TEST_CASE("derivations serialize to JSON and back") {
  FinPtr d = drinkerByHand();
  std::string text = writeFinDerivation(d);
  FinPtr back = readFinDerivation(text);
  CHECK(writeFinDerivation(back) == text);
  CHECK(checkDerivation(back).empty());

  CHECK_THROWS_AS(readFinDerivation("not json"), ParseError);
  CHECK_THROWS_AS(readFinDerivation("{\"rule\":\"NoSuchRule\",\"conclusion\":[],\"premises\":[]}"),
                  ParseError);
  CHECK_THROWS_AS(readFinDerivation("{\"rule\":\"Axiom\",\"conclusion\":[],\"premises\":[{}]}"),
                  ParseError);
}
