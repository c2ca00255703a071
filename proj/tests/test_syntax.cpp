#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "gforge/coded_order.hpp"
#include "gforge/syntax_io.hpp"
#include "test_util.hpp"

using namespace gforge;
using testutil::Gen;

TEST_CASE("negate is the NNF de Morgan dual") {
  Formula xa = Formula::xatom(Term::var("x"));
  CHECK(negate(xa) == Formula::negPrime(Rel::X, {Term::var("x")}));
  CHECK(negate(Formula::all("x", xa)) == Formula::ex("x", negate(xa)));
  CHECK(negate(Formula::conj(xa, xa)) == Formula::disj(negate(xa), negate(xa)));
  Gen g(101);
  for (int i = 0; i < 100; ++i) {
    Formula f = g.formula(3, {"x", "y"});
    CHECK(negate(negate(f)) == f);
  }
}

TEST_CASE("implies unfolds to a disjunction") {
  Formula xa = Formula::xatom(Term::var("x"));
  CHECK(implies(xa, xa) == Formula::disj(negate(xa), xa));
  Formula drinker = Formula::ex(
      "x", implies(Formula::xatom(Term::var("x")),
                   Formula::all("y", Formula::xatom(Term::var("y")))));
  CHECK(printFormula(drinker) == "ex x. (X(x) -> all y. X(y))");
  CHECK(parseFormula(printFormula(drinker)) == drinker);
}

TEST_CASE("rank counts connective and quantifier depth") {
  CHECK(rank(Formula::xatom(Term::zero())) == 0);
  CHECK(rank(Formula::all("x", Formula::xatom(Term::var("x")))) == 1);
  Gen g(102);
  for (int i = 0; i < 100; ++i) {
    Formula f = g.formula(3, {"x", "y"});
    CHECK(rank(negate(f)) == rank(f));
    CHECK(rank(substitute(f, "x", g.term(2, {"y"}))) == rank(f));
  }
}

TEST_CASE("substitution is capture avoiding") {
  Formula xa = Formula::xatom(Term::var("x"));
  CHECK(substitute(xa, "x", Term::zero()) == Formula::xatom(Term::zero()));
  Formula allX = Formula::all("x", xa);
  CHECK(substitute(allX, "x", Term::succ(Term::zero())) == allX);  // x is bound

  // all y. x=y under [x := S(y)] must rename the binder.
  Formula f = Formula::all("y", Formula::eq(Term::var("x"), Term::var("y")));
  Formula r = substitute(f, "x", Term::succ(Term::var("y")));
  REQUIRE(r.kind() == Formula::Kind::All);
  CHECK(r.quantVar() != "y");
  CHECK(freeVars(r) == std::set<std::string>{"y"});

  Gen g(103);
  for (int i = 0; i < 200; ++i) {
    Formula f2 = g.formula(3, {"x", "y", "z"});
    Term t = g.term(2, {"y", "z"});
    std::set<std::string> before = freeVars(f2);
    std::set<std::string> expect;
    if (before.count("x")) {
      expect = before;
      expect.erase("x");
      std::set<std::string> tv;
      collectTermVars(t, tv);
      expect.insert(tv.begin(), tv.end());
    } else {
      expect = before;
    }
    CHECK(freeVars(substitute(f2, "x", t)) == expect);
  }
}

TEST_CASE("closed evaluation over the standard model") {
  Term two = Term::succ(Term::succ(Term::zero()));
  CHECK(evalTerm(Term::times(two, two)) == 4);
  CHECK_FALSE(evalLiteral(Formula::le(Term::succ(Term::zero()), Term::zero())));
  CHECK(evalLiteral(Formula::negPrime(Rel::Eq, {Term::zero(), Term::succ(Term::zero())})));
  CHECK_THROWS_AS(evalLiteral(Formula::xatom(Term::zero())), Error);
  CHECK_THROWS_AS(evalTerm(Term::var("x")), Error);
}

TEST_CASE("decomposition matches the conjunctive/disjunctive split") {
  Formula tl = Formula::eq(Term::zero(), Term::zero());
  Decomposition d = decompose(tl);
  CHECK(d.kind == Decomposition::Kind::Conjunctive);
  CHECK(d.indices == Decomposition::Indices::Empty);

  Decomposition dn = decompose(negate(tl));
  CHECK(dn.kind == Decomposition::Kind::Disjunctive);
  CHECK(dn.indices == Decomposition::Indices::Empty);

  Formula allf = Formula::all("x", Formula::xatom(Term::var("x")));
  Decomposition da = decompose(allf);
  CHECK(da.kind == Decomposition::Kind::Conjunctive);
  CHECK(da.indices == Decomposition::Indices::ClosedTerms);
  Term t = Term::succ(Term::zero());
  CHECK(da.at(t) == substitute(allf.part(0), "x", t));

  CHECK(decompose(Formula::xatom(Term::zero())).kind == Decomposition::Kind::AtomicX);
  CHECK(decompose(negate(Formula::xatom(Term::zero()))).kind == Decomposition::Kind::AtomicX);

  // iota(~f) = iota(f) and (~f)_t = ~(f_t) for conjunctive closed f.
  Gen g(104);
  int tried = 0;
  for (int i = 0; i < 400 && tried < 60; ++i) {
    Formula f = g.closedFormula(3);
    Decomposition df = decompose(f);
    if (df.kind != Decomposition::Kind::Conjunctive) continue;
    ++tried;
    Decomposition dneg = decompose(negate(f));
    REQUIRE(dneg.kind == Decomposition::Kind::Disjunctive);
    CHECK(dneg.indices == df.indices);
    if (df.indices == Decomposition::Indices::Pair) {
      CHECK(dneg.at(0) == negate(df.at(0)));
      CHECK(dneg.at(1) == negate(df.at(1)));
    } else if (df.indices == Decomposition::Indices::ClosedTerms) {
      CHECK(dneg.at(t) == negate(df.at(t)));
    }
  }
  CHECK(tried >= 20);
}

TEST_CASE("the Gentzen jump binds everything but the distinguished variable") {
  CodedOrder ord = codedOrderOfSize(2);
  Formula f = Formula::xatom(Term::var("a"));
  Formula j = jump(f, "a", ord);
  CHECK(freeVars(j) == std::set<std::string>{"a"});
  CHECK(rank(j) > rank(f));
  Formula jj = jump(j, "a", ord);
  CHECK(freeVars(jj) == std::set<std::string>{"a"});
  CHECK(rank(jj) > rank(j));
  CHECK(parseFormula(printFormula(jj)) == jj);  // still NNF, printable grammar
}

TEST_CASE("formula parser and printer") {
  Formula f = parseFormula("all x. (X(x) | !X(x))");
  REQUIRE(f.kind() == Formula::Kind::All);
  CHECK(f.part(0) == Formula::disj(Formula::xatom(Term::var("x")),
                                   Formula::negPrime(Rel::X, {Term::var("x")})));

  // ! on compound input compiles away at parse time.
  CHECK(parseFormula("!(X(0) & X(1))") ==
        Formula::disj(Formula::negPrime(Rel::X, {Term::zero()}),
                      Formula::negPrime(Rel::X, {Term::succ(Term::zero())})));

  CHECK_THROWS_AS(parseFormula("all x."), ParseError);
  CHECK_THROWS_AS(parseFormula("X(x) &"), ParseError);
  CHECK_THROWS_AS(parseFormula("(X(x)"), ParseError);

  CHECK(parseTerm("(0+S(0))") == Term::plus(Term::zero(), Term::succ(Term::zero())));
  CHECK_THROWS_AS(parseTerm("S(0"), ParseError);

  Gen g(105);
  for (int i = 0; i < 200; ++i) {
    Formula r = g.formula(3, {"x", "y"});
    CHECK(parseFormula(printFormula(r)) == r);
  }
}

TEST_CASE("sequents behave as ordered sets") {
  Formula a = Formula::xatom(Term::zero());
  Formula b = Formula::xatom(Term::succ(Term::zero()));
  Sequent s{{b, a, a, b}};
  CHECK(s.size() == 2);
  CHECK(s.contains(a));
  CHECK(s.with(a) == s);
  CHECK(s.without(a).size() == 1);
  CHECK(printSequent(s) == printSequent(Sequent{{a, b}}));
}
