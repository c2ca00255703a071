#pragma once
// Text form of terms and formulas.
//   terms:    0 | x | S(t) | (t+t) | (t*t)
//   atoms:    t=t | t<=t | X(t)
//   formulas: atom | !fm | (fm & fm) | (fm | fm) | (fm -> fm)
//             | all x. fm | ex x. fm
// ! and -> are sugar and are compiled away on parse; printing re-sugars a
// disjunction with a negated-prime left part back into ->.
#include <string>

#include "gforge/error.hpp"
#include "gforge/formula.hpp"
#include "gforge/term.hpp"

namespace gforge {

namespace detail {

struct FormulaParser {
  const std::string& s;
  std::size_t i = 0;

  void skipWs() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n')) ++i;
  }
  bool peek(char c) {
    skipWs();
    return i < s.size() && s[i] == c;
  }
  bool eat(char c) {
    if (peek(c)) {
      ++i;
      return true;
    }
    return false;
  }
  bool eatStr(const std::string& w) {
    skipWs();
    if (s.compare(i, w.size(), w) == 0) {
      i += w.size();
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw ParseError("formula parse error at position " + std::to_string(i) + ": " + what);
  }

  static bool identStart(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool identCont(char c) {
    return identStart(c) || (c >= '0' && c <= '9') || c == '\'';
  }

  std::string peekIdent() {
    skipWs();
    std::size_t j = i;
    if (j >= s.size() || !identStart(s[j])) return "";
    std::string w;
    while (j < s.size() && identCont(s[j])) w += s[j++];
    return w;
  }
  std::string takeIdent() {
    std::string w = peekIdent();
    if (w.empty()) fail("expected identifier");
    i += w.size();
    return w;
  }

  Term term() {
    skipWs();
    if (i >= s.size()) fail("expected term");
    char c = s[i];
    if (c >= '0' && c <= '9') {
      std::uint64_t n = 0;
      while (i < s.size() && s[i] >= '0' && s[i] <= '9') n = n * 10 + (s[i++] - '0');
      return numeral(n);
    }
    if (c == '(') {
      ++i;
      Term a = term();
      skipWs();
      if (i >= s.size()) fail("expected + or * in term");
      char op = s[i];
      if (op != '+' && op != '*') fail("expected + or * in term");
      ++i;
      Term b = term();
      if (!eat(')')) fail("expected ')' in term");
      return op == '+' ? Term::plus(a, b) : Term::times(a, b);
    }
    std::string w = peekIdent();
    if (w == "S") {
      i += 1;
      if (!eat('(')) fail("expected '(' after S");
      Term a = term();
      if (!eat(')')) fail("expected ')' after S(");
      return Term::succ(a);
    }
    if (w.empty() || w == "all" || w == "ex" || w == "X") fail("expected term");
    i += w.size();
    return Term::var(w);
  }

  Formula atomFrom(Term lhs) {
    skipWs();
    if (eatStr("<=")) return Formula::le(lhs, term());
    if (eat('=')) return Formula::eq(lhs, term());
    fail("expected = or <= after term");
  }

  Formula atom() {
    skipWs();
    if (peekIdent() == "X") {
      i += 1;
      if (!eat('(')) fail("expected '(' after X");
      Term t = term();
      if (!eat(')')) fail("expected ')' after X(");
      return Formula::xatom(t);
    }
    return atomFrom(term());
  }

  Formula formula() {
    skipWs();
    if (i >= s.size()) fail("expected formula");
    if (eat('!')) return negate(formula());
    std::string w = peekIdent();
    if (w == "all" || w == "ex") {
      i += w.size();
      std::string v = takeIdent();
      if (v == "all" || v == "ex" || v == "S" || v == "X") fail("reserved word used as variable");
      if (!eat('.')) fail("expected '.' after quantified variable");
      Formula body = formula();
      return w == "all" ? Formula::all(v, body) : Formula::ex(v, body);
    }
    if (peek('(')) {
      // Either a connective group or a parenthesized arithmetic term; try the
      // connective reading first and fall back on failure.
      std::size_t save = i;
      try {
        ++i;  // consume '('
        Formula a = formula();
        skipWs();
        Formula r = a;
        if (eat('&')) {
          r = Formula::conj(a, formula());
        } else if (eat('|')) {
          r = Formula::disj(a, formula());
        } else if (eatStr("->")) {
          r = implies(a, formula());
        } else {
          fail("expected connective");
        }
        if (!eat(')')) fail("expected ')'");
        return r;
      } catch (const ParseError&) {
        i = save;
        return atom();
      }
    }
    return atom();
  }
};

}  // namespace detail

inline Term parseTerm(const std::string& text) {
  detail::FormulaParser p{text, 0};
  Term t = p.term();
  p.skipWs();
  if (p.i != text.size()) p.fail("trailing input");
  return t;
}

inline Formula parseFormula(const std::string& text) {
  detail::FormulaParser p{text, 0};
  Formula f = p.formula();
  p.skipWs();
  if (p.i != text.size()) p.fail("trailing input");
  return f;
}

inline std::string printFormula(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Prime:
    case Formula::Kind::NegPrime: {
      std::string neg = f.kind() == Formula::Kind::NegPrime ? "!" : "";
      if (f.rel() == Rel::X) return neg + "X(" + printTerm(f.args()[0]) + ")";
      std::string op = f.rel() == Rel::Eq ? "=" : "<=";
      return neg + printTerm(f.args()[0]) + op + printTerm(f.args()[1]);
    }
    case Formula::Kind::And:
      return "(" + printFormula(f.part(0)) + " & " + printFormula(f.part(1)) + ")";
    case Formula::Kind::Or:
      if (f.part(0).kind() == Formula::Kind::NegPrime)
        return "(" + printFormula(negate(f.part(0))) + " -> " + printFormula(f.part(1)) + ")";
      return "(" + printFormula(f.part(0)) + " | " + printFormula(f.part(1)) + ")";
    case Formula::Kind::All:
      return "all " + f.quantVar() + ". " + printFormula(f.part(0));
    case Formula::Kind::Ex:
      return "ex " + f.quantVar() + ". " + printFormula(f.part(0));
  }
  throw Error("unreachable formula kind");
}

inline std::string printSequent(const Sequent& s) {
  std::string out;
  bool first = true;
  for (const Formula& f : s) {
    if (!first) out += ", ";
    out += printFormula(f);
    first = false;
  }
  return out;
}

}  // namespace gforge
