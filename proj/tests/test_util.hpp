#pragma once
// Shared helpers for the test suite: a seeded random formula/term generator
// and a brute-force evaluator over random finite structures (soundness
// oracle; =, <= and X are arbitrary relations there, mirroring the calculus
// where equality has no special status).
#include <map>
#include <random>
#include <string>
#include <vector>

#include "gforge/formula.hpp"
#include "gforge/term.hpp"

namespace testutil {

struct Gen {
  std::mt19937 rng;
  explicit Gen(unsigned seed) : rng(seed) {}

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  gforge::Term term(int depth, const std::vector<std::string>& vars) {
    using gforge::Term;
    int choices = vars.empty() ? 1 : 2;
    int c = depth <= 0 ? pick(choices) : pick(choices + 3);
    if (c == 0) return Term::zero();
    if (c == 1 && !vars.empty()) return Term::var(vars[static_cast<std::size_t>(pick(
                                      static_cast<int>(vars.size())))]);
    if (c <= 2) return Term::succ(term(depth - 1, vars));
    if (c == 3) return Term::plus(term(depth - 1, vars), term(depth - 1, vars));
    return Term::times(term(depth - 1, vars), term(depth - 1, vars));
  }

  gforge::Formula literal(const std::vector<std::string>& vars) {
    using namespace gforge;
    bool neg = pick(2) == 0;
    int r = pick(3);
    std::vector<Term> args;
    if (r == 2) {
      args = {term(1, vars)};
    } else {
      args = {term(1, vars), term(1, vars)};
    }
    Rel rel = r == 0 ? Rel::Eq : r == 1 ? Rel::Le : Rel::X;
    return neg ? Formula::negPrime(rel, std::move(args)) : Formula::prime(rel, std::move(args));
  }

  gforge::Formula formula(int depth, std::vector<std::string> vars) {
    using gforge::Formula;
    if (depth <= 0) return literal(vars);
    switch (pick(5)) {
      case 0: return literal(vars);
      case 1: return Formula::conj(formula(depth - 1, vars), formula(depth - 1, vars));
      case 2: return Formula::disj(formula(depth - 1, vars), formula(depth - 1, vars));
      case 3: {
        std::string v = "q" + std::to_string(vars.size());
        vars.push_back(v);
        return Formula::all(v, formula(depth - 1, vars));
      }
      default: {
        std::string v = "q" + std::to_string(vars.size());
        vars.push_back(v);
        return Formula::ex(v, formula(depth - 1, vars));
      }
    }
  }

  gforge::Formula closedFormula(int depth) { return formula(depth, {}); }
};

// A finite structure: domain {0..n-1}, arbitrary tables for S, +, *, and
// arbitrary relations for =, <=, X.
struct FinInterp {
  int n = 1;
  std::vector<int> succTab;
  std::vector<std::vector<int>> plusTab, timesTab;
  std::vector<std::vector<char>> eqTab, leTab;
  std::vector<char> xTab;

  static FinInterp random(Gen& g, int maxSize) {
    FinInterp m;
    m.n = 1 + g.pick(maxSize);
    m.succTab.resize(static_cast<std::size_t>(m.n));
    m.xTab.resize(static_cast<std::size_t>(m.n));
    m.plusTab.assign(static_cast<std::size_t>(m.n),
                     std::vector<int>(static_cast<std::size_t>(m.n)));
    m.timesTab = m.plusTab;
    m.eqTab.assign(static_cast<std::size_t>(m.n),
                   std::vector<char>(static_cast<std::size_t>(m.n)));
    m.leTab = m.eqTab;
    for (int i = 0; i < m.n; ++i) {
      m.succTab[static_cast<std::size_t>(i)] = g.pick(m.n);
      m.xTab[static_cast<std::size_t>(i)] = static_cast<char>(g.pick(2));
      for (int j = 0; j < m.n; ++j) {
        m.plusTab[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = g.pick(m.n);
        m.timesTab[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = g.pick(m.n);
        m.eqTab[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            static_cast<char>(g.pick(2));
        m.leTab[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            static_cast<char>(g.pick(2));
      }
    }
    return m;
  }
};

using Env = std::map<std::string, int>;

inline int evalTermIn(const FinInterp& m, const gforge::Term& t, const Env& env) {
  using gforge::Term;
  switch (t.kind()) {
    case Term::Kind::Zero: return 0;
    case Term::Kind::Var: {
      auto it = env.find(t.varName());
      return it == env.end() ? 0 : it->second;
    }
    case Term::Kind::Succ:
      return m.succTab[static_cast<std::size_t>(evalTermIn(m, t.arg(0), env))];
    case Term::Kind::Plus:
      return m.plusTab[static_cast<std::size_t>(evalTermIn(m, t.arg(0), env))]
                      [static_cast<std::size_t>(evalTermIn(m, t.arg(1), env))];
    case Term::Kind::Times:
      return m.timesTab[static_cast<std::size_t>(evalTermIn(m, t.arg(0), env))]
                       [static_cast<std::size_t>(evalTermIn(m, t.arg(1), env))];
  }
  return 0;
}

inline bool evalFormulaIn(const FinInterp& m, const gforge::Formula& f, Env env) {
  using gforge::Formula;
  using gforge::Rel;
  switch (f.kind()) {
    case Formula::Kind::Prime:
    case Formula::Kind::NegPrime: {
      bool v;
      if (f.rel() == Rel::X) {
        v = m.xTab[static_cast<std::size_t>(evalTermIn(m, f.args()[0], env))] != 0;
      } else {
        int a = evalTermIn(m, f.args()[0], env);
        int b = evalTermIn(m, f.args()[1], env);
        const auto& tab = f.rel() == Rel::Eq ? m.eqTab : m.leTab;
        v = tab[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] != 0;
      }
      return f.kind() == Formula::Kind::Prime ? v : !v;
    }
    case Formula::Kind::And:
      return evalFormulaIn(m, f.part(0), env) && evalFormulaIn(m, f.part(1), env);
    case Formula::Kind::Or:
      return evalFormulaIn(m, f.part(0), env) || evalFormulaIn(m, f.part(1), env);
    case Formula::Kind::All:
      for (int d = 0; d < m.n; ++d) {
        env[f.quantVar()] = d;
        if (!evalFormulaIn(m, f.part(0), env)) return false;
      }
      return true;
    case Formula::Kind::Ex:
      for (int d = 0; d < m.n; ++d) {
        env[f.quantVar()] = d;
        if (evalFormulaIn(m, f.part(0), env)) return true;
      }
      return false;
  }
  return false;
}

inline bool sequentTrueIn(const FinInterp& m, const gforge::Sequent& s) {
  for (const gforge::Formula& f : s)
    if (evalFormulaIn(m, f, {})) return true;
  return false;
}

}  // namespace testutil
