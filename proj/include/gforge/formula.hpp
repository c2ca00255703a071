#pragma once
// Formulas of L_PA^X in negation normal form: literals over =, <=, X, binary
// and/or, quantifiers. Negation is the defined de-Morgan operation, so
// negate(negate(f)) is f syntactically; implication is sugar.
#include <algorithm>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "gforge/error.hpp"
#include "gforge/term.hpp"

namespace gforge {

enum class Rel { Eq, Le, X };

class Formula {
 public:
  enum class Kind { Prime, NegPrime, And, Or, All, Ex };

  Formula() : Formula(prime(Rel::Eq, {Term::zero(), Term::zero()})) {}

  static Formula prime(Rel rel, std::vector<Term> args) {
    return make(Kind::Prime, rel, std::move(args), {}, "");
  }
  static Formula negPrime(Rel rel, std::vector<Term> args) {
    return make(Kind::NegPrime, rel, std::move(args), {}, "");
  }
  static Formula conj(Formula a, Formula b) {
    return make(Kind::And, Rel::Eq, {}, {std::move(a), std::move(b)}, "");
  }
  static Formula disj(Formula a, Formula b) {
    return make(Kind::Or, Rel::Eq, {}, {std::move(a), std::move(b)}, "");
  }
  static Formula all(std::string var, Formula body) {
    return make(Kind::All, Rel::Eq, {}, {std::move(body)}, std::move(var));
  }
  static Formula ex(std::string var, Formula body) {
    return make(Kind::Ex, Rel::Eq, {}, {std::move(body)}, std::move(var));
  }

  static Formula eq(Term a, Term b) { return prime(Rel::Eq, {std::move(a), std::move(b)}); }
  static Formula le(Term a, Term b) { return prime(Rel::Le, {std::move(a), std::move(b)}); }
  static Formula xatom(Term t) { return prime(Rel::X, {std::move(t)}); }

  Kind kind() const { return n_->kind; }
  Rel rel() const { return n_->rel; }
  const std::vector<Term>& args() const { return n_->args; }
  const Formula& part(std::size_t i) const { return n_->parts[i]; }
  const std::string& quantVar() const { return n_->var; }

  bool isLiteral() const { return kind() == Kind::Prime || kind() == Kind::NegPrime; }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.n_ == b.n_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case Kind::Prime:
      case Kind::NegPrime:
        if (a.rel() != b.rel() || a.args().size() != b.args().size()) return false;
        for (std::size_t i = 0; i < a.args().size(); ++i)
          if (a.args()[i] != b.args()[i]) return false;
        return true;
      case Kind::And:
      case Kind::Or:
        return a.part(0) == b.part(0) && a.part(1) == b.part(1);
      case Kind::All:
      case Kind::Ex:
        return a.quantVar() == b.quantVar() && a.part(0) == b.part(0);
    }
    return false;
  }
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  struct Node {
    Kind kind;
    Rel rel;
    std::vector<Term> args;
    std::vector<Formula> parts;
    std::string var;
  };
  static Formula make(Kind k, Rel r, std::vector<Term> args, std::vector<Formula> parts,
                      std::string var) {
    return Formula(std::make_shared<Node>(
        Node{k, r, std::move(args), std::move(parts), std::move(var)}));
  }
  explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

inline int cmpFormula(const Formula& a, const Formula& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case Formula::Kind::Prime:
    case Formula::Kind::NegPrime: {
      if (a.rel() != b.rel()) return a.rel() < b.rel() ? -1 : 1;
      if (a.args().size() != b.args().size())
        return a.args().size() < b.args().size() ? -1 : 1;
      for (std::size_t i = 0; i < a.args().size(); ++i) {
        int c = cmpTerm(a.args()[i], b.args()[i]);
        if (c != 0) return c;
      }
      return 0;
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      int c = cmpFormula(a.part(0), b.part(0));
      return c != 0 ? c : cmpFormula(a.part(1), b.part(1));
    }
    case Formula::Kind::All:
    case Formula::Kind::Ex: {
      if (a.quantVar() != b.quantVar()) return a.quantVar() < b.quantVar() ? -1 : 1;
      return cmpFormula(a.part(0), b.part(0));
    }
  }
  return 0;
}

inline bool formulaLess(const Formula& a, const Formula& b) { return cmpFormula(a, b) < 0; }

// De Morgan negation; an involution on NNF.
inline Formula negate(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Prime:
      return Formula::negPrime(f.rel(), f.args());
    case Formula::Kind::NegPrime:
      return Formula::prime(f.rel(), f.args());
    case Formula::Kind::And:
      return Formula::disj(negate(f.part(0)), negate(f.part(1)));
    case Formula::Kind::Or:
      return Formula::conj(negate(f.part(0)), negate(f.part(1)));
    case Formula::Kind::All:
      return Formula::ex(f.quantVar(), negate(f.part(0)));
    case Formula::Kind::Ex:
      return Formula::all(f.quantVar(), negate(f.part(0)));
  }
  throw Error("unreachable formula kind");
}

// a -> b is notation for (~a) | b.
inline Formula implies(const Formula& a, const Formula& b) {
  return Formula::disj(negate(a), b);
}

// Literals rank 0; each connective or quantifier adds one. Invariant under
// negate and substitution.
inline std::uint64_t rank(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Prime:
    case Formula::Kind::NegPrime:
      return 0;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      return std::max(rank(f.part(0)), rank(f.part(1))) + 1;
    case Formula::Kind::All:
    case Formula::Kind::Ex:
      return rank(f.part(0)) + 1;
  }
  throw Error("unreachable formula kind");
}

inline void collectFreeVars(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case Formula::Kind::Prime:
    case Formula::Kind::NegPrime:
      for (const Term& t : f.args()) collectTermVars(t, out);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      collectFreeVars(f.part(0), out);
      collectFreeVars(f.part(1), out);
      return;
    case Formula::Kind::All:
    case Formula::Kind::Ex: {
      std::set<std::string> inner;
      collectFreeVars(f.part(0), inner);
      inner.erase(f.quantVar());
      out.insert(inner.begin(), inner.end());
      return;
    }
  }
}

inline std::set<std::string> freeVars(const Formula& f) {
  std::set<std::string> s;
  collectFreeVars(f, s);
  return s;
}

inline bool isClosed(const Formula& f) { return freeVars(f).empty(); }

// The fixed fresh-name scheme: smallest v0, v1, ... not in `used`.
inline std::string freshVar(const std::set<std::string>& used) {
  for (std::size_t k = 0;; ++k) {
    std::string cand = "v" + std::to_string(k);
    if (!used.count(cand)) return cand;
  }
}

// Capture-avoiding substitution f[var/by]; bound variables that would capture
// a free variable of `by` are renamed with the deterministic fresh scheme.
inline Formula substitute(const Formula& f, const std::string& var, const Term& by) {
  switch (f.kind()) {
    case Formula::Kind::Prime:
    case Formula::Kind::NegPrime: {
      std::vector<Term> args;
      args.reserve(f.args().size());
      for (const Term& t : f.args()) args.push_back(substTerm(t, var, by));
      return f.kind() == Formula::Kind::Prime ? Formula::prime(f.rel(), std::move(args))
                                              : Formula::negPrime(f.rel(), std::move(args));
    }
    case Formula::Kind::And:
      return Formula::conj(substitute(f.part(0), var, by), substitute(f.part(1), var, by));
    case Formula::Kind::Or:
      return Formula::disj(substitute(f.part(0), var, by), substitute(f.part(1), var, by));
    case Formula::Kind::All:
    case Formula::Kind::Ex: {
      const bool isAll = f.kind() == Formula::Kind::All;
      if (f.quantVar() == var) return f;  // var is shadowed
      std::set<std::string> bodyFree = freeVars(f.part(0));
      if (!bodyFree.count(var)) return f;  // nothing to substitute
      std::set<std::string> byVars;
      collectTermVars(by, byVars);
      std::string bv = f.quantVar();
      Formula body = f.part(0);
      if (byVars.count(bv)) {
        std::set<std::string> used = bodyFree;
        used.insert(byVars.begin(), byVars.end());
        used.insert(var);
        std::string nv = freshVar(used);
        body = substitute(body, bv, Term::var(nv));
        bv = nv;
      }
      Formula newBody = substitute(body, var, by);
      return isAll ? Formula::all(bv, std::move(newBody)) : Formula::ex(bv, std::move(newBody));
    }
  }
  throw Error("unreachable formula kind");
}

// Truth of a closed L_PA literal in the standard model. X-literals and open
// formulas are outside the evaluable fragment.
inline bool evalLiteral(const Formula& f) {
  if (!f.isLiteral()) throw Error("not evaluable: not a literal");
  if (f.rel() == Rel::X) throw Error("not evaluable: X-literal");
  for (const Term& t : f.args())
    if (!isClosedTerm(t)) throw Error("not evaluable: open literal");
  std::uint64_t a = evalTerm(f.args()[0]);
  std::uint64_t b = evalTerm(f.args()[1]);
  bool v = f.rel() == Rel::Eq ? a == b : a <= b;
  return f.kind() == Formula::Kind::Prime ? v : !v;
}

// ---- Decomposition (conjunctive / disjunctive classification) -------------
// True L_PA literals are conjunctive with empty index set, false ones
// disjunctive with empty index set; and/or have indices {0,1}; quantifiers
// have all closed terms as indices. X-literals are neither.

struct Decomposition {
  enum class Kind { Conjunctive, Disjunctive, AtomicX };
  enum class Indices { Empty, Pair, ClosedTerms };
  Kind kind;
  Indices indices;
  Formula formula;

  // Component at a binary index (And/Or only).
  Formula at(int i) const {
    if (indices != Indices::Pair || i < 0 || i > 1)
      throw Error("decomposition has no component at index " + std::to_string(i));
    return formula.part(static_cast<std::size_t>(i));
  }
  // Component at a closed term (All/Ex only).
  Formula at(const Term& t) const {
    if (indices != Indices::ClosedTerms) throw Error("decomposition has no term components");
    if (!isClosedTerm(t)) throw Error("decomposition index must be a closed term");
    return substitute(formula.part(0), formula.quantVar(), t);
  }
};

inline Decomposition decompose(const Formula& f) {
  if (!isClosed(f)) throw Error("decompose requires a closed formula");
  switch (f.kind()) {
    case Formula::Kind::Prime:
    case Formula::Kind::NegPrime:
      if (f.rel() == Rel::X) return {Decomposition::Kind::AtomicX, Decomposition::Indices::Empty, f};
      return {evalLiteral(f) ? Decomposition::Kind::Conjunctive : Decomposition::Kind::Disjunctive,
              Decomposition::Indices::Empty, f};
    case Formula::Kind::And:
      return {Decomposition::Kind::Conjunctive, Decomposition::Indices::Pair, f};
    case Formula::Kind::Or:
      return {Decomposition::Kind::Disjunctive, Decomposition::Indices::Pair, f};
    case Formula::Kind::All:
      return {Decomposition::Kind::Conjunctive, Decomposition::Indices::ClosedTerms, f};
    case Formula::Kind::Ex:
      return {Decomposition::Kind::Disjunctive, Decomposition::Indices::ClosedTerms, f};
  }
  throw Error("unreachable formula kind");
}

// ---- Sequents (finite formula sets, canonically ordered) -------------------

class Sequent {
 public:
  Sequent() = default;
  explicit Sequent(std::vector<Formula> fs) {
    for (Formula& f : fs) insert(std::move(f));
  }

  bool contains(const Formula& f) const {
    auto it = std::lower_bound(fs_.begin(), fs_.end(), f, formulaLess);
    return it != fs_.end() && *it == f;
  }
  void insert(Formula f) {
    auto it = std::lower_bound(fs_.begin(), fs_.end(), f, formulaLess);
    if (it == fs_.end() || !(*it == f)) fs_.insert(it, std::move(f));
  }
  void erase(const Formula& f) {
    auto it = std::lower_bound(fs_.begin(), fs_.end(), f, formulaLess);
    if (it != fs_.end() && *it == f) fs_.erase(it);
  }
  Sequent withUnion(const Sequent& other) const {
    Sequent r = *this;
    for (const Formula& f : other.fs_) r.insert(f);
    return r;
  }
  Sequent with(const Formula& f) const {
    Sequent r = *this;
    r.insert(f);
    return r;
  }
  Sequent without(const Formula& f) const {
    Sequent r = *this;
    r.erase(f);
    return r;
  }
  bool subsetOf(const Sequent& other) const {
    for (const Formula& f : fs_)
      if (!other.contains(f)) return false;
    return true;
  }
  std::size_t size() const { return fs_.size(); }
  bool empty() const { return fs_.empty(); }
  auto begin() const { return fs_.begin(); }
  auto end() const { return fs_.end(); }
  const std::vector<Formula>& items() const { return fs_; }

  friend bool operator==(const Sequent& a, const Sequent& b) { return a.fs_ == b.fs_; }

 private:
  std::vector<Formula> fs_;  // sorted by cmpFormula, duplicate-free
};

}  // namespace gforge
