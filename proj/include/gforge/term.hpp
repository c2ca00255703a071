#pragma once
// First-order terms of L_PA: 0, variables, S, +, *. Immutable with shared
// structure; equality and ordering are structural.
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "gforge/error.hpp"

namespace gforge {

class Term {
 public:
  enum class Kind { Var, Zero, Succ, Plus, Times };

  Term() : Term(zero()) {}

  static Term var(std::string name) {
    return Term(std::make_shared<Node>(Node{Kind::Var, std::move(name), {}}));
  }
  static Term zero() {
    static const Term z{std::make_shared<Node>(Node{Kind::Zero, "", {}})};
    return z;
  }
  static Term succ(Term t) {
    return Term(std::make_shared<Node>(Node{Kind::Succ, "", {std::move(t)}}));
  }
  static Term plus(Term a, Term b) {
    return Term(std::make_shared<Node>(Node{Kind::Plus, "", {std::move(a), std::move(b)}}));
  }
  static Term times(Term a, Term b) {
    return Term(std::make_shared<Node>(Node{Kind::Times, "", {std::move(a), std::move(b)}}));
  }

  Kind kind() const { return n_->kind; }
  const std::string& varName() const { return n_->name; }
  const Term& arg(std::size_t i) const { return n_->args[i]; }
  std::size_t arity() const { return n_->args.size(); }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.n_ == b.n_) return true;
    if (a.kind() != b.kind()) return false;
    if (a.kind() == Kind::Var) return a.varName() == b.varName();
    for (std::size_t i = 0; i < a.arity(); ++i)
      if (!(a.arg(i) == b.arg(i))) return false;
    return true;
  }
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::vector<Term> args;
  };
  explicit Term(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

// Total structural order (kind, then name/children). Used for canonical
// sequent ordering and deterministic output.
inline int cmpTerm(const Term& a, const Term& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  if (a.kind() == Term::Kind::Var)
    return a.varName() < b.varName() ? -1 : (a.varName() == b.varName() ? 0 : 1);
  for (std::size_t i = 0; i < a.arity(); ++i) {
    int c = cmpTerm(a.arg(i), b.arg(i));
    if (c != 0) return c;
  }
  return 0;
}

inline bool isClosedTerm(const Term& t) {
  if (t.kind() == Term::Kind::Var) return false;
  for (std::size_t i = 0; i < t.arity(); ++i)
    if (!isClosedTerm(t.arg(i))) return false;
  return true;
}

inline void collectTermVars(const Term& t, std::set<std::string>& out) {
  if (t.kind() == Term::Kind::Var) {
    out.insert(t.varName());
    return;
  }
  for (std::size_t i = 0; i < t.arity(); ++i) collectTermVars(t.arg(i), out);
}

// Standard-model value of a closed term.
inline std::uint64_t evalTerm(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var:
      throw Error("not evaluable: open term (variable " + t.varName() + ")");
    case Term::Kind::Zero:
      return 0;
    case Term::Kind::Succ:
      return evalTerm(t.arg(0)) + 1;
    case Term::Kind::Plus:
      return evalTerm(t.arg(0)) + evalTerm(t.arg(1));
    case Term::Kind::Times:
      return evalTerm(t.arg(0)) * evalTerm(t.arg(1));
  }
  throw Error("unreachable term kind");
}

inline Term substTerm(const Term& t, const std::string& var, const Term& by) {
  switch (t.kind()) {
    case Term::Kind::Var:
      return t.varName() == var ? by : t;
    case Term::Kind::Zero:
      return t;
    case Term::Kind::Succ:
      return Term::succ(substTerm(t.arg(0), var, by));
    case Term::Kind::Plus:
      return Term::plus(substTerm(t.arg(0), var, by), substTerm(t.arg(1), var, by));
    case Term::Kind::Times:
      return Term::times(substTerm(t.arg(0), var, by), substTerm(t.arg(1), var, by));
  }
  throw Error("unreachable term kind");
}

inline Term numeral(std::uint64_t n) {
  Term t = Term::zero();
  for (std::uint64_t i = 0; i < n; ++i) t = Term::succ(t);
  return t;
}

inline std::size_t termSize(const Term& t) {
  std::size_t s = 1;
  for (std::size_t i = 0; i < t.arity(); ++i) s += termSize(t.arg(i));
  return s;
}

namespace detail {
// Closed terms of a given size, ordered by constructor (Zero < Succ < Plus <
// Times) and recursively by the same enumeration.
inline const std::vector<Term>& closedTermsOfSize(std::size_t n) {
  static std::mutex mu;
  // deque: growth never invalidates references to existing tiers
  static std::deque<std::vector<Term>> cache;  // cache[k] = terms of size k+1
  std::lock_guard<std::mutex> lock(mu);
  while (cache.size() < n) {
    std::size_t sz = cache.size() + 1;
    std::vector<Term> tier;
    if (sz == 1) tier.push_back(Term::zero());
    if (sz >= 2)
      for (const Term& t : cache[sz - 2]) tier.push_back(Term::succ(t));
    for (int kind = 0; kind < 2; ++kind) {
      for (std::size_t ls = 1; ls + 1 < sz; ++ls) {
        for (const Term& a : cache[ls - 1])
          for (const Term& b : cache[sz - ls - 2])
            tier.push_back(kind == 0 ? Term::plus(a, b) : Term::times(a, b));
      }
    }
    cache.push_back(std::move(tier));
  }
  return cache[n - 1];
}
}  // namespace detail

// The fixed enumeration of all closed terms: by size, then the constructor
// order above. Index 0 is "0", index 1 is "S(0)".
inline Term closedTermAt(std::size_t index) {
  std::size_t sz = 1;
  for (;;) {
    const auto& tier = detail::closedTermsOfSize(sz);
    if (index < tier.size()) return tier[index];
    index -= tier.size();
    ++sz;
    if (sz > 64) throw Error("closed-term index out of desk-scale range");
  }
}

// First `count` closed terms of the enumeration.
inline std::vector<Term> closedTermPrefix(std::size_t count) {
  std::vector<Term> out;
  std::size_t sz = 1;
  while (out.size() < count) {
    for (const Term& t : detail::closedTermsOfSize(sz)) {
      out.push_back(t);
      if (out.size() == count) break;
    }
    ++sz;
  }
  return out;
}

inline std::string printTerm(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var:
      return t.varName();
    case Term::Kind::Zero:
      return "0";
    case Term::Kind::Succ:
      return "S(" + printTerm(t.arg(0)) + ")";
    case Term::Kind::Plus:
      return "(" + printTerm(t.arg(0)) + "+" + printTerm(t.arg(1)) + ")";
    case Term::Kind::Times:
      return "(" + printTerm(t.arg(0)) + "*" + printTerm(t.arg(1)) + ")";
  }
  throw Error("unreachable term kind");
}

}  // namespace gforge
