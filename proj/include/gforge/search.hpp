#pragma once
// Schuette's deduction chains: backwards proof search with ordered sequents,
// derivation extraction on success, and countermodel extraction from the
// leftmost branch that survives the fuel horizon.
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "gforge/error.hpp"
#include "gforge/finitary.hpp"
#include "gforge/formula.hpp"

namespace gforge {

// Function symbols available to the term enumeration. The constant 0 is
// always present (it doubles as the fresh constant when the goal mentions no
// constant at all); variables v0, v1, ... are always enumerated.
struct SearchSignature {
  bool succ = false;
  bool plus = false;
  bool times = false;
};

namespace detail {

inline void scanTermSymbols(const Term& t, SearchSignature& sig) {
  switch (t.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Zero: return;
    case Term::Kind::Succ:
      sig.succ = true;
      scanTermSymbols(t.arg(0), sig);
      return;
    case Term::Kind::Plus:
      sig.plus = true;
      scanTermSymbols(t.arg(0), sig);
      scanTermSymbols(t.arg(1), sig);
      return;
    case Term::Kind::Times:
      sig.times = true;
      scanTermSymbols(t.arg(0), sig);
      scanTermSymbols(t.arg(1), sig);
      return;
  }
}

inline void scanFormulaSymbols(const Formula& f, SearchSignature& sig) {
  switch (f.kind()) {
    case Formula::Kind::Prime:
    case Formula::Kind::NegPrime:
      for (const Term& t : f.args()) scanTermSymbols(t, sig);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      scanFormulaSymbols(f.part(0), sig);
      scanFormulaSymbols(f.part(1), sig);
      return;
    case Formula::Kind::All:
    case Formula::Kind::Ex:
      scanFormulaSymbols(f.part(0), sig);
      return;
  }
}

}  // namespace detail

inline SearchSignature signatureOf(const Sequent& goal) {
  SearchSignature sig;
  for (const Formula& f : goal) detail::scanFormulaSymbols(f, sig);
  return sig;
}

// The fixed enumeration t_0, t_1, ... of all terms over a signature, ordered
// by weight (node count plus the sum of variable indices), ties broken by
// constructor order Var < 0 < S < + < * and then componentwise.
class TermEnumeration {
 public:
  explicit TermEnumeration(SearchSignature sig) : sig_(sig) {}

  Term at(std::size_t i) {
    while (flat_.size() <= i) grow();
    return flat_[i];
  }

 private:
  void grow() {
    std::uint64_t w = nextWeight_++;
    std::vector<Term> tier;
    if (w >= 1) tier.push_back(Term::var("v" + std::to_string(w - 1)));
    if (w == 1) tier.push_back(Term::zero());
    if (sig_.succ && w >= 2)
      for (const Term& t : tierAt(w - 1)) tier.push_back(Term::succ(t));
    if (sig_.plus && w >= 3)
      for (std::uint64_t wa = 1; wa + 1 < w; ++wa)
        for (const Term& a : tierAt(wa))
          for (const Term& b : tierAt(w - 1 - wa)) tier.push_back(Term::plus(a, b));
    if (sig_.times && w >= 3)
      for (std::uint64_t wa = 1; wa + 1 < w; ++wa)
        for (const Term& a : tierAt(wa))
          for (const Term& b : tierAt(w - 1 - wa)) tier.push_back(Term::times(a, b));
    tiers_.push_back(tier);
    for (const Term& t : tier) flat_.push_back(t);
  }

  const std::vector<Term>& tierAt(std::uint64_t w) {
    // Weights start at 1; tiers_[w-1] holds weight w. Callers only request
    // weights strictly below the tier currently being built.
    return tiers_[w - 1];
  }

  SearchSignature sig_;
  std::uint64_t nextWeight_ = 1;
  std::vector<std::vector<Term>> tiers_;
  std::vector<Term> flat_;
};

// ---- Ordered sequents -------------------------------------------------------

using OrderedSeq = std::vector<Formula>;

namespace detail {

inline bool seqContains(const OrderedSeq& s, const Formula& f) {
  for (const Formula& g : s)
    if (g == f) return true;
  return false;
}

inline OrderedSeq appendIfAbsent(OrderedSeq s, const Formula& f) {
  if (!seqContains(s, f)) s.push_back(f);
  return s;
}

inline Sequent toSequent(const OrderedSeq& s) {
  Sequent out;
  for (const Formula& f : s) out = out.with(f);
  return out;
}

inline std::optional<Formula> closingPrime(const OrderedSeq& s) {
  for (const Formula& f : s)
    if (f.kind() == Formula::Kind::Prime && seqContains(s, negate(f))) return f;
  return std::nullopt;
}

}  // namespace detail

// ---- Term models ------------------------------------------------------------

// The model over terms determined by a non-closing branch: every term denotes
// itself, and a tuple satisfies a relation exactly when the corresponding
// prime formula is absent from the branch union F.
struct TermModel {
  Sequent falseSet;  // F
  SearchSignature sig;
};

inline bool evalInModel(const TermModel& m, const Formula& f, std::size_t probe) {
  switch (f.kind()) {
    case Formula::Kind::Prime: return !m.falseSet.contains(f);
    case Formula::Kind::NegPrime: return m.falseSet.contains(negate(f));
    case Formula::Kind::And:
      return evalInModel(m, f.part(0), probe) && evalInModel(m, f.part(1), probe);
    case Formula::Kind::Or:
      return evalInModel(m, f.part(0), probe) || evalInModel(m, f.part(1), probe);
    case Formula::Kind::All: {
      TermEnumeration terms(m.sig);
      for (std::size_t i = 0; i < probe; ++i)
        if (!evalInModel(m, substitute(f.part(0), f.quantVar(), terms.at(i)), probe))
          return false;
      return true;
    }
    case Formula::Kind::Ex: {
      TermEnumeration terms(m.sig);
      for (std::size_t i = 0; i < probe; ++i)
        if (evalInModel(m, substitute(f.part(0), f.quantVar(), terms.at(i)), probe)) return true;
      return false;
    }
  }
  return false;
}

// Branch sequents grow monotonically as sets, so F is the set of the last one.
inline TermModel extractCountermodel(const std::vector<OrderedSeq>& branch) {
  if (branch.empty()) return {Sequent{}, SearchSignature{}};
  const OrderedSeq& last = branch.back();
  if (detail::closingPrime(last)) throw Error("branch is closable");
  Sequent f = detail::toSequent(last);
  return {f, signatureOf(f)};
}

// ---- Proof search -----------------------------------------------------------

struct SearchOutcome {
  enum class Kind { Found, Exhausted };
  Kind kind;
  FinPtr derivation;                // Found: cut-free, passes checkDerivation
  std::vector<OrderedSeq> branch;   // Exhausted: leftmost surviving branch, root first
  std::optional<TermModel> model;   // Exhausted
};

namespace detail {

struct Searcher {
  std::size_t fuel;
  TermEnumeration terms;

  // Either a derivation of the sequent's set, or the leftmost surviving
  // branch below (and including) the current node.
  using Result = std::variant<FinPtr, std::vector<OrderedSeq>>;

  Result explore(const OrderedSeq& seq, std::size_t depth, std::vector<OrderedSeq>& trace) {
    trace.push_back(seq);
    Result r = exploreInner(seq, depth, trace);
    trace.pop_back();
    return r;
  }

  Result exploreInner(const OrderedSeq& seq, std::size_t depth, std::vector<OrderedSeq>& trace) {
    if (closingPrime(seq)) return finAxiom(toSequent(seq));
    if (depth >= fuel) return trace;  // fuel horizon: this branch survives

    const Formula head = seq.front();
    OrderedSeq rest(seq.begin() + 1, seq.end());
    OrderedSeq rotated = appendIfAbsent(rest, head);

    switch (head.kind()) {
      case Formula::Kind::Prime:
      case Formula::Kind::NegPrime: {
        // Clause (i): rotate; the underlying set is unchanged, so a found
        // derivation needs no extra inference.
        return explore(rotated, depth + 1, trace);
      }
      case Formula::Kind::And: {
        Result r0 = explore(appendIfAbsent(rotated, head.part(0)), depth + 1, trace);
        if (std::holds_alternative<std::vector<OrderedSeq>>(r0)) return r0;
        Result r1 = explore(appendIfAbsent(rotated, head.part(1)), depth + 1, trace);
        if (std::holds_alternative<std::vector<OrderedSeq>>(r1)) return r1;
        return finAndIntro(toSequent(seq), head, std::get<FinPtr>(r0), std::get<FinPtr>(r1));
      }
      case Formula::Kind::Or: {
        int side = seqContains(rest, head.part(0)) ? 1 : 0;
        Result r = explore(appendIfAbsent(rotated, head.part(side)), depth + 1, trace);
        if (std::holds_alternative<std::vector<OrderedSeq>>(r)) return r;
        return finOrIntro(toSequent(seq), head, side, std::get<FinPtr>(r));
      }
      case Formula::Kind::All: {
        // Clause (iv): the first variable v_k not free in the whole sequent.
        std::set<std::string> used;
        for (const Formula& g : seq) collectFreeVars(g, used);
        std::string y = freshVar(used);
        Formula minor = substitute(head.part(0), head.quantVar(), Term::var(y));
        Result r = explore(appendIfAbsent(rotated, minor), depth + 1, trace);
        if (std::holds_alternative<std::vector<OrderedSeq>>(r)) return r;
        return finAllIntro(toSequent(seq), head, y, std::get<FinPtr>(r));
      }
      case Formula::Kind::Ex: {
        // Clause (v): the smallest k such that the rest does not contain the
        // instance. A vacuous quantifier whose instance is already present
        // admits no such k; the step degenerates to a rotation.
        std::optional<Term> witness;
        if (freeVars(head.part(0)).count(head.quantVar())) {
          for (std::size_t k = 0;; ++k) {
            Term t = terms.at(k);
            if (!seqContains(rest, substitute(head.part(0), head.quantVar(), t))) {
              witness = t;
              break;
            }
          }
        } else if (!seqContains(rest, head.part(0))) {
          witness = terms.at(0);
        }
        if (!witness) return explore(rotated, depth + 1, trace);
        Formula minor = substitute(head.part(0), head.quantVar(), *witness);
        Result r = explore(appendIfAbsent(rotated, minor), depth + 1, trace);
        if (std::holds_alternative<std::vector<OrderedSeq>>(r)) return r;
        return finExIntro(toSequent(seq), head, *witness, std::get<FinPtr>(r));
      }
    }
    throw Error("unreachable formula kind in proof search");
  }
};

}  // namespace detail

inline SearchOutcome proofSearch(const Sequent& goal, std::size_t fuel) {
  if (fuel < 1) throw Error("proof search requires fuel >= 1");
  if (goal.empty()) {
    std::vector<OrderedSeq> branch{OrderedSeq{}};
    return {SearchOutcome::Kind::Exhausted, nullptr, branch, extractCountermodel(branch)};
  }
  OrderedSeq start(goal.begin(), goal.end());
  detail::Searcher searcher{fuel, TermEnumeration(signatureOf(goal))};
  std::vector<OrderedSeq> trace;
  auto r = searcher.explore(start, 0, trace);
  if (std::holds_alternative<FinPtr>(r))
    return {SearchOutcome::Kind::Found, std::get<FinPtr>(r), {}, std::nullopt};
  auto branch = std::get<std::vector<OrderedSeq>>(r);
  return {SearchOutcome::Kind::Exhausted, nullptr, branch, extractCountermodel(branch)};
}

}  // namespace gforge
