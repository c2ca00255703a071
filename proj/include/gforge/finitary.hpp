#pragma once
// The finite Tait sequent calculus: derivation trees, the checker, weakening,
// and Herbrand extraction from cut-free proofs of a purely existential goal.
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gforge/error.hpp"
#include "gforge/formula.hpp"
#include "gforge/syntax_io.hpp"

namespace gforge {

enum class FinRule { Axiom, AndIntro, OrIntro, AllIntro, ExIntro, Cut };

inline const char* finRuleName(FinRule r) {
  switch (r) {
    case FinRule::Axiom: return "Axiom";
    case FinRule::AndIntro: return "AndIntro";
    case FinRule::OrIntro: return "OrIntro";
    case FinRule::AllIntro: return "AllIntro";
    case FinRule::ExIntro: return "ExIntro";
    case FinRule::Cut: return "Cut";
  }
  return "?";
}

class FinDerivation;
using FinPtr = std::shared_ptr<const FinDerivation>;

// Immutable derivation node. Factories enforce arity; everything that can be
// wrong about a rule instance is left to checkDerivation, so that broken
// derivations are representable and can be diagnosed.
class FinDerivation {
 public:
  FinDerivation(Sequent conclusion, FinRule rule, std::optional<Formula> principal, int side,
                std::string eigen, std::optional<Term> witness, std::vector<FinPtr> premises)
      : conclusion_(std::move(conclusion)),
        rule_(rule),
        principal_(std::move(principal)),
        side_(side),
        eigen_(std::move(eigen)),
        witness_(std::move(witness)),
        premises_(std::move(premises)) {
    height_ = 0;
    for (const FinPtr& p : premises_) height_ = std::max(height_, p->height() + 1);
  }

  const Sequent& conclusion() const { return conclusion_; }
  FinRule rule() const { return rule_; }
  const std::optional<Formula>& principal() const { return principal_; }
  int side() const { return side_; }
  const std::string& eigen() const { return eigen_; }
  const std::optional<Term>& witness() const { return witness_; }
  const std::vector<FinPtr>& premises() const { return premises_; }
  std::size_t height() const { return height_; }

 private:
  Sequent conclusion_;
  FinRule rule_;
  std::optional<Formula> principal_;
  int side_;
  std::string eigen_;
  std::optional<Term> witness_;
  std::vector<FinPtr> premises_;
  std::size_t height_;
};

inline FinPtr finAxiom(Sequent conclusion) {
  return std::make_shared<FinDerivation>(std::move(conclusion), FinRule::Axiom, std::nullopt, 0,
                                         "", std::nullopt, std::vector<FinPtr>{});
}
inline FinPtr finAndIntro(Sequent conclusion, Formula principal, FinPtr p0, FinPtr p1) {
  return std::make_shared<FinDerivation>(std::move(conclusion), FinRule::AndIntro,
                                         std::move(principal), 0, "", std::nullopt,
                                         std::vector<FinPtr>{std::move(p0), std::move(p1)});
}
inline FinPtr finOrIntro(Sequent conclusion, Formula principal, int side, FinPtr p) {
  return std::make_shared<FinDerivation>(std::move(conclusion), FinRule::OrIntro,
                                         std::move(principal), side, "", std::nullopt,
                                         std::vector<FinPtr>{std::move(p)});
}
inline FinPtr finAllIntro(Sequent conclusion, Formula principal, std::string eigen, FinPtr p) {
  return std::make_shared<FinDerivation>(std::move(conclusion), FinRule::AllIntro,
                                         std::move(principal), 0, std::move(eigen), std::nullopt,
                                         std::vector<FinPtr>{std::move(p)});
}
inline FinPtr finExIntro(Sequent conclusion, Formula principal, Term witness, FinPtr p) {
  return std::make_shared<FinDerivation>(std::move(conclusion), FinRule::ExIntro,
                                         std::move(principal), 0, "", std::move(witness),
                                         std::vector<FinPtr>{std::move(p)});
}
inline FinPtr finCut(Sequent conclusion, Formula cutFormula, FinPtr p0, FinPtr p1) {
  return std::make_shared<FinDerivation>(std::move(conclusion), FinRule::Cut,
                                         std::move(cutFormula), 0, "", std::nullopt,
                                         std::vector<FinPtr>{std::move(p0), std::move(p1)});
}

// Weakening enlarges the root conclusion only; the subtree is shared and the
// height is unchanged. Rule checking stays intact because each rule reads its
// premise inclusions against the node's own conclusion.
inline FinPtr weaken(const FinPtr& d, const Sequent& extra) {
  return std::make_shared<FinDerivation>(d->conclusion().withUnion(extra), d->rule(),
                                         d->principal(), d->side(), d->eigen(), d->witness(),
                                         d->premises());
}

struct FinViolation {
  std::vector<int> path;  // premise indices from the root to the offending node
  std::string message;
};

namespace detail {

inline bool premiseWithin(const Sequent& premise, const Sequent& conclusion,
                          const Formula& minor) {
  for (const Formula& f : premise)
    if (!(f == minor) && !conclusion.contains(f)) return false;
  return true;
}

inline void checkNode(const FinDerivation& d, std::vector<int>& path,
                      std::vector<FinViolation>& out) {
  const Sequent& c = d.conclusion();
  auto report = [&](const std::string& msg) { out.push_back({path, msg}); };
  auto needPrincipal = [&](Formula::Kind kind, const char* what) -> bool {
    if (!d.principal()) {
      report(std::string("missing principal formula for ") + finRuleName(d.rule()));
      return false;
    }
    if (d.principal()->kind() != kind) {
      report(std::string("principal formula is not ") + what);
      return false;
    }
    if (!c.contains(*d.principal())) {
      report("principal formula " + printFormula(*d.principal()) +
             " does not occur in the conclusion");
      return false;
    }
    return true;
  };

  switch (d.rule()) {
    case FinRule::Axiom: {
      bool found = false;
      for (const Formula& f : c)
        if (f.kind() == Formula::Kind::Prime && c.contains(negate(f))) found = true;
      if (!found) report("axiom conclusion contains no complementary pair of prime formulas");
      break;
    }
    case FinRule::AndIntro: {
      if (!needPrincipal(Formula::Kind::And, "a conjunction")) break;
      for (int i = 0; i < 2; ++i)
        if (!premiseWithin(d.premises()[i]->conclusion(), c, d.principal()->part(i)))
          report("premise " + std::to_string(i) +
                 " contains formulas outside the conclusion and the minor formula");
      break;
    }
    case FinRule::OrIntro: {
      if (d.side() != 0 && d.side() != 1) {
        report("disjunction side must be 0 or 1");
        break;
      }
      if (!needPrincipal(Formula::Kind::Or, "a disjunction")) break;
      if (!premiseWithin(d.premises()[0]->conclusion(), c, d.principal()->part(d.side())))
        report("premise contains formulas outside the conclusion and the minor formula");
      break;
    }
    case FinRule::AllIntro: {
      if (!needPrincipal(Formula::Kind::All, "a universal formula")) break;
      Formula minor =
          substitute(d.principal()->part(0), d.principal()->quantVar(), Term::var(d.eigen()));
      const Sequent& p = d.premises()[0]->conclusion();
      if (!premiseWithin(p, c, minor))
        report("premise contains formulas outside the conclusion and the minor formula");
      // Eigenvariable condition: the variable may not be free in the retained
      // side formulas of the premise, nor in the principal formula itself.
      bool clash = false;
      for (const Formula& f : p)
        if (!(f == minor) && freeVars(f).count(d.eigen())) clash = true;
      if (freeVars(*d.principal()).count(d.eigen())) clash = true;
      if (clash)
        report("eigenvariable " + d.eigen() + " occurs free in a side formula");
      break;
    }
    case FinRule::ExIntro: {
      if (!needPrincipal(Formula::Kind::Ex, "an existential formula")) break;
      if (!d.witness()) {
        report("missing witness term");
        break;
      }
      Formula minor = substitute(d.principal()->part(0), d.principal()->quantVar(), *d.witness());
      if (!premiseWithin(d.premises()[0]->conclusion(), c, minor))
        report("premise contains formulas outside the conclusion and the minor formula");
      break;
    }
    case FinRule::Cut: {
      if (!d.principal()) {
        report("missing cut formula");
        break;
      }
      if (!premiseWithin(d.premises()[0]->conclusion(), c, *d.principal()))
        report("left cut premise contains formulas outside the conclusion and the cut formula");
      if (!premiseWithin(d.premises()[1]->conclusion(), c, negate(*d.principal())))
        report("right cut premise contains formulas outside the conclusion and the negated cut "
               "formula");
      break;
    }
  }

  for (std::size_t i = 0; i < d.premises().size(); ++i) {
    path.push_back(static_cast<int>(i));
    checkNode(*d.premises()[i], path, out);
    path.pop_back();
  }
}

}  // namespace detail

inline std::vector<FinViolation> checkDerivation(const FinDerivation& d) {
  std::vector<FinViolation> out;
  std::vector<int> path;
  detail::checkNode(d, path, out);
  return out;
}
inline std::vector<FinViolation> checkDerivation(const FinPtr& d) { return checkDerivation(*d); }

// ---- Truth-table tautology oracle ------------------------------------------
// Atoms of quantifier-free formulas are treated as independent propositional
// letters; = and <= have no special status here.

namespace detail {

inline void collectAtoms(const Formula& f, std::vector<Formula>& atoms) {
  switch (f.kind()) {
    case Formula::Kind::Prime:
    case Formula::Kind::NegPrime: {
      Formula pos = f.kind() == Formula::Kind::Prime ? f : negate(f);
      for (const Formula& a : atoms)
        if (a == pos) return;
      atoms.push_back(pos);
      return;
    }
    case Formula::Kind::And:
    case Formula::Kind::Or:
      collectAtoms(f.part(0), atoms);
      collectAtoms(f.part(1), atoms);
      return;
    default:
      throw Error("not evaluable: quantifier inside a truth-table check");
  }
}

inline bool evalBoolean(const Formula& f, const std::vector<Formula>& atoms,
                        unsigned long mask) {
  auto atomValue = [&](const Formula& pos) {
    for (std::size_t i = 0; i < atoms.size(); ++i)
      if (atoms[i] == pos) return (mask >> i) & 1UL;
    throw Error("atom lookup failed in truth-table check");
  };
  switch (f.kind()) {
    case Formula::Kind::Prime: return atomValue(f) != 0;
    case Formula::Kind::NegPrime: return atomValue(negate(f)) == 0;
    case Formula::Kind::And: return evalBoolean(f.part(0), atoms, mask) &&
                                    evalBoolean(f.part(1), atoms, mask);
    case Formula::Kind::Or: return evalBoolean(f.part(0), atoms, mask) ||
                                   evalBoolean(f.part(1), atoms, mask);
    default: throw Error("not evaluable: quantifier inside a truth-table check");
  }
}

}  // namespace detail

// True iff the disjunction of the given quantifier-free formulas holds under
// every assignment to their atoms.
inline bool isTautology(const std::vector<Formula>& disjuncts) {
  std::vector<Formula> atoms;
  for (const Formula& f : disjuncts) detail::collectAtoms(f, atoms);
  if (atoms.size() > 20) throw Error("too many distinct atoms for a truth-table check");
  unsigned long total = 1UL << atoms.size();
  for (unsigned long mask = 0; mask < total; ++mask) {
    bool any = false;
    for (const Formula& f : disjuncts)
      if (detail::evalBoolean(f, atoms, mask)) {
        any = true;
        break;
      }
    if (!any) return false;
  }
  return true;
}

// ---- Herbrand extraction ----------------------------------------------------

struct HerbrandResult {
  std::vector<Term> terms;  // witnesses t_1..t_n in first-use order
  FinPtr derivation;        // checkable derivation of the instance sequent
};

namespace detail {

inline bool quantifierFree(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Prime:
    case Formula::Kind::NegPrime: return true;
    case Formula::Kind::And:
    case Formula::Kind::Or: return quantifierFree(f.part(0)) && quantifierFree(f.part(1));
    default: return false;
  }
}

inline void herbrandScan(const FinDerivation& d, const Formula& goal,
                         std::vector<Term>& witnesses) {
  if (d.rule() == FinRule::Cut) throw Error("precondition violated: derivation contains a cut");
  for (const Formula& f : d.conclusion())
    if (!quantifierFree(f) && !(f == goal))
      throw Error("precondition violated: quantified formula besides the goal");
  if (d.rule() == FinRule::ExIntro && d.principal() && *d.principal() == goal) {
    bool seen = false;
    for (const Term& t : witnesses)
      if (t == *d.witness()) seen = true;
    if (!seen) witnesses.push_back(*d.witness());
  }
  for (const FinPtr& p : d.premises()) herbrandScan(*p, goal, witnesses);
}

inline FinPtr herbrandRebuild(const FinDerivation& d, const Formula& goal,
                              const Sequent& instances) {
  Sequent c = d.conclusion().without(goal).withUnion(instances);
  std::vector<FinPtr> ps;
  for (const FinPtr& p : d.premises()) ps.push_back(herbrandRebuild(*p, goal, instances));
  if (d.rule() == FinRule::ExIntro && d.principal() && *d.principal() == goal) {
    // The instance already sits in every rebuilt conclusion, so the inference
    // collapses; widen the premise to the conclusion this node must have.
    return weaken(ps[0], c);
  }
  return std::make_shared<FinDerivation>(std::move(c), d.rule(), d.principal(), d.side(),
                                         d.eigen(), d.witness(), std::move(ps));
}

}  // namespace detail

// Extract Herbrand terms from a cut-free derivation whose conclusion is the
// single formula Ex x. theta with theta quantifier-free. Returns the witness
// terms together with a derivation of the instance sequent.
inline HerbrandResult herbrand(const FinPtr& d) {
  if (d->conclusion().size() != 1)
    throw Error("precondition violated: conclusion is not a single formula");
  Formula goal = *d->conclusion().begin();
  if (goal.kind() != Formula::Kind::Ex)
    throw Error("precondition violated: conclusion is not existential");
  if (!detail::quantifierFree(goal.part(0)))
    throw Error("precondition violated: matrix is not quantifier-free");

  std::vector<Term> witnesses;
  detail::herbrandScan(*d, goal, witnesses);
  if (witnesses.empty()) throw Error("precondition violated: no instance of the goal was used");

  Sequent instances;
  for (const Term& t : witnesses)
    instances = instances.with(substitute(goal.part(0), goal.quantVar(), t));
  return {std::move(witnesses), detail::herbrandRebuild(*d, goal, instances)};
}

}  // namespace gforge
