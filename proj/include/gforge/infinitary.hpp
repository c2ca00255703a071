#pragma once
// The infinitary calculus: derivations with ordinal bounds, cut ranks, and
// lazily produced premises. Nodes are built through the mk* constructors,
// which enforce the rule-local side conditions eagerly; the relations between
// a node and its (possibly infinitely many) premises are spot-checked by
// localCheck over a finite probe plan.
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "gforge/coded_order.hpp"
#include "gforge/error.hpp"
#include "gforge/finitary.hpp"
#include "gforge/formula.hpp"
#include "gforge/ordinal.hpp"

namespace gforge {

// Premise index: 0/1 for binary conjunctions, disjunction sides and cuts;
// a closed term for omega rules and progression rules.
using InfIndex = std::variant<int, Term>;

struct InfIndexLess {
  bool operator()(const InfIndex& a, const InfIndex& b) const {
    if (a.index() != b.index()) return a.index() < b.index();
    if (a.index() == 0) return std::get<int>(a) < std::get<int>(b);
    return cmpTerm(std::get<Term>(a), std::get<Term>(b)) < 0;
  }
};

inline bool infIndexEq(const InfIndex& a, const InfIndex& b) {
  InfIndexLess lt;
  return !lt(a, b) && !lt(b, a);
}

inline std::string printInfIndex(const InfIndex& ix) {
  if (ix.index() == 0) return std::to_string(std::get<int>(ix));
  return printTerm(std::get<Term>(ix));
}

enum class InfRule { AxiomTrue, AxiomX, Conj, Disj, Prog, Cut };

inline const char* infRuleName(InfRule r) {
  switch (r) {
    case InfRule::AxiomTrue: return "AxiomTrue";
    case InfRule::AxiomX: return "AxiomX";
    case InfRule::Conj: return "Conj";
    case InfRule::Disj: return "Disj";
    case InfRule::Prog: return "Prog";
    case InfRule::Cut: return "Cut";
  }
  return "?";
}

class InfDerivation;
using InfPtr = std::shared_ptr<const InfDerivation>;
using PremiseFn = std::function<InfPtr(const InfIndex&)>;

namespace detail {
struct InfBuilder;
}

class InfDerivation {
 public:
  const Sequent& end() const { return end_; }
  const Ordinal& bound() const { return bound_; }
  int cutRank() const { return cutRank_; }
  InfRule rule() const { return rule_; }
  // Conj/Disj/Prog: the principal formula; Cut: the cut formula.
  const std::optional<Formula>& principal() const { return principal_; }
  const std::optional<InfIndex>& chosen() const { return chosen_; }
  const std::shared_ptr<const CodedOrder>& order() const { return order_; }

  // The premise at a valid index. Index validity is checked here; the
  // premise's own bound/cut-rank/sequent relations are localCheck's job.
  InfPtr premiseAt(const InfIndex& ix) const {
    validateIndex(ix);
    {
      std::lock_guard<std::mutex> lock(memoMu_);
      auto it = memo_.find(ix);
      if (it != memo_.end()) return it->second;
    }
    InfPtr p = fn_(ix);
    if (!p) throw Error("premise function returned null");
    std::lock_guard<std::mutex> lock(memoMu_);
    return memo_.emplace(ix, std::move(p)).first->second;
  }

 private:
  friend struct detail::InfBuilder;
  InfDerivation(Sequent end, Ordinal bound, int cutRank, InfRule rule,
                std::optional<Formula> principal, std::optional<InfIndex> chosen,
                std::shared_ptr<const CodedOrder> order, PremiseFn fn)
      : end_(std::move(end)),
        bound_(std::move(bound)),
        cutRank_(cutRank),
        rule_(rule),
        principal_(std::move(principal)),
        chosen_(std::move(chosen)),
        order_(std::move(order)),
        fn_(std::move(fn)) {}

  void validateIndex(const InfIndex& ix) const {
    switch (rule_) {
      case InfRule::AxiomTrue:
      case InfRule::AxiomX: throw Error("axioms have no premises");
      case InfRule::Conj:
        if (principal_->kind() == Formula::Kind::And) {
          if (ix.index() != 0 || std::get<int>(ix) < 0 || std::get<int>(ix) > 1)
            throw Error("binary conjunction premises are indexed by 0 and 1");
        } else {
          if (ix.index() != 1 || !isClosedTerm(std::get<Term>(ix)))
            throw Error("omega-rule premises are indexed by closed terms");
        }
        return;
      case InfRule::Disj:
        if (!infIndexEq(ix, *chosen_))
          throw Error("disjunction has a single premise at its chosen index");
        return;
      case InfRule::Prog: {
        if (ix.index() != 1 || !isClosedTerm(std::get<Term>(ix)))
          throw Error("progression premises are indexed by closed terms");
        std::uint64_t s = evalTerm(std::get<Term>(ix));
        std::uint64_t t = evalTerm(principal_->args()[0]);
        if (!order_->before(s, t))
          throw Error("term is not a predecessor of the principal term in the coded order");
        return;
      }
      case InfRule::Cut:
        if (ix.index() != 0 || std::get<int>(ix) < 0 || std::get<int>(ix) > 1)
          throw Error("cut premises are indexed by 0 and 1");
        return;
    }
    throw Error("unreachable rule tag");
  }

  Sequent end_;
  Ordinal bound_;
  int cutRank_;
  InfRule rule_;
  std::optional<Formula> principal_;
  std::optional<InfIndex> chosen_;
  std::shared_ptr<const CodedOrder> order_;
  PremiseFn fn_;
  mutable std::mutex memoMu_;
  mutable std::map<InfIndex, InfPtr, InfIndexLess> memo_;
};

namespace detail {

struct InfBuilder {
  static InfPtr make(Sequent end, Ordinal bound, int cutRank, InfRule rule,
                     std::optional<Formula> principal, std::optional<InfIndex> chosen,
                     std::shared_ptr<const CodedOrder> order, PremiseFn fn) {
    return InfPtr(new InfDerivation(std::move(end), std::move(bound), cutRank, rule,
                                    std::move(principal), std::move(chosen), std::move(order),
                                    std::move(fn)));
  }
};

inline void requireClosedEnd(const Sequent& end) {
  for (const Formula& f : end)
    if (!isClosed(f)) throw Error("infinitary sequents must be closed");
}

inline bool isTrueArithLiteral(const Formula& f) {
  return f.isLiteral() && f.rel() != Rel::X && evalLiteral(f);
}

}  // namespace detail

// ---- Constructors -----------------------------------------------------------

inline InfPtr mkAxiomTrue(Sequent end, Ordinal bound, int cutRank) {
  detail::requireClosedEnd(end);
  if (cutRank < 0) throw Error("cut rank must be nonnegative");
  bool ok = false;
  for (const Formula& f : end)
    if (detail::isTrueArithLiteral(f)) ok = true;
  if (!ok) throw Error("AxiomTrue requires a true closed arithmetical literal in the end sequent");
  return detail::InfBuilder::make(std::move(end), std::move(bound), cutRank, InfRule::AxiomTrue,
                                  std::nullopt, std::nullopt, nullptr, nullptr);
}

inline InfPtr mkAxiomX(Sequent end, Ordinal bound, int cutRank) {
  detail::requireClosedEnd(end);
  if (cutRank < 0) throw Error("cut rank must be nonnegative");
  bool ok = false;
  for (const Formula& f : end) {
    if (!(f.kind() == Formula::Kind::Prime && f.rel() == Rel::X)) continue;
    std::uint64_t v = evalTerm(f.args()[0]);
    for (const Formula& g : end)
      if (g.kind() == Formula::Kind::NegPrime && g.rel() == Rel::X &&
          evalTerm(g.args()[0]) == v)
        ok = true;
  }
  if (!ok) throw Error("AxiomX requires X-literals of both signs with equal values");
  return detail::InfBuilder::make(std::move(end), std::move(bound), cutRank, InfRule::AxiomX,
                                  std::nullopt, std::nullopt, nullptr, nullptr);
}

inline InfPtr mkConj(Sequent end, Ordinal bound, int cutRank, Formula principal, PremiseFn fn) {
  detail::requireClosedEnd(end);
  if (cutRank < 0) throw Error("cut rank must be nonnegative");
  if (principal.kind() != Formula::Kind::And && principal.kind() != Formula::Kind::All)
    throw Error("Conj requires a conjunctive principal formula");
  if (!end.contains(principal)) throw Error("principal formula is not in the end sequent");
  return detail::InfBuilder::make(std::move(end), std::move(bound), cutRank, InfRule::Conj,
                                  std::move(principal), std::nullopt, nullptr, std::move(fn));
}

inline InfPtr mkDisj(Sequent end, Ordinal bound, int cutRank, Formula principal, InfIndex chosen,
                     PremiseFn fn) {
  detail::requireClosedEnd(end);
  if (cutRank < 0) throw Error("cut rank must be nonnegative");
  if (principal.kind() == Formula::Kind::Or) {
    if (chosen.index() != 0 || std::get<int>(chosen) < 0 || std::get<int>(chosen) > 1)
      throw Error("binary disjunction chooses component 0 or 1");
  } else if (principal.kind() == Formula::Kind::Ex) {
    if (chosen.index() != 1 || !isClosedTerm(std::get<Term>(chosen)))
      throw Error("existential disjunction chooses a closed witness term");
  } else {
    throw Error("Disj requires a disjunctive principal formula");
  }
  if (!end.contains(principal)) throw Error("principal formula is not in the end sequent");
  return detail::InfBuilder::make(std::move(end), std::move(bound), cutRank, InfRule::Disj,
                                  std::move(principal), std::move(chosen), nullptr, std::move(fn));
}

inline InfPtr mkProg(Sequent end, Ordinal bound, int cutRank, Formula principal,
                     std::shared_ptr<const CodedOrder> order, PremiseFn fn) {
  detail::requireClosedEnd(end);
  if (cutRank < 0) throw Error("cut rank must be nonnegative");
  if (!order) throw Error("Prog requires a coded order");
  if (!(principal.kind() == Formula::Kind::Prime && principal.rel() == Rel::X))
    throw Error("Prog requires a positive X-literal as principal formula");
  if (!end.contains(principal)) throw Error("principal formula is not in the end sequent");
  return detail::InfBuilder::make(std::move(end), std::move(bound), cutRank, InfRule::Prog,
                                  std::move(principal), std::nullopt, std::move(order),
                                  std::move(fn));
}

inline InfPtr mkCut(Sequent end, Ordinal bound, int cutRank, Formula cutFormula, PremiseFn fn) {
  detail::requireClosedEnd(end);
  if (cutRank < 0) throw Error("cut rank must be nonnegative");
  if (!isClosed(cutFormula)) throw Error("cut formulas must be closed");
  if (rank(cutFormula) >= static_cast<std::uint64_t>(cutRank))
    throw Error("cut formula rank must be strictly below the cut rank");
  return detail::InfBuilder::make(std::move(end), std::move(bound), cutRank, InfRule::Cut,
                                  std::move(cutFormula), std::nullopt, nullptr, std::move(fn));
}

// The formula a premise at `ix` may add to the node's end sequent.
inline std::optional<Formula> premiseComponent(const InfDerivation& n, const InfIndex& ix) {
  switch (n.rule()) {
    case InfRule::AxiomTrue:
    case InfRule::AxiomX: return std::nullopt;
    case InfRule::Conj:
      if (n.principal()->kind() == Formula::Kind::And)
        return n.principal()->part(static_cast<std::size_t>(std::get<int>(ix)));
      return substitute(n.principal()->part(0), n.principal()->quantVar(), std::get<Term>(ix));
    case InfRule::Disj:
      if (n.principal()->kind() == Formula::Kind::Or)
        return n.principal()->part(static_cast<std::size_t>(std::get<int>(ix)));
      return substitute(n.principal()->part(0), n.principal()->quantVar(), std::get<Term>(ix));
    case InfRule::Prog: return Formula::xatom(std::get<Term>(ix));
    case InfRule::Cut:
      return std::get<int>(ix) == 0 ? *n.principal() : negate(*n.principal());
  }
  return std::nullopt;
}

// ---- Weakening --------------------------------------------------------------
// Weakening relabels the root: a larger end sequent, bound, or cut rank keeps
// every rule-local condition intact, with the same premises.

inline InfPtr weaken(const InfPtr& d, const Sequent& extra, const Ordinal& bound, int cutRank) {
  Sequent end = d->end().withUnion(extra);
  detail::requireClosedEnd(end);
  if (!ordLeq(d->bound(), bound)) throw Error("weakening cannot lower the ordinal bound");
  if (cutRank < d->cutRank()) throw Error("weakening cannot lower the cut rank");
  if (end == d->end() && compare(bound, d->bound()) == Cmp::EQ && cutRank == d->cutRank())
    return d;
  InfPtr inner = d;
  return detail::InfBuilder::make(std::move(end), bound, cutRank, d->rule(), d->principal(),
                                  d->chosen(), d->order(),
                                  [inner](const InfIndex& ix) { return inner->premiseAt(ix); });
}

inline InfPtr weaken(const InfPtr& d, const Sequent& extra) {
  return weaken(d, extra, d->bound(), d->cutRank());
}

// ---- Same-value replacement -------------------------------------------------

namespace detail {

inline bool termsSameValue(const Term& a, const Term& b) {
  if (a.kind() == Term::Kind::Var || b.kind() == Term::Kind::Var)
    return a.kind() == b.kind() && a.varName() == b.varName();
  if (isClosedTerm(a) && isClosedTerm(b)) return evalTerm(a) == evalTerm(b);
  if (a.kind() != b.kind()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (!termsSameValue(a.arg(i), b.arg(i))) return false;
  return true;
}

}  // namespace detail

// Same shape, same relations and connectives, and corresponding closed terms
// with equal values (free variables must match by name).
inline bool formulasSameValueEquivalent(const Formula& a, const Formula& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Formula::Kind::Prime:
    case Formula::Kind::NegPrime: {
      if (a.rel() != b.rel() || a.args().size() != b.args().size()) return false;
      for (std::size_t i = 0; i < a.args().size(); ++i)
        if (!detail::termsSameValue(a.args()[i], b.args()[i])) return false;
      return true;
    }
    case Formula::Kind::And:
    case Formula::Kind::Or:
      return formulasSameValueEquivalent(a.part(0), b.part(0)) &&
             formulasSameValueEquivalent(a.part(1), b.part(1));
    case Formula::Kind::All:
    case Formula::Kind::Ex:
      return a.quantVar() == b.quantVar() &&
             formulasSameValueEquivalent(a.part(0), b.part(0));
  }
  return false;
}

namespace detail {

struct FormulaOrder {
  bool operator()(const Formula& a, const Formula& b) const { return formulaLess(a, b); }
};
using TransformMap = std::map<Formula, Formula, FormulaOrder>;

inline Formula transformOne(const TransformMap& m, const Formula& f) {
  auto it = m.find(f);
  return it == m.end() ? f : it->second;
}

inline void extendTransform(TransformMap& m, const Formula& from, const Formula& to) {
  if (from == to) return;
  m.insert_or_assign(from, to);
}

inline InfPtr applyTransform(const InfPtr& d, const TransformMap& m) {
  if (m.empty()) return d;
  Sequent end;
  for (const Formula& f : d->end()) end.insert(transformOne(m, f));
  const Ordinal& b = d->bound();
  int cr = d->cutRank();
  switch (d->rule()) {
    case InfRule::AxiomTrue: return mkAxiomTrue(end, b, cr);
    case InfRule::AxiomX: return mkAxiomX(end, b, cr);
    case InfRule::Conj: {
      Formula p = *d->principal();
      Formula p2 = transformOne(m, p);
      InfPtr inner = d;
      return mkConj(end, b, cr, p2, [inner, m, p, p2](const InfIndex& ix) {
        TransformMap m2 = m;
        if (!(p == p2)) {
          if (p.kind() == Formula::Kind::And) {
            std::size_t i = static_cast<std::size_t>(std::get<int>(ix));
            extendTransform(m2, p.part(i), p2.part(i));
          } else {
            const Term& t = std::get<Term>(ix);
            extendTransform(m2, substitute(p.part(0), p.quantVar(), t),
                            substitute(p2.part(0), p2.quantVar(), t));
          }
        }
        return applyTransform(inner->premiseAt(ix), m2);
      });
    }
    case InfRule::Disj: {
      Formula p = *d->principal();
      Formula p2 = transformOne(m, p);
      InfIndex chosen = *d->chosen();
      InfPtr inner = d;
      return mkDisj(end, b, cr, p2, chosen, [inner, m, p, p2](const InfIndex& ix) {
        TransformMap m2 = m;
        if (!(p == p2)) {
          if (p.kind() == Formula::Kind::Or) {
            std::size_t i = static_cast<std::size_t>(std::get<int>(ix));
            extendTransform(m2, p.part(i), p2.part(i));
          } else {
            const Term& t = std::get<Term>(ix);
            extendTransform(m2, substitute(p.part(0), p.quantVar(), t),
                            substitute(p2.part(0), p2.quantVar(), t));
          }
        }
        return applyTransform(inner->premiseAt(ix), m2);
      });
    }
    case InfRule::Prog: {
      // The principal X-literal may change term, not value, so the premise
      // family and the per-index components X(s) are unchanged.
      Formula p2 = transformOne(m, *d->principal());
      InfPtr inner = d;
      return mkProg(end, b, cr, p2, d->order(),
                    [inner, m](const InfIndex& ix) { return applyTransform(inner->premiseAt(ix), m); });
    }
    case InfRule::Cut: {
      Formula cf = *d->principal();
      Formula cf2 = transformOne(m, cf);
      InfPtr inner = d;
      return mkCut(end, b, cr, cf2, [inner, m, cf, cf2](const InfIndex& ix) {
        TransformMap m2 = m;
        if (std::get<int>(ix) == 0)
          extendTransform(m2, cf, cf2);
        else
          extendTransform(m2, negate(cf), negate(cf2));
        return applyTransform(inner->premiseAt(ix), m2);
      });
    }
  }
  throw Error("unreachable rule tag");
}

}  // namespace detail

// Replace a formula by a same-value-equivalent one throughout a derivation.
// Bounds and cut ranks are untouched; every rule stays locally correct
// because axiom truth and premise families only depend on term values.
inline InfPtr sameValueReplace(const InfPtr& d, const Formula& from, const Formula& to) {
  if (from == to) return d;
  if (!formulasSameValueEquivalent(from, to))
    throw Error("sameValueReplace requires same-value-equivalent formulas");
  detail::TransformMap m;
  m.emplace(from, to);
  return detail::applyTransform(d, m);
}

// ---- Local checking ---------------------------------------------------------

struct InfViolation {
  std::vector<InfIndex> path;
  std::string message;
};

struct ProbePlan {
  // Node-visit budget for the default sweep; also the width used when
  // sampling numeral premises of omega rules.
  std::size_t budget = 16;
  // Extra index paths from the root, walked in full.
  std::vector<std::vector<InfIndex>> paths;
};

namespace detail {

inline void checkNodeLocal(const InfDerivation& n, const std::vector<InfIndex>& path,
                           std::vector<InfViolation>& out) {
  auto report = [&](const std::string& msg) { out.push_back({path, msg}); };
  switch (n.rule()) {
    case InfRule::AxiomTrue: {
      bool ok = false;
      for (const Formula& f : n.end())
        if (isTrueArithLiteral(f)) ok = true;
      if (!ok) report("no true arithmetical literal in the end sequent");
      return;
    }
    case InfRule::AxiomX: {
      bool ok = false;
      for (const Formula& f : n.end()) {
        if (!(f.kind() == Formula::Kind::Prime && f.rel() == Rel::X)) continue;
        for (const Formula& g : n.end())
          if (g.kind() == Formula::Kind::NegPrime && g.rel() == Rel::X &&
              evalTerm(g.args()[0]) == evalTerm(f.args()[0]))
            ok = true;
      }
      if (!ok) report("no same-value X-literal pair in the end sequent");
      return;
    }
    case InfRule::Conj:
    case InfRule::Disj:
    case InfRule::Prog:
      if (!n.end().contains(*n.principal())) report("principal formula is not in the end sequent");
      return;
    case InfRule::Cut:
      if (rank(*n.principal()) >= static_cast<std::uint64_t>(n.cutRank()))
        report("cut formula rank is not below the cut rank");
      return;
  }
}

inline std::vector<InfIndex> sampleIndices(const InfDerivation& n, std::size_t width) {
  std::vector<InfIndex> out;
  switch (n.rule()) {
    case InfRule::AxiomTrue:
    case InfRule::AxiomX: return out;
    case InfRule::Conj:
      if (n.principal()->kind() == Formula::Kind::And) {
        out.push_back(0);
        out.push_back(1);
      } else {
        for (std::size_t i = 0; i < width; ++i) out.push_back(numeral(i));
      }
      return out;
    case InfRule::Disj:
      out.push_back(*n.chosen());
      return out;
    case InfRule::Prog: {
      std::uint64_t t = evalTerm(n.principal()->args()[0]);
      if (n.order()->inDomain(t))
        for (std::uint64_t u : n.order()->predecessors(t)) out.push_back(numeral(u));
      return out;
    }
    case InfRule::Cut:
      out.push_back(0);
      out.push_back(1);
      return out;
  }
  return out;
}

inline void checkEdge(const InfDerivation& n, const InfIndex& ix, const InfDerivation& p,
                      const std::vector<InfIndex>& path, std::vector<InfViolation>& out) {
  auto report = [&](const std::string& msg) { out.push_back({path, msg}); };
  if (!ordLess(p.bound(), n.bound()))
    report("premise bound is not strictly below the node bound at index " + printInfIndex(ix));
  if (p.cutRank() > n.cutRank())
    report("premise cut rank exceeds the node cut rank at index " + printInfIndex(ix));
  std::optional<Formula> comp = premiseComponent(n, ix);
  Sequent allowed = comp ? n.end().with(*comp) : n.end();
  if (!p.end().subsetOf(allowed))
    report("premise sequent is not within the conclusion and component at index " +
           printInfIndex(ix));
}

inline void probe(const InfPtr& node, std::vector<InfIndex>& path, std::size_t width,
                  std::size_t& visitsLeft, std::vector<InfViolation>& out) {
  if (visitsLeft == 0) return;
  --visitsLeft;
  checkNodeLocal(*node, path, out);
  for (const InfIndex& ix : sampleIndices(*node, width)) {
    if (visitsLeft == 0) return;
    InfPtr p;
    try {
      p = node->premiseAt(ix);
    } catch (const Error& e) {
      out.push_back({path, "premise at index " + printInfIndex(ix) +
                               " failed to construct: " + e.what()});
      continue;
    }
    checkEdge(*node, ix, *p, path, out);
    path.push_back(ix);
    probe(p, path, width, visitsLeft, out);
    path.pop_back();
  }
}

}  // namespace detail

inline std::vector<InfViolation> localCheck(const InfPtr& d, const ProbePlan& plan = {}) {
  std::vector<InfViolation> out;
  std::vector<InfIndex> path;
  std::size_t visits = plan.budget;
  detail::probe(d, path, plan.budget, visits, out);
  for (const std::vector<InfIndex>& walk : plan.paths) {
    InfPtr cur = d;
    path.clear();
    detail::checkNodeLocal(*cur, path, out);
    for (const InfIndex& ix : walk) {
      InfPtr p;
      try {
        p = cur->premiseAt(ix);
      } catch (const Error& e) {
        out.push_back({path, "premise at index " + printInfIndex(ix) +
                                 " failed to construct: " + e.what()});
        break;
      }
      detail::checkEdge(*cur, ix, *p, path, out);
      path.push_back(ix);
      detail::checkNodeLocal(*p, path, out);
      cur = p;
    }
  }
  return out;
}

// ---- Truth derivations ------------------------------------------------------

// Budgeted evaluation of a closed L_PA sentence: quantifiers range over the
// numerals below the budget. Exact on the quantifier-free fragment.
inline bool evalClosedFormula(const Formula& f, std::size_t quantBudget) {
  switch (f.kind()) {
    case Formula::Kind::Prime:
    case Formula::Kind::NegPrime: return evalLiteral(f);
    case Formula::Kind::And:
      return evalClosedFormula(f.part(0), quantBudget) &&
             evalClosedFormula(f.part(1), quantBudget);
    case Formula::Kind::Or:
      return evalClosedFormula(f.part(0), quantBudget) ||
             evalClosedFormula(f.part(1), quantBudget);
    case Formula::Kind::All:
      for (std::size_t n = 0; n < quantBudget; ++n)
        if (!evalClosedFormula(substitute(f.part(0), f.quantVar(), numeral(n)), quantBudget))
          return false;
      return true;
    case Formula::Kind::Ex:
      for (std::size_t n = 0; n < quantBudget; ++n)
        if (evalClosedFormula(substitute(f.part(0), f.quantVar(), numeral(n)), quantBudget))
          return true;
      return false;
  }
  throw Error("unreachable formula kind");
}

// Cut-free derivation of a true closed L_PA sentence with bound rank(f).
inline InfPtr deriveTruth(const Formula& f, std::size_t quantBudget = 32) {
  if (!isClosed(f)) throw Error("deriveTruth requires a closed formula");
  if (!evalClosedFormula(f, quantBudget))
    throw Error("formula is not true under the budgeted evaluator");
  Sequent end{{f}};
  if (f.isLiteral()) return mkAxiomTrue(end, zeroOrd(), 0);
  Ordinal b = fromNat(rank(f));
  switch (f.kind()) {
    case Formula::Kind::And:
      return mkConj(end, b, 0, f, [f, quantBudget](const InfIndex& ix) {
        return deriveTruth(f.part(static_cast<std::size_t>(std::get<int>(ix))), quantBudget);
      });
    case Formula::Kind::Or: {
      int i = evalClosedFormula(f.part(0), quantBudget) ? 0 : 1;
      return mkDisj(end, b, 0, f, i, [f, i, quantBudget](const InfIndex&) {
        return deriveTruth(f.part(static_cast<std::size_t>(i)), quantBudget);
      });
    }
    case Formula::Kind::All:
      return mkConj(end, b, 0, f, [f, quantBudget](const InfIndex& ix) {
        return deriveTruth(substitute(f.part(0), f.quantVar(), std::get<Term>(ix)), quantBudget);
      });
    case Formula::Kind::Ex: {
      std::optional<std::uint64_t> w;
      for (std::size_t n = 0; n < quantBudget && !w; ++n)
        if (evalClosedFormula(substitute(f.part(0), f.quantVar(), numeral(n)), quantBudget))
          w = n;
      if (!w) throw Error("no witness below the evaluation budget");
      Term t = numeral(*w);
      return mkDisj(end, b, 0, f, t, [f, t, quantBudget](const InfIndex&) {
        return deriveTruth(substitute(f.part(0), f.quantVar(), t), quantBudget);
      });
    }
    default: throw Error("unreachable formula kind");
  }
}

// ---- Excluded middle --------------------------------------------------------

// Cut-free derivation of {f, ¬f} with bound 2 * rank(f), for closed f
// (X-literals allowed).
inline InfPtr deriveExcludedMiddle(const Formula& f) {
  if (!isClosed(f)) throw Error("deriveExcludedMiddle requires a closed formula");
  Formula neg = negate(f);
  Sequent end{{f, neg}};
  if (f.isLiteral()) {
    if (f.rel() == Rel::X) return mkAxiomX(end, zeroOrd(), 0);
    return mkAxiomTrue(end, zeroOrd(), 0);
  }
  switch (f.kind()) {
    case Formula::Kind::And: {
      // neg = ¬c0 ∨ ¬c1; premise i pairs EM(c_i) under a Disj on neg.
      return mkConj(end, fromNat(2 * rank(f)), 0, f, [f, neg](const InfIndex& ix) {
        int i = std::get<int>(ix);
        Formula ci = f.part(static_cast<std::size_t>(i));
        Sequent mid{{ci, neg}};
        return mkDisj(mid, fromNat(2 * rank(ci) + 1), 0, neg, i,
                      [ci](const InfIndex&) { return deriveExcludedMiddle(ci); });
      });
    }
    case Formula::Kind::All: {
      // neg = ex x. ¬body; premise t pairs EM(body[x/t]) under a Disj on neg.
      return mkConj(end, fromNat(2 * rank(f)), 0, f, [f, neg](const InfIndex& ix) {
        Term t = std::get<Term>(ix);
        Formula inst = substitute(f.part(0), f.quantVar(), t);
        Sequent mid{{inst, neg}};
        return mkDisj(mid, fromNat(2 * rank(f) - 1), 0, neg, t,
                      [inst](const InfIndex&) { return deriveExcludedMiddle(inst); });
      });
    }
    default:
      // Disjunctive kinds: {f, ¬f} and {¬f, ¬¬f} are the same sequent.
      return deriveExcludedMiddle(neg);
  }
}

// ---- Omega rule over numeral premises ---------------------------------------

// Conj over all closed terms from premises given only at numerals: the
// premise at t is the premise at val(t) with the instance formula replaced by
// its same-value variant at t.
inline InfPtr omegaRuleNumerals(std::function<InfPtr(std::uint64_t)> premFn, Sequent target,
                                Formula principal, Ordinal bound, int cutRank) {
  if (principal.kind() != Formula::Kind::All)
    throw Error("omegaRuleNumerals requires a universal principal formula");
  Formula body = principal.part(0);
  std::string x = principal.quantVar();
  return mkConj(std::move(target), std::move(bound), cutRank, principal,
                [premFn, body, x](const InfIndex& ix) {
                  Term t = std::get<Term>(ix);
                  std::uint64_t n = evalTerm(t);
                  InfPtr d = premFn(n);
                  if (t == numeral(n)) return d;
                  return sameValueReplace(d, substitute(body, x, numeral(n)),
                                          substitute(body, x, t));
                });
}

// ---- Equality axiom ---------------------------------------------------------

inline Formula equalityAxiomXFormula() {
  Term x = Term::var("x"), y = Term::var("y");
  Formula body = Formula::disj(
      Formula::disj(Formula::negPrime(Rel::Eq, {x, y}), Formula::negPrime(Rel::X, {x})),
      Formula::xatom(y));
  return Formula::all("x", Formula::all("y", body));
}

namespace detail {

inline InfPtr equalityInstance(const Formula& body, const Term& s, const Term& t) {
  // body = ((¬s=t ∨ ¬Xs) ∨ Xt)
  Formula inner = body.part(0);
  Formula xs = inner.part(1);   // ¬Xs
  Formula xt = body.part(1);    // Xt
  Formula eqLit = inner.part(0);  // ¬s=t
  if (evalTerm(s) != evalTerm(t)) {
    InfPtr l0 = mkAxiomTrue(Sequent{{eqLit}}, zeroOrd(), 0);
    InfPtr d1 = mkDisj(Sequent{{inner}}, fromNat(1), 0, inner, 0,
                       [l0](const InfIndex&) { return l0; });
    return mkDisj(Sequent{{body}}, fromNat(2), 0, body, 0,
                  [d1](const InfIndex&) { return d1; });
  }
  InfPtr l0 = mkAxiomX(Sequent{{xs, xt}}, zeroOrd(), 0);
  InfPtr d1 = mkDisj(Sequent{{inner, xt}}, fromNat(1), 0, inner, 1,
                     [l0](const InfIndex&) { return l0; });
  InfPtr d2 = mkDisj(Sequent{{body, xt}}, fromNat(2), 0, body, 0,
                     [d1](const InfIndex&) { return d1; });
  return mkDisj(Sequent{{body}}, fromNat(3), 0, body, 1, [d2](const InfIndex&) { return d2; });
}

}  // namespace detail

// Cut-free derivation of ∀x∀y((¬x=y ∨ ¬Xx) ∨ Xy) with bound 6.
inline InfPtr deriveEqualityAxiomX() {
  Formula ax = equalityAxiomXFormula();
  return mkConj(Sequent{{ax}}, fromNat(6), 0, ax, [ax](const InfIndex& ixS) {
    Term s = std::get<Term>(ixS);
    Formula ay = substitute(ax.part(0), ax.quantVar(), s);
    return mkConj(Sequent{{ay}}, fromNat(5), 0, ay, [ay, s](const InfIndex& ixT) {
      Term t = std::get<Term>(ixT);
      Formula body = substitute(ay.part(0), ay.quantVar(), t);
      return detail::equalityInstance(body, s, t);
    });
  });
}

// ---- Induction --------------------------------------------------------------

namespace detail {

struct InductionCtx {
  Formula psi;
  std::string x;
  Formula psi0, negPsi0, matrix, exStep;  // exStep = ex x. (psi & !psi[x/Sx])
  std::uint64_t r;

  // D_n: {¬psi[0], exStep, psi[n]} with bound 2(r+n), cut-free.
  InfPtr chain(std::uint64_t n, const std::shared_ptr<const InductionCtx>& self) const {
    if (n == 0) return gforge::weaken(deriveExcludedMiddle(psi0), Sequent{{exStep}});
    std::uint64_t m = n - 1;
    Term mbar = numeral(m);
    Formula psiN = substitute(psi, x, numeral(n));
    Formula comp = substitute(matrix, x, mbar);  // psi[m] & !psi[n]
    Sequent conjEnd{{negPsi0, exStep, psiN, comp}};
    InfPtr c = mkConj(conjEnd, fromNat(2 * (r + m) + 1), 0, comp,
                      [self, m, psiN](const InfIndex& ix) {
                        if (std::get<int>(ix) == 0) return self->chain(m, self);
                        return deriveExcludedMiddle(psiN);
                      });
    return mkDisj(Sequent{{negPsi0, exStep, psiN}}, fromNat(2 * (r + m) + 2), 0, exStep,
                  InfIndex{mbar}, [c](const InfIndex&) { return c; });
  }
};

}  // namespace detail

inline Formula inductionAxiomFormula(const Formula& psi, const std::string& x) {
  Formula psi0 = substitute(psi, x, Term::zero());
  Formula matrix = Formula::conj(psi, negate(substitute(psi, x, Term::succ(Term::var(x)))));
  Formula a = Formula::disj(negate(psi0), Formula::ex(x, matrix));
  return Formula::disj(a, Formula::all(x, psi));
}

// Cut-free derivation of the induction axiom for psi (free variables among
// {x}) with bound omega + 4.
inline InfPtr deriveInduction(const Formula& psi, const std::string& x) {
  std::set<std::string> fv = freeVars(psi);
  fv.erase(x);
  if (!fv.empty())
    throw Error("induction formula must have no free variables besides the induction variable");
  auto ctx = std::make_shared<const detail::InductionCtx>(detail::InductionCtx{
      psi, x, substitute(psi, x, Term::zero()),
      negate(substitute(psi, x, Term::zero())),
      Formula::conj(psi, negate(substitute(psi, x, Term::succ(Term::var(x))))),
      Formula::ex(x, Formula::conj(psi, negate(substitute(psi, x, Term::succ(Term::var(x)))))),
      rank(psi)});
  Formula b = Formula::all(x, psi);
  Formula a = Formula::disj(ctx->negPsi0, ctx->exStep);
  Formula ind = Formula::disj(a, b);
  InfPtr w = omegaRuleNumerals([ctx](std::uint64_t n) { return ctx->chain(n, ctx); },
                               Sequent{{ctx->negPsi0, ctx->exStep, b}}, b, omegaOrd(), 0);
  InfPtr a1 = mkDisj(Sequent{{ctx->negPsi0, ctx->exStep, ind}}, add(omegaOrd(), fromNat(1)), 0,
                     ind, 1, [w](const InfIndex&) { return w; });
  InfPtr a2 = mkDisj(Sequent{{ctx->negPsi0, a, ind}}, add(omegaOrd(), fromNat(2)), 0, a, 1,
                     [a1](const InfIndex&) { return a1; });
  InfPtr a3 = mkDisj(Sequent{{a, ind}}, add(omegaOrd(), fromNat(3)), 0, a, 0,
                     [a2](const InfIndex&) { return a2; });
  return mkDisj(Sequent{{ind}}, add(omegaOrd(), fromNat(4)), 0, ind, 0,
                [a3](const InfIndex&) { return a3; });
}

// ---- Embedding finitary derivations -----------------------------------------

using VarSubst = std::map<std::string, Term>;

namespace detail {

inline Term embedTerm(const Term& t, const VarSubst& s, const std::set<std::string>& bound) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      if (bound.count(t.varName())) return t;
      auto it = s.find(t.varName());
      return it != s.end() ? it->second : Term::zero();  // auto-close with 0
    }
    case Term::Kind::Zero: return t;
    case Term::Kind::Succ: return Term::succ(embedTerm(t.arg(0), s, bound));
    case Term::Kind::Plus:
      return Term::plus(embedTerm(t.arg(0), s, bound), embedTerm(t.arg(1), s, bound));
    case Term::Kind::Times:
      return Term::times(embedTerm(t.arg(0), s, bound), embedTerm(t.arg(1), s, bound));
  }
  throw Error("unreachable term kind");
}

inline Formula embedFormula(const Formula& f, const VarSubst& s, std::set<std::string>& bound) {
  switch (f.kind()) {
    case Formula::Kind::Prime:
    case Formula::Kind::NegPrime: {
      std::vector<Term> args;
      args.reserve(f.args().size());
      for (const Term& t : f.args()) args.push_back(embedTerm(t, s, bound));
      return f.kind() == Formula::Kind::Prime ? Formula::prime(f.rel(), std::move(args))
                                              : Formula::negPrime(f.rel(), std::move(args));
    }
    case Formula::Kind::And:
      return Formula::conj(embedFormula(f.part(0), s, bound), embedFormula(f.part(1), s, bound));
    case Formula::Kind::Or:
      return Formula::disj(embedFormula(f.part(0), s, bound), embedFormula(f.part(1), s, bound));
    case Formula::Kind::All:
    case Formula::Kind::Ex: {
      bool fresh = bound.insert(f.quantVar()).second;
      Formula inner = embedFormula(f.part(0), s, bound);
      if (fresh) bound.erase(f.quantVar());
      return f.kind() == Formula::Kind::All ? Formula::all(f.quantVar(), std::move(inner))
                                            : Formula::ex(f.quantVar(), std::move(inner));
    }
  }
  throw Error("unreachable formula kind");
}

inline Formula embedFormula(const Formula& f, const VarSubst& s) {
  std::set<std::string> bound;
  return embedFormula(f, s, bound);
}

inline int finCutRank(const FinDerivation& d) {
  int r = 0;
  if (d.rule() == FinRule::Cut)
    r = static_cast<int>(rank(*d.principal())) + 1;
  for (const FinPtr& p : d.premises()) r = std::max(r, finCutRank(*p));
  return r;
}

inline InfPtr embedNode(const FinPtr& node, const VarSubst& subst, int cutRank) {
  Sequent end;
  for (const Formula& f : node->conclusion()) end.insert(embedFormula(f, subst));
  Ordinal b = fromNat(node->height());
  switch (node->rule()) {
    case FinRule::Axiom: {
      for (const Formula& f : node->conclusion()) {
        if (f.kind() != Formula::Kind::Prime) continue;
        if (!node->conclusion().contains(negate(f))) continue;
        if (f.rel() == Rel::X) return mkAxiomX(end, b, cutRank);
        return mkAxiomTrue(end, b, cutRank);
      }
      throw Error("cannot embed an axiom without a complementary literal pair");
    }
    case FinRule::AndIntro: {
      Formula p = embedFormula(*node->principal(), subst);
      return mkConj(end, b, cutRank, p, [node, subst, cutRank](const InfIndex& ix) {
        return embedNode(node->premises()[static_cast<std::size_t>(std::get<int>(ix))], subst,
                         cutRank);
      });
    }
    case FinRule::OrIntro: {
      Formula p = embedFormula(*node->principal(), subst);
      return mkDisj(end, b, cutRank, p, node->side(),
                    [node, subst, cutRank](const InfIndex&) {
                      return embedNode(node->premises()[0], subst, cutRank);
                    });
    }
    case FinRule::AllIntro: {
      Formula p = embedFormula(*node->principal(), subst);
      std::string eigen = node->eigen();
      return mkConj(end, b, cutRank, p, [node, subst, cutRank, eigen](const InfIndex& ix) {
        VarSubst s2 = subst;
        s2[eigen] = std::get<Term>(ix);
        return embedNode(node->premises()[0], s2, cutRank);
      });
    }
    case FinRule::ExIntro: {
      Formula p = embedFormula(*node->principal(), subst);
      std::set<std::string> noBound;
      Term w = embedTerm(*node->witness(), subst, noBound);
      return mkDisj(end, b, cutRank, p, w, [node, subst, cutRank](const InfIndex&) {
        return embedNode(node->premises()[0], subst, cutRank);
      });
    }
    case FinRule::Cut: {
      Formula cf = embedFormula(*node->principal(), subst);
      return mkCut(end, b, cutRank, cf, [node, subst, cutRank](const InfIndex& ix) {
        return embedNode(node->premises()[static_cast<std::size_t>(std::get<int>(ix))], subst,
                         cutRank);
      });
    }
  }
  throw Error("unreachable rule tag");
}

}  // namespace detail

// Embed a finitary derivation: bound = tree height, cut rank = max cut-formula
// rank + 1. Free variables of the conclusion (and of existential witnesses)
// are closed off with 0; eigenvariables become omega-rule indices.
inline InfPtr embedFin(const FinPtr& d, const VarSubst& base = {}) {
  return detail::embedNode(d, base, detail::finCutRank(*d));
}

// ---- Progressiveness of the coded order --------------------------------------

namespace detail {

// Tight truth derivation of a true defining-formula instance def(s, t):
// Conj of two true equations at 1, a ladder of Disj steps along the
// right-nested core, and one Disj into the padded disjunction; the root bound
// is pinned at definingRank() - 1.
inline InfPtr deriveDefTruth(const std::shared_ptr<const CodedOrder>& ord,
                             const Formula& defInstance) {
  auto pairs = ord->graphPairs();
  if (pairs.empty()) throw Error("the coded order has an empty graph");
  Formula core = defInstance.part(0);
  std::vector<Formula> sufs{core};
  for (std::size_t i = 0; i + 1 < pairs.size(); ++i) sufs.push_back(sufs.back().part(1));
  // Locate the true pair: the instance terms are (s, t) inside each pair
  // conjunct (s = m & t = n).
  Formula pair0 = pairs.size() == 1 ? sufs[0] : sufs[0].part(0);
  Term s = pair0.part(0).args()[0];
  Term t = pair0.part(1).args()[0];
  std::uint64_t vs = evalTerm(s), vt = evalTerm(t);
  std::optional<std::size_t> j;
  for (std::size_t i = 0; i < pairs.size() && !j; ++i)
    if (pairs[i].first == vs && pairs[i].second == vt) j = i;
  if (!j) throw Error("term pair is not an edge of the coded order");
  Formula pj = *j + 1 == pairs.size() ? sufs[*j] : sufs[*j].part(0);
  InfPtr cur = mkConj(Sequent{{pj}}, fromNat(1), 0, pj, [pj](const InfIndex& ix) {
    Formula lit = pj.part(static_cast<std::size_t>(std::get<int>(ix)));
    return mkAxiomTrue(Sequent{{lit}}, zeroOrd(), 0);
  });
  std::uint64_t curBound = 1;
  if (*j + 1 != pairs.size()) {
    InfPtr inner = cur;
    cur = mkDisj(Sequent{{sufs[*j]}}, fromNat(++curBound), 0, sufs[*j], 0,
                 [inner](const InfIndex&) { return inner; });
  }
  for (std::size_t i = *j; i-- > 0;) {
    InfPtr inner = cur;
    cur = mkDisj(Sequent{{sufs[i]}}, fromNat(++curBound), 0, sufs[i], 1,
                 [inner](const InfIndex&) { return inner; });
  }
  InfPtr inner = cur;
  return mkDisj(Sequent{{defInstance}}, fromNat(ord->definingRank() - 1), 0, defInstance, 0,
                [inner](const InfIndex&) { return inner; });
}

}  // namespace detail

// Cut-free derivation of Prog_⊲ with bound definingRank() + 5.
inline InfPtr deriveProg(const std::shared_ptr<const CodedOrder>& ord) {
  Formula prog = ord->progFormula();
  std::uint64_t alpha = ord->definingRank();
  return mkConj(Sequent{{prog}}, fromNat(alpha + 5), 0, prog, [ord, prog, alpha](const InfIndex& ix) {
    Term t = std::get<Term>(ix);
    Formula inst = substitute(prog.part(0), prog.quantVar(), t);  // E(t) | X(t)
    Formula et = inst.part(0);
    Formula xt = inst.part(1);
    InfPtr progNode = mkProg(
        Sequent{{et, xt}}, fromNat(alpha + 2), 0, xt, ord, [ord, et, alpha](const InfIndex& ixS) {
          Term sTerm = std::get<Term>(ixS);
          Formula xs = Formula::xatom(sTerm);
          Formula comp = substitute(et.part(0), et.quantVar(), sTerm);  // def(s,t) & !X(s)
          InfPtr conj = mkConj(Sequent{{comp, xs}}, fromNat(alpha), 0, comp,
                               [ord, comp](const InfIndex& ixC) {
                                 if (std::get<int>(ixC) == 0)
                                   return detail::deriveDefTruth(ord, comp.part(0));
                                 return mkAxiomX(Sequent{{negate(comp.part(1)), comp.part(1)}},
                                                 zeroOrd(), 0);
                               });
          return mkDisj(Sequent{{et, xs}}, fromNat(alpha + 1), 0, et, InfIndex{sTerm},
                        [conj](const InfIndex&) { return conj; });
        });
    InfPtr d3 = mkDisj(Sequent{{inst, et}}, fromNat(alpha + 3), 0, inst, 1,
                       [progNode](const InfIndex&) { return progNode; });
    return mkDisj(Sequent{{inst}}, fromNat(alpha + 4), 0, inst, 0,
                  [d3](const InfIndex&) { return d3; });
  });
}

}  // namespace gforge
