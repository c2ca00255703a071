#pragma once
// Inversion, reduction, and cut elimination for the infinitary calculus, plus
// the assembled transfinite-induction pipeline: TI derivation for the coded
// order, the cut against progressiveness, and rank extraction from the
// resulting cut-free derivation.
#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gforge/coded_order.hpp"
#include "gforge/error.hpp"
#include "gforge/infinitary.hpp"

namespace gforge {

// ---- Inversion ----------------------------------------------------------------

// From ⊢^α_c Γ conclude ⊢^α_c (Γ∖{phi}) ∪ {phi_ix}, for conjunctive phi:
// a universal formula with a closed-term index, or a binary conjunction with
// index 0/1. Lazy: each call wraps one node.
inline InfPtr invert(const InfPtr& d, const Formula& phi, const InfIndex& ix) {
  Formula comp = Formula::eq(Term::zero(), Term::zero());
  if (phi.kind() == Formula::Kind::All) {
    if (ix.index() != 1 || !isClosedTerm(std::get<Term>(ix)))
      throw Error("inverting a universal formula needs a closed-term index");
    comp = substitute(phi.part(0), phi.quantVar(), std::get<Term>(ix));
  } else if (phi.kind() == Formula::Kind::And) {
    if (ix.index() != 0 || std::get<int>(ix) < 0 || std::get<int>(ix) > 1)
      throw Error("inverting a binary conjunction needs index 0 or 1");
    comp = phi.part(static_cast<std::size_t>(std::get<int>(ix)));
  } else {
    throw Error("inversion requires a conjunctive formula");
  }
  if (!d->end().contains(phi)) return weaken(d, Sequent{{comp}});
  Sequent target = d->end().without(phi).with(comp);
  const Ordinal& b = d->bound();
  int c = d->cutRank();
  switch (d->rule()) {
    case InfRule::AxiomTrue: return mkAxiomTrue(target, b, c);
    case InfRule::AxiomX: return mkAxiomX(target, b, c);
    case InfRule::Conj: {
      if (*d->principal() == phi) {
        InfPtr p = d->premiseAt(ix);
        return weaken(invert(p, phi, ix), target, b, c);
      }
      InfPtr inner = d;
      return mkConj(target, b, c, *d->principal(), [inner, phi, ix](const InfIndex& ix2) {
        return invert(inner->premiseAt(ix2), phi, ix);
      });
    }
    case InfRule::Disj: {
      InfPtr inner = d;
      return mkDisj(target, b, c, *d->principal(), *d->chosen(),
                    [inner, phi, ix](const InfIndex& ix2) {
                      return invert(inner->premiseAt(ix2), phi, ix);
                    });
    }
    case InfRule::Prog: {
      InfPtr inner = d;
      return mkProg(target, b, c, *d->principal(), d->order(),
                    [inner, phi, ix](const InfIndex& ix2) {
                      return invert(inner->premiseAt(ix2), phi, ix);
                    });
    }
    case InfRule::Cut: {
      InfPtr inner = d;
      return mkCut(target, b, c, *d->principal(), [inner, phi, ix](const InfIndex& ix2) {
        return invert(inner->premiseAt(ix2), phi, ix);
      });
    }
  }
  throw Error("unreachable rule tag");
}

// ---- Reduction ----------------------------------------------------------------

namespace detail {

// Shapes the reduction lemma handles on the positive side: disjunctive
// formulas, negative X-literals, and false arithmetical literals.
inline bool reducibleShape(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Or:
    case Formula::Kind::Ex: return true;
    case Formula::Kind::Prime:
    case Formula::Kind::NegPrime:
      if (f.rel() == Rel::X) return f.kind() == Formula::Kind::NegPrime;
      return !evalLiteral(f);
    default: return false;
  }
}

}  // namespace detail

// reduce(dNeg ⊢^α Γ0,¬phi, dPos ⊢^β Γ1,phi) ⊢^{α+β}_d (Γ0∖¬phi) ∪ (Γ1∖phi)
// where d = max of the cut ranks and rank(phi) ≤ d. Descends dPos, cutting
// against the chosen component when phi is the principal formula of a Disj.
inline InfPtr reduce(const InfPtr& dNeg, const InfPtr& dPos, const Formula& phi) {
  if (!detail::reducibleShape(phi))
    throw Error("reduction requires a disjunctive, negative-X, or false literal cut side");
  int d = std::max(dNeg->cutRank(), dPos->cutRank());
  if (rank(phi) > static_cast<std::uint64_t>(d))
    throw Error("cut formula rank exceeds the reduction cut rank");
  Formula negPhi = negate(phi);
  Sequent gamma = dNeg->end().without(negPhi).withUnion(dPos->end().without(phi));
  Ordinal b = add(dNeg->bound(), dPos->bound());
  if (!dPos->end().contains(phi)) return weaken(dPos, gamma, b, d);
  if (!dNeg->end().contains(negPhi)) return weaken(dNeg, gamma, b, d);
  switch (dPos->rule()) {
    case InfRule::AxiomTrue: return mkAxiomTrue(gamma, b, d);
    case InfRule::AxiomX: {
      // A justifying pair may survive inside gamma; otherwise phi = ¬X(t) is
      // half of every pair, and the replacement X(t) -> X(s) pushes the
      // other half through the negative derivation.
      for (const Formula& f : gamma) {
        if (!(f.kind() == Formula::Kind::Prime && f.rel() == Rel::X)) continue;
        for (const Formula& g : gamma)
          if (g.kind() == Formula::Kind::NegPrime && g.rel() == Rel::X &&
              evalTerm(g.args()[0]) == evalTerm(f.args()[0]))
            return mkAxiomX(gamma, b, d);
      }
      if (!(phi.kind() == Formula::Kind::NegPrime && phi.rel() == Rel::X))
        throw Error("axiom premise lost its justifying pair during reduction");
      std::uint64_t tv = evalTerm(phi.args()[0]);
      for (const Formula& f : dPos->end()) {
        if (!(f.kind() == Formula::Kind::Prime && f.rel() == Rel::X)) continue;
        if (evalTerm(f.args()[0]) != tv) continue;
        InfPtr r = sameValueReplace(dNeg, Formula::xatom(phi.args()[0]), f);
        return weaken(r, gamma, b, d);
      }
      throw Error("axiom premise lost its justifying pair during reduction");
    }
    case InfRule::Disj: {
      if (*dPos->principal() == phi) {
        InfIndex ch = *dPos->chosen();
        Formula comp = *premiseComponent(*dPos, ch);
        InfPtr p = dPos->premiseAt(ch);
        Ordinal bInner = add(dNeg->bound(), p->bound());
        InfPtr left = weaken(reduce(dNeg, p, phi), gamma.with(comp), bInner, d);
        InfPtr right = weaken(invert(dNeg, negPhi, ch), gamma.with(negate(comp)), bInner, d);
        return mkCut(gamma, b, d, comp,
                     [left, right](const InfIndex& ix) {
                       return std::get<int>(ix) == 0 ? left : right;
                     });
      }
      InfPtr n = dNeg, p = dPos;
      return mkDisj(gamma, b, d, *dPos->principal(), *dPos->chosen(),
                    [n, p, phi](const InfIndex& ix) {
                      return reduce(n, p->premiseAt(ix), phi);
                    });
    }
    case InfRule::Conj: {
      InfPtr n = dNeg, p = dPos;
      return mkConj(gamma, b, d, *dPos->principal(), [n, p, phi](const InfIndex& ix) {
        return reduce(n, p->premiseAt(ix), phi);
      });
    }
    case InfRule::Prog: {
      InfPtr n = dNeg, p = dPos;
      return mkProg(gamma, b, d, *dPos->principal(), dPos->order(),
                    [n, p, phi](const InfIndex& ix) {
                      return reduce(n, p->premiseAt(ix), phi);
                    });
    }
    case InfRule::Cut: {
      InfPtr n = dNeg, p = dPos;
      return mkCut(gamma, b, d, *dPos->principal(), [n, p, phi](const InfIndex& ix) {
        return reduce(n, p->premiseAt(ix), phi);
      });
    }
  }
  throw Error("unreachable rule tag");
}

// ---- Cut elimination ------------------------------------------------------------

namespace detail {

// One elimination pass at top rank e: bounds become omega^(old bound), cut
// ranks drop to e-1, and every cut on a formula of rank exactly e-1 is
// replaced by a reduction of its premises.
inline InfPtr elimStep(const InfPtr& d, int e) {
  Ordinal nb = omegaPow(d->bound());
  int nc = std::min(d->cutRank(), e - 1);
  switch (d->rule()) {
    case InfRule::AxiomTrue: return mkAxiomTrue(d->end(), nb, nc);
    case InfRule::AxiomX: return mkAxiomX(d->end(), nb, nc);
    case InfRule::Conj: {
      InfPtr inner = d;
      return mkConj(d->end(), nb, nc, *d->principal(), [inner, e](const InfIndex& ix) {
        return elimStep(inner->premiseAt(ix), e);
      });
    }
    case InfRule::Disj: {
      InfPtr inner = d;
      return mkDisj(d->end(), nb, nc, *d->principal(), *d->chosen(),
                    [inner, e](const InfIndex& ix) { return elimStep(inner->premiseAt(ix), e); });
    }
    case InfRule::Prog: {
      InfPtr inner = d;
      return mkProg(d->end(), nb, nc, *d->principal(), d->order(),
                    [inner, e](const InfIndex& ix) { return elimStep(inner->premiseAt(ix), e); });
    }
    case InfRule::Cut: {
      Formula cf = *d->principal();
      if (rank(cf) == static_cast<std::uint64_t>(e) - 1) {
        // Weakening lets us assume both premises sit at cut rank e-1 before
        // reducing; the reduction then lands strictly below omega^bound.
        InfPtr p0 = elimStep(d->premiseAt(0), e);
        InfPtr p1 = elimStep(d->premiseAt(1), e);
        p0 = weaken(p0, Sequent{}, p0->bound(), e - 1);
        p1 = weaken(p1, Sequent{}, p1->bound(), e - 1);
        InfPtr r = detail::reducibleShape(cf) ? reduce(p1, p0, cf) : reduce(p0, p1, negate(cf));
        return weaken(r, d->end(), nb, e - 1);
      }
      InfPtr inner = d;
      return mkCut(d->end(), nb, nc, cf,
                   [inner, e](const InfIndex& ix) { return elimStep(inner->premiseAt(ix), e); });
    }
  }
  throw Error("unreachable rule tag");
}

}  // namespace detail

inline InfPtr cutElimStep(const InfPtr& d) {
  int e = d->cutRank();
  if (e < 1) throw Error("nothing to eliminate: the derivation is already cut-free");
  return detail::elimStep(d, e);
}

// Iterated elimination down to cut rank 0; the bound is the omega tower of
// height cutRank over the original bound.
inline InfPtr cutElimFull(const InfPtr& d) {
  InfPtr r = d;
  int n = d->cutRank();
  for (int i = 0; i < n; ++i) r = cutElimStep(r);
  return r;
}

// ---- Transfinite induction for the coded order ----------------------------------

namespace detail {

struct TIChainCtx {
  std::shared_ptr<const CodedOrder> ord;

  // Cut-free {X(v̄)} with bound rankOf(v), by progression along the order.
  InfPtr at(std::uint64_t v, const std::shared_ptr<const TIChainCtx>& self) const {
    Formula xv = Formula::xatom(numeral(v));
    return mkProg(Sequent{{xv}}, ord->rankOf(v), 0, xv, ord, [self](const InfIndex& ix) {
      Term s = std::get<Term>(ix);
      std::uint64_t u = evalTerm(s);
      InfPtr base = self->at(u, self);
      return sameValueReplace(base, Formula::xatom(numeral(u)), Formula::xatom(s));
    });
  }
};

}  // namespace detail

// Cut-free derivation of TI_⊲ = Prog_⊲ -> ∀x.X(x), bound max(N,1) + 1 for an
// N-element coded order.
inline InfPtr deriveTI(const std::shared_ptr<const CodedOrder>& ord) {
  auto ctx = std::make_shared<const detail::TIChainCtx>(detail::TIChainCtx{ord});
  Formula allX = Formula::all("x", Formula::xatom(Term::var("x")));
  Ordinal cb = fromNat(std::max<std::uint64_t>(ord->size(), 1));
  InfPtr conj = mkConj(Sequent{{allX}}, cb, 0, allX, [ctx, ord](const InfIndex& ix) {
    Term t = std::get<Term>(ix);
    std::uint64_t v = evalTerm(t);
    Formula xt = Formula::xatom(t);
    if (!ord->inDomain(v))
      // Values outside the domain have no predecessors: a vacuous progression.
      return mkProg(Sequent{{xt}}, zeroOrd(), 0, xt, ord, [](const InfIndex&) -> InfPtr {
        throw Error("vacuous progression has no premises");
      });
    return sameValueReplace(ctx->at(v, ctx), Formula::xatom(numeral(v)), xt);
  });
  Formula ti = ord->tiFormula();
  return mkDisj(Sequent{{ti}}, add(cb, fromNat(1)), 0, ti, 1,
                [conj](const InfIndex&) { return conj; });
}

// Cut the TI derivation against a derivation of Prog_⊲ to conclude {X(n̄)},
// with bound tiBound + 2 and cut rank max(input ranks, rank(TI) + 1).
inline InfPtr assembleTI(const InfPtr& ti, const InfPtr& prog, std::uint64_t n) {
  if (ti->end().size() != 1 || prog->end().size() != 1)
    throw Error("assembleTI expects singleton end sequents");
  Formula tiF = ti->end().items()[0];
  Formula progF = prog->end().items()[0];
  if (tiF.kind() != Formula::Kind::Or || !(tiF.part(0) == negate(progF)))
    throw Error("derivations do not fit: the TI formula must be Prog -> forall X");
  Formula allX = tiF.part(1);
  if (allX.kind() != Formula::Kind::All || allX.part(0).kind() != Formula::Kind::Prime ||
      allX.part(0).rel() != Rel::X)
    throw Error("derivations do not fit: the TI conclusion must be a universal X-atom");
  if (!ordLeq(prog->bound(), ti->bound()))
    throw Error("progressiveness bound exceeds the TI bound; weaken the TI derivation first");
  if (!ordLeq(oneOrd(), ti->bound()))
    throw Error("the TI bound must be at least 1");
  Formula negTi = negate(tiF);     // Prog & ex x.!X(x)
  Formula exNeg = negTi.part(1);
  Term nbar = numeral(n);
  Formula xn = Formula::xatom(nbar);
  InfPtr ax = mkAxiomX(Sequent{{negate(xn), xn}}, zeroOrd(), 0);
  InfPtr d1 = mkDisj(Sequent{{exNeg, xn}}, fromNat(1), 0, exNeg, InfIndex{nbar},
                     [ax](const InfIndex&) { return ax; });
  InfPtr progP = prog;
  InfPtr conj = mkConj(Sequent{{negTi, xn}}, add(ti->bound(), fromNat(1)), prog->cutRank(),
                       negTi, [progP, d1](const InfIndex& ix) {
                         return std::get<int>(ix) == 0 ? progP : d1;
                       });
  int rr = std::max(std::max(ti->cutRank(), prog->cutRank()),
                    static_cast<int>(rank(tiF)) + 1);
  InfPtr tiP = ti;
  return mkCut(Sequent{{xn}}, add(ti->bound(), fromNat(2)), rr, tiF,
               [tiP, conj](const InfIndex& ix) {
                 return std::get<int>(ix) == 0 ? tiP : conj;
               });
}

// ---- Rank extraction --------------------------------------------------------------

struct RankCertificate {
  std::map<std::uint64_t, Ordinal> assignment;  // canonical o(v) per domain value
  Ordinal witnessBound;                         // the root bound that covers o
};

namespace detail {

inline void rankWalk(const InfPtr& node, const CodedOrder& ord,
                     const std::map<std::uint64_t, Ordinal>& o) {
  bool witnessed = false;
  for (const Formula& f : node->end()) {
    if (!(f.isLiteral() && f.rel() == Rel::X))
      throw Error("rank extraction: sequent contains a non-X-literal");
    if (f.kind() != Formula::Kind::Prime) continue;
    std::uint64_t v = evalTerm(f.args()[0]);
    auto it = o.find(v);
    if (it != o.end() && ordLeq(it->second, node->bound())) witnessed = true;
  }
  if (!witnessed && node->rule() != InfRule::AxiomX)
    throw Error("rank extraction: no end atom witnesses the ordinal bound");
  switch (node->rule()) {
    case InfRule::AxiomX: return;
    case InfRule::Prog: {
      std::uint64_t t = evalTerm(node->principal()->args()[0]);
      if (ord.inDomain(t))
        for (std::uint64_t u : ord.predecessors(t)) rankWalk(node->premiseAt(numeral(u)), ord, o);
      return;
    }
    default:
      throw Error(std::string("rank extraction: disallowed rule tag ") +
                  infRuleName(node->rule()));
  }
}

}  // namespace detail

// A cut-free derivation whose sequents are X-literals only must consist of
// progressions (and X-axioms); its bounds then dominate the canonical ranks
// of the order, which is packaged as a certificate after verification.
inline RankCertificate rankExtract(const InfPtr& d, const std::shared_ptr<const CodedOrder>& ord) {
  if (d->cutRank() != 0) throw Error("rank extraction requires a cut-free derivation");
  RankCertificate cert;
  for (std::uint64_t v = 0; v < ord->size(); ++v) cert.assignment[v] = ord->rankOf(v);
  detail::rankWalk(d, *ord, cert.assignment);
  cert.witnessBound = d->bound();
  return cert;
}

}  // namespace gforge
