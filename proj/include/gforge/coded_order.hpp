#pragma once
// Coded well orders: the strictly increasing enumeration e of all notation
// codes below a bound, and the induced order m ⊲ n :<=> decode(e(m)) ≺
// decode(e(n)) on positions. Desk-scale engines work with the finite
// restriction to the positions below the bound; the L_PA defining formula of
// ⊲ (and of the jump guards) is the finite graph disjunction, which is exact
// on the restricted domain.
#include <cstdint>
#include <string>
#include <vector>

#include "gforge/error.hpp"
#include "gforge/formula.hpp"
#include "gforge/ordinal.hpp"

namespace gforge {

class CodedOrder {
 public:
  CodedOrder(std::uint64_t bound, std::vector<std::uint64_t> codes, std::vector<Ordinal> nots)
      : bound_(bound), codes_(std::move(codes)), nots_(std::move(nots)) {}

  std::uint64_t bound() const { return bound_; }
  std::size_t size() const { return codes_.size(); }
  // e(m): the m-th smallest notation code below the bound.
  std::uint64_t e(std::size_t m) const {
    if (m >= codes_.size()) throw Error("enumeration index outside the coded domain");
    return codes_[m];
  }
  const Ordinal& notation(std::size_t m) const {
    if (m >= nots_.size()) throw Error("enumeration index outside the coded domain");
    return nots_[m];
  }

  bool inDomain(std::uint64_t v) const { return v < size(); }

  // m ⊲ n on position values; false whenever either side leaves the domain.
  bool before(std::uint64_t m, std::uint64_t n) const {
    if (!inDomain(m) || !inDomain(n)) return false;
    return compare(nots_[m], nots_[n]) == Cmp::LT;
  }

  // Values strictly ⊲-below v, ascending as naturals.
  std::vector<std::uint64_t> predecessors(std::uint64_t v) const {
    std::vector<std::uint64_t> out;
    if (!inDomain(v)) return out;
    for (std::uint64_t m = 0; m < size(); ++m)
      if (before(m, v)) out.push_back(m);
    return out;
  }

  // The canonical rank o(v): least ordinal strictly above o(m) for all m ⊲ v.
  // ⊲ totally orders the finite domain, so this is the predecessor count.
  Ordinal rankOf(std::uint64_t v) const {
    if (!inDomain(v)) throw Error("rankOf outside the coded domain");
    return fromNat(predecessors(v).size());
  }

  // The L_PA formula defining a ⊲ b on the finite domain: the graph
  // disjunction CORE(a,b) plus a rank-padding false disjunct. The padding
  // keeps rank(defining formula) one above the worst derivation depth of a
  // true instance, which the progression derivation's bound accounting
  // relies on.
  Formula definingFormula(const std::string& va, const std::string& vb) const {
    Formula core = coreFormula(va, vb);
    Formula falseLit = Formula::negPrime(Rel::Eq, {Term::zero(), Term::zero()});
    return Formula::disj(core, Formula::conj(falseLit, core));
  }

  std::uint64_t definingRank() const { return rank(definingFormula("v0", "v1")); }

  // Prog_⊲ = all x. ((ex y. (y⊲x & !X(y))) | X(x)), the NNF of
  // "∀x(∀y⊲x. X(y) → X(x))".
  Formula progFormula() const {
    Formula guard = definingFormula("y", "x");
    Formula body = Formula::disj(
        Formula::ex("y", Formula::conj(guard, Formula::negPrime(Rel::X, {Term::var("y")}))),
        Formula::xatom(Term::var("x")));
    return Formula::all("x", body);
  }

  // TI_⊲ = Prog_⊲ → ∀x. X(x).
  Formula tiFormula() const {
    return implies(progFormula(), Formula::all("x", Formula::xatom(Term::var("x"))));
  }

  // True components of the defining formula, used by the tight truth
  // derivations: the graph pairs (m, n) with m ⊲ n in natural order.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> graphPairs() const {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    for (std::uint64_t m = 0; m < size(); ++m)
      for (std::uint64_t n = 0; n < size(); ++n)
        if (before(m, n)) out.emplace_back(m, n);
    return out;
  }

 private:
  // Right-nested disjunction of (a=m & b=n) over all graph pairs; a single
  // false literal when the graph is empty.
  Formula coreFormula(const std::string& va, const std::string& vb) const {
    auto pairs = graphPairs();
    if (pairs.empty()) return Formula::negPrime(Rel::Eq, {Term::zero(), Term::zero()});
    Formula acc = pairConj(pairs.back(), va, vb);
    for (std::size_t i = pairs.size() - 1; i-- > 0;)
      acc = Formula::disj(pairConj(pairs[i], va, vb), acc);
    return acc;
  }
  static Formula pairConj(const std::pair<std::uint64_t, std::uint64_t>& p, const std::string& va,
                          const std::string& vb) {
    return Formula::conj(Formula::eq(Term::var(va), numeral(p.first)),
                         Formula::eq(Term::var(vb), numeral(p.second)));
  }

  std::uint64_t bound_;
  std::vector<std::uint64_t> codes_;
  std::vector<Ordinal> nots_;
};

// All notation codes strictly below `bound`, ascending. A code of a tree with
// weight l has exactly 2(l+1) bits, so enumerating notations up to the
// matching weight is exhaustive.
inline CodedOrder buildCodedOrder(std::uint64_t bound) {
  std::vector<std::uint64_t> codes;
  std::vector<Ordinal> nots;
  if (bound > 2) {
    int bits = 0;
    for (std::uint64_t v = bound - 1; v > 0; v >>= 1) ++bits;
    std::uint64_t maxL = static_cast<std::uint64_t>(bits) / 2 - 1;
    std::vector<std::pair<std::uint64_t, Ordinal>> acc;
    for (const Ordinal& a : enumerateUpTo(maxL)) {
      std::uint64_t c = ordCode(a);
      if (c < bound) acc.emplace_back(c, a);
    }
    std::sort(acc.begin(), acc.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    for (auto& [c, a] : acc) {
      codes.push_back(c);
      nots.push_back(std::move(a));
    }
  }
  return CodedOrder(bound, std::move(codes), std::move(nots));
}

// Convenience: the order whose domain is exactly the first `n` codes.
inline CodedOrder codedOrderOfSize(std::size_t n) {
  std::uint64_t bound = 4;
  for (;;) {
    CodedOrder ord = buildCodedOrder(bound);
    if (ord.size() >= n) {
      if (ord.size() == n) return ord;
      return buildCodedOrder(ord.e(n - 1) + 1);
    }
    bound *= 4;
  }
}

// ---- Gentzen jump ----------------------------------------------------------
// f^J(a) = ∀b∈dom(∀g⊲b. f(g) → ∀g "g ≺ b + w^a". f(g)), emitted with the
// guarded-implication reading and the finite graph definitions of the ε₀
// primitives relative to `ord`. Exact on the finite restriction; the
// provable properties of the primitives are external.

namespace detail {

inline Formula memberDisj(const std::string& v, std::size_t n) {
  if (n == 0) return Formula::negPrime(Rel::Eq, {Term::zero(), Term::zero()});
  Formula acc = Formula::eq(Term::var(v), numeral(n - 1));
  for (std::size_t i = n - 1; i-- > 0;)
    acc = Formula::disj(Formula::eq(Term::var(v), numeral(i)), acc);
  return acc;
}

// g, b, a positions with decode(g) ≺ decode(b) + w^decode(a).
inline Formula sumPowerLtFormula(const CodedOrder& ord, const std::string& vg,
                                 const std::string& vb, const std::string& va) {
  std::vector<Formula> conjs;
  for (std::uint64_t g = 0; g < ord.size(); ++g)
    for (std::uint64_t b = 0; b < ord.size(); ++b)
      for (std::uint64_t a = 0; a < ord.size(); ++a) {
        Ordinal limit = add(ord.notation(b), omegaPow(ord.notation(a)));
        if (ordLess(ord.notation(g), limit))
          conjs.push_back(Formula::conj(
              Formula::eq(Term::var(vg), numeral(g)),
              Formula::conj(Formula::eq(Term::var(vb), numeral(b)),
                            Formula::eq(Term::var(va), numeral(a)))));
      }
  if (conjs.empty()) return Formula::negPrime(Rel::Eq, {Term::zero(), Term::zero()});
  Formula acc = conjs.back();
  for (std::size_t i = conjs.size() - 1; i-- > 0;) acc = Formula::disj(conjs[i], acc);
  return acc;
}

}  // namespace detail

inline Formula jump(const Formula& f, const std::string& var, const CodedOrder& ord) {
  std::set<std::string> used = freeVars(f);
  used.insert(var);
  std::string vb = freshVar(used);
  used.insert(vb);
  std::string vg = freshVar(used);

  auto fAt = [&](const std::string& v) { return substitute(f, var, Term::var(v)); };
  Formula inDom = detail::memberDisj(vb, ord.size());
  Formula below = implies(ord.definingFormula(vg, vb), fAt(vg));
  Formula belowSum = implies(detail::sumPowerLtFormula(ord, vg, vb, var), fAt(vg));
  Formula body = implies(inDom, implies(Formula::all(vg, below), Formula::all(vg, belowSum)));
  return Formula::all(vb, body);
}

}  // namespace gforge
