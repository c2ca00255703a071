#pragma once
// Ordinal notations below epsilon_0 as nested exponent lists:
//   <a0,...,a_{n-1}> stands for w^a0 + ... + w^a_{n-1}.
// The type covers all finite rooted ordered trees; the Cantor-normal-form
// discipline (exponents weakly decreasing at every level) is the separate
// predicate isNotation. compare is total on raw trees.
#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gforge/error.hpp"

namespace gforge {

struct Ordinal {
  std::vector<Ordinal> exps;

  friend bool operator==(const Ordinal& a, const Ordinal& b) { return a.exps == b.exps; }
  friend bool operator!=(const Ordinal& a, const Ordinal& b) { return !(a == b); }
};

enum class Cmp { LT, EQ, GT };

// Lexicographic order on exponent lists: a proper prefix is smaller, otherwise
// the first differing exponent decides.
inline Cmp compare(const Ordinal& a, const Ordinal& b) {
  const std::size_t m = a.exps.size(), n = b.exps.size();
  for (std::size_t i = 0; i < m && i < n; ++i) {
    Cmp c = compare(a.exps[i], b.exps[i]);
    if (c != Cmp::EQ) return c;
  }
  if (m == n) return Cmp::EQ;
  return m < n ? Cmp::LT : Cmp::GT;
}

inline bool ordLess(const Ordinal& a, const Ordinal& b) { return compare(a, b) == Cmp::LT; }
inline bool ordLeq(const Ordinal& a, const Ordinal& b) { return compare(a, b) != Cmp::GT; }

// Cantor normal form discipline at every level.
inline bool isNotation(const Ordinal& a) {
  for (std::size_t i = 0; i < a.exps.size(); ++i) {
    if (!isNotation(a.exps[i])) return false;
    if (i > 0 && compare(a.exps[i], a.exps[i - 1]) == Cmp::GT) return false;
  }
  return true;
}

inline Ordinal zeroOrd() { return Ordinal{}; }

inline Ordinal omegaPow(const Ordinal& a) { return Ordinal{{a}}; }

inline Ordinal oneOrd() { return omegaPow(zeroOrd()); }
inline Ordinal omegaOrd() { return omegaPow(oneOrd()); }

// Truncating sum: keep a's exponents while they dominate b's leading exponent,
// then append all of b.
inline Ordinal add(const Ordinal& a, const Ordinal& b) {
  if (b.exps.empty()) return a;
  std::size_t cut = a.exps.size();
  for (std::size_t j = 0; j < a.exps.size(); ++j) {
    if (compare(a.exps[j], b.exps[0]) == Cmp::LT) {
      cut = j;
      break;
    }
  }
  Ordinal r;
  r.exps.reserve(cut + b.exps.size());
  r.exps.assign(a.exps.begin(), a.exps.begin() + static_cast<std::ptrdiff_t>(cut));
  r.exps.insert(r.exps.end(), b.exps.begin(), b.exps.end());
  return r;
}

inline Ordinal succ(const Ordinal& a) { return add(a, oneOrd()); }

inline Ordinal fromNat(std::uint64_t n) {
  Ordinal r;
  r.exps.assign(n, zeroOrd());
  return r;
}

// omegaTower(a, 0) = a, omegaTower(a, n+1) = w^omegaTower(a, n).
inline Ordinal omegaTower(const Ordinal& a, std::uint64_t n) {
  Ordinal r = a;
  for (std::uint64_t i = 0; i < n; ++i) r = omegaPow(r);
  return r;
}

// The weight measure l: l(<a0,...,a_{n-1}>) = l(a0)+...+l(a_{n-1}) + n.
inline std::uint64_t lengthL(const Ordinal& a) {
  std::uint64_t s = a.exps.size();
  for (const Ordinal& e : a.exps) s += lengthL(e);
  return s;
}

namespace detail {

inline void enumExtend(const std::vector<Ordinal>& pool, std::vector<Ordinal>& cur,
                       std::uint64_t budget, std::size_t maxPoolIdx,
                       std::vector<Ordinal>& out) {
  out.push_back(Ordinal{cur});
  // Exponents are appended weakly decreasing, so only pool entries at or below
  // the previous choice are candidates.
  for (std::size_t i = maxPoolIdx + 1; i-- > 0;) {
    std::uint64_t cost = lengthL(pool[i]) + 1;
    if (cost > budget) continue;
    cur.push_back(pool[i]);
    enumExtend(pool, cur, budget - cost, i, out);
    cur.pop_back();
  }
}

}  // namespace detail

// All valid notations with lengthL <= k, sorted ascending by compare.
inline std::vector<Ordinal> enumerateUpTo(std::uint64_t k) {
  std::vector<Ordinal> pool;  // candidate exponents, ascending
  if (k >= 1) pool = enumerateUpTo(k - 1);
  std::vector<Ordinal> out;
  std::vector<Ordinal> cur;
  if (pool.empty()) {
    out.push_back(zeroOrd());
  } else {
    detail::enumExtend(pool, cur, k, pool.size() - 1, out);
  }
  std::sort(out.begin(), out.end(), ordLess);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---- Coding into N -------------------------------------------------------
// c(a) is the balanced-parenthesis word of the tree (node -> '1' children '0')
// read as a binary numeral. Self-delimiting and injective on raw trees;
// c(0) = 0b10 = 2, c(1) = 0b1100 = 12, c(w) = 0b111000 = 56.

namespace detail {
inline void codeBits(const Ordinal& a, std::uint64_t& acc, int& bits) {
  bits += 2;
  if (bits > 64) throw Error("ordinal too large to code (lengthL > 30)");
  acc = (acc << 1) | 1u;
  for (const Ordinal& e : a.exps) codeBits(e, acc, bits);
  acc <<= 1;
}

inline bool decodeNode(std::uint64_t code, int& pos, Ordinal& out) {
  if (pos < 0 || ((code >> pos) & 1u) != 1u) return false;
  --pos;
  while (pos >= 0 && ((code >> pos) & 1u) == 1u) {
    Ordinal child;
    if (!decodeNode(code, pos, child)) return false;
    out.exps.push_back(std::move(child));
  }
  if (pos < 0) return false;  // missing closing 0
  --pos;
  return true;
}
}  // namespace detail

inline std::uint64_t ordCode(const Ordinal& a) {
  std::uint64_t acc = 0;
  int bits = 0;
  detail::codeBits(a, acc, bits);
  return acc;
}

// Decodes codes of valid notations only; anything else yields nullopt.
inline std::optional<Ordinal> ordDecode(std::uint64_t code) {
  if (code < 2) return std::nullopt;
  int top = 63;
  while (((code >> top) & 1u) == 0u) --top;
  Ordinal r;
  int pos = top;
  if (!detail::decodeNode(code, pos, r)) return std::nullopt;
  if (pos != -1) return std::nullopt;
  if (!isNotation(r)) return std::nullopt;
  return r;
}

// ---- Text form -----------------------------------------------------------
// sum    := item ('+' item)*
// item   := '0' | '1' | 'w' ('^' factor)? | '<' list '>'
// factor := '0' | '1' | 'w' ('^' factor)? | '(' sum ')' | '<' list '>'
// Sums concatenate exponent lists left to right. Strict mode rejects
// non-CNF results; Normalize folds summands via add; Raw keeps the tree
// as written with no validity check.

enum class OrdParseMode { Strict, Normalize, Raw };

namespace detail {

struct OrdParser {
  const std::string& s;
  std::size_t i = 0;
  OrdParseMode mode;

  void skipWs() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  }
  bool eat(char c) {
    skipWs();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw ParseError("ordinal parse error at position " + std::to_string(i) + ": " + what);
  }

  Ordinal sum() {
    Ordinal acc = item();
    while (eat('+')) {
      Ordinal next = item();
      if (mode == OrdParseMode::Normalize) {
        acc = add(acc, next);
      } else {
        acc.exps.insert(acc.exps.end(), next.exps.begin(), next.exps.end());
      }
    }
    return acc;
  }

  Ordinal item() {
    skipWs();
    if (i >= s.size()) fail("expected ordinal term");
    char c = s[i];
    if (c >= '0' && c <= '9') {
      std::uint64_t n = 0;
      while (i < s.size() && s[i] >= '0' && s[i] <= '9') n = n * 10 + (s[i++] - '0');
      return fromNat(n);
    }
    if (c == 'w') {
      ++i;
      if (eat('^')) return omegaPow(factor());
      return omegaOrd();
    }
    if (c == '<') return bracket();
    fail(std::string("unexpected character '") + c + "'");
  }

  Ordinal factor() {
    skipWs();
    if (i >= s.size()) fail("expected exponent");
    if (s[i] == '(') {
      ++i;
      Ordinal r = sum();
      if (!eat(')')) fail("expected ')'");
      return r;
    }
    return item();
  }

  Ordinal bracket() {
    ++i;  // consume '<'
    Ordinal r;
    skipWs();
    if (eat('>')) return r;
    r.exps.push_back(sum());
    while (eat(',')) r.exps.push_back(sum());
    if (!eat('>')) fail("expected '>'");
    if (mode == OrdParseMode::Normalize) {
      Ordinal folded = zeroOrd();
      for (const Ordinal& e : r.exps) folded = add(folded, omegaPow(e));
      return folded;
    }
    return r;
  }
};

}  // namespace detail

inline Ordinal parseOrdinal(const std::string& text, OrdParseMode mode = OrdParseMode::Strict) {
  detail::OrdParser p{text, 0, mode};
  Ordinal r = p.sum();
  p.skipWs();
  if (p.i != text.size()) p.fail("trailing input");
  if (mode == OrdParseMode::Strict && !isNotation(r))
    throw ParseError("ordinal is not in Cantor normal form: " + text);
  return r;
}

inline std::string printOrdinal(const Ordinal& a) {
  if (a.exps.empty()) return "0";
  std::string out;
  std::size_t j = 0;
  while (j < a.exps.size()) {
    if (j > 0) out += '+';
    const Ordinal& e = a.exps[j];
    if (e.exps.empty()) {
      // Collapse a run of w^0 summands to a decimal numeral.
      std::uint64_t run = 0;
      while (j < a.exps.size() && a.exps[j].exps.empty()) {
        ++run;
        ++j;
      }
      out += std::to_string(run);
    } else if (e == oneOrd()) {
      out += 'w';
      ++j;
    } else {
      std::string inner = printOrdinal(e);
      out += inner.find('+') == std::string::npos ? "w^" + inner : "w^(" + inner + ")";
      ++j;
    }
  }
  return out;
}

}  // namespace gforge
