#pragma once
// The quasi-embedding from ordinal notations into binary trees, bad
// sequences, brute-force well-partial-order oracles, and verification of
// reification tables.
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "gforge/error.hpp"
#include "gforge/ordinal.hpp"
#include "gforge/tree.hpp"

namespace gforge {

// f(0) = leaf, f(⟨a0,...,a_{n-1}⟩) = node(f(a0), f(⟨a1,...,a_{n-1}⟩)).
inline BinaryTree quasiEmbed(const Ordinal& a) {
  BinaryTree t = BinaryTree::leaf();
  for (auto it = a.exps.rbegin(); it != a.exps.rend(); ++it)
    t = BinaryTree::node(quasiEmbed(*it), t);
  return t;
}

// A sequence is bad when no earlier entry embeds into a later one.
inline bool isBad(const std::vector<BinaryTree>& seq) {
  for (std::size_t i = 0; i < seq.size(); ++i)
    for (std::size_t j = i + 1; j < seq.size(); ++j)
      if (embeds(seq[i], seq[j])) return false;
  return true;
}

struct BadSequence {
  std::vector<BinaryTree> entries;  // nonempty, pairwise non-embedding in order
};

inline BadSequence makeBadSequence(std::vector<BinaryTree> entries) {
  if (entries.empty()) throw Error("bad sequences are nonempty");
  if (!isBad(entries)) throw Error("sequence is not bad: an earlier entry embeds into a later one");
  return BadSequence{std::move(entries)};
}

struct BadSearchResult {
  std::size_t length = 0;
  std::vector<BinaryTree> witness;  // first maximal sequence in canonical order
};

namespace detail {

inline void badDfs(const std::vector<BinaryTree>& universe, std::vector<BinaryTree>& prefix,
                   BadSearchResult& best) {
  if (prefix.size() > best.length) {
    best.length = prefix.size();
    best.witness = prefix;
  }
  for (const BinaryTree& t : universe) {
    bool extendsBad = true;
    for (const BinaryTree& e : prefix)
      if (embeds(e, t)) {
        extendsBad = false;
        break;
      }
    if (!extendsBad) continue;
    prefix.push_back(t);
    badDfs(universe, prefix, best);
    prefix.pop_back();
  }
}

}  // namespace detail

// Exhaustive search for the longest bad sequence over a finite universe.
// Badness itself rules out repeated entries, so positions are automatically
// distinct; abandoning a prefix as soon as an extension would embed a
// predecessor is the dominance pruning that keeps this feasible.
inline BadSearchResult longestBadOver(const std::vector<BinaryTree>& universe) {
  BadSearchResult best;
  std::vector<BinaryTree> prefix;
  detail::badDfs(universe, prefix, best);
  return best;
}

inline BadSearchResult longestBadSequence(std::uint64_t nodeBudget) {
  if (nodeBudget < 1) throw Error("longestBadSequence requires a node budget of at least 1");
  return longestBadOver(treesUpToNodes(nodeBudget));
}

// ---- Well-partial-order oracle ----------------------------------------------------

struct WpoReport {
  bool reflexive = true;
  bool antisymmetric = true;
  bool transitive = true;
  std::size_t longestBadLength = 0;
  std::vector<BinaryTree> badWitness;
  bool partialOrder() const { return reflexive && antisymmetric && transitive; }
};

inline WpoReport wpoCheck(const std::vector<BinaryTree>& universe) {
  WpoReport rep;
  for (const BinaryTree& t : universe)
    if (!embeds(t, t)) rep.reflexive = false;
  for (const BinaryTree& s : universe)
    for (const BinaryTree& t : universe) {
      if (embeds(s, t) && embeds(t, s) && s != t) rep.antisymmetric = false;
      for (const BinaryTree& u : universe)
        if (embeds(s, t) && embeds(t, u) && !embeds(s, u)) rep.transitive = false;
    }
  BadSearchResult r = longestBadOver(universe);
  rep.longestBadLength = r.length;
  rep.badWitness = r.witness;
  return rep;
}

// ---- Reification tables -----------------------------------------------------------

struct ReificationEntry {
  std::vector<BinaryTree> seq;
  Ordinal value;
};

struct ReificationTable {
  std::vector<ReificationEntry> entries;
};

// One entry per line: space-separated trees, then " ; ", then an ordinal.
// Blank lines and lines starting with '#' are skipped.
inline ReificationTable parseReificationTable(const std::string& text) {
  ReificationTable table;
  std::istringstream in(text);
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::size_t semi = line.find(';');
    if (semi == std::string::npos)
      throw ParseError("line " + std::to_string(lineNo) + ": expected 'seq ; ordinal'");
    std::istringstream seqIn(line.substr(0, semi));
    ReificationEntry entry;
    std::string tok;
    while (seqIn >> tok) entry.seq.push_back(parseTree(tok));
    if (entry.seq.empty())
      throw ParseError("line " + std::to_string(lineNo) + ": empty tree sequence");
    std::string ordText = line.substr(semi + 1);
    std::size_t b = ordText.find_first_not_of(" \t\r");
    std::size_t e = ordText.find_last_not_of(" \t\r");
    if (b == std::string::npos)
      throw ParseError("line " + std::to_string(lineNo) + ": missing ordinal");
    entry.value = parseOrdinal(ordText.substr(b, e - b + 1));
    table.entries.push_back(std::move(entry));
  }
  return table;
}

inline std::string printTreeSeq(const std::vector<BinaryTree>& seq) {
  std::string out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i > 0) out += ' ';
    out += printTree(seq[i]);
  }
  return out;
}

struct ReifCheckResult {
  bool ok = true;
  std::string message;  // describes the offending entry or pair when not ok
};

// Verifies the descent condition: whenever both a sequence and its one-step
// extension appear, the value must strictly drop. Keys must be bad sequences.
inline ReifCheckResult checkReification(const ReificationTable& table) {
  const auto& es = table.entries;
  for (std::size_t i = 0; i < es.size(); ++i) {
    if (!isBad(es[i].seq))
      return {false, "key is not a bad sequence: " + printTreeSeq(es[i].seq)};
    for (std::size_t j = i + 1; j < es.size(); ++j)
      if (es[i].seq == es[j].seq)
        return {false, "duplicate key: " + printTreeSeq(es[i].seq)};
  }
  for (const ReificationEntry& child : es) {
    if (child.seq.size() < 2) continue;
    std::vector<BinaryTree> prefix(child.seq.begin(), child.seq.end() - 1);
    for (const ReificationEntry& parent : es) {
      if (parent.seq != prefix) continue;
      if (!ordLess(child.value, parent.value))
        return {false, "descent fails: r(" + printTreeSeq(child.seq) + ") = " +
                           printOrdinal(child.value) + " does not descend below r(" +
                           printTreeSeq(prefix) + ") = " + printOrdinal(parent.value)};
    }
  }
  return {true, ""};
}

}  // namespace gforge
