#pragma once
// Binary trees and the embedding relations: the ordered embedding, its
// unordered variant, and the induced tree equivalence. Trees are hash-consed
// so that structural equality is pointer equality and the relation caches
// can key on node identity.
#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "gforge/error.hpp"

namespace gforge {

namespace detail {

struct TreeNode {
  const TreeNode* left = nullptr;   // null for a leaf
  const TreeNode* right = nullptr;
  std::uint64_t height = 0;
  std::uint64_t nodeCount = 1;
};

// Interning pool. Nodes are never freed; the universes involved are tiny.
struct TreePool {
  std::mutex mu;
  TreeNode leaf;
  std::map<std::pair<const TreeNode*, const TreeNode*>, std::unique_ptr<TreeNode>> nodes;
};

inline TreePool& treePool() {
  static TreePool pool;
  return pool;
}

}  // namespace detail

class BinaryTree {
 public:
  static BinaryTree leaf() { return BinaryTree(&detail::treePool().leaf); }

  static BinaryTree node(const BinaryTree& l, const BinaryTree& r) {
    detail::TreePool& pool = detail::treePool();
    std::lock_guard<std::mutex> lock(pool.mu);
    auto key = std::make_pair(l.p_, r.p_);
    auto it = pool.nodes.find(key);
    if (it == pool.nodes.end()) {
      auto n = std::make_unique<detail::TreeNode>();
      n->left = l.p_;
      n->right = r.p_;
      n->height = std::max(l.p_->height, r.p_->height) + 1;
      n->nodeCount = 1 + l.p_->nodeCount + r.p_->nodeCount;
      it = pool.nodes.emplace(key, std::move(n)).first;
    }
    return BinaryTree(it->second.get());
  }

  bool isLeaf() const { return p_->left == nullptr; }
  BinaryTree left() const {
    if (isLeaf()) throw Error("a leaf has no subtrees");
    return BinaryTree(p_->left);
  }
  BinaryTree right() const {
    if (isLeaf()) throw Error("a leaf has no subtrees");
    return BinaryTree(p_->right);
  }
  std::uint64_t heightValue() const { return p_->height; }
  std::uint64_t nodeCount() const { return p_->nodeCount; }
  const detail::TreeNode* raw() const { return p_; }

  friend bool operator==(const BinaryTree& a, const BinaryTree& b) { return a.p_ == b.p_; }
  friend bool operator!=(const BinaryTree& a, const BinaryTree& b) { return a.p_ != b.p_; }

 private:
  explicit BinaryTree(const detail::TreeNode* p) : p_(p) {}
  const detail::TreeNode* p_;
};

inline std::uint64_t height(const BinaryTree& t) { return t.heightValue(); }

// Structural order used for canonical witnesses: leaf first, then by left
// subtree, then by right.
inline int cmpTree(const BinaryTree& a, const BinaryTree& b) {
  if (a == b) return 0;
  if (a.isLeaf()) return -1;
  if (b.isLeaf()) return 1;
  int c = cmpTree(a.left(), b.left());
  if (c != 0) return c;
  return cmpTree(a.right(), b.right());
}

inline bool treeLess(const BinaryTree& a, const BinaryTree& b) { return cmpTree(a, b) < 0; }

namespace detail {

struct TreeRelCache {
  std::mutex mu;
  std::map<std::pair<const TreeNode*, const TreeNode*>, bool> ordered;
  std::map<std::pair<const TreeNode*, const TreeNode*>, bool> unordered;
};

inline TreeRelCache& treeRelCache() {
  static TreeRelCache cache;
  return cache;
}

inline bool embedsRec(const BinaryTree& s, const BinaryTree& t, bool swapped);

inline bool embedsMemo(const BinaryTree& s, const BinaryTree& t, bool swapped) {
  TreeRelCache& cache = treeRelCache();
  auto& table = swapped ? cache.unordered : cache.ordered;
  auto key = std::make_pair(s.raw(), t.raw());
  {
    std::lock_guard<std::mutex> lock(cache.mu);
    auto it = table.find(key);
    if (it != table.end()) return it->second;
  }
  bool r = embedsRec(s, t, swapped);
  std::lock_guard<std::mutex> lock(cache.mu);
  table.emplace(key, r);
  return r;
}

inline bool embedsRec(const BinaryTree& s, const BinaryTree& t, bool swapped) {
  if (s.isLeaf()) return true;
  if (t.isLeaf()) return false;
  if (s.heightValue() > t.heightValue() || s.nodeCount() > t.nodeCount()) return false;
  // componentwise clause
  if (embedsMemo(s.left(), t.left(), swapped) && embedsMemo(s.right(), t.right(), swapped))
    return true;
  // the unordered variant also allows the swapped componentwise clause
  if (swapped && embedsMemo(s.left(), t.right(), swapped) &&
      embedsMemo(s.right(), t.left(), swapped))
    return true;
  // descent into either subtree
  return embedsMemo(s, t.left(), swapped) || embedsMemo(s, t.right(), swapped);
}

}  // namespace detail

inline bool embeds(const BinaryTree& s, const BinaryTree& t) {
  return detail::embedsMemo(s, t, false);
}

inline bool embedsUnordered(const BinaryTree& s, const BinaryTree& t) {
  return detail::embedsMemo(s, t, true);
}

inline bool treeEq(const BinaryTree& s, const BinaryTree& t) {
  return embedsUnordered(s, t) && embedsUnordered(t, s);
}

// ---- Text form: `o` for a leaf, `(s,t)` for an inner node -------------------------

inline std::string printTree(const BinaryTree& t) {
  if (t.isLeaf()) return "o";
  return "(" + printTree(t.left()) + "," + printTree(t.right()) + ")";
}

namespace detail {

inline BinaryTree parseTreeAt(const std::string& s, std::size_t& i) {
  if (i >= s.size()) throw ParseError("unexpected end of tree text");
  if (s[i] == 'o') {
    ++i;
    return BinaryTree::leaf();
  }
  if (s[i] != '(') throw ParseError(std::string("unexpected character '") + s[i] + "' in tree text");
  ++i;
  BinaryTree l = parseTreeAt(s, i);
  if (i >= s.size() || s[i] != ',') throw ParseError("expected ',' in tree text");
  ++i;
  BinaryTree r = parseTreeAt(s, i);
  if (i >= s.size() || s[i] != ')') throw ParseError("expected ')' in tree text");
  ++i;
  return BinaryTree::node(l, r);
}

}  // namespace detail

inline BinaryTree parseTree(const std::string& text) {
  std::size_t i = 0;
  BinaryTree t = detail::parseTreeAt(text, i);
  if (i != text.size()) throw ParseError("trailing characters after tree");
  return t;
}

// All trees with at most the given number of vertices, ascending by vertex
// count and then by the structural order.
inline std::vector<BinaryTree> treesUpToNodes(std::uint64_t maxNodes) {
  std::vector<std::vector<BinaryTree>> bySize(maxNodes + 1);
  if (maxNodes >= 1) bySize[1].push_back(BinaryTree::leaf());
  for (std::uint64_t n = 3; n <= maxNodes; n += 2) {
    for (std::uint64_t ln = 1; ln + 2 <= n; ln += 2) {
      std::uint64_t rn = n - 1 - ln;
      for (const BinaryTree& l : bySize[ln])
        for (const BinaryTree& r : bySize[rn]) bySize[n].push_back(BinaryTree::node(l, r));
    }
  }
  std::vector<BinaryTree> out;
  for (auto& group : bySize) {
    std::sort(group.begin(), group.end(), treeLess);
    out.insert(out.end(), group.begin(), group.end());
  }
  return out;
}

// All trees of height at most h, ascending as above.
inline std::vector<BinaryTree> treesUpToHeight(std::uint64_t maxHeight) {
  std::vector<BinaryTree> all{BinaryTree::leaf()};
  for (std::uint64_t h = 1; h <= maxHeight; ++h) {
    std::size_t end = all.size();
    std::vector<BinaryTree> next;
    for (std::size_t i = 0; i < end; ++i)
      for (std::size_t j = 0; j < end; ++j) {
        BinaryTree n = BinaryTree::node(all[i], all[j]);
        if (n.heightValue() == h) next.push_back(n);
      }
    all.insert(all.end(), next.begin(), next.end());
  }
  std::sort(all.begin(), all.end(), [](const BinaryTree& a, const BinaryTree& b) {
    if (a.nodeCount() != b.nodeCount()) return a.nodeCount() < b.nodeCount();
    return treeLess(a, b);
  });
  return all;
}

}  // namespace gforge
