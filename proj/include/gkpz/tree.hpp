#pragma once

#include <memory>
#include <string>
#include <vector>

#include "gkpz/homogeneity.hpp"

namespace gkpz {

/// Noise tag carried by a tree node. Xi is the driving noise symbol,
/// Xi1..Xi4 the placeholder noises introduced by noise differentiation.
enum class Noise : std::uint8_t { None = 0, Xi, Xi1, Xi2, Xi3, Xi4 };

inline int noise_index(Noise n) {
  switch (n) {
    case Noise::Xi1: return 1;
    case Noise::Xi2: return 2;
    case Noise::Xi3: return 3;
    case Noise::Xi4: return 4;
    default: return 0;
  }
}
Noise noise_from_index(int j);

struct NodeLabel {
  Noise noise = Noise::None;
  MultiIndex poly{0, 0};
};

class Tree;
using TreePtr = std::shared_ptr<const Tree>;

/// A child subtree reached through an abstract integration edge I_a.
struct Child {
  MultiIndex edge{0, 0};
  TreePtr sub;
};

/// Canonically stored decorated rooted tree. Children are kept sorted by
/// (edge label, canonical key of the subtree), so isomorphic trees share a
/// unique representation and compare equal through their key strings.
/// Instances are immutable; all operations build fresh trees.
class Tree {
 public:
  static TreePtr make(NodeLabel root, std::vector<Child> children);
  static TreePtr unit();
  static TreePtr leaf(Noise n, MultiIndex poly = {0, 0});
  /// Planted tree I_a(sub): bare root, single edge.
  static TreePtr planted(MultiIndex a, const TreePtr& sub);
  /// Root-product of two trees. At most one operand may carry a root noise.
  static TreePtr product(const TreePtr& s, const TreePtr& t);
  /// Same tree with the root polynomial decoration raised by k.
  static TreePtr raise_poly(const TreePtr& t, MultiIndex k);

  const NodeLabel& root() const { return root_; }
  const std::vector<Child>& children() const { return children_; }
  /// Canonical term-syntax form; doubles as equality/ordering key.
  const std::string& key() const { return key_; }

  bool is_unit() const {
    return root_.noise == Noise::None && root_.poly == MultiIndex{0, 0} &&
           children_.empty();
  }
  /// Pure polynomial X^k with k != 0: a decorated bare root, no children.
  bool is_pure_poly() const {
    return root_.noise == Noise::None && children_.empty() &&
           root_.poly != MultiIndex{0, 0};
  }
  /// Planted form I_a(sigma): bare undecorated root with a single child.
  bool is_planted() const {
    return root_.noise == Noise::None && root_.poly == MultiIndex{0, 0} &&
           children_.size() == 1;
  }

  int node_count() const;

 private:
  Tree(NodeLabel root, std::vector<Child> children);
  NodeLabel root_;
  std::vector<Child> children_;
  std::string key_;
};

inline bool tree_equal(const TreePtr& a, const TreePtr& b) {
  return a->key() == b->key();
}
struct TreeKeyLess {
  bool operator()(const TreePtr& a, const TreePtr& b) const {
    return a->key() < b->key();
  }
};

/// Homogeneity |tau| (plus_mode = false) or |tau|_+ (plus_mode = true).
/// The two differ only on the placeholder noises Xi_j: |Xi_j| = -kappa
/// while |Xi_j|_+ = -3/2 - kappa, the same as Xi.
Homogeneity homogeneity(const TreePtr& t, bool plus_mode = false);

/// Number of noise-tagged nodes (Xi and Xi_j alike).
int noise_count(const TreePtr& t);
/// Number of Xi-tagged nodes only.
int xi_count(const TreePtr& t);
bool contains_xi_j(const TreePtr& t);
/// True when some node carries noise Xi_j with index j.
bool contains_noise(const TreePtr& t, Noise n);

/// Re-canonicalization entry point. Trees are canonical by construction,
/// so this is the identity; it exists as the public fixed-point witness.
TreePtr canonicalize(const TreePtr& t);

/// Term-syntax printer (equals t->key()) and parser.
std::string print_tree(const TreePtr& t);
TreePtr parse_tree(const std::string& text);

}  // namespace gkpz
