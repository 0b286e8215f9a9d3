#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gkpz/tree.hpp"

namespace gkpz {

/// Local node profile under the generalized (KPZ) rule: any number of
/// plain I-children, together with either a noise tag (no dotted children)
/// or up to two dotted I'-children. Closed under sub-profiles.
struct RuleProfile {
  int plain_count = 0;
  int dotted_count = 0;
  bool has_noise = false;

  bool admissible() const {
    if (has_noise) return dotted_count == 0;
    return dotted_count <= 2;
  }
};

/// True iff every node of t matches an admissible RuleProfile and every
/// edge decoration is plain (0,0) or dotted (0,1). Polynomial decorations
/// are unrestricted.
bool conforms_to_rule(const TreePtr& t);

struct EnumCaps {
  int max_noises = 4;
  int max_poly_weight = 1;  // per-node parabolic weight of X^k decorations
};

/// Exhaustive negative-homogeneity catalog, grouped by exact homogeneity.
struct Catalog {
  std::map<Homogeneity, std::vector<TreePtr>> groups;
  /// Set when trees at the noise cap still admit rule-generated extensions
  /// of negative homogeneity (enlarging the cap would add trees).
  bool cap_exhausted = false;

  std::vector<TreePtr> all() const;
  int total() const;
  std::optional<int> max_noise_count() const;
  bool contains(const TreePtr& t) const;
};

/// All conforming trees of negative homogeneity within the caps.
Catalog enumerate_negative(const EnumCaps& caps = {});

/// Closure of {Xi, X Xi} under mu -> I'(mu), (mu,nu) -> mu I(nu) and
/// (mu,nu) -> I'(mu) I'(nu), truncated to negative homogeneity. With
/// decorate set, polynomial decorations within the weight cap are added
/// on the closure shapes afterwards (still truncated to negative).
Catalog enumerate_noises_inductive(const EnumCaps& caps = {}, bool decorate = true);

/// Catalog of iterated noise derivatives D_{Xi_j}...D_{Xi_1} B^-,
/// grouped by the plus-homogeneity of the derived trees.
Catalog derivative_catalog(const Catalog& base, int j);

struct CatalogReport {
  struct Group {
    Homogeneity homogeneity;
    std::vector<std::string> trees;       // canonical term syntax
    std::vector<int> noise_counts;
  };
  std::vector<Group> groups;  // ordered by homogeneity
  int total = 0;
  int max_noises = 0;

  std::string to_text(double kappa = 0.01) const;
};

CatalogReport catalog_report(const Catalog& c);

}  // namespace gkpz
