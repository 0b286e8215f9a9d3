#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "gkpz/rule.hpp"

using namespace gkpz;

namespace {

// Item-by-item transcription of the printed negative-homogeneity catalog.
const std::vector<const char*> kGroupMinus32 = {"Xi"};

const std::vector<const char*> kGroupMinusHalfLight = {"Xi@X^(0,1)", "I'[Xi]"};

const std::vector<const char*> kGroupMinus1 = {"Xi*I[Xi]", "I'[Xi]*I'[Xi]"};

const std::vector<const char*> kGroupMinusHalfHeavy = {
    "Xi*I[Xi*I[Xi]]",
    "Xi*I[Xi]*I[Xi]",
    "I'[Xi*I[Xi]]*I'[Xi]",
    "Xi*I[I'[Xi]*I'[Xi]]",
    "I'[I'[Xi]*I'[Xi]]*I'[Xi]",
    "I[Xi]*I'[Xi]*I'[Xi]",
};

const std::vector<const char*> kGroupTwoKappa = {
    "Xi*I[Xi@X^(0,1)]",
    "Xi@X^(0,1)*I[Xi]",
    "I'[Xi@X^(0,1)]*I'[Xi]",
    "1@X^(0,1)*I'[Xi]*I'[Xi]",
    "I'[Xi*I[Xi]]",
    "I'[I'[Xi]*I'[Xi]]",
    "I[Xi]*I'[Xi]",
    "Xi*I[I'[Xi]]",
    "I'[I'[Xi]]*I'[Xi]",
};

// The first display item is drawn with a spurious extra root in the source;
// the intended tree is the four-noise plain chain, in line with the
// three-noise chain of the -1/2 display.
const std::vector<const char*> kGroupFourKappa = {
    "Xi*I[Xi*I[Xi*I[Xi]]]",
    "I'[Xi*I[Xi*I[Xi]]]*I'[Xi]",
    "Xi*I[Xi*I[I'[Xi]*I'[Xi]]]",
    "Xi*I[I'[Xi]*I'[Xi*I[Xi]]]",
    "I'[Xi]*I'[Xi*I[I'[Xi]*I'[Xi]]]",
    "Xi*I[I'[Xi]*I'[I'[Xi]*I'[Xi]]]",
    "I'[I'[Xi]*I'[Xi*I[Xi]]]*I'[Xi]",
    "I'[I'[Xi]*I'[I'[Xi]*I'[Xi]]]*I'[Xi]",
    "I'[I'[Xi]*I'[Xi]]*I'[I'[Xi]*I'[Xi]]",
    "I'[Xi*I[Xi]]*I'[Xi*I[Xi]]",
    "I'[Xi*I[Xi]]*I'[I'[Xi]*I'[Xi]]",
    "Xi*I[Xi]*I[Xi]*I[Xi]",
    "I[Xi]*I[Xi]*I'[Xi]*I'[Xi]",
    "Xi*I[Xi*I[Xi]*I[Xi]]",
    "I'[Xi]*I'[Xi*I[Xi]*I[Xi]]",
    "Xi*I[I[Xi]*I'[Xi]*I'[Xi]]",
    "I'[Xi]*I'[I[Xi]*I'[Xi]*I'[Xi]]",
    "Xi*I[Xi]*I[Xi*I[Xi]]",
    "I[Xi*I[Xi]]*I'[Xi]*I'[Xi]",
    "I'[Xi*I[Xi]]*I'[Xi]*I[Xi]",
    "Xi*I[Xi]*I[I'[Xi]*I'[Xi]]",
    "I'[Xi]*I'[Xi]*I[I'[Xi]*I'[Xi]]",
    "I[Xi]*I'[Xi]*I'[I'[Xi]*I'[Xi]]",
};

std::set<std::string> keys(const std::vector<const char*>& terms) {
  std::set<std::string> out;
  for (const char* t : terms) out.insert(parse_tree(t)->key());
  return out;
}

std::set<std::string> keys(const std::vector<TreePtr>& trees) {
  std::set<std::string> out;
  for (const auto& t : trees) out.insert(t->key());
  return out;
}

}  // namespace

TEST_CASE("rule conformity") {
  CHECK(conforms_to_rule(parse_tree("Xi*I[Xi]")));
  CHECK(conforms_to_rule(parse_tree("1@X^(0,1)*I'[Xi]*I'[Xi]")));
  // a noise node with a dotted child is outside the rule
  CHECK_FALSE(conforms_to_rule(parse_tree("Xi*I'[Xi]")));
  // three dotted children exceed what the gradient square supplies
  CHECK_FALSE(conforms_to_rule(parse_tree("I'[Xi]*I'[Xi]*I'[Xi]")));
  // edge decorations beyond the generated set are not rule trees
  CHECK_FALSE(conforms_to_rule(parse_tree("I_(0,2)[Xi]")));
  // conformity is checked at every node
  CHECK_FALSE(conforms_to_rule(parse_tree("I[Xi*I'[Xi]]")));
}

TEST_CASE("catalog matches the printed displays group by group") {
  Catalog cat = enumerate_negative();
  CHECK_FALSE(cat.cap_exhausted);
  REQUIRE(cat.groups.size() == 6);

  auto expect_group = [&](Homogeneity h, const std::vector<const char*>& terms) {
    auto it = cat.groups.find(h);
    REQUIRE_MESSAGE(it != cat.groups.end(), "missing group " << h.str());
    CHECK_MESSAGE(keys(it->second) == keys(terms), "group " << h.str());
  };
  expect_group({-3, -1}, kGroupMinus32);
  expect_group({-1, -1}, kGroupMinusHalfLight);
  expect_group({-2, -2}, kGroupMinus1);
  expect_group({-1, -3}, kGroupMinusHalfHeavy);
  expect_group({0, -2}, kGroupTwoKappa);
  expect_group({0, -4}, kGroupFourKappa);

  CHECK(cat.total() == 43);
  CHECK(cat.max_noise_count() == 4);
  for (const auto& t : cat.all()) {
    CHECK(conforms_to_rule(t));
    CHECK(homogeneity(t).negative());
    CHECK(noise_count(t) <= 4);
  }
}

TEST_CASE("cap monotonicity and exhaustion reporting") {
  EnumCaps two;
  two.max_noises = 2;
  Catalog c2 = enumerate_negative(two);
  CHECK(c2.cap_exhausted);  // three-noise extensions of Xi*I[Xi] still exist
  // the two-noise catalog is exactly the full catalog filtered by noise count
  Catalog full = enumerate_negative();
  int small = 0;
  for (const auto& t : full.all())
    if (noise_count(t) <= 2) ++small;
  CHECK(c2.total() == small);
  // enlarging caps never removes a tree
  for (const auto& t : c2.all()) CHECK(full.contains(t));

  EnumCaps four;
  Catalog c4 = enumerate_negative(four);
  CHECK_FALSE(c4.cap_exhausted);
}

TEST_CASE("inductive noise closure equals the rule enumeration") {
  Catalog inductive = enumerate_noises_inductive();
  Catalog ruled = enumerate_negative();
  CHECK(keys(inductive.all()) == keys(ruled.all()));

  // the first operator plants the dotted noise
  CHECK(inductive.contains(parse_tree("I'[Xi]")));
  // the second builds Xi*I[Xi]
  CHECK(inductive.contains(parse_tree("Xi*I[Xi]")));

  // the undecorated closure is the catalog minus decorated-shape trees
  Catalog bare = enumerate_noises_inductive({}, /*decorate=*/false);
  for (const auto& t : bare.all()) CHECK(ruled.contains(t));
  CHECK(bare.total() < ruled.total());
}

TEST_CASE("derivative catalogs carry each placeholder exactly once") {
  Catalog base = enumerate_negative();
  for (int j : {1, 2}) {
    Catalog dj = derivative_catalog(base, j);
    CHECK(dj.total() > 0);
    for (const auto& t : dj.all()) {
      for (int i = 1; i <= j; ++i) {
        int hits = 0;
        // count Xi_i occurrences via noise replacement bookkeeping
        std::function<void(const TreePtr&)> walk = [&](const TreePtr& u) {
          if (u->root().noise == noise_from_index(i)) ++hits;
          for (const auto& c : u->children()) walk(c.sub);
        };
        walk(t);
        CHECK(hits == 1);
      }
      // every planted subtree holding a placeholder noise sits at
      // non-negative homogeneity, so extraction never sees one
      std::function<bool(const TreePtr&)> bad = [&](const TreePtr& u) -> bool {
        for (const auto& c : u->children()) {
          Homogeneity h = homogeneity(c.sub) +
                          Homogeneity{2 * (2 - parabolic_weight(c.edge)), 0};
          if (h.negative() && contains_xi_j(c.sub)) return true;
          if (bad(c.sub)) return true;
        }
        return false;
      };
      CHECK_FALSE(bad(t));
    }
  }
}

TEST_CASE("catalog report is stable and serializable") {
  Catalog cat = enumerate_negative();
  CatalogReport rep = catalog_report(cat);
  CHECK(rep.total == 43);
  CHECK(rep.max_noises == 4);
  CHECK(rep.to_text() == catalog_report(enumerate_negative()).to_text());

  CatalogReport empty = catalog_report(Catalog{});
  CHECK(empty.total == 0);
  CHECK(empty.groups.empty());
}
