#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gkpz/derive.hpp"
#include "gkpz/formal.hpp"
#include "gkpz/tree.hpp"

using namespace gkpz;

namespace {

TreePtr xi() { return Tree::leaf(Noise::Xi); }
TreePtr xxi() { return Tree::leaf(Noise::Xi, {0, 1}); }

TreePtr random_tree(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> noise_pick(0, 2);
  std::uniform_int_distribution<int> kid_pick(0, depth > 0 ? 2 : 0);
  NodeLabel root;
  int np = noise_pick(rng);
  if (np == 1) root.noise = Noise::Xi;
  if (np == 2) root.poly = {0, 1};
  std::vector<Child> kids;
  int n = kid_pick(rng);
  for (int i = 0; i < n; ++i) {
    MultiIndex a = (rng() % 2) ? MultiIndex{0, 1} : MultiIndex{0, 0};
    kids.push_back({a, random_tree(rng, depth - 1)});
  }
  return Tree::make(root, std::move(kids));
}

}  // namespace

TEST_CASE("homogeneity base cases") {
  CHECK(homogeneity(Tree::unit()) == Homogeneity{0, 0});
  CHECK(homogeneity(xi()) == Homogeneity{-3, -1});
  // Xi * I[Xi] sits at -1 - 2 kappa
  TreePtr t = Tree::product(xi(), Tree::planted({0, 0}, xi()));
  CHECK(homogeneity(t) == Homogeneity{-2, -2});
  // plus mode only changes Xi_j
  TreePtr d = Tree::leaf(Noise::Xi1);
  CHECK(homogeneity(d) == Homogeneity{0, -1});
  CHECK(homogeneity(d, true) == Homogeneity{-3, -1});
}

TEST_CASE("homogeneity is additive over products and edges") {
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    TreePtr s = random_tree(rng, 2);
    TreePtr t = random_tree(rng, 2);
    if (s->root().noise != Noise::None && t->root().noise != Noise::None) continue;
    CHECK(homogeneity(Tree::product(s, t)) == homogeneity(s) + homogeneity(t));
    MultiIndex a = (i % 2) ? MultiIndex{0, 1} : MultiIndex{0, 0};
    Homogeneity gap = homogeneity(Tree::planted(a, s)) - homogeneity(s);
    CHECK(gap == Homogeneity{2 * (2 - parabolic_weight(a)), 0});
  }
}

TEST_CASE("noise_count counts every tag") {
  CHECK(noise_count(xi()) == 1);
  TreePtr t = Tree::product(xi(), Tree::planted({0, 0}, xi()));
  CHECK(noise_count(t) == 2);
  CHECK(xi_count(t) == 2);
  TreePtr d = Tree::product(Tree::leaf(Noise::Xi1), Tree::planted({0, 0}, xi()));
  CHECK(noise_count(d) == 2);
  CHECK(xi_count(d) == 1);
}

TEST_CASE("canonical form ignores child order") {
  TreePtr a = Tree::planted({0, 1}, xi());
  TreePtr b = Tree::planted({0, 1}, Tree::product(xxi(), Tree::planted({0, 0}, xi())));
  TreePtr ab = Tree::product(a, b);
  TreePtr ba = Tree::product(b, a);
  CHECK(tree_equal(ab, ba));
  CHECK(ab->key() == ba->key());
}

TEST_CASE("canonicalize is the identity fixed point") {
  std::mt19937 rng(13);
  for (int i = 0; i < 100; ++i) {
    TreePtr t = random_tree(rng, 3);
    TreePtr c = canonicalize(t);
    CHECK(tree_equal(t, c));
    CHECK(tree_equal(c, canonicalize(c)));
    CHECK(homogeneity(c) == homogeneity(t));
    CHECK(noise_count(c) == noise_count(t));
  }
}

TEST_CASE("parse and print round trip") {
  for (const char* s : {"Xi", "1", "Xi@X^(0,1)", "Xi*I[Xi]", "I'[Xi]*I'[Xi]",
                        "Xi*I[Xi@X^(0,1)]", "1@X^(0,1)*I'[Xi]*I'[Xi]",
                        "I_(1,1)[Xi1]", "Xi*I[I'[Xi]*I'[Xi*I[Xi]]]"}) {
    TreePtr t = parse_tree(s);
    CHECK(print_tree(parse_tree(print_tree(t))) == print_tree(t));
  }
  // parsing is order independent
  CHECK(parse_tree("I[Xi]*Xi")->key() == parse_tree("Xi*I[Xi]")->key());
  std::mt19937 rng(3);
  for (int i = 0; i < 100; ++i) {
    TreePtr t = random_tree(rng, 3);
    CHECK(parse_tree(print_tree(t))->key() == t->key());
  }
}

TEST_CASE("parser rejects malformed input") {
  CHECK_THROWS(parse_tree("Xi*Xi"));       // two noises on one node
  CHECK_THROWS(parse_tree("I[Xi"));        // unbalanced
  CHECK_THROWS(parse_tree("Xi)"));         // trailing garbage
  CHECK_THROWS(parse_tree("Q"));
}

TEST_CASE("poly_derive basics") {
  // D I[Xi] = I'[Xi]
  FormalSum d = poly_derive(Tree::planted({0, 0}, xi()), {0, 1});
  CHECK(d == FormalSum::of(parse_tree("I'[Xi]")));

  // D X = 1, D_x X0 = 0
  CHECK(poly_derive(Tree::leaf(Noise::None, {0, 1}), {0, 1}) == FormalSum::of(Tree::unit()));
  CHECK(poly_derive(Tree::leaf(Noise::None, {1, 0}), {0, 1}).is_zero());

  // Leibniz with multiplicity: D(I[Xi]*I[Xi]) = 2 I'[Xi]*I[Xi]
  TreePtr sq = parse_tree("I[Xi]*I[Xi]");
  FormalSum d2 = poly_derive(sq, {0, 1});
  CHECK(d2 == FormalSum::of(parse_tree("I'[Xi]*I[Xi]"), Rational(2)));

  // homogeneity drop is exactly |a|_s on every term
  for (const char* s : {"Xi*I[Xi]", "I'[Xi]*I[Xi*I[Xi]]", "Xi@X^(0,1)*I[Xi]"}) {
    TreePtr t = parse_tree(s);
    for (MultiIndex a : {MultiIndex{0, 1}, MultiIndex{1, 0}, MultiIndex{0, 2}}) {
      FormalSum ds = poly_derive(t, a);
      for (const auto& [k, e] : ds.entries())
        CHECK(homogeneity(e.tree) ==
              homogeneity(t) - Homogeneity{2 * parabolic_weight(a), 0});
    }
  }
}

TEST_CASE("poly_derive steps commute") {
  std::mt19937 rng(77);
  for (int i = 0; i < 60; ++i) {
    TreePtr t = random_tree(rng, 2);
    FormalSum xy = poly_derive(poly_derive(t, {0, 1}), {1, 0});
    FormalSum yx = poly_derive(poly_derive(t, {1, 0}), {0, 1});
    CHECK(xy == yx);
    FormalSum joint = poly_derive(t, {1, 1});
    CHECK(joint == xy);
  }
}

TEST_CASE("noise_derive basics") {
  CHECK(noise_derive(xi(), 1) == FormalSum::of(Tree::leaf(Noise::Xi1)));
  CHECK(noise_derive(Tree::leaf(Noise::Xi2), 1).is_zero());
  CHECK(noise_derive(Tree::unit(), 1).is_zero());

  // D_{Xi1}(Xi*I[Xi]) = Xi1*I[Xi] + Xi*I[Xi1]
  FormalSum d = noise_derive(parse_tree("Xi*I[Xi]"), 1);
  FormalSum expect;
  expect.add(parse_tree("Xi1*I[Xi]"), Rational(1));
  expect.add(parse_tree("Xi*I[Xi1]"), Rational(1));
  CHECK(d == expect);

  // the blue noise keeps its decoration
  FormalSum dxxi = noise_derive(xxi(), 2);
  CHECK(dxxi == FormalSum::of(parse_tree("Xi2@X^(0,1)")));
}

TEST_CASE("noise_derive homogeneity shift") {
  std::mt19937 rng(5);
  int checked = 0;
  while (checked < 50) {
    TreePtr t = random_tree(rng, 2);
    if (xi_count(t) == 0) continue;
    ++checked;
    FormalSum d = noise_derive(t, 3);
    CHECK(d.coefficient_sum() == Rational(xi_count(t)));
    for (const auto& [k, e] : d.entries()) {
      CHECK(homogeneity(e.tree) == homogeneity(t) + Homogeneity{3, 0});
      CHECK(homogeneity(e.tree, true) == homogeneity(t, true));
    }
  }
}
