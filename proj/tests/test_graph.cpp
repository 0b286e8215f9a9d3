#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "gkpz/graph.hpp"
#include "gkpz/malliavin.hpp"

using namespace gkpz;

namespace {

int count_kind(const FeynmanGraph& g, VertexKind k) {
  return static_cast<int>(
      std::count_if(g.vertices.begin(), g.vertices.end(),
                    [&](const GVertex& v) { return v.kind == k; }));
}

int count_kernel(const FeynmanGraph& g, EdgeKernel k) {
  return static_cast<int>(std::count_if(
      g.edges.begin(), g.edges.end(), [&](const GEdge& e) { return e.kernel == k; }));
}

// first example drawn in the mirror-graph section
TreePtr example_tree() { return parse_tree("Xi*I[Xi*I[I'[Xi]*I'[Xi]]]"); }

}  // namespace

TEST_CASE("tree_to_graph structure") {
  FeynmanGraph g = tree_to_graph(parse_tree("Xi*I[Xi]"));
  CHECK(g.vertices.size() == 3);
  CHECK(count_kind(g, VertexKind::Green) == 1);
  CHECK(count_kind(g, VertexKind::Noise) == 2);
  CHECK(count_kernel(g, EdgeKernel::K) == 1);
  CHECK(count_kernel(g, EdgeKernel::Test) == 1);

  FeynmanGraph unit = tree_to_graph(Tree::unit());
  CHECK(unit.vertices.size() == 2);
  CHECK(count_kernel(unit, EdgeKernel::Test) == 1);

  FeynmanGraph ex = tree_to_graph(example_tree());
  CHECK(ex.vertices.size() == 6);
  CHECK(count_kind(ex, VertexKind::Noise) == 4);
  CHECK(count_kind(ex, VertexKind::Internal) == 1);
  CHECK(count_kernel(ex, EdgeKernel::K) == 2);
  CHECK(count_kernel(ex, EdgeKernel::DK) == 2);

  // placeholder noises become slots, decorations orange edges
  FeynmanGraph slot = tree_to_graph(parse_tree("Xi1*I[Xi@X^(0,1)]"));
  CHECK(count_kind(slot, VertexKind::HSlot) == 1);
  CHECK(count_kernel(slot, EdgeKernel::OrangeFactor) == 1);

  CHECK_THROWS_AS(tree_to_graph(parse_tree("I_(1,1)[Xi]")), std::invalid_argument);
}

TEST_CASE("wick pairing counts") {
  CHECK(wick_expectation_graphs(tree_to_graph(parse_tree("Xi*I[Xi]"))).size() == 1);
  CHECK(wick_expectation_graphs(tree_to_graph(example_tree())).size() == 3);
  CHECK(wick_expectation_graphs(tree_to_graph(parse_tree("Xi*I[Xi]*I[Xi]"))).empty());
  for (const auto& g : wick_expectation_graphs(tree_to_graph(example_tree()))) {
    CHECK(count_kind(g, VertexKind::Noise) == 0);
    CHECK(count_kind(g, VertexKind::NoisePair) == 4);
    CHECK(count_kernel(g, EdgeKernel::RhoRho) == 2);
  }
}

TEST_CASE("complete mirror of the two-noise tree") {
  FeynmanGraph m = mirror_graph(parse_tree("Xi*I[Xi]"), 2);
  CHECK(count_kind(m, VertexKind::Green) == 2);
  CHECK(count_kind(m, VertexKind::DiracPair) == 2);
  CHECK(count_kernel(m, EdgeKernel::Test) == 2);
  CHECK(count_kernel(m, EdgeKernel::K) == 2);
  CHECK(count_kernel(m, EdgeKernel::RhoRho) == 0);
  // recentering hits the integration edges
  for (const auto& e : m.edges)
    if (e.kernel == EdgeKernel::K) {
      CHECK(e.taylor_order == 1);
      CHECK(m.vertices[e.base_vertex].kind == VertexKind::Green);
    }
}

TEST_CASE("epsilon mirror of the drawn example") {
  FeynmanGraph m = mirror_graph(example_tree(), 0);
  // 2 greens + 4 noise pairs (two vertices each) + the dot in both copies
  CHECK(m.vertices.size() == 2u + 8u + 2u);
  CHECK(count_kind(m, VertexKind::NoisePair) == 8);
  CHECK(count_kernel(m, EdgeKernel::RhoRho) == 4);
  CHECK(count_kernel(m, EdgeKernel::K) == 4);
  CHECK(count_kernel(m, EdgeKernel::DK) == 4);
  CHECK(count_kernel(m, EdgeKernel::Test) == 2);
}

TEST_CASE("mirror vertex count formula") {
  for (const char* s : {"Xi", "Xi*I[Xi]", "I'[Xi]*I'[Xi]", "Xi*I[Xi*I[Xi]]",
                        "Xi*I[Xi*I[I'[Xi]*I'[Xi]]]", "I'[Xi*I[Xi]]"}) {
    TreePtr t = parse_tree(s);
    FeynmanGraph m = mirror_graph(t, noise_count(t));
    int internal_nodes = t->node_count() - noise_count(t);
    CHECK(static_cast<int>(m.vertices.size()) ==
          2 + 2 * internal_nodes + noise_count(t));
    // both green vertices have degree one through their test edge
    for (int gid : m.greens()) {
      int deg = 0;
      for (const auto& e : m.edges)
        if (e.kernel == EdgeKernel::Test && (e.tail == gid || e.head == gid)) ++deg;
      CHECK(deg == 1);
    }
  }
}

TEST_CASE("mirror is invariant under copy swap") {
  FeynmanGraph m = mirror_graph(example_tree(), 4);
  FeynmanGraph swapped = m;
  for (auto& v : swapped.vertices) v.copy = v.copy == 1 ? 2 : (v.copy == 2 ? 1 : 0);
  CHECK(graphs_isomorphic(m, swapped));
}

TEST_CASE("partial mirrors combine slots and pair edges") {
  TreePtr t = example_tree();
  FeynmanGraph m = mirror_graph(t, 2);
  CHECK(count_kind(m, VertexKind::DiracPair) == 2);
  CHECK(count_kind(m, VertexKind::NoisePair) == 4);
  CHECK(count_kernel(m, EdgeKernel::RhoRho) == 2);
  CHECK_THROWS_AS(mirror_graph(t, 5), std::invalid_argument);
}

TEST_CASE("simplify_zero spots the kernel-annihilated loop") {
  // third expectation piece of the drawn derivative example: both deep
  // noises pair with each other below a plain integration edge
  TreePtr t = parse_tree("I'[Xi1*I[I'[Xi]*I'[Xi]]]*I'[Xi2]");
  auto graphs = wick_expectation_graphs(tree_to_graph(t));
  REQUIRE(graphs.size() == 1);
  CHECK(simplify_zero(graphs.front()).is_zero_marker());

  // the complete mirror has slots everywhere and stays untouched
  FeynmanGraph m = mirror_graph(parse_tree("Xi*I[Xi]"), 2);
  CHECK_FALSE(simplify_zero(m).is_zero_marker());
  CHECK(graphs_isomorphic(simplify_zero(m), m));

  // loop-free graphs are unchanged
  FeynmanGraph plain = tree_to_graph(parse_tree("Xi*I[Xi]"));
  CHECK_FALSE(simplify_zero(plain).is_zero_marker());

  // idempotence and copy-swap compatibility
  CHECK(simplify_zero(simplify_zero(graphs.front())).is_zero_marker());
}

TEST_CASE("dot export is deterministic") {
  FeynmanGraph m = mirror_graph(parse_tree("Xi*I[Xi]"), 2);
  std::string a = to_dot(m);
  std::string b = to_dot(mirror_graph(parse_tree("Xi*I[Xi]"), 2));
  CHECK(a == b);
  CHECK(a.find("color=green") != std::string::npos);
  // header + 4 vertices + (2 solid K + 2 green test) edges + close
  CHECK(std::count(a.begin(), a.end(), '\n') == 1 + 4 + 4 + 1);

  FeynmanGraph empty;
  CHECK(to_dot(empty) == "digraph mirror {\n}\n");
}
