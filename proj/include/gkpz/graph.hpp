#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gkpz/tree.hpp"

namespace gkpz {

enum class VertexKind : std::uint8_t {
  Green,      ///< test-function vertex (base-point proxy)
  Internal,   ///< plain integration vertex
  Noise,      ///< unpaired Xi marker
  NoisePair,  ///< endpoint of a mollifier pair edge
  DiracPair,  ///< two mirror slots identified into one vertex
  HSlot,      ///< placeholder noise Xi_j
};

enum class EdgeKernel : std::uint8_t { K, DK, RhoRho, Test, OrangeFactor };

struct GVertex {
  int id = 0;
  VertexKind kind = VertexKind::Internal;
  int copy = 0;  ///< mirror copy tag (0 = none/merged, 1 or 2 otherwise)
  int slot = 0;  ///< Xi_j index for HSlot/DiracPair vertices
};

/// Directed edge, tail at the child side (e-) and head at the parent side
/// (e+): kernels read K_e(z_head - z_tail), Taylor-expanded in the head
/// variable around the base vertex when taylor_order > 0.
struct GEdge {
  int tail = 0;
  int head = 0;
  EdgeKernel kernel = EdgeKernel::K;
  int taylor_order = 0;           ///< r_e in {0,1,2}
  int base_vertex = -1;           ///< v_e, -1 when unset
  MultiIndex orange{0, 0};        ///< monomial index for OrangeFactor edges
};

struct FeynmanGraph {
  std::vector<GVertex> vertices;
  std::vector<GEdge> edges;

  int add_vertex(VertexKind kind, int copy = 0, int slot = 0);
  void add_edge(int tail, int head, EdgeKernel kernel, int r = 0, int base = -1,
                MultiIndex orange = {0, 0});
  const GVertex& vertex(int id) const { return vertices.at(id); }

  std::vector<int> greens() const;
  /// Green vertices plus the vertices their test edges attach to; these are
  /// the lambda-scaled nodes excluded from the recentering condition.
  std::vector<int> green_scaled() const;
  bool is_zero_marker() const { return vertices.empty() && zero_flag; }
  bool zero_flag = false;

  static FeynmanGraph zero() {
    FeynmanGraph g;
    g.zero_flag = true;
    return g;
  }
};

/// Structural isomorphism (kind/kernel/decoration preserving).
bool graphs_isomorphic(const FeynmanGraph& a, const FeynmanGraph& b);

/// Graph of the test pairing of tau: one vertex per node, a Green vertex
/// tied to the root through a Test edge, kernel edges K/DK per decoration,
/// orange edges to the Green vertex for polynomial decorations.
/// Edge decorations outside {(0,0),(0,1)} raise std::invalid_argument.
FeynmanGraph tree_to_graph(const TreePtr& t);

/// One graph per perfect matching of the unpaired Xi vertices, each matched
/// pair joined by a RhoRho edge; empty for an odd number of noises.
std::vector<FeynmanGraph> wick_expectation_graphs(const FeynmanGraph& g);

/// Mirror of tau: two copies with distinct Green vertices; the first k Xi
/// noises (canonical order) and every Xi_j slot are identified across
/// copies into DiracPair vertices, the residual Xi pairs joined across
/// copies by RhoRho edges. k = noise_count gives the complete mirror with
/// no mollifier edges; recentering Taylor data is attached to every edge
/// whose planted subtree has positive |.|_+ homogeneity.
FeynmanGraph mirror_graph(const TreePtr& t, int k);

/// Zero detection: a pendant component with no noise markers, slots, green
/// vertices or crossing orange factors, attached through a single null-mean
/// kernel edge, integrates to a constant killed by that kernel.
FeynmanGraph simplify_zero(const FeynmanGraph& g);

std::string to_dot(const FeynmanGraph& g);

}  // namespace gkpz
