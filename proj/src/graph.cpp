#include "gkpz/graph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gkpz {

int FeynmanGraph::add_vertex(VertexKind kind, int copy, int slot) {
  int id = static_cast<int>(vertices.size());
  vertices.push_back({id, kind, copy, slot});
  return id;
}

void FeynmanGraph::add_edge(int tail, int head, EdgeKernel kernel, int r, int base,
                            MultiIndex orange) {
  edges.push_back({tail, head, kernel, r, base, orange});
}

std::vector<int> FeynmanGraph::greens() const {
  std::vector<int> g;
  for (const auto& v : vertices)
    if (v.kind == VertexKind::Green) g.push_back(v.id);
  return g;
}

std::vector<int> FeynmanGraph::green_scaled() const {
  std::vector<int> g = greens();
  for (const auto& e : edges)
    if (e.kernel == EdgeKernel::Test) {
      for (int id : {e.tail, e.head})
        if (vertices[id].kind != VertexKind::Green &&
            std::find(g.begin(), g.end(), id) == g.end())
          g.push_back(id);
    }
  std::sort(g.begin(), g.end());
  return g;
}

namespace {

// Per-vertex invariant used to prune the isomorphism search; copy tags are
// deliberately ignored so mirror copies can swap.
std::string vertex_signature(const FeynmanGraph& g, int id) {
  std::ostringstream os;
  os << static_cast<int>(g.vertices[id].kind) << ':' << g.vertices[id].slot << '|';
  std::vector<std::string> inc;
  for (const auto& e : g.edges) {
    if (e.tail != id && e.head != id) continue;
    std::ostringstream es;
    es << static_cast<int>(e.kernel) << (e.tail == id ? 't' : 'h') << e.taylor_order
       << (e.orange[0]) << (e.orange[1]) << (e.base_vertex >= 0 ? 'b' : '-');
    inc.push_back(es.str());
  }
  std::sort(inc.begin(), inc.end());
  for (const auto& s : inc) os << s << ',';
  return os.str();
}

std::multiset<std::string> edge_multiset(const FeynmanGraph& g,
                                         const std::vector<int>& map) {
  std::multiset<std::string> out;
  for (const auto& e : g.edges) {
    std::ostringstream os;
    os << map[e.tail] << '>' << map[e.head] << ':' << static_cast<int>(e.kernel)
       << ':' << e.taylor_order << ':' << (e.base_vertex >= 0 ? map[e.base_vertex] : -1)
       << ':' << e.orange[0] << ',' << e.orange[1];
    out.insert(os.str());
  }
  return out;
}

}  // namespace

bool graphs_isomorphic(const FeynmanGraph& a, const FeynmanGraph& b) {
  if (a.vertices.size() != b.vertices.size() || a.edges.size() != b.edges.size())
    return false;
  const int n = static_cast<int>(a.vertices.size());
  std::vector<std::string> siga(n), sigb(n);
  for (int i = 0; i < n; ++i) {
    siga[i] = vertex_signature(a, i);
    sigb[i] = vertex_signature(b, i);
  }
  {
    auto sa = siga;
    auto sb = sigb;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return false;
  }
  std::vector<int> map(n, -1);
  std::vector<bool> used(n, false);
  std::vector<int> ident(n);
  for (int i = 0; i < n; ++i) ident[i] = i;
  auto target = edge_multiset(b, ident);
  std::function<bool(int)> rec = [&](int i) -> bool {
    if (i == n) return edge_multiset(a, map) == target;
    for (int j = 0; j < n; ++j) {
      if (used[j] || siga[i] != sigb[j]) continue;
      map[i] = j;
      used[j] = true;
      if (rec(i + 1)) return true;
      used[j] = false;
      map[i] = -1;
    }
    return false;
  };
  return rec(0);
}

namespace {

EdgeKernel kernel_of(MultiIndex a) {
  if (a == MultiIndex{0, 0}) return EdgeKernel::K;
  if (a == MultiIndex{0, 1}) return EdgeKernel::DK;
  throw std::invalid_argument("tree_to_graph: no kernel registered for edge I_(" +
                              std::to_string(a[0]) + "," + std::to_string(a[1]) + ")");
}

VertexKind kind_of(Noise n) {
  if (n == Noise::None) return VertexKind::Internal;
  if (n == Noise::Xi) return VertexKind::Noise;
  return VertexKind::HSlot;
}

int build_nodes(FeynmanGraph& g, const TreePtr& t, int green) {
  int id = g.add_vertex(kind_of(t->root().noise), 0, noise_index(t->root().noise));
  if (t->root().poly != MultiIndex{0, 0})
    g.add_edge(id, green, EdgeKernel::OrangeFactor, 0, -1, t->root().poly);
  for (const auto& c : t->children()) {
    int cid = build_nodes(g, c.sub, green);
    g.add_edge(cid, id, kernel_of(c.edge));
  }
  return id;
}

}  // namespace

FeynmanGraph tree_to_graph(const TreePtr& t) {
  FeynmanGraph g;
  int green = g.add_vertex(VertexKind::Green);
  int root = build_nodes(g, t, green);
  g.add_edge(root, green, EdgeKernel::Test);
  return g;
}

std::vector<FeynmanGraph> wick_expectation_graphs(const FeynmanGraph& g) {
  std::vector<int> noises;
  for (const auto& v : g.vertices)
    if (v.kind == VertexKind::Noise) noises.push_back(v.id);
  std::vector<FeynmanGraph> out;
  if (noises.size() % 2 != 0) return out;

  std::vector<std::pair<int, int>> pairs;
  std::vector<bool> taken(noises.size(), false);
  std::function<void()> rec = [&]() {
    size_t first = 0;
    while (first < noises.size() && taken[first]) ++first;
    if (first == noises.size()) {
      FeynmanGraph h = g;
      for (auto [u, v] : pairs) {
        h.vertices[u].kind = VertexKind::NoisePair;
        h.vertices[v].kind = VertexKind::NoisePair;
        h.add_edge(std::min(u, v), std::max(u, v), EdgeKernel::RhoRho);
      }
      out.push_back(std::move(h));
      return;
    }
    taken[first] = true;
    for (size_t j = first + 1; j < noises.size(); ++j) {
      if (taken[j]) continue;
      taken[j] = true;
      pairs.push_back({noises[first], noises[j]});
      rec();
      pairs.pop_back();
      taken[j] = false;
    }
    taken[first] = false;
  };
  rec();
  return out;
}

namespace {

struct FlatNode {
  TreePtr tree;     // subtree rooted here
  int parent;       // index into flat list, -1 for root
  MultiIndex edge;  // edge decoration towards the parent
};

void flatten(const TreePtr& t, int parent, MultiIndex edge, std::vector<FlatNode>& out) {
  out.push_back({t, parent, edge});
  int self = static_cast<int>(out.size()) - 1;
  for (const auto& c : t->children()) flatten(c.sub, self, c.edge, out);
}

// Smallest integer strictly above the kappa-free part of h, capped at 2.
// Homogeneities of the form -q kappa sit at the kappa -> 0 boundary and
// still get a first-order remainder, which is what keeps the subset
// inequalities strict on the log-marginal blocks.
int recentering_order(Homogeneity h) {
  if (h.twice_p < 0) return 0;
  return std::min<std::int64_t>(2, h.twice_p / 2 + 1);
}

}  // namespace

FeynmanGraph mirror_graph(const TreePtr& t, int k) {
  const int m = xi_count(t);
  if (k < 0 || k > m)
    throw std::invalid_argument("mirror_graph: slot count must be in 0..noise count");

  std::vector<FlatNode> nodes;
  flatten(t, -1, {0, 0}, nodes);

  FeynmanGraph g;
  int g1 = g.add_vertex(VertexKind::Green, 1);
  int g2 = g.add_vertex(VertexKind::Green, 2);
  const int greens[3] = {-1, g1, g2};

  // Assign slots: every existing Xi_j, plus the first k Xi nodes in
  // canonical traversal order.
  int next_slot = 0;
  for (const auto& n : nodes)
    next_slot = std::max(next_slot, noise_index(n.tree->root().noise));
  int xi_seen = 0;
  std::vector<int> id1(nodes.size()), id2(nodes.size());
  for (size_t i = 0; i < nodes.size(); ++i) {
    const Noise noise = nodes[i].tree->root().noise;
    if (noise_index(noise) > 0) {
      int v = g.add_vertex(VertexKind::DiracPair, 0, noise_index(noise));
      id1[i] = id2[i] = v;
    } else if (noise == Noise::Xi && xi_seen < k) {
      ++xi_seen;
      int v = g.add_vertex(VertexKind::DiracPair, 0, ++next_slot);
      id1[i] = id2[i] = v;
    } else if (noise == Noise::Xi) {
      id1[i] = g.add_vertex(VertexKind::NoisePair, 1);
      id2[i] = g.add_vertex(VertexKind::NoisePair, 2);
      g.add_edge(id1[i], id2[i], EdgeKernel::RhoRho);
    } else {
      id1[i] = g.add_vertex(VertexKind::Internal, 1);
      id2[i] = g.add_vertex(VertexKind::Internal, 2);
    }
  }

  for (size_t i = 0; i < nodes.size(); ++i) {
    const int* ids[3] = {nullptr, id1.data(), id2.data()};
    const MultiIndex poly = nodes[i].tree->root().poly;
    for (int copy : {1, 2}) {
      int self = ids[copy][i];
      if (poly != MultiIndex{0, 0})
        g.add_edge(self, greens[copy], EdgeKernel::OrangeFactor, 0, -1, poly);
      if (nodes[i].parent < 0) {
        g.add_edge(self, greens[copy], EdgeKernel::Test);
        continue;
      }
      int parent = ids[copy][nodes[i].parent];
      int r = recentering_order(
          homogeneity(nodes[i].tree, /*plus_mode=*/true) +
          Homogeneity{2 * (2 - parabolic_weight(nodes[i].edge)), 0});
      g.add_edge(self, parent, kernel_of(nodes[i].edge), r, r > 0 ? greens[copy] : -1);
    }
  }
  return g;
}

FeynmanGraph simplify_zero(const FeynmanGraph& g) {
  const int n = static_cast<int>(g.vertices.size());
  for (size_t cut = 0; cut < g.edges.size(); ++cut) {
    const GEdge& e = g.edges[cut];
    if ((e.kernel != EdgeKernel::K && e.kernel != EdgeKernel::DK) || e.taylor_order > 0)
      continue;
    // component reachable from each side without crossing the cut edge
    auto component = [&](int start) {
      std::vector<bool> seen(n, false);
      std::vector<int> stack{start};
      seen[start] = true;
      while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (size_t j = 0; j < g.edges.size(); ++j) {
          if (j == cut) continue;
          const GEdge& f = g.edges[j];
          for (int w : {f.tail == u ? f.head : -1, f.head == u ? f.tail : -1})
            if (w >= 0 && !seen[w]) {
              seen[w] = true;
              stack.push_back(w);
            }
        }
      }
      return seen;
    };
    for (int side : {e.tail, e.head}) {
      std::vector<bool> comp = component(side);
      if (comp[side == e.tail ? e.head : e.tail]) break;  // not a bridge
      bool constant = true;
      for (int v = 0; v < n && constant; ++v) {
        if (!comp[v]) continue;
        VertexKind kind = g.vertices[v].kind;
        if (kind != VertexKind::Internal && kind != VertexKind::NoisePair)
          constant = false;
      }
      for (size_t j = 0; j < g.edges.size() && constant; ++j) {
        if (j == cut) continue;
        const GEdge& f = g.edges[j];
        bool ti = comp[f.tail], hi = comp[f.head];
        if (f.kernel == EdgeKernel::Test && (ti || hi)) constant = false;
        if (ti != hi) constant = false;  // crossing edge (orange or otherwise)
      }
      if (constant) return FeynmanGraph::zero();
    }
  }
  return g;
}

std::string to_dot(const FeynmanGraph& g) {
  std::ostringstream os;
  os << "digraph mirror {\n";
  if (!g.is_zero_marker()) {
    for (const auto& v : g.vertices) {
      os << "  v" << v.id << " [";
      switch (v.kind) {
        case VertexKind::Green: os << "shape=circle,color=green,label=\"phi\""; break;
        case VertexKind::Internal: os << "shape=point,label=\"\""; break;
        case VertexKind::Noise: os << "shape=circle,label=\"xi\""; break;
        case VertexKind::NoisePair: os << "shape=circle,color=purple,label=\"xi\""; break;
        case VertexKind::DiracPair:
          os << "shape=circle,style=filled,fillcolor=black,label=\"h" << v.slot << "\"";
          break;
        case VertexKind::HSlot: os << "shape=circle,label=\"h" << v.slot << "\""; break;
      }
      os << "];\n";
    }
    for (const auto& e : g.edges) {
      os << "  v" << e.tail << " -> v" << e.head << " [";
      switch (e.kernel) {
        case EdgeKernel::K: os << "style=solid"; break;
        case EdgeKernel::DK: os << "style=dotted"; break;
        case EdgeKernel::RhoRho: os << "style=solid,color=purple,dir=none"; break;
        case EdgeKernel::Test: os << "style=solid,color=green,dir=none"; break;
        case EdgeKernel::OrangeFactor:
          os << "style=solid,color=orange,label=\"X^(" << e.orange[0] << ","
             << e.orange[1] << ")\"";
          break;
      }
      if (e.taylor_order > 0)
        os << ",label=\"(v" << e.base_vertex << "," << e.taylor_order << ")\"";
      os << "];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace gkpz
