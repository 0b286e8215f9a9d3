#include "gkpz/rule.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "gkpz/derive.hpp"

namespace gkpz {

bool conforms_to_rule(const TreePtr& t) {
  RuleProfile p;
  p.has_noise = t->root().noise != Noise::None;
  for (const auto& c : t->children()) {
    if (c.edge == MultiIndex{0, 0}) ++p.plain_count;
    else if (c.edge == MultiIndex{0, 1}) ++p.dotted_count;
    else return false;
    if (!conforms_to_rule(c.sub)) return false;
  }
  return p.admissible();
}

namespace {

using TreeSet = std::set<TreePtr, TreeKeyLess>;

// Largest twice_p a subtree with m noises may have while still fitting
// inside some negative conforming tree with at most n_cap noises. Crude
// budget bound: everything outside contributes at least -3/2 per noise
// and the planting edges at least +1.
std::int64_t subtree_pmax(int m, int n_cap) {
  if (m >= n_cap) return 0;
  return 3 * static_cast<std::int64_t>(n_cap - m) - 2;
}

struct Generator {
  EnumCaps caps;
  std::vector<std::vector<TreePtr>> by_noise;  // [m] -> trees with m noises

  struct Unit {
    MultiIndex edge;
    TreePtr sub;
    int noises;
    Homogeneity contribution;  // 2 - |edge| + |sub|
  };

  void run() {
    by_noise.assign(caps.max_noises + 1, {});
    for (int m = 1; m <= caps.max_noises; ++m) generate_level(m);
  }

  // Trees with the same noise count nest (a bare root over a single child
  // of full noise budget), so each level iterates to a fixed point.
  void generate_level(int m) {
    const std::int64_t pmax = subtree_pmax(m, caps.max_noises);
    TreeSet out;
    size_t before = 0;
    do {
      before = out.size();
      std::vector<Unit> units;
      for (int mm = 1; mm < m; ++mm)
        for (const auto& s : by_noise[mm]) {
          Homogeneity h = homogeneity(s);
          units.push_back({{0, 0}, s, mm, h + Homogeneity{4, 0}});
          units.push_back({{0, 1}, s, mm, h + Homogeneity{2, 0}});
        }
      for (const auto& s : out) {
        Homogeneity h = homogeneity(s);
        units.push_back({{0, 0}, s, m, h + Homogeneity{4, 0}});
        units.push_back({{0, 1}, s, m, h + Homogeneity{2, 0}});
      }

      std::vector<MultiIndex> polys{{0, 0}};
      if (caps.max_poly_weight >= 1) polys.push_back({0, 1});
      if (caps.max_poly_weight >= 2) polys.push_back({1, 0});

      for (bool root_noise : {true, false}) {
        const int need = m - (root_noise ? 1 : 0);
        for (MultiIndex poly : polys) {
          NodeLabel root{root_noise ? Noise::Xi : Noise::None, poly};
          Homogeneity base = Homogeneity::of_poly(poly);
          if (root_noise) base += Homogeneity::xi();
          std::vector<Child> chosen;
          pick(units, 0, need, root_noise ? 0 : 2, base, pmax, root, chosen, out);
        }
      }
    } while (out.size() > before);
    by_noise[m].assign(out.begin(), out.end());
  }

  // Multiset choice of child units with non-decreasing unit index.
  void pick(const std::vector<Unit>& units, size_t from, int need_noises,
            int dotted_left, Homogeneity acc, std::int64_t pmax,
            const NodeLabel& root, std::vector<Child>& chosen, TreeSet& out) {
    if (need_noises == 0) {
      if (chosen.empty() && root.noise == Noise::None) return;  // no pure polynomials
      if (acc.twice_p > pmax) return;
      out.insert(Tree::make(root, chosen));
      return;
    }
    // Remaining children can lower twice_p by at most 1 per noise.
    if (acc.twice_p - need_noises > pmax) return;
    for (size_t i = from; i < units.size(); ++i) {
      const Unit& u = units[i];
      if (u.noises > need_noises) continue;
      if (u.edge[1] == 1 && dotted_left == 0) continue;
      chosen.push_back({u.edge, u.sub});
      pick(units, i, need_noises - u.noises, dotted_left - (u.edge[1] == 1 ? 1 : 0),
           acc + u.contribution, pmax, root, chosen, out);
      chosen.pop_back();
    }
  }
};

Catalog group_negative(const std::vector<TreePtr>& trees, int noise_cap) {
  Catalog cat;
  for (const auto& t : trees) {
    Homogeneity h = homogeneity(t);
    if (!h.negative()) continue;
    cat.groups[h].push_back(t);
    // A cheapest rule extension grafts I(Xi) somewhere: cost 1/2 - kappa.
    if (noise_count(t) == noise_cap &&
        Homogeneity{h.twice_p + 1, h.q - 1}.negative())
      cat.cap_exhausted = true;
  }
  for (auto& [h, v] : cat.groups)
    std::sort(v.begin(), v.end(), TreeKeyLess{});
  return cat;
}

// Every tree obtained from t by raising a single node's decoration by k.
void single_raises(const TreePtr& t, MultiIndex k, std::vector<TreePtr>& out) {
  out.push_back(Tree::make({t->root().noise, t->root().poly + k}, t->children()));
  for (size_t i = 0; i < t->children().size(); ++i) {
    std::vector<TreePtr> subs;
    single_raises(t->children()[i].sub, k, subs);
    for (const auto& v : subs) {
      std::vector<Child> children = t->children();
      children[i].sub = v;
      out.push_back(Tree::make(t->root(), std::move(children)));
    }
  }
}

}  // namespace

std::vector<TreePtr> Catalog::all() const {
  std::vector<TreePtr> v;
  for (const auto& [h, g] : groups) v.insert(v.end(), g.begin(), g.end());
  return v;
}

int Catalog::total() const {
  int n = 0;
  for (const auto& [h, g] : groups) n += static_cast<int>(g.size());
  return n;
}

std::optional<int> Catalog::max_noise_count() const {
  std::optional<int> m;
  for (const auto& [h, g] : groups)
    for (const auto& t : g) {
      int n = noise_count(t);
      if (!m || n > *m) m = n;
    }
  return m;
}

bool Catalog::contains(const TreePtr& t) const {
  auto it = groups.find(homogeneity(t));
  if (it == groups.end()) return false;
  for (const auto& s : it->second)
    if (tree_equal(s, t)) return true;
  return false;
}

Catalog enumerate_negative(const EnumCaps& caps) {
  Generator gen;
  gen.caps = caps;
  gen.run();
  std::vector<TreePtr> all;
  for (const auto& level : gen.by_noise)
    all.insert(all.end(), level.begin(), level.end());
  return group_negative(all, caps.max_noises);
}

Catalog enumerate_noises_inductive(const EnumCaps& caps, bool decorate) {
  TreeSet set;
  set.insert(Tree::leaf(Noise::Xi));
  set.insert(Tree::leaf(Noise::Xi, {0, 1}));  // X Xi

  auto admit = [&](const TreePtr& t, TreeSet& into) {
    if (noise_count(t) > caps.max_noises) return false;
    if (!homogeneity(t).negative()) return false;
    return into.insert(t).second;
  };

  bool grew = true;
  while (grew) {
    grew = false;
    TreeSet next = set;
    for (const auto& mu : set) {
      if (admit(Tree::planted({0, 1}, mu), next)) grew = true;
      for (const auto& nu : set) {
        if (admit(Tree::product(mu, Tree::planted({0, 0}, nu)), next)) grew = true;
        if (admit(Tree::product(Tree::planted({0, 1}, mu), Tree::planted({0, 1}, nu)), next))
          grew = true;
      }
    }
    set.swap(next);
  }

  if (decorate && caps.max_poly_weight >= 1) {
    bool added = true;
    while (added) {
      added = false;
      TreeSet next = set;
      for (const auto& t : set) {
        std::vector<TreePtr> variants;
        single_raises(t, {0, 1}, variants);
        for (const auto& v : variants)
          if (admit(v, next)) added = true;
      }
      set.swap(next);
    }
  }

  return group_negative({set.begin(), set.end()}, caps.max_noises);
}

Catalog derivative_catalog(const Catalog& base, int j) {
  TreeSet out;
  for (const auto& t : base.all()) {
    if (xi_count(t) < j) continue;
    FormalSum s = FormalSum::of(t);
    for (int i = 1; i <= j; ++i) s = noise_derive(s, i);
    for (const auto& [k, e] : s.entries()) out.insert(e.tree);
  }
  Catalog cat;
  for (const auto& t : out) cat.groups[homogeneity(t, /*plus_mode=*/true)].push_back(t);
  for (auto& [h, v] : cat.groups) std::sort(v.begin(), v.end(), TreeKeyLess{});
  return cat;
}

CatalogReport catalog_report(const Catalog& c) {
  CatalogReport rep;
  for (const auto& [h, g] : c.groups) {
    CatalogReport::Group grp;
    grp.homogeneity = h;
    for (const auto& t : g) {
      grp.trees.push_back(t->key());
      grp.noise_counts.push_back(noise_count(t));
      rep.max_noises = std::max(rep.max_noises, noise_count(t));
    }
    rep.total += static_cast<int>(g.size());
    rep.groups.push_back(std::move(grp));
  }
  return rep;
}

std::string CatalogReport::to_text(double kappa) const {
  std::ostringstream os;
  for (const auto& g : groups) {
    os << "# homogeneity " << g.homogeneity.str() << " = "
       << g.homogeneity.value_at(kappa) << " (" << g.trees.size() << " trees)\n";
    for (size_t i = 0; i < g.trees.size(); ++i)
      os << g.trees[i] << "  [noises=" << g.noise_counts[i] << "]\n";
  }
  os << "# total " << total << ", max noises " << max_noises << "\n";
  return os.str();
}

}  // namespace gkpz
