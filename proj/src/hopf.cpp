#include "gkpz/hopf.hpp"

#include "gkpz/derive.hpp"

namespace gkpz {

CharacterSymbol character_vanishes(const TreePtr& sigma) {
  CharacterSymbol s{sigma, VanishReason::None};
  if (contains_xi_j(sigma)) s.vanishes = VanishReason::ContainsXiJ;
  else if (xi_count(sigma) % 2 == 1) s.vanishes = VanishReason::OddParity;
  else if (sigma->is_planted()) s.vanishes = VanishReason::Planted;
  else if (sigma->root().poly != MultiIndex{0, 0}) s.vanishes = VanishReason::RootPoly;
  return s;
}

const char* vanish_reason_name(VanishReason r) {
  switch (r) {
    case VanishReason::None: return "none";
    case VanishReason::ContainsXiJ: return "contains_Xi_j";
    case VanishReason::OddParity: return "odd_parity";
    case VanishReason::Planted: return "planted";
    case VanishReason::RootPoly: return "root_poly";
  }
  return "?";
}

namespace {

// Taylor indices tried on a cut edge; pi_- truncates everything heavier.
const std::vector<MultiIndex>& taylor_range() {
  static const std::vector<MultiIndex> ks = {
      {0, 0}, {0, 1}, {1, 0}, {0, 2}, {1, 1}, {0, 3}};
  return ks;
}

struct Extraction {
  TreePtr sigma;               // kept subtree, Taylor decorations included
  std::vector<Child> reattach; // cut edges, decorations raised
  Rational coef;
};

// All rooted extractions of t (sigma containing the root of t).
std::vector<Extraction> extractions(const TreePtr& t) {
  std::vector<Extraction> acc;
  // state: per prefix of children, partial kept children / reattach / coef /
  // extra poly at this node from cuts here
  struct Partial {
    std::vector<Child> kept;
    std::vector<Child> reattach;
    MultiIndex raised{0, 0};
    Rational coef{1};
  };
  std::vector<Partial> states{Partial{}};
  for (const auto& c : t->children()) {
    std::vector<Partial> next;
    for (const auto& st : states) {
      // cut this edge with Taylor index k
      for (MultiIndex k : taylor_range()) {
        Partial p = st;
        p.reattach.push_back({c.edge + k, c.sub});
        p.raised = p.raised + k;
        p.coef *= Rational(1, factorial_rat(k[0]).num * factorial_rat(k[1]).num);
        next.push_back(std::move(p));
      }
      // keep it, extracting recursively inside
      for (const auto& sub : extractions(c.sub)) {
        Partial p = st;
        p.kept.push_back({c.edge, sub.sigma});
        p.reattach.insert(p.reattach.end(), sub.reattach.begin(), sub.reattach.end());
        p.coef *= sub.coef;
        next.push_back(std::move(p));
      }
    }
    states = std::move(next);
  }
  acc.reserve(states.size());
  for (auto& st : states) {
    TreePtr sigma = Tree::make({t->root().noise, t->root().poly + st.raised},
                               std::move(st.kept));
    acc.push_back({sigma, std::move(st.reattach), st.coef});
  }
  return acc;
}

// The negative projection targets the renormalization space spanned by the
// original-structure trees: pure polynomials and anything holding a
// placeholder noise fall outside it. Killing Xi_j extracts here is what
// makes delta_r commute with the noise derivatives on the nose.
bool pi_minus_keeps(const TreePtr& sigma) {
  if (sigma->is_pure_poly() || sigma->is_unit()) return false;
  if (contains_xi_j(sigma)) return false;
  return homogeneity(sigma).negative();
}

}  // namespace

TensorSum delta_r(const TreePtr& t) {
  TensorSum out;
  out.add(Tree::unit(), t, Rational(1));  // empty extraction
  for (const auto& ex : extractions(t)) {
    if (!pi_minus_keeps(ex.sigma)) continue;
    TreePtr rho = Tree::make({}, ex.reattach);
    out.add(ex.sigma, rho, ex.coef);
  }
  return out;
}

TensorSum delta_r(const FormalSum& s) {
  TensorSum out;
  for (const auto& [k, e] : s.entries()) {
    Rational c = e.coef.scalar_value();
    TensorSum d = delta_r(e.tree);
    for (const auto& [dk, de] : d.entries())
      out.add(de.left, de.right, de.coef * c);
  }
  return out;
}

TensorSum noise_derive_right(const TensorSum& ts, int j) {
  TensorSum out;
  for (const auto& [k, e] : ts.entries()) {
    FormalSum d = noise_derive(e.right, j);
    for (const auto& [dk, de] : d.entries())
      out.add(e.left, de.tree, e.coef * de.coef.scalar_value());
  }
  return out;
}

FormalSum prepare(const TreePtr& t, bool apply_vanishing) {
  FormalSum out;
  TensorSum split = delta_r(t);
  for (const auto& [k, e] : split.entries()) {
    if (e.left->is_unit()) {
      out.add(e.right, e.coef);
      continue;
    }
    if (apply_vanishing &&
        character_vanishes(e.left).vanishes != VanishReason::None)
      continue;
    out.add(e.right, CharPoly::symbol(e.left, e.coef));
  }
  return out;
}

FormalSum prepare(const FormalSum& s, bool apply_vanishing) {
  FormalSum out;
  for (const auto& [k, e] : s.entries()) {
    Rational c = e.coef.scalar_value();
    FormalSum p = prepare(e.tree, apply_vanishing);
    for (const auto& [pk, pe] : p.entries()) out.add(pe.tree, pe.coef * c);
  }
  return out;
}

PlusTensorSum coaction(const TreePtr& t, bool plus_mode) {
  // Primitive atom part: the root label (noise and monomial) stays left.
  PlusTensorSum acc;
  acc.add(Tree::make(t->root(), {}), TPlus::unit(), Rational(1));

  for (const auto& c : t->children()) {
    // delta(I_a(s)) = (I_a (x) Id) delta s + sum_{|k+m| < |I_a s|} X^k/k! (x) X^m/m! I+_{a+k+m}(s)
    PlusTensorSum edge_terms;
    PlusTensorSum sub_terms = coaction(c.sub, plus_mode);
    for (const auto& [k, e] : sub_terms.entries())
      edge_terms.add(Tree::planted(c.edge, e.left), e.right, e.coef);
    Homogeneity bound = homogeneity(c.sub, plus_mode) +
                        Homogeneity{2 * (2 - parabolic_weight(c.edge)), 0};
    for (MultiIndex k : {MultiIndex{0, 0}, {0, 1}, {1, 0}, {0, 2}, {1, 1}, {2, 0}, {0, 3}})
      for (MultiIndex m : {MultiIndex{0, 0}, {0, 1}, {1, 0}, {0, 2}, {1, 1}, {2, 0}, {0, 3}}) {
        if (!(Homogeneity::of_poly(k + m) < bound)) continue;
        Rational coef(1, factorial_rat(k[0]).num * factorial_rat(k[1]).num *
                             factorial_rat(m[0]).num * factorial_rat(m[1]).num);
        TPlus right = TPlus::make(m, {Child{c.edge + k + m, c.sub}});
        edge_terms.add(k == MultiIndex{0, 0} ? Tree::unit()
                                             : Tree::leaf(Noise::None, k),
                       right, coef);
      }
    // multiply into the accumulator
    PlusTensorSum next;
    for (const auto& [ka, ea] : acc.entries())
      for (const auto& [kb, eb] : edge_terms.entries())
        next.add(Tree::product(ea.left, eb.left), TPlus::product(ea.right, eb.right),
                 ea.coef * eb.coef);
    acc = std::move(next);
  }
  return acc;
}

}  // namespace gkpz
