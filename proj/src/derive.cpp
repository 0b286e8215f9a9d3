#include "gkpz/derive.hpp"

#include <stdexcept>

namespace gkpz {

namespace {

// One application of D^{e_dir}.
FormalSum poly_derive_step(const TreePtr& t, int dir) {
  FormalSum out;
  MultiIndex e{0, 0};
  e[dir] = 1;
  // Leibniz across the root factors: each child edge gets raised once.
  for (size_t i = 0; i < t->children().size(); ++i) {
    std::vector<Child> children = t->children();
    children[i].edge = children[i].edge + e;
    out.add(Tree::make(t->root(), std::move(children)), Rational(1));
  }
  // The root monomial factor X^k -> X^{k-e}, dropped on underflow.
  if (t->root().poly[dir] >= 1) {
    MultiIndex k = t->root().poly;
    k[dir] -= 1;
    out.add(Tree::make({t->root().noise, k}, t->children()), Rational(1));
  }
  return out;
}

}  // namespace

FormalSum poly_derive(const TreePtr& t, MultiIndex a) {
  FormalSum s = FormalSum::of(t);
  for (int dir = 0; dir < 2; ++dir)
    for (int rep = 0; rep < a[dir]; ++rep) s = poly_derive(s, {dir == 0 ? 1 : 0, dir == 1 ? 1 : 0});
  return s;
}

FormalSum poly_derive(const FormalSum& s, MultiIndex a) {
  // a is applied one unit step at a time; steps commute.
  FormalSum cur = s;
  for (int dir = 0; dir < 2; ++dir) {
    for (int rep = 0; rep < a[dir]; ++rep) {
      FormalSum next;
      for (const auto& [k, e] : cur.entries()) {
        FormalSum d = poly_derive_step(e.tree, dir);
        for (const auto& [dk, de] : d.entries())
          next.add(de.tree, e.coef * de.coef.scalar_value());
      }
      cur = next;
    }
  }
  return cur;
}

FormalSum noise_derive(const TreePtr& t, int j) {
  const Noise nj = noise_from_index(j);
  if (contains_noise(t, nj))
    throw std::domain_error("noise_derive: Xi_j already present in tree");
  // Recursive Leibniz: one replaced occurrence per term.
  FormalSum out;
  if (t->root().noise == Noise::Xi)
    out.add(Tree::make({nj, t->root().poly}, t->children()), Rational(1));
  for (size_t i = 0; i < t->children().size(); ++i) {
    if (xi_count(t->children()[i].sub) == 0) continue;
    FormalSum sub = noise_derive(t->children()[i].sub, j);
    for (const auto& [k, e] : sub.entries()) {
      std::vector<Child> children = t->children();
      children[i].sub = e.tree;
      out.add(Tree::make(t->root(), std::move(children)), e.coef.scalar_value());
    }
  }
  return out;
}

FormalSum noise_derive(const FormalSum& s, int j) {
  FormalSum out;
  for (const auto& [k, e] : s.entries()) {
    FormalSum d = noise_derive(e.tree, j);
    for (const auto& [dk, de] : d.entries())
      out.add(de.tree, e.coef * de.coef.scalar_value());
  }
  return out;
}

}  // namespace gkpz
