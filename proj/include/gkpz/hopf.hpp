#pragma once

#include "gkpz/formal.hpp"

namespace gkpz {

enum class VanishReason { None, ContainsXiJ, OddParity, Planted, RootPoly };

/// Character symbol l(sigma) with its vanishing classification:
///   - ContainsXiJ: expectations are taken in Xi only, so any placeholder
///     noise makes the counterterm null;
///   - OddParity: the noise has the law of its negative, killing odd moments;
///   - Planted: E[Pi I_a(sigma)] is the null-mean kernel convolved with a
///     constant;
///   - RootPoly: the defining evaluation at the base point kills root
///     monomial factors.
struct CharacterSymbol {
  TreePtr sigma;
  VanishReason vanishes = VanishReason::None;
};

CharacterSymbol character_vanishes(const TreePtr& sigma);
const char* vanish_reason_name(VanishReason r);

/// Root-extraction splitting: sum over rooted subtrees sigma of t (plus the
/// empty extraction 1 (x) t) and Taylor indices on the cut edges, keeping
/// only extracted factors of negative homogeneity that are not pure
/// polynomials. Left factor: sigma with X^k raised at the cut nodes; right
/// factor: t with sigma collapsed to a bare root and each cut edge
/// decoration raised by its Taylor index.
TensorSum delta_r(const TreePtr& t);

/// Recentering co-action into the positive companion space, with the jet
/// truncation |k+m|_s < |I_a tau| read through |.| or |.|_+ per plus_mode.
PlusTensorSum coaction(const TreePtr& t, bool plus_mode = false);

/// Preparation map R = (l (x) Id) delta_r with formal character symbols.
/// With apply_vanishing set, symbols classed as vanishing are dropped.
FormalSum prepare(const TreePtr& t, bool apply_vanishing = true);
FormalSum prepare(const FormalSum& s, bool apply_vanishing = true);

/// delta_r extended linearly to sums (scalar coefficients required).
TensorSum delta_r(const FormalSum& s);

/// D_{Xi_j} applied to the right tensor legs, for the commutation checks.
TensorSum noise_derive_right(const TensorSum& ts, int j);

}  // namespace gkpz
