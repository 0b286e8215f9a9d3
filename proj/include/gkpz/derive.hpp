#pragma once

#include "gkpz/formal.hpp"

namespace gkpz {

/// Abstract derivative D^a acting at the root: raises integration edges
/// (I_b -> I_{b+a} one factor at a time, Leibniz) and lowers the root
/// polynomial (X^k -> X^{k-a}, annihilating on componentwise underflow).
FormalSum poly_derive(const TreePtr& t, MultiIndex a);
FormalSum poly_derive(const FormalSum& s, MultiIndex a);

/// Noise derivative D_{Xi_j}: replaces one Xi tag by Xi_j per term,
/// Leibniz over the whole tree, commuting with integration edges.
/// Requires that Xi_j does not already occur in t.
FormalSum noise_derive(const TreePtr& t, int j);
FormalSum noise_derive(const FormalSum& s, int j);

}  // namespace gkpz
