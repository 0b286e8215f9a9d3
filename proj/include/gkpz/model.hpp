#pragma once

#include <map>
#include <optional>

#include "gkpz/kernels.hpp"
#include "gkpz/tree.hpp"

namespace gkpz {

/// Numeric values of the retained renormalization constants, keyed by the
/// canonical form of the character symbol.
struct CharacterTable {
  std::map<std::string, double> values;
  double value(const TreePtr& sigma) const;
};

/// BHZ character values by deterministic Wick quadrature: the pair
/// correlation replaces every noise pairing, no sampling error enters.
/// Supports the retained two-noise symbols; anything else throws.
double compute_character(const TreePtr& sigma, const Grid& grid, const MollifierSpec& m);
CharacterTable character_table(const Grid& grid, const MollifierSpec& m);

enum class ModelMode { Naive, Recentered, Renormalized, RenormalizedRecentered };

struct ModelInput {
  const Kernels* kernels = nullptr;
  const Field* noise = nullptr;                 // zeta^eps
  std::map<int, const Field*> slots;            // h_j for Xi_j
  ModelMode mode = ModelMode::Naive;
  double zt = 0.0;                              // base point for recentred modes
  double zx = 0.5;
  const CharacterTable* chars = nullptr;        // for renormalized modes
};

/// Recursive model evaluation on the grid: noises at the leaves, pointwise
/// products at the nodes, discrete convolution with d^a K per edge; the
/// recentred modes subtract the Taylor jet at the base point with the jet
/// truncation read through |.|_+ on placeholder trees, and the
/// renormalized modes apply the preparation map termwise with the numeric
/// character values.
Field evaluate_model(const TreePtr& t, const ModelInput& in);

}  // namespace gkpz
