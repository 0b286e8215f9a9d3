#pragma once

#include <cstdint>
#include <vector>

#include "gkpz/graph.hpp"
#include "gkpz/model.hpp"
#include "gkpz/noise.hpp"

namespace gkpz {

struct SlopeFit {
  double slope = 0.0;
  double stderr = 0.0;
};
/// Ordinary least squares on (log x, log y).
SlopeFit loglog_fit(const std::vector<double>& xs, const std::vector<double>& ys);

struct ScalingFitResult {
  std::vector<double> lambdas;
  std::vector<double> norms;    // L2(Omega) estimates per lambda
  std::vector<double> norm_se;  // delta-method standard errors
  SlopeFit fit;
  int samples = 0;
  std::uint64_t seed = 0;
};

/// Monte Carlo estimate of || <Pi tau, phi^lambda_z> ||_{L2(Omega)} per
/// lambda with a log-log slope fit.
ScalingFitResult scaling_fit(const TreePtr& t, ModelMode mode,
                             const std::vector<double>& lambdas, int samples,
                             std::uint64_t seed, const Grid& grid,
                             const MollifierSpec& m);

struct MeanProbe {
  double mean = 0.0;
  double se = 0.0;
  int samples = 0;
};
/// Monte Carlo mean of (Pi tau)(z) at a fixed point.
MeanProbe point_mean_probe(const TreePtr& t, ModelMode mode, int samples,
                           std::uint64_t seed, const Grid& grid,
                           const MollifierSpec& m);

struct EpsPair {
  double eps = 0.0;
  double eps_prime = 0.0;
  double norm = 0.0;
  double se = 0.0;
};
/// Difference norms || <Pi^eps tau - Pi^eps' tau, phi^lambda> || for the
/// coupled pairs (eps, eps/2) along the given list.
std::vector<EpsPair> epsilon_convergence_probe(const TreePtr& t,
                                               const std::vector<double>& eps_list,
                                               double lambda, int samples,
                                               std::uint64_t seed, const Grid& grid,
                                               MollifierSpec base);

/// |rho^eps*rho^eps - rho^eps'*rho^eps'| in the kernel size norm of index
/// 3 + eta (first derivatives included).
double mollifier_difference_norm(const Grid& grid, MollifierSpec base, double eps,
                                 double eps_prime, double eta);

/// Deterministic quadrature of the graph integral over a dedicated local
/// grid, test functions pinned at the base point. Supports graphs whose
/// internal skeleton is a tree with at most four non-green vertices.
double graph_integral(const FeynmanGraph& g, double lambda, const Grid& quad_grid,
                      const MollifierSpec* pair_spec = nullptr);

/// Log-log slope of the graph integral over the lambda list.
SlopeFit graph_integral_slope(const FeynmanGraph& g, const std::vector<double>& lambdas,
                              const Grid& quad_grid,
                              const MollifierSpec* pair_spec = nullptr);

}  // namespace gkpz
