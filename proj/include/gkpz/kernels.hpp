#pragma once

#include <functional>
#include <memory>

#include "gkpz/grid.hpp"
#include "gkpz/homogeneity.hpp"

namespace gkpz {

/// Smooth bump exp(1 - 1/(1-u^2)) on (-1,1), zero outside; peaks at 1.
double bump(double u);
/// Smooth non-increasing cutoff: 1 on [0,1/2], 0 on [1,infty).
double cutoff_chi(double r);
double cutoff_chi_prime(double r);

double parabolic_norm(double t, double x);

/// Heat kernel on the unit circle (image sum) and its space derivative.
double periodic_heat(double t, double x);
double periodic_heat_dx(double t, double x);

/// Truncated integration kernel K = (P - c) chi(|z|_s) for t > 0, with c
/// fixed so the sampled kernel has zero mean on the grid, plus its
/// analytic space derivative sampled the same way.
struct Kernels {
  Grid grid;
  double c = 0.0;
  Field K;   // rows cover t in (0, 1]
  Field DK;
  std::shared_ptr<const ConvEngine> conv_K;
  std::shared_ptr<const ConvEngine> conv_DK;

  const ConvEngine& engine(MultiIndex a) const;
};

Kernels build_kernels(const Grid& grid);

/// Parabolic mollifier profile: smooth, nonnegative, unit integral, equal
/// to one at the origin; optionally skewed in space by a zero-mass odd
/// perturbation so that asymmetric-mollifier effects can be probed.
struct MollifierSpec {
  double eps = 0.25;
  bool symmetric = true;
  double half_width_t = 2.0;    // profile support |t| <= half_width_t
  double half_width_x = 0.125;  // profile support |x| <= half_width_x

  double profile(double t, double x) const;  // the unscaled rho
  double scaled(double t, double x) const {  // rho^eps
    const double e = eps;
    return profile(t / (e * e), x / e) / (e * e * e);
  }
  double support_t() const { return half_width_t * eps * eps; }
  double support_x() const { return half_width_x * eps; }
};

/// Cell-integrated samples of rho^eps centred at the origin, as rows
/// indexed from -rows0; integrates to one up to the sub-cell quadrature.
struct MollifierSample {
  int rows0 = 0;  // row offset: row i holds t in [(i - rows0) dt, ...)
  int cols0 = 0;
  Field values;
  double mass = 0.0;
};

/// Throws ResolutionError unless the support spans at least four grid
/// steps in each direction.
MollifierSample sample_mollifier(const Grid& grid, const MollifierSpec& m);

/// Discrete covariance E[zeta^eps(z) zeta^eps(z + w)] of the mollified
/// white noise, centred the same way as MollifierSample.
MollifierSample pair_correlation(const Grid& grid, const MollifierSpec& m);

/// Test function: factorized smooth bump supported in the parabolic ball
/// of radius 1/2, unit integral.
struct TestFunctionSpec {
  double lambda = 1.0;
  double zt = 0.0;
  double zx = 0.5;
  double half_width_t = 0.125;         // = 1/8
  double half_width_x = 0.3535533906;  // = sqrt(1/8)
};

/// Quadrature of field against the scaled test function, with exact
/// sub-cell integration of the profile. Throws SupportError when the
/// time support leaves the grid window.
double pair_with_test(const Grid& grid, const Field& field, const TestFunctionSpec& phi);

/// Hairer-style kernel size sup_z |z|_s^{a+|k|_s} |d^k J(z)| for |k|_s <= m
/// over a centred sample (finite differences for the derivatives).
double kernel_norm(const Grid& grid, const MollifierSample& J, double a, int m);

}  // namespace gkpz
