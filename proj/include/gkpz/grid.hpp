#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace gkpz {

using Field = Eigen::ArrayXXd;  // rows: time, cols: space on the unit circle

/// Uniform space-time grid over [t0, t1) x circle of circumference one.
struct Grid {
  double t0 = -2.0;
  double t1 = 1.0;
  int nt = 768;
  int nx = 256;

  double dt() const { return (t1 - t0) / nt; }
  double dx() const { return 1.0 / nx; }
  double cell() const { return dt() * dx(); }
  double time(int i) const { return t0 + i * dt(); }
  double x(int j) const { return j * dx(); }
  int time_row(double t) const {
    int i = static_cast<int>(std::lround((t - t0) / dt()));
    if (i < 0 || i >= nt) throw std::out_of_range("Grid: time outside window");
    return i;
  }
  int x_col(double xv) const {
    double u = xv - std::floor(xv);
    int j = static_cast<int>(std::lround(u / dx())) % nx;
    return j < 0 ? j + nx : j;
  }
};

struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SupportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Sampled space-time function with its provenance tag.
struct GridField {
  enum class Role { Kernel, Noise, ModelOutput };
  Field values;
  Role role = Role::ModelOutput;
};

/// Space-time convolution with a causal kernel sampled on [0, rows*dt):
/// (k * f)(t, x) = sum_{s,y} k(s, y) f(t - s, x - y) dt dx, circular in x,
/// truncating below the field window (the field is zero before t0).
/// Spatial convolutions run through cached row spectra.
class ConvEngine {
 public:
  ConvEngine(const Grid& grid, Field kernel_rows);

  const Field& kernel() const { return kernel_; }
  Field apply(const Field& f) const;
  /// Plain double loop used as the brute-force oracle.
  Field apply_direct(const Field& f) const;

 private:
  Grid grid_;
  Field kernel_;
  Eigen::ArrayXXcd kernel_hat_;  // per-row spectra
};

/// Row-wise circular convolution helpers.
Eigen::ArrayXXcd forward_rows(const Field& f);
Field inverse_rows(const Eigen::ArrayXXcd& hat, int nx);

}  // namespace gkpz
