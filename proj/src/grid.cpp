#include "gkpz/grid.hpp"

#include <unsupported/Eigen/FFT>

namespace gkpz {

namespace {

Eigen::FFT<double>& fft() {
  static thread_local Eigen::FFT<double> f;
  return f;
}

}  // namespace

Eigen::ArrayXXcd forward_rows(const Field& f) {
  const int nt = static_cast<int>(f.rows());
  const int nx = static_cast<int>(f.cols());
  Eigen::ArrayXXcd out(nt, nx);
  std::vector<std::complex<double>> spec(nx);
  std::vector<double> row(nx);
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < nx; ++j) row[j] = f(i, j);
    fft().fwd(spec, row);
    for (int j = 0; j < nx; ++j) out(i, j) = spec[j];
  }
  return out;
}

Field inverse_rows(const Eigen::ArrayXXcd& hat, int nx) {
  const int nt = static_cast<int>(hat.rows());
  Field out(nt, nx);
  std::vector<std::complex<double>> spec(nx);
  std::vector<double> row(nx);
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < nx; ++j) spec[j] = hat(i, j);
    fft().inv(row, spec);
    for (int j = 0; j < nx; ++j) out(i, j) = row[j];
  }
  return out;
}

ConvEngine::ConvEngine(const Grid& grid, Field kernel_rows)
    : grid_(grid), kernel_(std::move(kernel_rows)) {
  if (kernel_.cols() != grid_.nx)
    throw std::invalid_argument("ConvEngine: kernel column count mismatch");
  kernel_hat_ = forward_rows(kernel_);
}

Field ConvEngine::apply(const Field& f) const {
  const int nt = static_cast<int>(f.rows());
  const int nx = grid_.nx;
  const int kt = static_cast<int>(kernel_.rows());
  Eigen::ArrayXXcd f_hat = forward_rows(f);
  Eigen::ArrayXXcd acc(nt, nx);
  acc.setZero();
  for (int i = 0; i < nt; ++i) {
    const int smax = std::min(kt - 1, i);
    for (int s = 0; s <= smax; ++s)
      acc.row(i) += kernel_hat_.row(s) * f_hat.row(i - s);
  }
  Field out = inverse_rows(acc, nx);
  return out * grid_.cell();
}

Field ConvEngine::apply_direct(const Field& f) const {
  const int nt = static_cast<int>(f.rows());
  const int nx = grid_.nx;
  const int kt = static_cast<int>(kernel_.rows());
  Field out(nt, nx);
  out.setZero();
  for (int i = 0; i < nt; ++i)
    for (int j = 0; j < nx; ++j) {
      double acc = 0.0;
      for (int s = 0; s <= std::min(kt - 1, i); ++s)
        for (int y = 0; y < nx; ++y)
          acc += kernel_(s, y) * f(i - s, (j - y % nx + nx) % nx);
      out(i, j) = acc * grid_.cell();
    }
  return out;
}

}  // namespace gkpz
