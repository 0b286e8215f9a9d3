#include "gkpz/kernels.hpp"

#include <cmath>

namespace gkpz {

double bump(double u) {
  const double s = u * u;
  if (s >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s));
}

namespace {

double bump_dx(double u) {
  const double s = u * u;
  if (s >= 1.0) return 0.0;
  const double d = 1.0 - s;
  return bump(u) * (-2.0 * u / (d * d));
}

double transition(double u) {  // 0 at u<=0, 1 at u>=1, smooth
  auto f = [](double v) { return v > 0 ? std::exp(-1.0 / v) : 0.0; };
  const double a = f(u), b = f(1.0 - u);
  return a / (a + b);
}

double transition_prime(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  auto f = [](double v) { return std::exp(-1.0 / v); };
  const double a = f(u), b = f(1.0 - u);
  const double da = a / (u * u), db = -b / ((1.0 - u) * (1.0 - u));
  return (da * (a + b) - a * (da + db)) / ((a + b) * (a + b));
}

// 1-D integral over the bump support by composite Simpson.
double bump_integral(std::function<double(double)> f) {
  const int n = 4000;
  const double h = 2.0 / n;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    double u = -1.0 + i * h;
    double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * f(u);
  }
  return acc * h / 3.0;
}

}  // namespace

double cutoff_chi(double r) {
  if (r <= 0.5) return 1.0;
  if (r >= 1.0) return 0.0;
  return 1.0 - transition(2.0 * (r - 0.5));
}

double cutoff_chi_prime(double r) {
  if (r <= 0.5 || r >= 1.0) return 0.0;
  return -2.0 * transition_prime(2.0 * (r - 0.5));
}

double parabolic_norm(double t, double x) { return std::sqrt(std::abs(t) + x * x); }

double periodic_heat(double t, double x) {
  if (t <= 0.0) return 0.0;
  double acc = 0.0;
  for (int m = -4; m <= 4; ++m) {
    const double u = x + m;
    acc += std::exp(-u * u / (4.0 * t));
  }
  return acc / std::sqrt(4.0 * M_PI * t);
}

double periodic_heat_dx(double t, double x) {
  if (t <= 0.0) return 0.0;
  double acc = 0.0;
  for (int m = -4; m <= 4; ++m) {
    const double u = x + m;
    acc += -u / (2.0 * t) * std::exp(-u * u / (4.0 * t));
  }
  return acc / std::sqrt(4.0 * M_PI * t);
}

const ConvEngine& Kernels::engine(MultiIndex a) const {
  if (a == MultiIndex{0, 0}) return *conv_K;
  if (a == MultiIndex{0, 1}) return *conv_DK;
  throw std::invalid_argument("Kernels: no kernel registered for I_(" +
                              std::to_string(a[0]) + "," + std::to_string(a[1]) + ")");
}

Kernels build_kernels(const Grid& grid) {
  Kernels k;
  k.grid = grid;
  const int rows = static_cast<int>(std::lround(1.0 / grid.dt())) + 1;
  if (rows < 8) throw ResolutionError("build_kernels: grid too coarse in time");

  auto x_centered = [&](int j) {
    double xv = grid.x(j);
    return xv > 0.5 ? xv - 1.0 : xv;  // representative in (-1/2, 1/2]
  };

  // c makes the sampled kernel mean vanish exactly
  double sum_pchi = 0.0, sum_chi = 0.0;
  for (int i = 1; i < rows; ++i)
    for (int j = 0; j < grid.nx; ++j) {
      const double t = i * grid.dt(), x = x_centered(j);
      const double chi = cutoff_chi(parabolic_norm(t, x));
      if (chi == 0.0) continue;
      sum_pchi += periodic_heat(t, x) * chi;
      sum_chi += chi;
    }
  k.c = sum_pchi / sum_chi;

  k.K = Field::Zero(rows, grid.nx);
  k.DK = Field::Zero(rows, grid.nx);
  for (int i = 1; i < rows; ++i)
    for (int j = 0; j < grid.nx; ++j) {
      const double t = i * grid.dt(), x = x_centered(j);
      const double r = parabolic_norm(t, x);
      const double chi = cutoff_chi(r);
      if (chi == 0.0) continue;
      const double p = periodic_heat(t, x);
      k.K(i, j) = (p - k.c) * chi;
      k.DK(i, j) = periodic_heat_dx(t, x) * chi +
                   (p - k.c) * cutoff_chi_prime(r) * (r > 0 ? x / r : 0.0);
    }
  k.conv_K = std::make_shared<ConvEngine>(grid, k.K);
  k.conv_DK = std::make_shared<ConvEngine>(grid, k.DK);
  return k;
}

double MollifierSpec::profile(double t, double x) const {
  const double T = half_width_t, X = half_width_x;
  static thread_local double cached_T = -1, cached_X = -1, C = 0, d = 0;
  if (cached_T != T || cached_X != X) {
    const double psi1 = bump_integral([](double u) { return bump(u); });
    const double psi2 = bump_integral([](double u) { return bump(u) * bump(2 * u); });
    const double B = T * X * psi1 * psi1;
    const double D = T * X * psi2 * psi2;
    C = (1.0 - D) / (B - D);
    d = 1.0 - 1.0 / C;
    cached_T = T;
    cached_X = X;
  }
  double v = C * bump(t / T) * bump(x / X) *
             (1.0 - d * bump(2.0 * t / T) * bump(2.0 * x / X));
  if (!symmetric) {
    // odd-in-x zero-mass perturbation, vanishing at the origin
    const double w = X / 8.0, cx = X / 4.0;
    v += 0.35 * C * bump(2.0 * t / T) *
         (bump((x - cx) / w) - bump((x + cx) / w));
  }
  return v;
}

MollifierSample sample_mollifier(const Grid& grid, const MollifierSpec& m) {
  const double st = m.support_t(), sx = m.support_x();
  if (2.0 * st < 4.0 * grid.dt() || 2.0 * sx < 4.0 * grid.dx())
    throw ResolutionError(
        "sample_mollifier: support spans fewer than four grid cells (support "
        "diameters " + std::to_string(2 * st) + " x " + std::to_string(2 * sx) +
        " vs cells " + std::to_string(grid.dt()) + " x " + std::to_string(grid.dx()) + ")");

  MollifierSample s;
  s.rows0 = static_cast<int>(std::ceil(st / grid.dt())) + 1;
  s.cols0 = static_cast<int>(std::ceil(sx / grid.dx())) + 1;
  s.values = Field::Zero(2 * s.rows0 + 1, 2 * s.cols0 + 1);

  // dense subsample of the support box accumulated into cells
  const int sub = 192;
  const double ht = 2.0 * st / sub, hx = 2.0 * sx / sub;
  for (int a = 0; a < sub; ++a)
    for (int b = 0; b < sub; ++b) {
      const double t = -st + (a + 0.5) * ht;
      const double x = -sx + (b + 0.5) * hx;
      const double v = m.scaled(t, x);
      if (v == 0.0) continue;
      const int i = static_cast<int>(std::floor(t / grid.dt() + 0.5)) + s.rows0;
      const int j = static_cast<int>(std::floor(x / grid.dx() + 0.5)) + s.cols0;
      s.values(i, j) += v * ht * hx;
    }
  s.values /= grid.cell();  // cell averages
  s.mass = s.values.sum() * grid.cell();
  return s;
}

MollifierSample pair_correlation(const Grid& grid, const MollifierSpec& m) {
  MollifierSample rho = sample_mollifier(grid, m);
  MollifierSample c;
  c.rows0 = 2 * rho.rows0;
  c.cols0 = 2 * rho.cols0;
  c.values = Field::Zero(2 * c.rows0 + 1, 2 * c.cols0 + 1);
  const int rt = static_cast<int>(rho.values.rows());
  const int rx = static_cast<int>(rho.values.cols());
  for (int di = -c.rows0; di <= c.rows0; ++di)
    for (int dj = -c.cols0; dj <= c.cols0; ++dj) {
      double acc = 0.0;
      for (int i = 0; i < rt; ++i) {
        const int ii = i + di;
        if (ii < 0 || ii >= rt) continue;
        for (int j = 0; j < rx; ++j) {
          const int jj = j + dj;
          if (jj < 0 || jj >= rx) continue;
          acc += rho.values(i, j) * rho.values(ii, jj);
        }
      }
      c.values(di + c.rows0, dj + c.cols0) = acc * grid.cell();
    }
  c.mass = c.values.sum() * grid.cell();
  return c;
}

namespace {

// integral of f over [a, b] by 16-point Gauss-Legendre
double gauss16(double a, double b, const std::function<double(double)>& f) {
  static const double xs[8] = {0.0950125098376374, 0.2816035507792589,
                               0.4580167776572274, 0.6178762444026438,
                               0.7554044083550030, 0.8656312023878318,
                               0.9445750230732326, 0.9894009349916499};
  static const double ws[8] = {0.1894506104550685, 0.1826034150449236,
                               0.1691565193950025, 0.1495959888165767,
                               0.1246289712555339, 0.0951585116824928,
                               0.0622535239386479, 0.0271524594117541};
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < 8; ++i)
    acc += ws[i] * (f(mid + half * xs[i]) + f(mid - half * xs[i]));
  return acc * half;
}

}  // namespace

double pair_with_test(const Grid& grid, const Field& field, const TestFunctionSpec& phi) {
  const double lam = phi.lambda;
  const double ht = phi.half_width_t * lam * lam;
  const double hx = phi.half_width_x * lam;
  if (phi.zt - ht < grid.t0 || phi.zt + ht > grid.t1)
    throw SupportError("pair_with_test: time support leaves the grid window");
  if (2.0 * hx >= 1.0)
    throw SupportError("pair_with_test: test function wraps the circle");

  static const double psibar = bump_integral([](double u) { return bump(u); });
  const double norm = 1.0 / (phi.half_width_t * phi.half_width_x * psibar * psibar);

  // exact sub-cell profile weights in displacement coordinates
  const int i_lo = std::max(0, static_cast<int>(std::floor((phi.zt - ht - grid.t0) / grid.dt())) - 1);
  const int i_hi = std::min(grid.nt - 1, static_cast<int>(std::ceil((phi.zt + ht - grid.t0) / grid.dt())) + 1);
  std::vector<double> wt(i_hi - i_lo + 1, 0.0);
  for (int i = i_lo; i <= i_hi; ++i) {
    const double d = grid.time(i) - phi.zt;
    const double a = std::max(d - 0.5 * grid.dt(), -ht);
    const double b = std::min(d + 0.5 * grid.dt(), ht);
    if (a < b) wt[i - i_lo] = gauss16(a, b, [&](double u) { return bump(u / ht); });
  }
  std::vector<double> wx(grid.nx, 0.0);
  const int jc = grid.x_col(phi.zx);
  const int jspan = static_cast<int>(std::ceil(hx / grid.dx())) + 2;
  for (int dj = -jspan; dj <= jspan; ++dj) {
    const int j = ((jc + dj) % grid.nx + grid.nx) % grid.nx;
    double d = grid.x(j) - phi.zx;
    d -= std::round(d);  // circle wrap
    const double a = std::max(d - 0.5 * grid.dx(), -hx);
    const double b = std::min(d + 0.5 * grid.dx(), hx);
    if (a < b) wx[j] += gauss16(a, b, [&](double u) { return bump(u / hx); });
  }

  double acc = 0.0;
  for (int i = i_lo; i <= i_hi; ++i) {
    if (wt[i - i_lo] == 0.0) continue;
    double row = 0.0;
    for (int j = 0; j < grid.nx; ++j)
      if (wx[j] != 0.0) row += field(i, j) * wx[j];
    acc += wt[i - i_lo] * row;
  }
  return acc * norm / (lam * lam * lam);
}

double kernel_norm(const Grid& grid, const MollifierSample& J, double a, int m) {
  const int rows = static_cast<int>(J.values.rows());
  const int cols = static_cast<int>(J.values.cols());
  double best = 0.0;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const double t = (i - J.rows0) * grid.dt();
      const double x = (j - J.cols0) * grid.dx();
      const double r = parabolic_norm(t, x);
      best = std::max(best, std::pow(r, a) * std::abs(J.values(i, j)));
      if (m >= 1 && j + 1 < cols) {
        const double dx1 = (J.values(i, j + 1) - J.values(i, j)) / grid.dx();
        best = std::max(best, std::pow(parabolic_norm(t, x + 0.5 * grid.dx()), a + 1) *
                                  std::abs(dx1));
      }
    }
  return best;
}

}  // namespace gkpz
