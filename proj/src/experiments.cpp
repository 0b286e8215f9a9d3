#include "gkpz/experiments.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <set>

namespace gkpz {

SlopeFit loglog_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  const int n = static_cast<int>(xs.size());
  if (n < 2 || ys.size() != xs.size())
    throw std::invalid_argument("loglog_fit: need at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  SlopeFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  if (n > 2) {
    const double intercept = (sy - fit.slope * sx) / n;
    double ss = 0.0;
    for (int i = 0; i < n; ++i) {
      const double r = std::log(ys[i]) - (intercept + fit.slope * std::log(xs[i]));
      ss += r * r;
    }
    fit.stderr = std::sqrt(ss / (n - 2) * n / denom);
  }
  return fit;
}

ScalingFitResult scaling_fit(const TreePtr& t, ModelMode mode,
                             const std::vector<double>& lambdas, int samples,
                             std::uint64_t seed, const Grid& grid,
                             const MollifierSpec& m) {
  Kernels kern = build_kernels(grid);
  MollifierSample rho = sample_mollifier(grid, m);
  CharacterTable chars;
  const bool renorm =
      mode == ModelMode::Renormalized || mode == ModelMode::RenormalizedRecentered;
  if (renorm) chars = character_table(grid, m);

  ScalingFitResult res;
  res.lambdas = lambdas;
  res.samples = samples;
  res.seed = seed;
  std::vector<double> sum_sq(lambdas.size(), 0.0), sum_q4(lambdas.size(), 0.0);

  for (int s = 0; s < samples; ++s) {
    Field zeta = mollified_noise(grid, rho, seed, s);
    ModelInput in;
    in.kernels = &kern;
    in.noise = &zeta;
    in.mode = mode;
    in.chars = renorm ? &chars : nullptr;
    Field field = evaluate_model(t, in);
    for (size_t li = 0; li < lambdas.size(); ++li) {
      TestFunctionSpec phi;
      phi.lambda = lambdas[li];
      phi.zt = in.zt;
      phi.zx = in.zx;
      const double v = pair_with_test(grid, field, phi);
      sum_sq[li] += v * v;
      sum_q4[li] += v * v * v * v;
    }
  }
  for (size_t li = 0; li < lambdas.size(); ++li) {
    const double m2 = sum_sq[li] / samples;
    const double m4 = sum_q4[li] / samples;
    res.norms.push_back(std::sqrt(m2));
    const double var_m2 = std::max(0.0, m4 - m2 * m2) / samples;
    res.norm_se.push_back(0.5 * std::sqrt(var_m2) / std::sqrt(m2));
  }
  res.fit = loglog_fit(res.lambdas, res.norms);
  return res;
}

MeanProbe point_mean_probe(const TreePtr& t, ModelMode mode, int samples,
                           std::uint64_t seed, const Grid& grid,
                           const MollifierSpec& m) {
  Kernels kern = build_kernels(grid);
  MollifierSample rho = sample_mollifier(grid, m);
  CharacterTable chars;
  const bool renorm =
      mode == ModelMode::Renormalized || mode == ModelMode::RenormalizedRecentered;
  if (renorm) chars = character_table(grid, m);

  MeanProbe probe;
  probe.samples = samples;
  double sum = 0.0, sum2 = 0.0;
  for (int s = 0; s < samples; ++s) {
    Field zeta = mollified_noise(grid, rho, seed, s);
    ModelInput in;
    in.kernels = &kern;
    in.noise = &zeta;
    in.mode = mode;
    in.chars = renorm ? &chars : nullptr;
    Field field = evaluate_model(t, in);
    const double v = field(grid.time_row(in.zt), grid.x_col(in.zx));
    sum += v;
    sum2 += v * v;
  }
  probe.mean = sum / samples;
  probe.se = std::sqrt(std::max(0.0, sum2 / samples - probe.mean * probe.mean) /
                       std::max(1, samples - 1));
  return probe;
}

std::vector<EpsPair> epsilon_convergence_probe(const TreePtr& t,
                                               const std::vector<double>& eps_list,
                                               double lambda, int samples,
                                               std::uint64_t seed, const Grid& grid,
                                               MollifierSpec base) {
  Kernels kern = build_kernels(grid);
  std::vector<EpsPair> out;
  for (double eps : eps_list) {
    MollifierSpec ma = base, mb = base;
    ma.eps = eps;
    mb.eps = eps / 2.0;
    MollifierSample ra = sample_mollifier(grid, ma);
    MollifierSample rb = sample_mollifier(grid, mb);
    CharacterTable ca = character_table(grid, ma);
    CharacterTable cb = character_table(grid, mb);

    double sum_sq = 0.0, sum_q4 = 0.0;
    for (int s = 0; s < samples; ++s) {
      Field w = white_noise(grid, seed, s);
      Field za = mollify(grid, ra, w);
      Field zb = mollify(grid, rb, w);
      ModelInput in;
      in.kernels = &kern;
      in.mode = ModelMode::RenormalizedRecentered;
      in.noise = &za;
      in.chars = &ca;
      Field fa = evaluate_model(t, in);
      in.noise = &zb;
      in.chars = &cb;
      Field fb = evaluate_model(t, in);
      TestFunctionSpec phi;
      phi.lambda = lambda;
      const double v = pair_with_test(grid, fa, phi) - pair_with_test(grid, fb, phi);
      sum_sq += v * v;
      sum_q4 += v * v * v * v;
    }
    EpsPair pair;
    pair.eps = eps;
    pair.eps_prime = eps / 2.0;
    const double m2 = sum_sq / samples;
    pair.norm = std::sqrt(m2);
    pair.se = m2 > 0 ? 0.5 * std::sqrt(std::max(0.0, sum_q4 / samples - m2 * m2) /
                                       samples) / std::sqrt(m2)
                     : 0.0;
    out.push_back(pair);
  }
  return out;
}

double mollifier_difference_norm(const Grid& grid, MollifierSpec base, double eps,
                                 double eps_prime, double eta) {
  MollifierSpec ma = base, mb = base;
  ma.eps = eps;
  mb.eps = eps_prime;
  MollifierSample ca = pair_correlation(grid, ma);
  MollifierSample cb = pair_correlation(grid, mb);
  // difference on the larger offset window
  MollifierSample diff;
  diff.rows0 = std::max(ca.rows0, cb.rows0);
  diff.cols0 = std::max(ca.cols0, cb.cols0);
  diff.values = Field::Zero(2 * diff.rows0 + 1, 2 * diff.cols0 + 1);
  auto acc = [&](const MollifierSample& s, double sign) {
    for (int i = 0; i < s.values.rows(); ++i)
      for (int j = 0; j < s.values.cols(); ++j)
        diff.values(i - s.rows0 + diff.rows0, j - s.cols0 + diff.cols0) +=
            sign * s.values(i, j);
  };
  acc(ca, 1.0);
  acc(cb, -1.0);
  return kernel_norm(grid, diff, 3.0 + eta, 1);
}

namespace {

// --- graph integral machinery -------------------------------------------

struct QuadKernels {
  Kernels kern;
  const MollifierSample* pair = nullptr;

  double edge_value(const GEdge& e, int di, int dj, const Grid& g) const {
    // value of the kernel at (head - tail) offset (di rows, dj cols)
    switch (e.kernel) {
      case EdgeKernel::K:
      case EdgeKernel::DK: {
        const Field& f = e.kernel == EdgeKernel::K ? kern.K : kern.DK;
        if (di <= 0 || di >= f.rows()) return 0.0;
        return f(di, ((dj % g.nx) + g.nx) % g.nx);
      }
      case EdgeKernel::RhoRho: {
        if (!pair) throw std::invalid_argument("graph_integral: pair kernel required");
        if (std::abs(di) > pair->rows0 || std::abs(dj) > pair->cols0) return 0.0;
        return pair->values(di + pair->rows0, dj + pair->cols0);
      }
      default:
        return 0.0;
    }
  }
};

}  // namespace

double graph_integral(const FeynmanGraph& g, double lambda, const Grid& grid,
                      const MollifierSpec* pair_spec) {
  QuadKernels qk{build_kernels(grid), nullptr};
  MollifierSample pair;
  if (pair_spec) {
    pair = pair_correlation(grid, *pair_spec);
    qk.pair = &pair;
  }

  const double zt = 0.0, zx = 0.5;  // pinned green variables
  const int zi = grid.time_row(zt), zj = grid.x_col(zx);

  // internal vertices and their kernel-edge adjacency
  std::vector<int> internal;
  for (const auto& v : g.vertices)
    if (v.kind != VertexKind::Green) internal.push_back(v.id);
  if (internal.size() > 4)
    throw std::length_error("graph_integral: more than four free vertices");

  std::map<int, int> tests;   // vertex -> number of test attachments
  std::map<int, MultiIndex> orange;  // vertex -> accumulated monomial
  for (const auto& e : g.edges) {
    if (e.kernel == EdgeKernel::Test) {
      int v = g.vertices[e.tail].kind == VertexKind::Green ? e.head : e.tail;
      tests[v] += 1;
    } else if (e.kernel == EdgeKernel::OrangeFactor) {
      int v = g.vertices[e.tail].kind == VertexKind::Green ? e.head : e.tail;
      orange[v] = orange.count(v) ? orange[v] + e.orange : e.orange;
    }
  }

  // local factor per internal vertex (tests and orange monomials)
  TestFunctionSpec phi;
  phi.lambda = lambda;
  phi.zt = zt;
  phi.zx = zx;
  const double ht = phi.half_width_t * lambda * lambda;
  const double hx = phi.half_width_x * lambda;
  if (zt - ht < grid.t0 || zt + ht > grid.t1)
    throw SupportError("graph_integral: test support leaves the quadrature window");
  static const double psibar = [] {
    // integral of the bump profile
    const int n = 4000;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
      double u = -1.0 + 2.0 * i / n;
      double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
      acc += w * bump(u);
    }
    return acc * (2.0 / n) / 3.0;
  }();
  const double phi_norm =
      1.0 / (phi.half_width_t * phi.half_width_x * psibar * psibar *
             lambda * lambda * lambda);

  auto local_factor = [&](int v, int i, int j) -> double {
    double f = 1.0;
    auto it = tests.find(v);
    if (it != tests.end()) {
      const double pt = bump((grid.time(i) - zt) / ht);
      double dxv = grid.x(j) - zx;
      dxv -= std::round(dxv);
      const double px = bump(dxv / hx);
      const double val = pt * px * phi_norm;
      f *= std::pow(val, it->second);
      if (f == 0.0) return 0.0;
    }
    auto ot = orange.find(v);
    if (ot != orange.end()) {
      double dxv = grid.x(j) - zx;
      dxv -= std::round(dxv);
      f *= std::pow(grid.time(i) - zt, ot->second[0]) * std::pow(dxv, ot->second[1]);
    }
    return f;
  };

  // kernel edges between internal vertices, bundled per unordered pair
  struct Bundle {
    int a, b;  // vertex ids, kernels read with head/tail against them
    std::vector<GEdge> edges;
  };
  std::vector<Bundle> bundles;
  for (const auto& e : g.edges) {
    if (e.kernel == EdgeKernel::Test || e.kernel == EdgeKernel::OrangeFactor) continue;
    int a = std::min(e.tail, e.head), b = std::max(e.tail, e.head);
    auto it = std::find_if(bundles.begin(), bundles.end(),
                           [&](const Bundle& x) { return x.a == a && x.b == b; });
    if (it == bundles.end()) bundles.push_back({a, b, {e}});
    else it->edges.push_back(e);
  }

  // recentred edge value with base pinned at z
  auto edge_val = [&](const GEdge& e, int ti, int tj, int hi_, int hj) -> double {
    double v = qk.edge_value(e, hi_ - ti, hj - tj, grid);
    if (e.taylor_order > 0) {
      // subtract sum_{|k|_s < r} ((z_h - z)^k / k!) d^k K(z - z_tail)
      v -= qk.edge_value(e, zi - ti, zj - tj, grid);
      if (e.taylor_order >= 2) {
        GEdge de = e;
        de.kernel = EdgeKernel::DK;
        if (e.kernel != EdgeKernel::K)
          throw std::invalid_argument("graph_integral: second order remainder only on K");
        double dxh = grid.x(hj) - zx;
        dxh -= std::round(dxh);
        v -= dxh * qk.edge_value(de, zi - ti, zj - tj, grid);
      }
    }
    return v;
  };

  // row interval where a vertex can contribute
  const int kt = static_cast<int>(qk.kern.K.rows());
  std::map<int, std::pair<int, int>> row_mask;
  for (int v : internal) {
    if (tests.count(v)) {
      int lo = std::max(0, static_cast<int>(std::floor((zt - ht - grid.t0) / grid.dt())) - 1);
      int hi2 = std::min(grid.nt - 1,
                         static_cast<int>(std::ceil((zt + ht - grid.t0) / grid.dt())) + 1);
      row_mask[v] = {lo, hi2};
    } else {
      row_mask[v] = {0, grid.nt - 1};
    }
  }

  std::map<int, Field> messages;  // vertex -> accumulated message product
  std::set<int> done;
  auto vertex_factor = [&](int v, int i, int j) {
    double f = local_factor(v, i, j);
    if (f == 0.0) return 0.0;
    auto it = messages.find(v);
    if (it != messages.end()) f *= it->second(i, j);
    return f;
  };

  auto degree = [&](int v) {
    int d = 0;
    for (const auto& bu : bundles)
      if ((bu.a == v || bu.b == v) && !done.count(bu.a == v ? bu.b : bu.a)) ++d;
    return d;
  };

  // eliminate non-test leaves first so the final sum runs over the test support
  std::vector<int> rest = internal;
  while (rest.size() > 1) {
    int leaf = -1;
    Bundle* link = nullptr;
    for (int pass = 0; pass < 2 && leaf < 0; ++pass)
      for (int v : rest) {
        if (pass == 0 && tests.count(v)) continue;
        if (degree(v) != 1) continue;
        for (auto& bu : bundles)
          if ((bu.a == v || bu.b == v) && !done.count(bu.a == v ? bu.b : bu.a)) {
            leaf = v;
            link = &bu;
            break;
          }
        if (leaf >= 0) break;
      }
    if (leaf < 0) throw std::invalid_argument("graph_integral: internal cycle");
    const int other = link->a == leaf ? link->b : link->a;

    // candidate leaf rows for a given receiver row: kernel reach plus the
    // base-point branch of recentred edges
    bool base_branch = false;
    int reach = 1;
    for (const auto& e : link->edges) {
      if (e.taylor_order > 0) base_branch = true;
      reach = std::max(reach, e.kernel == EdgeKernel::RhoRho && qk.pair
                                  ? qk.pair->rows0
                                  : kt);
    }
    auto [llo, lhi] = row_mask[leaf];
    auto [olo, ohi] = row_mask[other];
    Field msg = Field::Zero(grid.nt, grid.nx);
    for (int oi = olo; oi <= ohi; ++oi) {
      std::set<int> li_rows;
      for (int r = std::max(llo, oi - reach); r <= std::min(lhi, oi + reach); ++r)
        li_rows.insert(r);
      if (base_branch)
        for (int r = std::max(llo, zi - reach); r <= std::min(lhi, zi + reach); ++r)
          li_rows.insert(r);
      for (int oj = 0; oj < grid.nx; ++oj) {
        double acc = 0.0;
        for (int li : li_rows)
          for (int lj = 0; lj < grid.nx; ++lj) {
            double prod = vertex_factor(leaf, li, lj);
            if (prod == 0.0) continue;
            for (const auto& e : link->edges) {
              const bool leaf_is_tail = e.tail == leaf;
              prod *= leaf_is_tail ? edge_val(e, li, lj, oi, oj)
                                   : edge_val(e, oi, oj, li, lj);
              if (prod == 0.0) break;
            }
            acc += prod;
          }
        msg(oi, oj) = acc * grid.cell();
      }
    }
    if (messages.count(other)) messages[other] *= msg;
    else messages[other] = msg;
    done.insert(leaf);
    rest.erase(std::find(rest.begin(), rest.end(), leaf));
  }

  const int root = rest.front();
  auto [rlo, rhi] = row_mask[root];
  double total = 0.0;
  for (int i = rlo; i <= rhi; ++i)
    for (int j = 0; j < grid.nx; ++j) total += vertex_factor(root, i, j);
  return total * grid.cell();
}

SlopeFit graph_integral_slope(const FeynmanGraph& g, const std::vector<double>& lambdas,
                              const Grid& quad_grid, const MollifierSpec* pair_spec) {
  std::vector<double> vals;
  for (double lam : lambdas)
    vals.push_back(std::abs(graph_integral(g, lam, quad_grid, pair_spec)));
  return loglog_fit(lambdas, vals);
}

}  // namespace gkpz
