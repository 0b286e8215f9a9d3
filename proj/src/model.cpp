#include "gkpz/model.hpp"

#include <cmath>

#include "gkpz/formal.hpp"
#include "gkpz/hopf.hpp"

namespace gkpz {

double CharacterTable::value(const TreePtr& sigma) const {
  auto it = values.find(sigma->key());
  if (it == values.end())
    throw std::runtime_error("missing character value for symbol l(" + sigma->key() + ")");
  return it->second;
}

namespace {

double wrap_half(double x) { return x - std::round(x); }

// column representative in (-1/2, 1/2]
double col_x(const Grid& grid, int j) {
  double x = grid.x(j);
  return x > 0.5 ? x - 1.0 : x;
}

}  // namespace

double compute_character(const TreePtr& sigma, const Grid& grid, const MollifierSpec& m) {
  const std::string key = sigma->key();
  const std::string k_pair = parse_tree("Xi*I[Xi]")->key();
  const std::string k_grad = parse_tree("I'[Xi]*I'[Xi]")->key();
  const std::string k_orange = parse_tree("I'[Xi]*I'[Xi@X^(0,1)]")->key();
  if (key != k_pair && key != k_grad && key != k_orange)
    throw std::invalid_argument("compute_character: unsupported symbol l(" + key + ")");

  Kernels kern = build_kernels(grid);
  MollifierSample corr = pair_correlation(grid, m);
  const int kt = static_cast<int>(kern.K.rows());

  if (key == k_pair) {
    // -(K * rho * rho)(0): the kernel tested against the pair correlation
    double acc = 0.0;
    for (int i = 1; i < kt && i <= corr.rows0; ++i)
      for (int c = -corr.cols0; c <= corr.cols0; ++c) {
        const int j = ((c % grid.nx) + grid.nx) % grid.nx;
        acc += kern.K(i, j) * corr.values(i + corr.rows0, c + corr.cols0);
      }
    return -acc * grid.cell();
  }

  if (key == k_grad) {
    // -|dK * rho|^2 via the convolved kernel on extended rows
    MollifierSample rho = sample_mollifier(grid, m);
    const int rt = static_cast<int>(rho.values.rows());
    const int lo = -rho.rows0, hi = kt - 1 + rho.rows0;
    double acc = 0.0;
    for (int w = lo; w <= hi; ++w)
      for (int j = 0; j < grid.nx; ++j) {
        double d = 0.0;
        for (int s = 0; s < rt; ++s) {
          const int i = w - (s - rho.rows0);
          if (i <= 0 || i >= kt) continue;
          for (int c = -rho.cols0; c <= rho.cols0; ++c)
            d += kern.DK(i, (((j - c) % grid.nx) + grid.nx) % grid.nx) *
                 rho.values(s, c + rho.cols0);
        }
        acc += d * d;
      }
    // d carries one cell factor from the convolution
    return -acc * grid.cell() * grid.cell() * grid.cell();
  }

  // orange symbol: zero for symmetric mollifiers by parity
  if (m.symmetric) return 0.0;
  // sum_{u,w} dK(u) dK(w) w_x corr(u - w)
  double acc = 0.0;
  for (int iu = 1; iu < kt; ++iu)
    for (int ju = 0; ju < grid.nx; ++ju) {
      if (kern.DK(iu, ju) == 0.0) continue;
      double inner = 0.0;
      for (int di = -corr.rows0; di <= corr.rows0; ++di) {
        const int iw = iu - di;
        if (iw <= 0 || iw >= kt) continue;
        for (int dc = -corr.cols0; dc <= corr.cols0; ++dc) {
          const int jw = (((ju - dc) % grid.nx) + grid.nx) % grid.nx;
          if (kern.DK(iw, jw) == 0.0) continue;
          inner += kern.DK(iw, jw) * col_x(grid, jw) *
                   corr.values(di + corr.rows0, dc + corr.cols0);
        }
      }
      acc += kern.DK(iu, ju) * inner;
    }
  return acc * grid.cell() * grid.cell();
}

CharacterTable character_table(const Grid& grid, const MollifierSpec& m) {
  CharacterTable table;
  for (const char* s : {"Xi*I[Xi]", "I'[Xi]*I'[Xi]", "I'[Xi]*I'[Xi@X^(0,1)]"}) {
    TreePtr sigma = parse_tree(s);
    table.values[sigma->key()] = compute_character(sigma, grid, m);
  }
  return table;
}

namespace {

struct Evaluator {
  const ModelInput& in;
  const Grid& grid;

  bool recentered() const {
    return in.mode == ModelMode::Recentered || in.mode == ModelMode::RenormalizedRecentered;
  }
  bool renormalized() const {
    return in.mode == ModelMode::Renormalized || in.mode == ModelMode::RenormalizedRecentered;
  }

  Field monomial(MultiIndex k, bool centred) const {
    Field f = Field::Ones(grid.nt, grid.nx);
    const double zt = centred ? in.zt : 0.0;
    const double zx = centred ? in.zx : 0.0;
    for (int i = 0; i < grid.nt; ++i) {
      const double tpow = std::pow(grid.time(i) - zt, k[0]);
      for (int j = 0; j < grid.nx; ++j)
        f(i, j) = tpow * std::pow(wrap_half(grid.x(j) - zx), k[1]);
    }
    return f;
  }

  Field eval(const TreePtr& t) const {
    if (!renormalized()) return eval_mult(t);
    FormalSum r = prepare(t, /*apply_vanishing=*/true);
    Field acc = Field::Zero(grid.nt, grid.nx);
    for (const auto& [key, e] : r.entries()) {
      double coef = 0.0;
      for (const auto& [mk, term] : e.coef.terms()) {
        double c = term.coef.to_double();
        for (const auto& sym : term.symbols) c *= in.chars->value(sym);
        coef += c;
      }
      if (coef == 0.0) continue;
      acc += coef * eval_mult(e.tree);
    }
    return acc;
  }

  Field eval_mult(const TreePtr& t) const {
    Field f = Field::Ones(grid.nt, grid.nx);
    switch (t->root().noise) {
      case Noise::None: break;
      case Noise::Xi: f *= *in.noise; break;
      default: {
        auto it = in.slots.find(noise_index(t->root().noise));
        if (it == in.slots.end())
          throw std::runtime_error("evaluate_model: no slot field for Xi_" +
                                   std::to_string(noise_index(t->root().noise)));
        f *= *it->second;
      }
    }
    if (t->root().poly != MultiIndex{0, 0})
      f *= monomial(t->root().poly, recentered());
    for (const auto& c : t->children()) f *= integrate_edge(c);
    return f;
  }

  Field integrate_edge(const Child& c) const {
    Field inner = eval(c.sub);
    Field out = in.kernels->engine(c.edge).apply(inner);
    if (!recentered()) return out;
    // jet subtraction at the base point, truncation through |.|_+
    Homogeneity bound = homogeneity(c.sub, /*plus_mode=*/true) +
                        Homogeneity{2 * (2 - parabolic_weight(c.edge)), 0};
    const int zi = grid.time_row(in.zt);
    const int zj = grid.x_col(in.zx);
    for (MultiIndex k : {MultiIndex{0, 0}, {0, 1}, {1, 0}}) {
      if (!(Homogeneity::of_poly(k) <= bound)) continue;
      Field conv = k == MultiIndex{0, 0}
                       ? out
                       : in.kernels->engine(c.edge + k).apply(inner);
      const double at_z = conv(zi, zj);
      const double inv_fact = 1.0 / (std::tgamma(k[0] + 1) * std::tgamma(k[1] + 1));
      out -= (at_z * inv_fact) * monomial(k, true);
    }
    return out;
  }
};

}  // namespace

Field evaluate_model(const TreePtr& t, const ModelInput& in) {
  if (!in.kernels || !in.noise)
    throw std::invalid_argument("evaluate_model: kernels and noise are required");
  if ((in.mode == ModelMode::Renormalized ||
       in.mode == ModelMode::RenormalizedRecentered) &&
      !in.chars)
    throw std::invalid_argument("evaluate_model: renormalized mode needs characters");
  Evaluator ev{in, in.kernels->grid};
  return ev.eval(t);
}

}  // namespace gkpz
