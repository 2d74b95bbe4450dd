#include <cmath>
#include <random>

#include "enpp/config.hpp"
#include "enpp/error.hpp"

namespace enpp {
namespace {

using Point = std::array<double, 3>;

VectorField taylor_green(const Grid& grid, double amplitude) {
  const double k = 2.0 * std::numbers::pi / grid.length();
  const bool three = grid.dim() == 3;
  auto zfac = [&](const Point& x) { return three ? std::cos(k * x[2]) : 1.0; };
  std::vector<Field> comps;
  comps.push_back(Field::from_function(grid, [&](const Point& x) {
    return amplitude * std::sin(k * x[0]) * std::cos(k * x[1]) * zfac(x);
  }));
  comps.push_back(Field::from_function(grid, [&](const Point& x) {
    return -amplitude * std::cos(k * x[0]) * std::sin(k * x[1]) * zfac(x);
  }));
  if (three) comps.emplace_back(grid);
  return VectorField(std::move(comps));
}

Field cosine_product(const Grid& grid) {
  const double k = 2.0 * std::numbers::pi / grid.length();
  return Field::from_function(grid, [&](const Point& x) { return std::cos(k * x[0]) * std::cos(k * x[1]); });
}

// exp(sum_i (cos(x_i - c_i) - 1) / w^2), centred on a grid node.
Field periodic_bump(const Grid& grid, double width, const std::array<int, 3>& centre) {
  const double k = 2.0 * std::numbers::pi / grid.length();
  const double h = grid.spacing();
  const int d = grid.dim();
  return dealias(Field::from_function(grid, [&](const Point& x) {
    double e = 0.0;
    for (int i = 0; i < d; ++i) e += std::cos(k * (x[i] - centre[i] * h)) - 1.0;
    return std::exp(e / (width * width));
  }));
}

Field random_band_limited(const Grid& grid, std::mt19937_64& rng) {
  const int cutoff = std::min(4, (grid.points() - 1) / 3);
  std::normal_distribution<double> normal;
  std::vector<Complex> coeffs(grid.size());
  for (std::size_t s = 1; s < grid.size(); ++s) {
    const auto idx = grid.site_index(s);
    double k2 = 0.0;
    bool inside = true;
    for (int i = 0; i < grid.dim(); ++i) {
      const int m = grid.lattice_frequency(idx[i]);
      inside = inside && std::abs(m) <= cutoff;
      k2 += double(m) * m;
    }
    const double re = normal(rng);
    const double im = normal(rng);
    if (inside) coeffs[s] = Complex(re, im) / (1.0 + k2);
  }
  return Field::from_spectral(grid, std::move(coeffs));
}

VectorField random_solenoidal(const Grid& grid, double amplitude, std::mt19937_64& rng) {
  std::vector<Field> comps;
  for (int i = 0; i < grid.dim(); ++i) comps.push_back(random_band_limited(grid, rng));
  VectorField u = leray_project(VectorField(std::move(comps)));
  const double rms = lp_norm(u, 2.0) / std::sqrt(std::pow(grid.length(), grid.dim()));
  if (rms > 0.0) u *= amplitude / rms;
  return u;
}

}  // namespace

SimState make_initial_state(const RunConfig& config) {
  const Grid grid = config.grid();
  const InitialSpec& spec = config.initial;
  const double b = spec.background;
  const double a = spec.charge_amplitude;

  SimState state{VectorField(grid), Field(grid), Field(grid), 0.0, config.viscosity};

  if (spec.preset == "taylor-green") {
    state.u = taylor_green(grid, spec.amplitude);
    state.n = Field::constant(grid, b);
    state.p = Field::constant(grid, b);
  } else if (spec.preset == "charged-taylor-green") {
    state.u = taylor_green(grid, spec.amplitude);
    const Field c = cosine_product(grid);
    state.n = Field::constant(grid, b) + a * c;
    state.p = Field::constant(grid, b) - a * c;
  } else if (spec.preset == "charged-blob") {
    state.u = taylor_green(grid, spec.amplitude);
    const int q = grid.points() / 4;
    const Field gn = periodic_bump(grid, spec.width, {q, q, q});
    const Field gp = periodic_bump(grid, spec.width, {3 * q, 3 * q, 3 * q});
    const double scale = gn.max() > 0.0 ? 1.0 / gn.max() : 1.0;
    state.n = Field::constant(grid, b) + (a * scale) * gn;
    state.p = (Field::constant(grid, b) + (a * scale) * gp) * (1.0 + spec.charge_imbalance);
  } else if (spec.preset == "random-solenoidal") {
    std::mt19937_64 rng(spec.seed);
    state.u = random_solenoidal(grid, spec.amplitude, rng);
    Field g = random_band_limited(grid, rng);
    const double peak = std::max(g.max(), -g.min());
    if (peak > 0.0) g *= 1.0 / peak;
    state.n = Field::constant(grid, b) + a * g;
    state.p = Field::constant(grid, b) - a * g;
  } else {
    throw ConfigError("unknown preset '" + spec.preset + "'");
  }
  return state;
}

}  // namespace enpp
