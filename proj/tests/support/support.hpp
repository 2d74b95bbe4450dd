#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "enpp/field.hpp"
#include "enpp/littlewood_paley.hpp"
#include "enpp/operators.hpp"

namespace testing {

using enpp::Complex;
using enpp::Field;
using enpp::Grid;
using enpp::VectorField;

inline constexpr double kPi = std::numbers::pi;

// Random real field with modes |m_i| <= cutoff.
inline Field random_field(const Grid& grid, std::mt19937_64& rng, int cutoff, bool zero_mean = false) {
  std::normal_distribution<double> normal;
  std::vector<Complex> c(grid.size());
  for (std::size_t s = 0; s < grid.size(); ++s) {
    const auto idx = grid.site_index(s);
    bool inside = true;
    for (int i = 0; i < grid.dim(); ++i) inside = inside && std::abs(grid.lattice_frequency(idx[i])) <= cutoff;
    const double re = normal(rng), im = normal(rng);
    if (inside) c[s] = Complex(re, im);
  }
  if (zero_mean) c[0] = 0.0;
  return Field::from_spectral(grid, std::move(c));
}

inline Field band_limited(const Grid& grid, std::mt19937_64& rng, bool zero_mean = false) {
  return random_field(grid, rng, (grid.points() - 1) / 3, zero_mean);
}

inline VectorField random_vector(const Grid& grid, std::mt19937_64& rng, int cutoff) {
  std::vector<Field> comps;
  for (int i = 0; i < grid.dim(); ++i) comps.push_back(random_field(grid, rng, cutoff));
  return VectorField(std::move(comps));
}

inline VectorField random_solenoidal(const Grid& grid, std::mt19937_64& rng, int cutoff) {
  return enpp::leray_project(random_vector(grid, rng, cutoff));
}

inline double max_abs_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.real().size(); ++i) m = std::max(m, std::abs(a.real()[i] - b.real()[i]));
  return m;
}

inline double max_abs(const Field& a) {
  double m = 0.0;
  for (double x : a.real()) m = std::max(m, std::abs(x));
  return m;
}

inline double l2_diff(const VectorField& a, const VectorField& b) { return enpp::lp_norm(a - b, 2.0); }
inline double l2_diff(const Field& a, const Field& b) { return enpp::lp_norm(a - b, 2.0); }

// Direct DFT summation, O(N^{2d}), normalized so the zero mode is the mean.
inline std::vector<Complex> naive_dft(const Grid& grid, std::span<const double> values) {
  const std::size_t n = grid.size();
  const double twopi_over_l = 2.0 * kPi / grid.length();
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto ki = grid.site_index(k);
    Complex acc{};
    for (std::size_t s = 0; s < n; ++s) {
      const auto x = grid.coordinate(s);
      double phase = 0.0;
      for (int i = 0; i < grid.dim(); ++i) phase += grid.lattice_frequency(ki[i]) * twopi_over_l * x[i];
      acc += values[s] * std::exp(Complex(0.0, -phase));
    }
    out[k] = acc / static_cast<double>(n);
  }
  return out;
}

inline std::vector<double> naive_idft(const Grid& grid, const std::vector<Complex>& coeffs) {
  const std::size_t n = grid.size();
  const double twopi_over_l = 2.0 * kPi / grid.length();
  std::vector<double> out(n);
  for (std::size_t s = 0; s < n; ++s) {
    const auto x = grid.coordinate(s);
    Complex acc{};
    for (std::size_t k = 0; k < n; ++k) {
      if (coeffs[k] == Complex{}) continue;
      const auto ki = grid.site_index(k);
      double phase = 0.0;
      for (int i = 0; i < grid.dim(); ++i) phase += grid.lattice_frequency(ki[i]) * twopi_over_l * x[i];
      acc += coeffs[k] * std::exp(Complex(0.0, phase));
    }
    out[s] = acc.real();
  }
  return out;
}

// Profile pair written out from the definition, independent of the library tables.
inline double oracle_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

inline double oracle_chi(double r) { return 1.0 - oracle_step((r - 0.75) / (4.0 / 3.0 - 0.75)); }
inline double oracle_phi(double r) { return oracle_chi(r / 2.0) - oracle_chi(r); }

inline int oracle_jmax(double kmax) {
  int j = 0;
  while (8.0 * std::ldexp(1.0, j) / 3.0 < kmax) ++j;
  return j;
}

// Block symbol of j at frequency radius r for a lattice whose largest radius is kmax.
inline double oracle_symbol(int j, double r, int jmax) {
  if (j == -1) return oracle_chi(r);
  if (j == jmax) return 1.0 - oracle_chi(std::ldexp(r, -j));
  return oracle_phi(std::ldexp(r, -j));
}

// Besov norm via direct DFT summation, the oracle's own profiles and its own quadrature.
inline double oracle_besov(const Grid& grid, std::span<const double> values, double s, double p, double r) {
  const auto coeffs = naive_dft(grid, values);
  double kmax = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) kmax = std::max(kmax, grid.wavenumber_magnitude()[k]);
  const int jmax = oracle_jmax(kmax);
  std::vector<double> weighted;
  for (int j = -1; j <= jmax; ++j) {
    std::vector<Complex> block(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto ki = grid.site_index(k);
      double r2 = 0.0;
      for (int i = 0; i < grid.dim(); ++i) {
        const double kk = grid.lattice_frequency(ki[i]) * 2.0 * kPi / grid.length();
        r2 += kk * kk;
      }
      block[k] = coeffs[k] * oracle_symbol(j, std::sqrt(r2), jmax);
    }
    const auto vals = naive_idft(grid, block);
    double norm = 0.0;
    if (std::isinf(p)) {
      for (double v : vals) norm = std::max(norm, std::abs(v));
    } else {
      for (double v : vals) norm += std::pow(std::abs(v), p);
      norm = std::pow(norm * std::pow(grid.spacing(), grid.dim()), 1.0 / p);
    }
    weighted.push_back(std::pow(2.0, j * s) * norm);
  }
  if (std::isinf(r)) {
    double m = 0.0;
    for (double w : weighted) m = std::max(m, w);
    return m;
  }
  double acc = 0.0;
  for (double w : weighted) acc += std::pow(w, r);
  return std::pow(acc, 1.0 / r);
}

}  // namespace testing
