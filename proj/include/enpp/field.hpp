#pragma once

#include <array>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "enpp/fft.hpp"
#include "enpp/grid.hpp"

namespace enpp {

/// A real scalar function on the torus, held both as grid samples and as
/// its normalized DFT coefficients. Both representations are filled on
/// construction and never diverge, so a Field is an immutable value that
/// can be shared across threads.
class Field {
 public:
  explicit Field(const Grid& grid);

  static Field zeros(const Grid& grid) { return Field(grid); }
  static Field constant(const Grid& grid, double value);
  static Field from_real(const Grid& grid, std::vector<double> values);
  /// Keeps only the conjugate-symmetric part of `coefficients`, which is
  /// exactly the spectrum of the real part of their synthesis.
  static Field from_spectral(const Grid& grid, std::vector<Complex> coefficients);
  static Field from_function(const Grid& grid,
                             const std::function<double(const std::array<double, 3>&)>& f);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> real() const noexcept { return real_; }
  std::span<const Complex> spectral() const noexcept { return spectral_; }

  double mean() const noexcept { return spectral_[0].real(); }
  double min() const;
  double max() const;

  /// Multiply the spectrum by a per-site symbol.
  Field apply_multiplier(const std::function<Complex(std::size_t)>& symbol) const;
  Field apply_multiplier(std::span<const double> symbol) const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double c);

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(Field a, double c) { return a *= c; }
  friend Field operator*(double c, Field a) { return a *= c; }
  Field operator-() const { return *this * -1.0; }

 private:
  Field(const Grid& grid, std::vector<double> real, std::vector<Complex> spectral);

  Grid grid_;
  std::vector<double> real_;
  std::vector<Complex> spectral_;
};

/// d scalar components on one shared grid.
class VectorField {
 public:
  explicit VectorField(const Grid& grid);
  explicit VectorField(std::vector<Field> components);

  static VectorField zeros(const Grid& grid) { return VectorField(grid); }

  const Grid& grid() const noexcept { return components_.front().grid(); }
  int dim() const noexcept { return static_cast<int>(components_.size()); }
  const Field& operator[](int i) const { return components_[i]; }
  Field& operator[](int i) { return components_[i]; }
  const std::vector<Field>& components() const noexcept { return components_; }

  VectorField& operator+=(const VectorField& other);
  VectorField& operator-=(const VectorField& other);
  VectorField& operator*=(double c);

  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
  friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
  friend VectorField operator*(VectorField a, double c) { return a *= c; }
  friend VectorField operator*(double c, VectorField a) { return a *= c; }

 private:
  std::vector<Field> components_;
};

enum class Direction { forward, inverse };

/// Recompute one representation from the other: forward rebuilds the
/// spectrum from the samples, inverse rebuilds the samples from the spectrum.
Field transform(const Field& field, Direction direction);

/// Riemann-sum L^p norm with cell volume (L/N)^d; p = infinity is the grid max.
double lp_norm(const Field& field, double p);
/// L^p norm of the pointwise Euclidean magnitude.
double lp_norm(const VectorField& field, double p);

/// L^2 inner product by quadrature.
double inner_product(const Field& a, const Field& b);
double inner_product(const VectorField& a, const VectorField& b);

/// Zero every coefficient with some 3|k_i| >= N.
Field dealias(const Field& field);
VectorField dealias(const VectorField& field);

/// Raw grid product (aliased). Pair with dealias() for pseudo-spectral use.
Field pointwise_product(const Field& a, const Field& b);
Field dealiased_product(const Field& a, const Field& b);

Field derivative(const Field& f, int axis);
VectorField gradient(const Field& f);
Field divergence(const VectorField& v);
Field laplacian(const Field& f);
VectorField laplacian(const VectorField& v);

/// Dealiased (v . grad) f.
Field advect(const VectorField& v, const Field& f);
VectorField advect(const VectorField& v, const VectorField& w);

/// Pointwise |v|.
Field magnitude(const VectorField& v);

}  // namespace enpp
