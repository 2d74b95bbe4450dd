#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

namespace enpp {

/// Uniform periodic grid on [0, L)^d with its integer frequency lattice
/// {k : -N/2 < k_i <= N/2}, scaled by 2*pi/L.
///
/// Sites are stored row-major with axis 0 slowest. The grid is a cheap
/// handle: copies share the precomputed wavenumber tables.
class Grid {
 public:
  Grid(int dim, int points, double length = 2.0 * std::numbers::pi);

  int dim() const noexcept;
  int points() const noexcept;
  double length() const noexcept;
  std::size_t size() const noexcept;
  double spacing() const noexcept;
  double cell_volume() const noexcept;

  /// Integer lattice frequency for index i along any axis.
  int lattice_frequency(int index) const noexcept;

  /// Multi-index of a site, unused axes are zero.
  std::array<int, 3> site_index(std::size_t site) const noexcept;
  std::size_t site_of(const std::array<int, 3>& index) const noexcept;

  /// Site holding the lattice frequency -k of the frequency at `site`.
  std::size_t conjugate_site(std::size_t site) const noexcept;

  /// Physical coordinate of a site.
  std::array<double, 3> coordinate(std::size_t site) const noexcept;

  /// Physical wavenumber component along `axis`, one value per site.
  std::span<const double> wavenumber(int axis) const noexcept;
  /// Same as wavenumber() but with the Nyquist component set to zero, for
  /// odd multipliers such as derivatives that must keep real fields real.
  std::span<const double> derivative_wavenumber(int axis) const noexcept;
  /// |k|^2 per site.
  std::span<const double> wavenumber_squared() const noexcept;
  /// |k| per site.
  std::span<const double> wavenumber_magnitude() const noexcept;

  double max_wavenumber() const noexcept;

  /// True when some component k_i of the site's integer frequency has
  /// 3|k_i| >= N (the 2/3-rule truncation set).
  bool is_aliased(std::size_t site) const noexcept;

  bool operator==(const Grid& other) const noexcept;

 private:
  struct Tables;
  std::shared_ptr<const Tables> tables_;
};

Grid make_grid(int dim, int points, double length = 2.0 * std::numbers::pi);

/// Throws GridMismatch unless both grids describe the same discretization.
void require_same_grid(const Grid& a, const Grid& b, const char* context);

}  // namespace enpp
