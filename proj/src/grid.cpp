#include "enpp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "enpp/error.hpp"

namespace enpp {

struct Grid::Tables {
  int dim = 0;
  int points = 0;
  double length = 0.0;
  std::size_t size = 0;
  std::array<std::vector<double>, 3> k;
  std::array<std::vector<double>, 3> k_deriv;
  std::vector<double> k2;
  std::vector<double> kmag;
  std::vector<unsigned char> aliased;
  double kmax = 0.0;
};

namespace {

int lattice_of(int index, int n) { return index <= n / 2 ? index : index - n; }

}  // namespace

Grid::Grid(int dim, int points, double length) {
  if (dim != 2 && dim != 3) {
    throw InvalidArgument("grid dimension must be 2 or 3, got " + std::to_string(dim));
  }
  if (points % 2 != 0) {
    throw InvalidArgument("N must be even, got " + std::to_string(points));
  }
  if (points < 8) {
    throw InvalidArgument("N must be at least 8, got " + std::to_string(points));
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw InvalidArgument("period length must be positive");
  }

  auto t = std::make_shared<Tables>();
  t->dim = dim;
  t->points = points;
  t->length = length;
  t->size = 1;
  for (int a = 0; a < dim; ++a) t->size *= static_cast<std::size_t>(points);

  const double scale = 2.0 * std::numbers::pi / length;
  for (int a = 0; a < dim; ++a) {
    t->k[a].resize(t->size);
    t->k_deriv[a].resize(t->size);
  }
  t->k2.resize(t->size);
  t->kmag.resize(t->size);
  t->aliased.resize(t->size);

  // Keep |k_i| with 3|k_i| < N, so products of kept modes never alias back.
  const int keep = (points - 1) / 3;
  for (std::size_t s = 0; s < t->size; ++s) {
    std::size_t rem = s;
    std::array<int, 3> idx{0, 0, 0};
    for (int a = dim - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(rem % points);
      rem /= points;
    }
    double k2 = 0.0;
    bool aliased = false;
    for (int a = 0; a < dim; ++a) {
      const int m = lattice_of(idx[a], points);
      const double km = scale * m;
      t->k[a][s] = km;
      t->k_deriv[a][s] = (m == points / 2) ? 0.0 : km;
      k2 += km * km;
      if (std::abs(m) > keep) aliased = true;
    }
    t->k2[s] = k2;
    t->kmag[s] = std::sqrt(k2);
    t->aliased[s] = aliased ? 1 : 0;
    t->kmax = std::max(t->kmax, t->kmag[s]);
  }
  tables_ = std::move(t);
}

int Grid::dim() const noexcept { return tables_->dim; }
int Grid::points() const noexcept { return tables_->points; }
double Grid::length() const noexcept { return tables_->length; }
std::size_t Grid::size() const noexcept { return tables_->size; }
double Grid::spacing() const noexcept { return tables_->length / tables_->points; }
double Grid::cell_volume() const noexcept { return std::pow(spacing(), dim()); }

int Grid::lattice_frequency(int index) const noexcept { return lattice_of(index, points()); }

std::array<int, 3> Grid::site_index(std::size_t site) const noexcept {
  std::array<int, 3> idx{0, 0, 0};
  const int n = points();
  for (int a = dim() - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(site % n);
    site /= n;
  }
  return idx;
}

std::size_t Grid::site_of(const std::array<int, 3>& index) const noexcept {
  const int n = points();
  std::size_t s = 0;
  for (int a = 0; a < dim(); ++a) {
    s = s * n + static_cast<std::size_t>(((index[a] % n) + n) % n);
  }
  return s;
}

std::size_t Grid::conjugate_site(std::size_t site) const noexcept {
  auto idx = site_index(site);
  for (int a = 0; a < dim(); ++a) idx[a] = -idx[a];
  return site_of(idx);
}

std::array<double, 3> Grid::coordinate(std::size_t site) const noexcept {
  const auto idx = site_index(site);
  const double h = spacing();
  return {idx[0] * h, idx[1] * h, idx[2] * h};
}

std::span<const double> Grid::wavenumber(int axis) const noexcept { return tables_->k[axis]; }
std::span<const double> Grid::derivative_wavenumber(int axis) const noexcept {
  return tables_->k_deriv[axis];
}
std::span<const double> Grid::wavenumber_squared() const noexcept { return tables_->k2; }
std::span<const double> Grid::wavenumber_magnitude() const noexcept { return tables_->kmag; }
double Grid::max_wavenumber() const noexcept { return tables_->kmax; }
bool Grid::is_aliased(std::size_t site) const noexcept { return tables_->aliased[site] != 0; }

bool Grid::operator==(const Grid& other) const noexcept {
  return tables_ == other.tables_ ||
         (dim() == other.dim() && points() == other.points() && length() == other.length());
}

Grid make_grid(int dim, int points, double length) { return Grid(dim, points, length); }

void require_same_grid(const Grid& a, const Grid& b, const char* context) {
  if (!(a == b)) {
    throw GridMismatch(std::string(context) + ": fields live on different grids");
  }
}

}  // namespace enpp
