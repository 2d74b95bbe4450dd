#include "enpp/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "enpp/error.hpp"

namespace enpp {

Field::Field(const Grid& grid)
    : grid_(grid), real_(grid.size(), 0.0), spectral_(grid.size(), Complex{}) {}

Field::Field(const Grid& grid, std::vector<double> real, std::vector<Complex> spectral)
    : grid_(grid), real_(std::move(real)), spectral_(std::move(spectral)) {}

Field Field::constant(const Grid& grid, double value) {
  std::vector<Complex> spec(grid.size(), Complex{});
  spec[0] = value;
  return Field(grid, std::vector<double>(grid.size(), value), std::move(spec));
}

Field Field::from_real(const Grid& grid, std::vector<double> values) {
  if (values.size() != grid.size()) {
    throw InvalidArgument("Field::from_real: expected " + std::to_string(grid.size()) +
                          " samples, got " + std::to_string(values.size()));
  }
  auto spec = forward_transform(grid, values);
  return Field(grid, std::move(values), std::move(spec));
}

Field Field::from_spectral(const Grid& grid, std::vector<Complex> coefficients) {
  if (coefficients.size() != grid.size()) {
    throw InvalidArgument("Field::from_spectral: coefficient count does not match grid");
  }
  std::vector<Complex> sym(grid.size());
  for (std::size_t s = 0; s < grid.size(); ++s) {
    sym[s] = 0.5 * (coefficients[s] + std::conj(coefficients[grid.conjugate_site(s)]));
  }
  auto values = inverse_transform(grid, sym);
  return Field(grid, std::move(values), std::move(sym));
}

Field Field::from_function(const Grid& grid,
                           const std::function<double(const std::array<double, 3>&)>& f) {
  std::vector<double> values(grid.size());
  for (std::size_t s = 0; s < grid.size(); ++s) values[s] = f(grid.coordinate(s));
  return from_real(grid, std::move(values));
}

double Field::min() const { return *std::min_element(real_.begin(), real_.end()); }
double Field::max() const { return *std::max_element(real_.begin(), real_.end()); }

Field Field::apply_multiplier(const std::function<Complex(std::size_t)>& symbol) const {
  std::vector<Complex> spec(spectral_.size());
  for (std::size_t s = 0; s < spec.size(); ++s) spec[s] = spectral_[s] * symbol(s);
  return from_spectral(grid_, std::move(spec));
}

Field Field::apply_multiplier(std::span<const double> symbol) const {
  std::vector<Complex> spec(spectral_.size());
  for (std::size_t s = 0; s < spec.size(); ++s) spec[s] = spectral_[s] * symbol[s];
  return from_spectral(grid_, std::move(spec));
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(grid_, other.grid_, "Field +=");
  for (std::size_t i = 0; i < real_.size(); ++i) {
    real_[i] += other.real_[i];
    spectral_[i] += other.spectral_[i];
  }
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(grid_, other.grid_, "Field -=");
  for (std::size_t i = 0; i < real_.size(); ++i) {
    real_[i] -= other.real_[i];
    spectral_[i] -= other.spectral_[i];
  }
  return *this;
}

Field& Field::operator*=(double c) {
  for (auto& v : real_) v *= c;
  for (auto& v : spectral_) v *= c;
  return *this;
}

VectorField::VectorField(const Grid& grid) {
  components_.reserve(grid.dim());
  for (int i = 0; i < grid.dim(); ++i) components_.emplace_back(grid);
}

VectorField::VectorField(std::vector<Field> components) : components_(std::move(components)) {
  if (components_.empty()) throw InvalidArgument("VectorField needs at least one component");
  const Grid& g = components_.front().grid();
  if (static_cast<int>(components_.size()) != g.dim()) {
    throw InvalidArgument("VectorField component count must equal the grid dimension");
  }
  for (const auto& c : components_) require_same_grid(g, c.grid(), "VectorField");
}

VectorField& VectorField::operator+=(const VectorField& other) {
  for (int i = 0; i < dim(); ++i) components_[i] += other.components_[i];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& other) {
  for (int i = 0; i < dim(); ++i) components_[i] -= other.components_[i];
  return *this;
}

VectorField& VectorField::operator*=(double c) {
  for (auto& f : components_) f *= c;
  return *this;
}

Field transform(const Field& field, Direction direction) {
  if (direction == Direction::forward) {
    return Field::from_real(field.grid(), std::vector<double>(field.real().begin(), field.real().end()));
  }
  return Field::from_spectral(field.grid(),
                              std::vector<Complex>(field.spectral().begin(), field.spectral().end()));
}

namespace {

void check_exponent(double p) {
  if (!(p >= 1.0)) throw InvalidArgument("L^p exponent must lie in [1, inf]");
}

double lp_of_samples(const Grid& grid, std::span<const double> abs_values, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : abs_values) m = std::max(m, v);
    return m;
  }
  double sum = 0.0;
  if (p == 2.0) {
    for (double v : abs_values) sum += v * v;
    return std::sqrt(sum * grid.cell_volume());
  }
  for (double v : abs_values) sum += std::pow(v, p);
  return std::pow(sum * grid.cell_volume(), 1.0 / p);
}

}  // namespace

double lp_norm(const Field& field, double p) {
  check_exponent(p);
  std::vector<double> a(field.real().size());
  std::transform(field.real().begin(), field.real().end(), a.begin(),
                 [](double v) { return std::abs(v); });
  return lp_of_samples(field.grid(), a, p);
}

double lp_norm(const VectorField& field, double p) {
  check_exponent(p);
  return lp_of_samples(field.grid(), magnitude(field).real(), p);
}

double inner_product(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid(), "inner_product");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.real().size(); ++i) sum += a.real()[i] * b.real()[i];
  return sum * a.grid().cell_volume();
}

double inner_product(const VectorField& a, const VectorField& b) {
  double sum = 0.0;
  for (int i = 0; i < a.dim(); ++i) sum += inner_product(a[i], b[i]);
  return sum;
}

Field dealias(const Field& field) {
  const Grid& g = field.grid();
  std::vector<Complex> spec(field.spectral().begin(), field.spectral().end());
  for (std::size_t s = 0; s < spec.size(); ++s) {
    if (g.is_aliased(s)) spec[s] = Complex{};
  }
  return Field::from_spectral(g, std::move(spec));
}

VectorField dealias(const VectorField& field) {
  std::vector<Field> out;
  for (const auto& c : field.components()) out.push_back(dealias(c));
  return VectorField(std::move(out));
}

Field pointwise_product(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid(), "pointwise_product");
  std::vector<double> values(a.real().size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = a.real()[i] * b.real()[i];
  return Field::from_real(a.grid(), std::move(values));
}

Field dealiased_product(const Field& a, const Field& b) { return dealias(pointwise_product(a, b)); }

Field derivative(const Field& f, int axis) {
  const auto k = f.grid().derivative_wavenumber(axis);
  return f.apply_multiplier([&](std::size_t s) { return Complex(0.0, k[s]); });
}

VectorField gradient(const Field& f) {
  std::vector<Field> out;
  for (int a = 0; a < f.grid().dim(); ++a) out.push_back(derivative(f, a));
  return VectorField(std::move(out));
}

Field divergence(const VectorField& v) {
  const Grid& g = v.grid();
  std::vector<Complex> spec(g.size(), Complex{});
  for (int a = 0; a < v.dim(); ++a) {
    const auto k = g.derivative_wavenumber(a);
    const auto c = v[a].spectral();
    for (std::size_t s = 0; s < spec.size(); ++s) spec[s] += Complex(0.0, k[s]) * c[s];
  }
  return Field::from_spectral(g, std::move(spec));
}

Field laplacian(const Field& f) {
  const auto k2 = f.grid().wavenumber_squared();
  return f.apply_multiplier([&](std::size_t s) { return Complex(-k2[s], 0.0); });
}

VectorField laplacian(const VectorField& v) {
  std::vector<Field> out;
  for (const auto& c : v.components()) out.push_back(laplacian(c));
  return VectorField(std::move(out));
}

Field advect(const VectorField& v, const Field& f) {
  require_same_grid(v.grid(), f.grid(), "advect");
  const Grid& g = f.grid();
  std::vector<double> values(g.size(), 0.0);
  for (int a = 0; a < v.dim(); ++a) {
    const Field df = derivative(f, a);
    const auto va = v[a].real();
    const auto d = df.real();
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += va[i] * d[i];
  }
  return dealias(Field::from_real(g, std::move(values)));
}

VectorField advect(const VectorField& v, const VectorField& w) {
  std::vector<Field> out;
  for (const auto& c : w.components()) out.push_back(advect(v, c));
  return VectorField(std::move(out));
}

Field magnitude(const VectorField& v) {
  const Grid& g = v.grid();
  std::vector<double> values(g.size(), 0.0);
  for (const auto& c : v.components()) {
    const auto r = c.real();
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += r[i] * r[i];
  }
  for (auto& x : values) x = std::sqrt(x);
  return Field::from_real(g, std::move(values));
}

}  // namespace enpp
