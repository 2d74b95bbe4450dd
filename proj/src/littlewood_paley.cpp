#include "enpp/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "enpp/error.hpp"

namespace enpp {
namespace {

constexpr double kInner = 3.0 / 4.0;
constexpr double kOuter = 4.0 / 3.0;

double bump_tail(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

bool is_inf(double x) { return std::isinf(x) && x > 0.0; }

}  // namespace

double chi_profile(double radius) {
  if (radius <= kInner) return 1.0;
  if (radius >= kOuter) return 0.0;
  // Normalized to the unit interval so both tails have comparable scale.
  const double t = (radius - kInner) / (kOuter - kInner);
  const double a = bump_tail(1.0 - t);
  const double b = bump_tail(t);
  return a / (a + b);
}

double phi_profile(double radius) { return chi_profile(radius / 2.0) - chi_profile(radius); }

DyadicPartition::DyadicPartition(const Grid& grid) : grid_(grid) {
  const double kmax = grid.max_wavenumber();
  j_max_ = 0;
  while (8.0 * std::ldexp(1.0, j_max_) / 3.0 < kmax) ++j_max_;

  const auto kmag = grid.wavenumber_magnitude();
  const std::size_t n = grid.size();
  symbols_.assign(j_max_ + 2, std::vector<double>(n, 0.0));
  for (std::size_t s = 0; s < n; ++s) {
    const double r = kmag[s];
    symbols_[0][s] = chi_profile(r);
    for (int j = 0; j < j_max_; ++j) {
      const double scaled = std::ldexp(r, -j);
      symbols_[j + 1][s] = chi_profile(scaled / 2.0) - chi_profile(scaled);
    }
    symbols_[j_max_ + 1][s] = 1.0 - chi_profile(std::ldexp(r, -j_max_));
  }
}

std::span<const double> DyadicPartition::symbol(int j) const {
  if (j < -1 || j > j_max_) {
    throw InvalidArgument("dyadic block index " + std::to_string(j) + " outside [-1, " +
                          std::to_string(j_max_) + "]");
  }
  return symbols_[j + 1];
}

DyadicPartition build_partition(const Grid& grid) { return DyadicPartition(grid); }

Field dyadic_block(const Field& f, int j, const DyadicPartition& partition) {
  require_same_grid(f.grid(), partition.grid(), "dyadic_block");
  return f.apply_multiplier(partition.symbol(j));
}

std::vector<Field> dyadic_blocks(const Field& f, const DyadicPartition& partition) {
  require_same_grid(f.grid(), partition.grid(), "dyadic_blocks");
  std::vector<Field> out;
  out.reserve(partition.block_count());
  for (int j = -1; j <= partition.j_max(); ++j) out.push_back(f.apply_multiplier(partition.symbol(j)));
  return out;
}

Field low_freq_cutoff(const Field& f, int j, const DyadicPartition& partition) {
  require_same_grid(f.grid(), partition.grid(), "low_freq_cutoff");
  if (j < 0) throw InvalidArgument("low_freq_cutoff index must be nonnegative");
  if (j > partition.j_max()) return f;
  std::vector<double> symbol(f.grid().size(), 0.0);
  for (int b = -1; b <= j - 1; ++b) {
    const auto s = partition.symbol(b);
    for (std::size_t i = 0; i < symbol.size(); ++i) symbol[i] += s[i];
  }
  return f.apply_multiplier(symbol);
}

BesovSpec::BesovSpec(double s_, double p_, double r_) : s(s_), p(p_), r(r_) {
  if (!std::isfinite(s)) throw InvalidArgument("Besov regularity index must be finite");
  if (!(p >= 1.0)) throw InvalidArgument("Besov integrability exponent p must lie in [1, inf]");
  if (!(r >= 1.0)) throw InvalidArgument("Besov summation exponent r must lie in [1, inf]");
}

std::string BesovSpec::label() const {
  auto fmt = [](double x) {
    if (is_inf(x)) return std::string("inf");
    std::ostringstream os;
    os << x;
    return os.str();
  };
  return "B(s=" + fmt(s) + ",p=" + fmt(p) + ",r=" + fmt(r) + ")";
}

double weighted_sequence_norm(std::span<const double> block_values, double s, double r) {
  double acc = 0.0;
  for (std::size_t i = 0; i < block_values.size(); ++i) {
    const int j = static_cast<int>(i) - 1;
    const double w = std::exp2(j * s) * block_values[i];
    if (is_inf(r)) {
      acc = std::max(acc, w);
    } else {
      acc += std::pow(w, r);
    }
  }
  return is_inf(r) ? acc : std::pow(acc, 1.0 / r);
}

std::vector<double> block_lp_norms(const Field& f, double p, const DyadicPartition& partition) {
  std::vector<double> out;
  for (const auto& b : dyadic_blocks(f, partition)) out.push_back(lp_norm(b, p));
  return out;
}

std::vector<double> block_lp_norms(const VectorField& f, double p,
                                   const DyadicPartition& partition) {
  std::vector<std::vector<Field>> per_component;
  for (const auto& c : f.components()) per_component.push_back(dyadic_blocks(c, partition));
  std::vector<double> out;
  for (int b = 0; b < partition.block_count(); ++b) {
    std::vector<Field> comps;
    for (auto& blocks : per_component) comps.push_back(blocks[b]);
    out.push_back(lp_norm(VectorField(std::move(comps)), p));
  }
  return out;
}

double besov_norm(const Field& f, const BesovSpec& spec, const DyadicPartition& partition) {
  return weighted_sequence_norm(block_lp_norms(f, spec.p, partition), spec.s, spec.r);
}

double besov_norm(const VectorField& f, const BesovSpec& spec, const DyadicPartition& partition) {
  return weighted_sequence_norm(block_lp_norms(f, spec.p, partition), spec.s, spec.r);
}

double time_lp(std::span<const double> samples, double dt, double rho) {
  if (samples.empty()) throw InvalidArgument("time series is empty");
  if (!(rho >= 1.0)) throw InvalidArgument("time exponent rho must lie in [1, inf]");
  if (is_inf(rho)) return *std::max_element(samples.begin(), samples.end());
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) acc += dt * std::pow(samples[k], rho);
  return std::pow(acc, 1.0 / rho);
}

namespace {

template <typename F>
double timespace_impl(std::span<const F> series, double dt, double rho, const BesovSpec& spec,
                      const DyadicPartition& partition) {
  if (series.empty()) throw InvalidArgument("timespace_besov_norm: empty series");
  if (!(dt > 0.0)) throw InvalidArgument("timespace_besov_norm: dt must be positive");
  std::vector<std::vector<double>> per_time;
  per_time.reserve(series.size());
  for (const auto& f : series) per_time.push_back(block_lp_norms(f, spec.p, partition));
  std::vector<double> per_block(partition.block_count());
  std::vector<double> samples(series.size());
  for (int b = 0; b < partition.block_count(); ++b) {
    for (std::size_t k = 0; k < series.size(); ++k) samples[k] = per_time[k][b];
    per_block[b] = time_lp(samples, dt, rho);
  }
  return weighted_sequence_norm(per_block, spec.s, spec.r);
}

}  // namespace

double timespace_besov_norm(std::span<const Field> series, double dt, double rho,
                            const BesovSpec& spec, const DyadicPartition& partition) {
  return timespace_impl(series, dt, rho, spec, partition);
}

double timespace_besov_norm(std::span<const VectorField> series, double dt, double rho,
                            const BesovSpec& spec, const DyadicPartition& partition) {
  return timespace_impl(series, dt, rho, spec, partition);
}

namespace {

// Multi-indices alpha in N^d with |alpha| = order.
void multi_indices(int dim, int order, std::array<int, 3>& current, int axis,
                   std::vector<std::array<int, 3>>& out) {
  if (axis == dim - 1) {
    current[axis] = order;
    out.push_back(current);
    return;
  }
  for (int a = 0; a <= order; ++a) {
    current[axis] = a;
    multi_indices(dim, order - a, current, axis + 1, out);
  }
}

}  // namespace

BernsteinReport check_bernstein(const Field& f, int j, int order, double p,
                                const DyadicPartition& partition, double lemma_constant) {
  const Grid& g = f.grid();
  require_same_grid(g, partition.grid(), "check_bernstein");
  if (j < 0 || j > partition.j_max()) throw InvalidArgument("check_bernstein: j must be in [0, j_max]");
  if (order < 0) throw InvalidArgument("check_bernstein: derivative order must be nonnegative");
  if (!(p > 1.0) || std::isinf(p)) throw InvalidArgument("check_bernstein: p must lie in (1, inf)");

  const double r_low = 0.75 * std::ldexp(1.0, j);
  const double r_high = 8.0 / 3.0 * std::ldexp(1.0, j);
  const auto kmag = g.wavenumber_magnitude();
  double inside = 0.0;
  double outside = 0.0;
  for (std::size_t s = 0; s < g.size(); ++s) {
    const double m = std::norm(f.spectral()[s]);
    if (kmag[s] >= r_low - 1e-12 && kmag[s] <= r_high + 1e-12) {
      inside += m;
    } else {
      outside += m;
    }
  }
  if (outside > 1e-24 * std::max(inside, 1e-300)) {
    throw InvalidArgument("check_bernstein: field is not supported in the block annulus");
  }

  BernsteinReport report;
  const double base = lp_norm(f, p);

  std::vector<std::array<int, 3>> alphas;
  std::array<int, 3> cur{0, 0, 0};
  multi_indices(g.dim(), order, cur, 0, alphas);
  double sup = 0.0;
  for (const auto& alpha : alphas) {
    const Field d = f.apply_multiplier([&](std::size_t s) {
      Complex m(1.0, 0.0);
      for (int a = 0; a < g.dim(); ++a) {
        for (int t = 0; t < alpha[a]; ++t) m *= Complex(0.0, g.derivative_wavenumber(a)[s]);
      }
      return m;
    });
    sup = std::max(sup, lp_norm(d, p));
  }
  report.derivative_ratio = sup / (std::ldexp(1.0, j * order) * base);

  const auto u = f.real();
  const VectorField grad = gradient(f);
  const Field lap = laplacian(f);
  double int_p = 0.0;
  double int_grad = 0.0;
  double int_lap = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = std::abs(u[i]);
    const double w = std::pow(a, p - 2.0);
    double g2 = 0.0;
    for (int c = 0; c < g.dim(); ++c) g2 += grad[c].real()[i] * grad[c].real()[i];
    int_p += std::pow(a, p);
    int_grad += g2 * w;
    int_lap += lap.real()[i] * w * u[i];
  }
  const double vol = g.cell_volume();
  report.lower_integral = lemma_constant * r_low * r_low / (p * p) * int_p * vol;
  report.gradient_integral = int_grad * vol;
  report.laplacian_integral = -int_lap * vol / (p - 1.0);
  return report;
}

}  // namespace enpp
