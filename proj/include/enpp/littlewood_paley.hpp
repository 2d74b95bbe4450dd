#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "enpp/field.hpp"

namespace enpp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Radial cutoff profiles of the inhomogeneous dyadic partition.
///
/// chi is 1 on |xi| <= 3/4 and vanishes for |xi| >= 4/3, with a C-infinity
/// transition; phi(xi) = chi(xi/2) - chi(xi) is then supported in the
/// annulus 3/4 <= |xi| <= 8/3 and the sum telescopes to exactly 1.
double chi_profile(double radius);
double phi_profile(double radius);

/// The partition tabulated on one grid's frequency lattice.
///
/// Block -1 is chi(D). Blocks 0..j_max-1 are phi(2^-j D). The top block
/// j_max is 1 - chi(2^-j_max D), i.e. phi(2^-j_max D) plus whatever is left
/// above it, so that the blocks reconstruct every resolved mode exactly.
class DyadicPartition {
 public:
  explicit DyadicPartition(const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }
  int j_max() const noexcept { return j_max_; }
  int block_count() const noexcept { return j_max_ + 2; }

  /// Per-site symbol of block j, j in [-1, j_max].
  std::span<const double> symbol(int j) const;

 private:
  Grid grid_;
  int j_max_ = 0;
  std::vector<std::vector<double>> symbols_;
};

DyadicPartition build_partition(const Grid& grid);

/// Delta_j f.
Field dyadic_block(const Field& f, int j, const DyadicPartition& partition);
/// All blocks j = -1..j_max, stored at index j + 1.
std::vector<Field> dyadic_blocks(const Field& f, const DyadicPartition& partition);

/// S_j f = sum of the blocks below j. Any j >= 0 is accepted.
Field low_freq_cutoff(const Field& f, int j, const DyadicPartition& partition);

/// Index triple (s, p, r) of a Besov norm.
struct BesovSpec {
  double s = 0.0;
  double p = 2.0;
  double r = 2.0;

  BesovSpec() = default;
  BesovSpec(double s_, double p_, double r_);

  std::string label() const;
};

/// Weighted l^r norm over j = -1, 0, ... of values a_j scaled by 2^{js}.
double weighted_sequence_norm(std::span<const double> block_values, double s, double r);

double besov_norm(const Field& f, const BesovSpec& spec, const DyadicPartition& partition);
/// Vector fields use the L^p norm of the pointwise Euclidean magnitude per block.
double besov_norm(const VectorField& f, const BesovSpec& spec, const DyadicPartition& partition);

/// Per-block L^p norms, index j + 1.
std::vector<double> block_lp_norms(const Field& f, double p, const DyadicPartition& partition);
std::vector<double> block_lp_norms(const VectorField& f, double p,
                                   const DyadicPartition& partition);

/// Time-L^rho quadrature of a uniformly sampled nonnegative series.
///
/// Samples are taken at t_k = k*dt for k = 0..M-1 and cover [0, (M-1)dt].
/// Finite rho uses the left-endpoint rectangle rule over the first M-1
/// samples; rho = infinity takes the maximum over all M samples.
double time_lp(std::span<const double> samples, double dt, double rho);

/// Chemin-Lerner norm: per block the time-L^rho norm of ||Delta_j u(t)||_{L^p},
/// then the weighted l^r norm over blocks.
double timespace_besov_norm(std::span<const Field> series, double dt, double rho,
                            const BesovSpec& spec, const DyadicPartition& partition);
double timespace_besov_norm(std::span<const VectorField> series, double dt, double rho,
                            const BesovSpec& spec, const DyadicPartition& partition);

/// Both sides of the Bernstein-type comparisons for a field whose spectrum
/// lies in the annulus of block j.
struct BernsteinReport {
  /// sup_{|alpha|=k} ||d^alpha f||_{L^p} / (2^{jk} ||f||_{L^p})
  double derivative_ratio = 0.0;
  /// c R_1^2 / p^2 * int |f|^p, with R_1 = (3/4) 2^j and the supplied c.
  double lower_integral = 0.0;
  /// int |grad f|^2 |f|^{p-2}
  double gradient_integral = 0.0;
  /// -1/(p-1) int (Laplacian f) |f|^{p-2} f
  double laplacian_integral = 0.0;
};

/// Throws InvalidArgument if f has spectral mass outside block j's annulus.
BernsteinReport check_bernstein(const Field& f, int j, int order, double p,
                                const DyadicPartition& partition, double lemma_constant = 1.0);

}  // namespace enpp
