#include "enpp/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "enpp/error.hpp"

namespace enpp {
namespace {

// Accumulates grid products and finishes with a single 2/3-rule truncation.
// The grid product is bilinear, so truncating the sum equals summing the
// truncated products.
class ProductAccumulator {
 public:
  explicit ProductAccumulator(const Grid& grid) : grid_(grid), values_(grid.size(), 0.0) {}

  void add(const Field& a, const Field& b) {
    const auto x = a.real();
    const auto y = b.real();
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += x[i] * y[i];
  }

  Field finish() && { return dealias(Field::from_real(grid_, std::move(values_))); }

 private:
  Grid grid_;
  std::vector<double> values_;
};

Field paraproduct_from_blocks(const std::vector<Field>& low, const std::vector<Field>& high,
                              const DyadicPartition& partition) {
  const Grid& g = partition.grid();
  ProductAccumulator acc(g);
  // S_{j-1}u = sum_{k <= j-2} Delta_k u; only j >= 1 contributes.
  Field cutoff = Field::zeros(g);
  for (int j = 1; j <= partition.j_max(); ++j) {
    cutoff += low[j - 1];  // adds Delta_{j-2}
    acc.add(cutoff, high[j + 1]);
  }
  return std::move(acc).finish();
}

Field remainder_from_blocks(const std::vector<Field>& ub, const std::vector<Field>& vb) {
  const Grid& g = ub.front().grid();
  const int count = static_cast<int>(ub.size());
  std::vector<double> values(g.size(), 0.0);
  for (int k = 0; k < count; ++k) {
    const auto x = ub[k].real();
    for (int j = std::max(0, k - 1); j <= std::min(count - 1, k + 1); ++j) {
      const auto y = vb[j].real();
      for (std::size_t i = 0; i < values.size(); ++i) values[i] += x[i] * y[i];
    }
  }
  return dealias(Field::from_real(g, std::move(values)));
}

// grad (-Laplacian)^{-1} without the zero-mean precondition; the mean mode
// maps to zero.
VectorField grad_inv_laplacian_unchecked(const Field& a) {
  const Grid& g = a.grid();
  const auto k2 = g.wavenumber_squared();
  std::vector<Field> out;
  for (int axis = 0; axis < g.dim(); ++axis) {
    const auto k = g.derivative_wavenumber(axis);
    out.push_back(a.apply_multiplier([&](std::size_t s) {
      return k2[s] > 0.0 ? Complex(0.0, k[s] / k2[s]) : Complex{};
    }));
  }
  return VectorField(std::move(out));
}

double max_abs(const Field& f) {
  double m = 0.0;
  for (double v : f.real()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

BonyPieces bony_decompose(const Field& u, const Field& v, const DyadicPartition& partition) {
  require_same_grid(u.grid(), v.grid(), "bony_decompose");
  require_same_grid(u.grid(), partition.grid(), "bony_decompose");
  const auto ub = dyadic_blocks(u, partition);
  const auto vb = dyadic_blocks(v, partition);
  return BonyPieces{paraproduct_from_blocks(ub, vb, partition),
                    paraproduct_from_blocks(vb, ub, partition), remainder_from_blocks(ub, vb)};
}

Field paraproduct(const Field& u, const Field& v, const DyadicPartition& partition) {
  require_same_grid(u.grid(), v.grid(), "paraproduct");
  return paraproduct_from_blocks(dyadic_blocks(u, partition), dyadic_blocks(v, partition),
                                 partition);
}

Field remainder(const Field& u, const Field& v, const DyadicPartition& partition) {
  require_same_grid(u.grid(), v.grid(), "remainder");
  return remainder_from_blocks(dyadic_blocks(u, partition), dyadic_blocks(v, partition));
}

std::vector<Field> paraproduct_terms(const Field& u, const Field& v,
                                     const DyadicPartition& partition) {
  require_same_grid(u.grid(), v.grid(), "paraproduct_terms");
  const auto ub = dyadic_blocks(u, partition);
  const auto vb = dyadic_blocks(v, partition);
  std::vector<Field> terms;
  Field cutoff = Field::zeros(u.grid());
  for (int j = 1; j <= partition.j_max(); ++j) {
    cutoff += ub[j - 1];
    terms.push_back(pointwise_product(cutoff, vb[j + 1]));
  }
  return terms;
}

VectorField leray_project(const VectorField& f) {
  const Grid& g = f.grid();
  const int d = g.dim();
  std::vector<std::vector<Complex>> out(d, std::vector<Complex>(g.size()));
  std::vector<std::span<const double>> k(d);
  for (int a = 0; a < d; ++a) k[a] = g.derivative_wavenumber(a);
  for (std::size_t s = 0; s < g.size(); ++s) {
    double kk = 0.0;
    for (int a = 0; a < d; ++a) kk += k[a][s] * k[a][s];
    Complex kdotf{};
    for (int a = 0; a < d; ++a) kdotf += k[a][s] * f[a].spectral()[s];
    for (int a = 0; a < d; ++a) {
      out[a][s] = f[a].spectral()[s];
      if (kk > 0.0) out[a][s] -= k[a][s] * kdotf / kk;
    }
  }
  std::vector<Field> comps;
  for (int a = 0; a < d; ++a) comps.push_back(Field::from_spectral(g, std::move(out[a])));
  return VectorField(std::move(comps));
}

VectorField grad_inv_laplacian(const Field& a) {
  if (std::abs(a.mean()) > 1e-10 * std::max(max_abs(a), 1e-300) && a.mean() != 0.0) {
    std::ostringstream os;
    os << "grad_inv_laplacian: input mean " << a.mean() << " is not zero";
    throw InvalidArgument(os.str());
  }
  return grad_inv_laplacian_unchecked(a);
}

Field inv_neg_laplacian(const Field& a) {
  const auto k2 = a.grid().wavenumber_squared();
  return a.apply_multiplier([&](std::size_t s) {
    return k2[s] > 0.0 ? Complex(1.0 / k2[s], 0.0) : Complex{};
  });
}

PiPieces pi_decomposition(const VectorField& u, const VectorField& v,
                          const DyadicPartition& partition) {
  require_same_grid(u.grid(), v.grid(), "pi_bilinear");
  require_same_grid(u.grid(), partition.grid(), "pi_bilinear");
  const Grid& g = u.grid();
  const int d = g.dim();

  // du[i][j] = d_i u^j, dv[j][i] = d_j v^i, with their blocks.
  std::vector<std::vector<std::vector<Field>>> du_blocks(d), dv_blocks(d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      du_blocks[i].push_back(dyadic_blocks(derivative(u[j], i), partition));
      dv_blocks[i].push_back(dyadic_blocks(derivative(v[j], i), partition));
    }
  }
  std::vector<std::vector<Field>> ub, vb;
  for (int i = 0; i < d; ++i) {
    ub.push_back(dyadic_blocks(u[i], partition));
    vb.push_back(dyadic_blocks(v[i], partition));
  }

  Field left = Field::zeros(g);
  Field right = Field::zeros(g);
  std::vector<Complex> rem(g.size(), Complex{});
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const auto& a = du_blocks[i][j];  // d_i u^j
      const auto& b = dv_blocks[j][i];  // d_j v^i
      left += paraproduct_from_blocks(a, b, partition);
      right += paraproduct_from_blocks(b, a, partition);
      const Field r = remainder_from_blocks(ub[i], vb[j]);
      const auto ki = g.derivative_wavenumber(i);
      const auto kj = g.derivative_wavenumber(j);
      for (std::size_t s = 0; s < g.size(); ++s) rem[s] -= ki[s] * kj[s] * r.spectral()[s];
    }
  }
  PiPieces pieces{VectorField(g), grad_inv_laplacian_unchecked(left),
                  grad_inv_laplacian_unchecked(right),
                  grad_inv_laplacian_unchecked(Field::from_spectral(g, std::move(rem)))};
  pieces.total = pieces.paraproduct_left + pieces.paraproduct_right + pieces.remainder;
  return pieces;
}

VectorField pi_bilinear(const VectorField& u, const VectorField& v,
                        const DyadicPartition& partition) {
  return pi_decomposition(u, v, partition).total;
}

Field trace_product(const VectorField& u, const VectorField& v) {
  require_same_grid(u.grid(), v.grid(), "trace_product");
  const Grid& g = u.grid();
  ProductAccumulator acc(g);
  for (int i = 0; i < g.dim(); ++i) {
    for (int j = 0; j < g.dim(); ++j) acc.add(derivative(u[j], i), derivative(v[i], j));
  }
  return std::move(acc).finish();
}

double pi_divergence_identity(const VectorField& u, const VectorField& v,
                              const DyadicPartition& partition) {
  constexpr double kSolenoidalTolerance = 1e-8;
  for (const VectorField* w : {&u, &v}) {
    const double div = lp_norm(divergence(*w), 2.0);
    if (div > kSolenoidalTolerance * std::max(1.0, lp_norm(*w, 2.0))) {
      std::ostringstream os;
      os << "pi_divergence_identity: input is not divergence free (||div||_2 = " << div << ")";
      throw InvalidArgument(os.str());
    }
  }
  const Field residual = divergence(pi_bilinear(u, v, partition)) + trace_product(u, v);
  // The mean of tr(Du Dv) is not seen by Pi; on solenoidal fields it vanishes anyway.
  return lp_norm(residual, 2.0);
}

Field commutator(const VectorField& v, const Field& f, int j, const DyadicPartition& partition) {
  require_same_grid(v.grid(), f.grid(), "commutator");
  return advect(v, dyadic_block(f, j, partition)) - dyadic_block(advect(v, f), j, partition);
}

CommutatorEstimate commutator_estimate(const VectorField& v, const Field& f, double sigma,
                                       double p, double r, const DyadicPartition& partition) {
  const Grid& g = f.grid();
  const int d = g.dim();
  std::vector<double> rj;
  for (int j = -1; j <= partition.j_max(); ++j) rj.push_back(lp_norm(commutator(v, f, j, partition), p));

  std::vector<Field> dv;
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) dv.push_back(derivative(v[k], i));

  auto frobenius_max = [&](const std::vector<Field>& comps) {
    double m = 0.0;
    for (std::size_t s = 0; s < g.size(); ++s) {
      double a = 0.0;
      for (const auto& c : comps) a += c.real()[s] * c.real()[s];
      m = std::max(m, std::sqrt(a));
    }
    return m;
  };

  std::vector<double> dv_blocks(partition.block_count());
  {
    std::vector<std::vector<Field>> blocks;
    for (const auto& c : dv) blocks.push_back(dyadic_blocks(c, partition));
    for (int b = 0; b < partition.block_count(); ++b) {
      std::vector<Field> comps;
      for (auto& bl : blocks) comps.push_back(bl[b]);
      dv_blocks[b] = frobenius_max(comps);
    }
  }

  CommutatorEstimate est;
  est.lhs = weighted_sequence_norm(rj, sigma, r);
  est.rhs = frobenius_max(dv) * besov_norm(f, BesovSpec(sigma, p, r), partition) +
            lp_norm(gradient(f), p) * weighted_sequence_norm(dv_blocks, sigma - 1.0, r);
  return est;
}

void require_neutral(const Field& n, const Field& p) {
  require_same_grid(n.grid(), p.grid(), "require_neutral");
  const double gap = std::abs(n.mean() - p.mean());
  const double scale = std::max(max_abs(n), max_abs(p));
  if (gap > kNeutralityTolerance * scale) {
    std::ostringstream os;
    os.precision(17);
    os << "charges are not neutral: mean(n) = " << n.mean() << ", mean(p) = " << p.mean();
    throw NonNeutral(os.str());
  }
}

Field renormalize_charge(const Field& n, const Field& p) {
  return p + Field::constant(p.grid(), n.mean() - p.mean());
}

Potential solve_potential(const Field& n, const Field& p, ChargePolicy policy) {
  require_same_grid(n.grid(), p.grid(), "solve_potential");
  Field pp = policy == ChargePolicy::renormalize ? renormalize_charge(n, p) : p;
  require_neutral(n, pp);
  // Sign owner: Laplacian(phi) = n - p, so phi = (-Laplacian)^{-1}(p - n)
  // and grad phi = grad (-Laplacian)^{-1}(p - n).
  const Field source = pp - n;
  return Potential{inv_neg_laplacian(source), grad_inv_laplacian_unchecked(source)};
}

}  // namespace enpp
