#pragma once

#include <vector>

#include "enpp/field.hpp"
#include "enpp/littlewood_paley.hpp"

namespace enpp {

/// uv = T_u v + T_v u + R(u, v), every piece built from block-wise grid
/// products followed by one 2/3-rule truncation.
struct BonyPieces {
  Field paraproduct_uv;  ///< T_u v = sum_{j>=1} S_{j-1}u Delta_j v
  Field paraproduct_vu;  ///< T_v u
  Field remainder;       ///< R(u, v) = sum_{|k-j|<=1} Delta_k u Delta_j v

  Field sum() const { return paraproduct_uv + paraproduct_vu + remainder; }
};

BonyPieces bony_decompose(const Field& u, const Field& v, const DyadicPartition& partition);

/// T_u v only.
Field paraproduct(const Field& u, const Field& v, const DyadicPartition& partition);
/// R(u, v) only.
Field remainder(const Field& u, const Field& v, const DyadicPartition& partition);

/// The individual undealiased terms S_{j-1}u * Delta_j v for j = 1..j_max,
/// stored at index j - 1. Used to inspect frequency localization.
std::vector<Field> paraproduct_terms(const Field& u, const Field& v,
                                     const DyadicPartition& partition);

/// Leray projector Id + grad (-Laplacian)^{-1} div. The mean mode passes
/// through unchanged.
VectorField leray_project(const VectorField& f);

/// grad (-Laplacian)^{-1} a. Requires mean(a) = 0; the divergence of the
/// result is -a. Nyquist modes are dropped along with the mean.
VectorField grad_inv_laplacian(const Field& a);

/// (-Laplacian)^{-1} a on zero-mean a, returning a zero-mean field.
Field inv_neg_laplacian(const Field& a);

/// The pressure-encoding bilinear operator.
///
/// Pi(u, v) = grad (-Laplacian)^{-1} g with
///   g = sum_{i,j} T_{d_i u^j} d_j v^i + T_{d_j v^i} d_i u^j + d_i d_j R(u^i, v^j).
/// On the torus the low-frequency remainder pieces need no separate
/// treatment, so the whole remainder goes through one multiplier.
struct PiPieces {
  VectorField total;
  VectorField paraproduct_left;   ///< from sum T_{d_i u^j} d_j v^i
  VectorField paraproduct_right;  ///< from sum T_{d_j v^i} d_i u^j
  VectorField remainder;          ///< from sum d_i d_j R(u^i, v^j)
};

PiPieces pi_decomposition(const VectorField& u, const VectorField& v,
                          const DyadicPartition& partition);
VectorField pi_bilinear(const VectorField& u, const VectorField& v,
                        const DyadicPartition& partition);

/// Dealiased sum_{i,j} d_i u^j d_j v^i.
Field trace_product(const VectorField& u, const VectorField& v);

/// ||div Pi(u, v) + tr(Du Dv)||_{L^2}. Both inputs must be solenoidal.
double pi_divergence_identity(const VectorField& u, const VectorField& v,
                              const DyadicPartition& partition);

/// [v . grad, Delta_j] f = v . grad(Delta_j f) - Delta_j(v . grad f), dealiased.
Field commutator(const VectorField& v, const Field& f, int j, const DyadicPartition& partition);

/// Both sides of the commutator estimate, with the unknown constant left out:
///   lhs = || 2^{j sigma} ||R_j||_{L^p} ||_{l^r}
///   rhs = ||grad v||_{L^inf} ||f||_{B^sigma_{p,r}} + ||grad f||_{L^p} ||grad v||_{B^{sigma-1}_{inf,r}}
struct CommutatorEstimate {
  double lhs = 0.0;
  double rhs = 0.0;
};

CommutatorEstimate commutator_estimate(const VectorField& v, const Field& f, double sigma,
                                       double p, double r, const DyadicPartition& partition);

/// What to do when total negative and positive charge differ.
enum class ChargePolicy { strict, renormalize };

/// Potential with Laplacian(phi) = n - p and grad_phi = grad (-Laplacian)^{-1}(p - n).
struct Potential {
  Field phi;
  VectorField grad_phi;
};

/// Relative tolerance on |mean(n) - mean(p)| used by the neutrality check.
inline constexpr double kNeutralityTolerance = 1e-10;

/// Throws NonNeutral unless the pair is neutral to kNeutralityTolerance.
void require_neutral(const Field& n, const Field& p);

/// Shift p by a constant so that mean(p) = mean(n).
Field renormalize_charge(const Field& n, const Field& p);

Potential solve_potential(const Field& n, const Field& p,
                          ChargePolicy policy = ChargePolicy::strict);

}  // namespace enpp
