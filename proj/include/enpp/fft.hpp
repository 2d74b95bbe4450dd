#pragma once

#include <complex>
#include <span>
#include <vector>

#include "enpp/grid.hpp"

namespace enpp {

using Complex = std::complex<double>;

/// Forward DFT on the grid, normalized by N^d so that the k = 0
/// coefficient is the mean of the samples.
std::vector<Complex> forward_transform(const Grid& grid, std::span<const double> values);

/// Inverse of forward_transform. Returns the real part of the synthesis;
/// coefficients are assumed conjugate symmetric.
std::vector<double> inverse_transform(const Grid& grid, std::span<const Complex> coefficients);

}  // namespace enpp
