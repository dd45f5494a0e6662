#pragma once

#include <span>

namespace spca {

/// Phi^{-1}(3/4): MAD / kMadToSigma estimates a Gaussian standard deviation.
inline constexpr double kMadToSigma = 0.6744897501960817;

/// Median; even-length inputs give the midpoint of the two central order
/// statistics. Throws EmptyInput.
double median(std::span<const double> values);

/// Median absolute deviation median(|v_i - median(v)|). Throws EmptyInput.
double mad(std::span<const double> values);

}  // namespace spca
