#pragma once

#include <vector>

#include "pcq/types.hpp"

namespace pcq {

/// Unnormalized discrete Fourier transform:
///   y_k = sum_j x_j exp(sign * 2 pi i j k / n).
/// Mixed-radix Cooley-Tukey for composite lengths, direct O(n^2) for prime
/// factors.  sign must be +1 or -1.
std::vector<cplx> dft(const std::vector<cplx>& x, int sign);

/// Direct O(n^2) evaluation of the same sum (reference path).
std::vector<cplx> dft_direct(const std::vector<cplx>& x, int sign);

}  // namespace pcq
