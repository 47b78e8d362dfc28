#pragma once

#include <vector>

#include "amalgam/grid.hpp"

namespace amalgam::detail {

// Linear discrete convolution out[i] = sum_d kernel[d] * f[i - d] with the
// kernel given on offsets [-m, m]^n (row-major, index (d + m) per axis).
// Zero padding realizes the zero-extension convention. FFT-backed.
std::vector<double> convolve(const Grid& g, const std::vector<double>& f,
                             const std::vector<double>& kernel, int m);

}  // namespace amalgam::detail
