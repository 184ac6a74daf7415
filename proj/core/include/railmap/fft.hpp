#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "railmap/raster.hpp"

namespace railmap {

std::size_t next_pow2(std::size_t n) noexcept;

// In-place iterative radix-2 transform; a.size() must be a power of two.
// inverse=true applies the 1/N scale.
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse);

// Linear (zero-padded, no wraparound) convolution of a real map with a
// complex kernel of odd dimensions whose center taps the output pixel.
// Output has the input's shape.
Raster<std::complex<double>> convolve_complex(const Raster<double>& input,
                                              const Raster<std::complex<double>>& kernel);

}  // namespace railmap
