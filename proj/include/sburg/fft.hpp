#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace sburg {

// In-place iterative radix-2 complex FFT. n must be a power of two.
// sign = -1: forward transform sum_j x_j e^{-2*pi*i*jk/n} (no scaling);
// sign = +1: inverse kernel (no 1/n scaling either).
void fft_pow2(std::vector<std::complex<double>>& x, int sign);

// Smallest power of two >= n.
std::size_t next_pow2(std::size_t n);

} // namespace sburg
