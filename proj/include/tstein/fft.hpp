// Iterative radix-2 complex FFT (forward sign e^{-2 pi i jk/n}).
#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace tstein::detail {

inline void fft_forward(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("fft_forward: size must be a power of two");

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  // Twiddle table w[k] = exp(-2 pi i k / n), filled with direct trig so
  // rounding does not accumulate across stages.
  std::vector<std::complex<double>> w(n / 2);
  const double step = -2.0 * M_PI / double(n);
  for (std::size_t k = 0; k < n / 2; ++k)
    w[k] = std::complex<double>(std::cos(step * double(k)), std::sin(step * double(k)));

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w[k * stride];
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
}

}  // namespace tstein::detail
