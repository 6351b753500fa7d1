// Density recovery from a characteristic function.
//
// The inversion integral (1/2pi) int g(z) e^{-izx} dz is split into a
// trapezoid head on [-Z, Z] evaluated for the whole grid at once by FFT,
// plus a per-point correction for the omitted band |z| > Z.  The head
// oversamples in frequency so that the periodization images of the
// truncation ringing land far outside the output window.  The tail is
// summed by a four-term integration-by-parts series once the phase z*x is
// large enough for it to converge; before that point the integrand is
// advanced with phase-bounded Gauss-Legendre panels.  Near x = 0 the
// integrand stops oscillating and only the real part (which decays at
// least like z^-2 for the characteristic functions handled here) is
// integrated over geometrically growing panels.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "tstein/errors.hpp"
#include "tstein/fft.hpp"
#include "tstein/quadrature.hpp"

namespace tstein {

// A Hermitian spectral function: value(-z) = conj(value(z)).
// derivs(z) returns {g, g', g'', g'''}.
struct SpectralFunction {
  std::function<std::complex<double>(double)> value;
  std::function<std::array<std::complex<double>, 4>(double)> derivs;
};

struct InversionOptions {
  int oversample = 16;          // frequency points per output point
  double tail_abs_tol = 1e-12;  // absolute target for the tail correction
  bool tail_correction = true;
  int max_tail_panels = 4000;
};

// True iff |g| falls below `level` somewhere on [z0, z_cap], scanning
// doubling steps.  Characteristic functions of laws whose density is too
// rough for a uniform grid (tiny total jump intensity) never pass.
inline bool spectrum_decays_below(const SpectralFunction& g, double level, double z0,
                                  double z_cap = 1e12) {
  for (double z = z0; z <= z_cap; z *= 2.0)
    if (std::abs(g.value(z)) < level) return true;
  return false;
}

namespace detail {

inline const QuadratureRule& tail_panel_rule() {
  static const QuadratureRule rule = gauss_legendre(32);
  return rule;
}

// (1/pi) Re int_Z^inf g(z) e^{-izx} dz.
inline double fourier_tail_real(const SpectralFunction& g, double Z, double x,
                                const InversionOptions& opt) {
  using C = std::complex<double>;
  const double ax = std::abs(x);
  const double tol = opt.tail_abs_tol;
  const bool oscillatory = ax > 1e-8;
  const QuadratureRule& gl = tail_panel_rule();

  double acc = 0.0;  // Re of the integral accumulated so far
  double z = Z;
  double below_count = 0;
  for (int panel = 0; panel < opt.max_tail_panels; ++panel) {
    if (oscillatory) {
      const auto d = g.derivs(z);
      const C ix(0.0, x);
      C pw = ix;
      C series = 0.0;
      double mag[4];
      for (int m = 0; m < 4; ++m) {
        const C term = d[m] / pw;
        series += term;
        mag[m] = std::abs(term);
        pw *= ix;
      }
      const bool negligible =
          std::max({mag[0], mag[1], mag[2], mag[3]}) <= 0.25 * tol && mag[1] <= 2.0 * mag[0] + tol;
      const bool geometric = mag[3] <= 0.05 * mag[2] && 0.06 * mag[3] <= tol;
      if (negligible || geometric) {
        acc += (std::exp(C(0.0, -z * x)) * series).real();
        return acc / M_PI;
      }
    } else {
      // Non-oscillatory regime: remaining integral of Re g is bounded by
      // |Re g(z)| * z when the real part decays at least like z^-2.
      const double rg = std::abs(g.value(z).real());
      if (rg * z <= tol) {
        if (++below_count >= 2) return acc / M_PI;
      } else {
        below_count = 0;
      }
    }

    const double width = oscillatory ? std::min(z, M_PI / ax) : z;
    const double zm = z + 0.5 * width, h = 0.5 * width;
    double panel_sum = 0.0;
    for (std::size_t i = 0; i < gl.size(); ++i) {
      const double zi = zm + h * gl.nodes[i];
      const C v = g.value(zi) * std::exp(C(0.0, -zi * x));
      panel_sum += gl.weights[i] * v.real();
    }
    acc += h * panel_sum;
    z += width;
  }
  // Panel budget exhausted; close with the series, whose error is of the
  // order of its last term at this z.
  const auto d = g.derivs(z);
  const C ix(0.0, x);
  C pw = ix;
  C series = 0.0;
  for (int m = 0; m < 4; ++m) {
    series += d[m] / pw;
    pw *= ix;
  }
  if (oscillatory) acc += (std::exp(C(0.0, -z * x)) * series).real();
  return acc / M_PI;
}

}  // namespace detail

// Values of (1/2pi) int g(z) e^{-izx} dz on the grid x_j = x0 + j dx,
// j = 0..n-1.
inline std::vector<double> invert_to_grid(const SpectralFunction& g, double x0, double dx,
                                          std::size_t n, const InversionOptions& opt = {}) {
  using C = std::complex<double>;
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("invert_to_grid: n must be a power of two");

  const std::size_t nfft = n * std::size_t(opt.oversample);
  const double dz = 2.0 * M_PI / (double(nfft) * dx);
  const double Z = 0.5 * double(nfft) * dz;  // = pi/dx

  std::vector<C> v(nfft);
  v[0] = g.value(0.0);
  for (std::size_t k = 1; k < nfft / 2; ++k) {
    const double zk = double(k) * dz;
    const C val = g.value(zk) * std::exp(C(0.0, -zk * x0));
    v[k] = val;
    v[nfft - k] = std::conj(val);
  }
  v[nfft / 2] = (g.value(Z) * std::exp(C(0.0, -Z * x0))).real();

  detail::fft_forward(v);

  std::vector<double> out(n);
  const double scale = dz / (2.0 * M_PI);
  for (std::size_t j = 0; j < n; ++j) out[j] = scale * v[j].real();

  if (opt.tail_correction) {
    for (std::size_t j = 0; j < n; ++j)
      out[j] += detail::fourier_tail_real(g, Z, x0 + double(j) * dx, opt);
  }
  return out;
}

}  // namespace tstein
