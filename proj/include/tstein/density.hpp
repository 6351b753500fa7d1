// Densities, CDFs and expectations of TSD laws by Fourier inversion.
#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "tstein/errors.hpp"
#include "tstein/fourier.hpp"
#include "tstein/grid_function.hpp"
#include "tstein/levy_cf.hpp"
#include "tstein/params.hpp"

namespace tstein {

struct DensitySpec {
  double center = 0.0;
  double halfwidth = 0.0;
  int n = 4096;
};

// Exponential tails put essentially all mass within ten standard
// deviations or a few tempering lengths of the mean.
inline DensitySpec auto_density_spec(const TsdParams& p, int n = 4096) {
  DensitySpec spec;
  spec.center = cumulant(p, 1);
  spec.halfwidth = std::max(10.0 * std::sqrt(cumulant(p, 2)), 6.0 / p.min_lambda());
  spec.n = n;
  return spec;
}

// phi and its first three derivatives assembled from the exponent:
// phi' = eta' phi, phi'' = (eta'' + eta'^2) phi, ...
inline SpectralFunction cf_spectral_function(const TsdParams& p) {
  SpectralFunction g;
  g.value = [p](double z) { return cf(p, z); };
  g.derivs = [p](double z) {
    const auto e = cf_exponent_derivs(p, z);
    const cplx phi = std::exp(e[0]);
    std::array<cplx, 4> d;
    d[0] = phi;
    d[1] = e[1] * phi;
    d[2] = (e[2] + e[1] * e[1]) * phi;
    d[3] = (e[3] + 3.0 * e[1] * e[2] + e[1] * e[1] * e[1]) * phi;
    return d;
  };
  return g;
}

namespace detail {

inline GridFunction invert_density(const SpectralFunction& g, const DensitySpec& spec,
                                   const InversionOptions& opt) {
  if (spec.n < 256 || (spec.n & (spec.n - 1)) != 0)
    throw std::invalid_argument("density_grid: n must be a power of two >= 256");
  if (!(spec.halfwidth > 0.0))
    throw std::invalid_argument("density_grid: halfwidth must be positive");

  int n = spec.n;
  if (!spectrum_decays_below(g, 1e-6, M_PI * n / (2.0 * spec.halfwidth)))
    throw NumericalError(
        "density_grid: characteristic function does not decay below 1e-6; "
        "density too rough for the grid");

  // One refinement retry each for an under-resolved band and for ringing.
  bool band_doubled = false, ringing_doubled = false;
  for (;;) {
    const double dx = 2.0 * spec.halfwidth / double(n);
    const double x0 = spec.center - spec.halfwidth;
    if (std::abs(g.value(M_PI / dx)) > 0.05 && !band_doubled) {
      band_doubled = true;
      n *= 2;
      continue;
    }
    std::vector<double> values = invert_to_grid(g, x0, dx, std::size_t(n), opt);
    const double ringing = *std::min_element(values.begin(), values.end());
    if (ringing < -1e-9) {
      if (!ringing_doubled) {
        ringing_doubled = true;
        n *= 2;
        continue;
      }
      throw NumericalError("density_grid: ringing below -1e-9 persists after refinement (min " +
                           std::to_string(ringing) + ")");
    }
    for (double& v : values) v = std::max(v, 0.0);
    GridFunction fn(x0, dx, std::move(values));
    const double mass = fn.trapezoid_mass();
    if (mass < 0.999 || mass > 1.001)
      throw NumericalError("density_grid: grid mass " + std::to_string(mass) +
                           " outside [0.999, 1.001]");
    return fn;
  }
}

}  // namespace detail

inline GridFunction density_grid(const SpectralFunction& g, const DensitySpec& spec) {
  InversionOptions opt;
  return detail::invert_density(g, spec, opt);
}

inline GridFunction density_grid(const TsdParams& p, const DensitySpec& spec) {
  return density_grid(cf_spectral_function(validate(p)), spec);
}

inline GridFunction density_grid(const TsdParams& p) {
  return density_grid(p, auto_density_spec(p));
}

inline CdfGrid make_cdf(const GridFunction& density) { return CdfGrid(density); }

inline CdfGrid make_cdf(const TsdParams& p) { return CdfGrid(density_grid(p)); }

struct ExpectationResult {
  double value = 0.0;
  double error_bound = 0.0;
};

// Trapezoid integral of h against the density; the reported bound is the
// sup of |h| on the grid times the mass defect.
template <class H>
ExpectationResult expectation(const GridFunction& density, H&& h) {
  double sup_h = 0.0;
  const auto weigh = [&](double x) {
    const double hx = h(x);
    sup_h = std::max(sup_h, std::abs(hx));
    return hx;
  };
  ExpectationResult r;
  r.value = density.integrate_against(weigh);
  r.error_bound = sup_h * std::abs(1.0 - density.trapezoid_mass());
  return r;
}

}  // namespace tstein
