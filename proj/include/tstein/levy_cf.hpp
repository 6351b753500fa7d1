// Jump density, characteristic-function exponent and cumulants of the
// two-sided tempered stable family.
//
// The exponent eta(z) = integral of (e^{izu}-1) against the jump measure
// has closed form per side:
//   beta = 0:        -alpha * log(1 - iz/lambda)
//   beta in (0,1):   alpha * Gamma(-beta) * ((lambda - iz)^beta - lambda^beta)
// with the principal branch throughout; lambda -/+ iz stays in the right
// half-plane so no branch tracking is needed.  The negative side is the
// positive-side form evaluated at -z with its own parameters.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "tstein/params.hpp"

namespace tstein {

using cplx = std::complex<double>;

// Density of the jump measure at u != 0; zero on an absent side.
inline double levy_density(const TsdParams& p, double u) {
  if (u == 0.0) throw std::invalid_argument("levy_density: u = 0 is outside the support");
  if (u > 0.0) {
    if (!p.plus) return 0.0;
    const TsdSide& s = *p.plus;
    return s.alpha * std::pow(u, -1.0 - s.beta) * std::exp(-s.lambda * u);
  }
  if (!p.minus) return 0.0;
  const TsdSide& s = *p.minus;
  const double au = -u;
  return s.alpha * std::pow(au, -1.0 - s.beta) * std::exp(-s.lambda * au);
}

// k(u) = u * (jump density); strictly decreasing on each side of 0 for
// every valid parameter set (the self-decomposability criterion).
inline double k_function(const TsdParams& p, double u) {
  return u * levy_density(p, u);
}

namespace detail {

// eta and its first three z-derivatives for one side, evaluated at z.
// Derivatives are closed-form; see the formulas above.
inline std::array<cplx, 4> side_exponent_derivs(const TsdSide& s, double z) {
  const cplx i(0.0, 1.0);
  const cplx w = cplx(s.lambda, -z);  // lambda - iz
  std::array<cplx, 4> d;
  if (s.beta == 0.0) {
    d[0] = -s.alpha * std::log(w / s.lambda);
    d[1] = i * s.alpha / w;
    d[2] = -s.alpha / (w * w);
    d[3] = -2.0 * i * s.alpha / (w * w * w);
    return d;
  }
  const double b = s.beta;
  const double g = std::tgamma(-b);  // negative for beta in (0,1)
  const cplx wb = std::pow(w, b);
  d[0] = s.alpha * g * (wb - std::pow(s.lambda, b));
  d[1] = -i * s.alpha * g * b * wb / w;
  d[2] = -s.alpha * g * b * (b - 1.0) * wb / (w * w);
  d[3] = i * s.alpha * g * b * (b - 1.0) * (b - 2.0) * wb / (w * w * w);
  return d;
}

inline cplx side_exponent(const TsdSide& s, double z) {
  const cplx w = cplx(s.lambda, -z);
  if (s.beta == 0.0) return -s.alpha * std::log(w / s.lambda);
  const double b = s.beta;
  return s.alpha * std::tgamma(-b) * (std::pow(w, b) - std::pow(s.lambda, b));
}

}  // namespace detail

// eta(z); eta(0) = 0, eta(-z) = conj(eta(z)), Re eta <= 0.
inline cplx cf_exponent(const TsdParams& p, double z) {
  cplx e = 0.0;
  if (p.plus) e += detail::side_exponent(*p.plus, z);
  if (p.minus) e += detail::side_exponent(*p.minus, -z);
  return e;
}

// {eta, eta', eta'', eta'''} at z.
inline std::array<cplx, 4> cf_exponent_derivs(const TsdParams& p, double z) {
  std::array<cplx, 4> out{};
  if (p.plus) {
    auto d = detail::side_exponent_derivs(*p.plus, z);
    for (int k = 0; k < 4; ++k) out[k] += d[k];
  }
  if (p.minus) {
    auto d = detail::side_exponent_derivs(*p.minus, -z);
    double sign = 1.0;
    for (int k = 0; k < 4; ++k) {
      out[k] += sign * d[k];
      sign = -sign;
    }
  }
  return out;
}

// Characteristic function phi(z) = exp(eta(z)).
inline cplx cf(const TsdParams& p, double z) { return std::exp(cf_exponent(p, z)); }

// phi_t(z) = phi(z)/phi(e^{-t} z), computed as exp(eta(z) - eta(e^{-t}z));
// a characteristic function for every t >= 0 (self-decomposability).
inline cplx cf_t(const TsdParams& p, double z, double t) {
  if (t < 0.0) throw std::invalid_argument("cf_t: t must be >= 0");
  const double s = std::exp(-t);
  return std::exp(cf_exponent(p, z) - cf_exponent(p, s * z));
}

// m-th cumulant: kappa_m = alpha+ Gamma(m-beta+) lambda+^{beta+-m}
//                        + (-1)^m alpha- Gamma(m-beta-) lambda-^{beta--m}.
inline double cumulant(const TsdParams& p, int m) {
  if (m < 1) throw std::invalid_argument("cumulant: m must be >= 1");
  double k = 0.0;
  if (p.plus) {
    const TsdSide& s = *p.plus;
    k += s.alpha * std::tgamma(m - s.beta) * std::pow(s.lambda, s.beta - m);
  }
  if (p.minus) {
    const TsdSide& s = *p.minus;
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    k += sign * s.alpha * std::tgamma(m - s.beta) * std::pow(s.lambda, s.beta - m);
  }
  return k;
}

}  // namespace tstein
