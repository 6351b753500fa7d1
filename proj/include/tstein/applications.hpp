// Closed-form error-bound evaluators and the three experiment harnesses:
// comparison of two symmetric beta = 0 TSD laws, the Laplace limit of
// geometric random sums, and the symmetric variance-gamma approximation
// of finite-rank second-chaos functionals.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "tstein/density.hpp"
#include "tstein/distances.hpp"
#include "tstein/levy_cf.hpp"
#include "tstein/params.hpp"
#include "tstein/sampling.hpp"
#include "tstein/test_function.hpp"

namespace tstein {

// d_{W_3}(Y, X) bound for X ~ TSD(a1,0,l1;a1,0,l1), Y ~ TSD(a2,0,l2;a2,0,l2):
//   l1^2/(l1^2-1) * ( |a1/l1^2 - a2/l2^2| + 2(1 + a1/(3 l1)) |1/l1^2 - 1/l2^2| ).
// Requires l1 > 1; not symmetric under swapping the two laws.
inline double compare_tsd_bound(double alpha1, double lambda1, double alpha2, double lambda2) {
  if (!(alpha1 > 0.0 && alpha2 > 0.0 && lambda2 > 0.0))
    throw std::invalid_argument("compare_tsd_bound: parameters must be positive");
  if (!(lambda1 > 1.0))
    throw std::invalid_argument("compare_tsd_bound: lambda1 must exceed 1");
  const double l1s = lambda1 * lambda1, l2s = lambda2 * lambda2;
  return l1s / (l1s - 1.0) *
         (std::abs(alpha1 / l1s - alpha2 / l2s) +
          2.0 * (1.0 + alpha1 / (3.0 * lambda1)) * std::abs(1.0 / l1s - 1.0 / l2s));
}

// d_{W_4}(S_p, Laplace(0,1/lambda^2)) <= rho lambda (2 lambda + 1) /
// (12 (lambda^2 - 1)) * sqrt(p), lambda > 1.
inline double laplace_geo_bound(double lambda, double rho, double p) {
  if (!(lambda > 1.0)) throw std::invalid_argument("laplace_geo_bound: lambda must exceed 1");
  if (!(rho > 0.0)) throw std::invalid_argument("laplace_geo_bound: rho must be positive");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("laplace_geo_bound: p in (0,1)");
  return rho * lambda * (2.0 * lambda + 1.0) / (12.0 * (lambda * lambda - 1.0)) * std::sqrt(p);
}

// kappa_m of G = sum l_i (N_i^2 - 1): 2^{m-1} (m-1)! sum l_i^m
// (m = 1 gives 0 by centering).
inline double chaos_cumulant(const ChaosSpec& chaos, int m) {
  validate(chaos);
  if (m < 1 || m > 6) throw std::invalid_argument("chaos_cumulant: m must be in 1..6");
  if (m == 1) return 0.0;
  double s = 0.0;
  for (double l : chaos.eigenvalues) s += std::pow(l, m);
  double fact = 1.0;
  for (int i = 2; i < m; ++i) fact *= i;
  return std::pow(2.0, m - 1) * fact * s;
}

struct SixMomentBound {
  double value = 0.0;
  double radicand = 0.0;       // kappa_6/120 - kappa_4/(3 l^2) + kappa_3^2/4 + kappa_2/l^4
  double mismatch_term = 0.0;  // (l^2/(2(l^2-1))) |2 alpha/l^2 - kappa_2|
};

// d_{W_3}(G, X) bound for X symmetric VG with parameters (alpha, lambda):
//   l^2/(3(l^2-1)) sqrt(radicand) + l^2/(2(l^2-1)) |2 alpha/l^2 - kappa_2|.
// The radicand vanishes identically when the eigenvalues are 2 alpha
// pairs of +-1/(2 lambda).
inline SixMomentBound six_moment_bound(const ChaosSpec& chaos, double alpha, double lambda) {
  if (!(lambda > 1.0)) throw std::invalid_argument("six_moment_bound: lambda must exceed 1");
  if (!(alpha > 0.0)) throw std::invalid_argument("six_moment_bound: alpha must be positive");
  const double l2 = lambda * lambda;
  const double k2 = chaos_cumulant(chaos, 2);
  const double k3 = chaos_cumulant(chaos, 3);
  const double k4 = chaos_cumulant(chaos, 4);
  const double k6 = chaos_cumulant(chaos, 6);
  SixMomentBound b;
  b.radicand = k6 / 120.0 - k4 / (3.0 * l2) + 0.25 * k3 * k3 + k2 / (l2 * l2);
  if (b.radicand < -1e-12)
    throw NumericalError("six_moment_bound: negative radicand " + std::to_string(b.radicand) +
                         "; cumulants inconsistent");
  const double rad = std::max(b.radicand, 0.0);
  b.mismatch_term = l2 / (2.0 * (l2 - 1.0)) * std::abs(2.0 * alpha / l2 - k2);
  b.value = l2 / (3.0 * (l2 - 1.0)) * std::sqrt(rad) + b.mismatch_term;
  return b;
}

// 2 alpha pairs of +-1/(2 lambda); requires 2 alpha integral.
inline ChaosSpec exact_representation_eigenvalues(double alpha, double lambda) {
  const double pairs = 2.0 * alpha;
  if (std::abs(pairs - std::round(pairs)) > 1e-12 || pairs < 1.0)
    throw std::invalid_argument(
        "exact_representation_eigenvalues: 2*alpha must be a positive integer");
  ChaosSpec c;
  const double v = 1.0 / (2.0 * lambda);
  for (int i = 0; i < int(std::round(pairs)); ++i) {
    c.eigenvalues.push_back(v);
    c.eigenvalues.push_back(-v);
  }
  return c;
}

struct RatePoint {
  double p = 0.0;
  double discrepancy = 0.0;  // r = 4 dictionary lower estimate
  double bound = 0.0;
  double stderr_ = 0.0;
  double coupling_gap = 0.0;         // mean |S_p - S_p^L|
  double coupling_gap_stderr = 0.0;  // its Monte Carlo stderr
  double coupling_expected = 0.0;    // lambda^2 rho / 6 * sqrt(p)
};

struct RateReport {
  double lambda = 0.0;
  std::string y_kind;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<RatePoint> points;
  double slope = 0.0;  // log discrepancy vs log p
  double slope_stderr = 0.0;
  double slope_ci_low = 0.0, slope_ci_high = 0.0;
};

namespace detail {

inline void fit_loglog_slope(RateReport& rep) {
  const std::size_t m = rep.points.size();
  if (m < 2) return;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& pt : rep.points) {
    const double x = std::log(pt.p), y = std::log(std::max(pt.discrepancy, 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double mb = double(m);
  const double sxx_c = sxx - sx * sx / mb;
  rep.slope = (sxy - sx * sy / mb) / sxx_c;
  const double intercept = (sy - rep.slope * sx) / mb;
  double sse = 0.0;
  for (const auto& pt : rep.points) {
    const double x = std::log(pt.p), y = std::log(std::max(pt.discrepancy, 1e-300));
    const double e = y - intercept - rep.slope * x;
    sse += e * e;
  }
  if (m > 2) {
    rep.slope_stderr = std::sqrt(sse / double(m - 2) / sxx_c);
    // two-sided 95% t quantiles for 1..8 residual degrees of freedom
    static const double tq[9] = {0, 12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306};
    const std::size_t df = std::min<std::size_t>(m - 2, 8);
    rep.slope_ci_low = rep.slope - tq[df] * rep.slope_stderr;
    rep.slope_ci_high = rep.slope + tq[df] * rep.slope_stderr;
  }
}

}  // namespace detail

// Geometric-sum convergence experiment: per p, the r = 4 dictionary
// discrepancy between S_p draws and the Laplace(0,1/lambda^2) reference,
// the closed-form bound, and the equilibrium-coupling gap.  Requires the
// two-point summand (the coupling draw is its triangular equilibrium law).
inline RateReport rate_experiment(double lambda, const YSpec& y, const std::vector<double>& p_grid,
                                  std::size_t n, std::uint64_t seed, int threads = 1) {
  if (!(lambda > 1.0)) throw std::invalid_argument("rate_experiment: lambda must exceed 1");
  for (std::size_t i = 1; i < p_grid.size(); ++i)
    if (!(p_grid[i] < p_grid[i - 1]))
      throw std::invalid_argument("rate_experiment: p grid must be strictly decreasing");
  if (y.kind != YSpec::Kind::two_point)
    throw std::invalid_argument("rate_experiment: only the two-point summand is supported");

  RateReport rep;
  rep.lambda = lambda;
  rep.y_kind = y.name();
  rep.n = n;
  rep.seed = seed;

  const double rho = y.third_abs_moment();
  const Dictionary dict = default_dictionary(4);
  const GridFunction ref = density_grid(TsdParams::laplace(lambda));

  for (double p : p_grid) {
    RatePoint pt;
    pt.p = p;
    pt.bound = laplace_geo_bound(lambda, rho, p);
    GeometricSumPair pair =
        sample_geometric_sum_pair(p, y.a, n, seed ^ std::uint64_t(p * (1 << 30)), threads);
    const Discrepancy d = smooth_discrepancy(pair.s, ref, dict);
    pt.discrepancy = d.value;
    pt.stderr_ = d.stderr_at_max;
    double s = 0.0, q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double g = std::abs(pair.s.values[i] - pair.s_equilibrium.values[i]);
      s += g;
      q += g * g;
    }
    pt.coupling_gap = s / double(n);
    pt.coupling_gap_stderr =
        std::sqrt(std::max(q / double(n) - pt.coupling_gap * pt.coupling_gap, 0.0) / double(n));
    pt.coupling_expected = lambda * lambda * rho / 6.0 * std::sqrt(p);
    rep.points.push_back(pt);
  }
  detail::fit_loglog_slope(rep);
  return rep;
}

struct ChaosReport {
  std::vector<double> eigenvalues;
  double alpha = 0.0, lambda = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  SixMomentBound bound;
  double discrepancy = 0.0;  // r = 3 dictionary vs symmetric VG reference
  double stderr_ = 0.0;
  double w1_vs_reference = 0.0;
  std::vector<double> cumulants;  // kappa_1..kappa_6 from the closed form
};

// Second-chaos experiment: dictionary discrepancy between draws of
// G = sum l_i (N_i^2 - 1) and the symmetric VG law TSD(a,0,l;a,0,l),
// against the six-moment bound.
inline ChaosReport vg_chaos_experiment(const ChaosSpec& chaos, double alpha, double lambda,
                                       std::size_t n, std::uint64_t seed, int threads = 1) {
  validate(chaos);
  ChaosReport rep;
  rep.eigenvalues = chaos.eigenvalues;
  rep.alpha = alpha;
  rep.lambda = lambda;
  rep.n = n;
  rep.seed = seed;
  rep.bound = six_moment_bound(chaos, alpha, lambda);
  for (int m = 1; m <= 6; ++m) rep.cumulants.push_back(chaos_cumulant(chaos, m));

  const SampleSet g = sample_second_chaos(chaos, n, seed, threads);
  const GridFunction ref = density_grid(TsdParams::symmetric_vg(alpha, lambda));
  const Dictionary dict = default_dictionary(3);
  const Discrepancy d = smooth_discrepancy(g, ref, dict);
  rep.discrepancy = d.value;
  rep.stderr_ = d.stderr_at_max;
  rep.w1_vs_reference = wasserstein1_vs_reference(g, CdfGrid(ref));
  return rep;
}

}  // namespace tstein
