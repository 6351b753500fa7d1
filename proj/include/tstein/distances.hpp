// Empirical Wasserstein-1 and the dictionary lower estimate of the
// smooth Wasserstein-type distance sup_{h in H_r} |E h(Y) - E h(Z)|.
// The dictionary maximum is a lower bound by construction; the paper's
// theorems give upper bounds, so a valid check is lower <= bound.
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "tstein/density.hpp"
#include "tstein/grid_function.hpp"
#include "tstein/sampling.hpp"
#include "tstein/test_function.hpp"

namespace tstein {

namespace detail {

inline std::vector<double> sorted_values(const SampleSet& s) {
  std::vector<double> v = s.values;
  std::sort(v.begin(), v.end());
  return v;
}

// Deterministic down-sampling of a sorted sequence to m values.
inline std::vector<double> strided_subsample(const std::vector<double>& sorted, std::size_t m) {
  std::vector<double> out(m);
  const double step = double(sorted.size()) / double(m);
  for (std::size_t i = 0; i < m; ++i)
    out[i] = sorted[std::size_t((double(i) + 0.5) * step)];
  return out;
}

}  // namespace detail

// Mean absolute difference of sorted sequences; the larger sample is
// down-sampled deterministically if the sizes differ.
inline double wasserstein1(const SampleSet& xs, const SampleSet& ys) {
  if (xs.size() == 0 || ys.size() == 0)
    throw std::invalid_argument("wasserstein1: empty sample set");
  std::vector<double> a = detail::sorted_values(xs);
  std::vector<double> b = detail::sorted_values(ys);
  if (a.size() > b.size()) a = detail::strided_subsample(a, b.size());
  if (b.size() > a.size()) b = detail::strided_subsample(b, a.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s / double(a.size());
}

// int |F_n(x) - F(x)| dx over the sample span padded by eight sample
// standard deviations, trapezoid on 4096 points.
template <class Cdf>
double wasserstein1_vs_reference(const SampleSet& xs, Cdf&& cdf) {
  if (xs.size() == 0) throw std::invalid_argument("wasserstein1_vs_reference: empty sample set");
  const std::vector<double> sorted = detail::sorted_values(xs);
  const double sd = std::sqrt(xs.variance());
  const double lo = sorted.front() - 8.0 * sd;
  const double hi = sorted.back() + 8.0 * sd;
  const std::size_t n = 4096;
  const double dx = (hi - lo) / double(n - 1);
  const double inv = 1.0 / double(sorted.size());
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = lo + dx * double(i);
    const std::size_t rank =
        std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
    const double diff = std::abs(double(rank) * inv - cdf(x));
    s += (i == 0 || i + 1 == n) ? 0.5 * diff : diff;
  }
  return s * dx;
}

// Kolmogorov-Smirnov statistic against a reference CDF.
template <class Cdf>
double kolmogorov_distance(const SampleSet& xs, Cdf&& cdf) {
  const std::vector<double> sorted = detail::sorted_values(xs);
  const double inv = 1.0 / double(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double F = cdf(sorted[i]);
    d = std::max(d, std::max(double(i + 1) * inv - F, F - double(i) * inv));
  }
  return d;
}

struct EntryStat {
  std::string name;
  double mean_difference = 0.0;
  double stderr_ = 0.0;
};

struct Discrepancy {
  double value = 0.0;          // max over entries of |mean difference|
  double stderr_at_max = 0.0;  // Monte Carlo stderr of the maximizing entry
  std::vector<EntryStat> entries;
};

namespace detail {

struct MeanVar {
  double mean = 0.0, se2 = 0.0;  // mean and squared standard error
};

inline MeanVar sample_h_mean(const SampleSet& s, const TestFunction& h) {
  double acc = 0.0, acc2 = 0.0;
  for (double v : s.values) {
    const double hv = h(v);
    acc += hv;
    acc2 += hv * hv;
  }
  const double n = double(s.size());
  MeanVar mv;
  mv.mean = acc / n;
  mv.se2 = std::max(acc2 / n - mv.mean * mv.mean, 0.0) / n;
  return mv;
}

template <class RefMean>
Discrepancy discrepancy_impl(const SampleSet& xs, RefMean&& ref, const Dictionary& dict) {
  Discrepancy d;
  for (const TestFunction& h : dict.entries) {
    const MeanVar a = sample_h_mean(xs, h);
    const MeanVar b = ref(h);
    EntryStat e;
    e.name = h.name();
    e.mean_difference = a.mean - b.mean;
    e.stderr_ = std::sqrt(a.se2 + b.se2);
    if (std::abs(e.mean_difference) > d.value) {
      d.value = std::abs(e.mean_difference);
      d.stderr_at_max = e.stderr_;
    }
    d.entries.push_back(std::move(e));
  }
  return d;
}

}  // namespace detail

// Two-sample dictionary lower estimate of d_{W_r}.
inline Discrepancy smooth_discrepancy(const SampleSet& xs, const SampleSet& ys,
                                      const Dictionary& dict) {
  return detail::discrepancy_impl(
      xs, [&](const TestFunction& h) { return detail::sample_h_mean(ys, h); }, dict);
}

// Sample-vs-reference variant: E_ref h from a density grid (quadrature,
// no Monte Carlo error on the reference side).
inline Discrepancy smooth_discrepancy(const SampleSet& xs, const GridFunction& ref_density,
                                      const Dictionary& dict) {
  return detail::discrepancy_impl(
      xs,
      [&](const TestFunction& h) {
        detail::MeanVar mv;
        mv.mean = expectation(ref_density, [&h](double x) { return h(x); }).value;
        return mv;
      },
      dict);
}

}  // namespace tstein
