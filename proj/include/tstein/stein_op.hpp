// The TSD Stein operator A f(x) = -x f(x) + int f(x+u) u nu(du) and the
// derived Monte Carlo identity residuals.
//
// The jump integral uses the size-weighted measure u nu(du); with the
// change of variable v = lambda u each side reduces to a generalized
// Gauss-Laguerre rule with weight v^{-beta} e^{-v}:
//   int_0^inf f(x+u) u^{-beta} e^{-lambda u} du
//     = lambda^{beta-1} sum_i w_i f(x + v_i/lambda).
#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <thread>
#include <vector>

#include "tstein/errors.hpp"
#include "tstein/levy_cf.hpp"
#include "tstein/params.hpp"
#include "tstein/quadrature.hpp"
#include "tstein/sampling.hpp"
#include "tstein/test_function.hpp"

namespace tstein {

class SteinOperatorSpec {
 public:
  explicit SteinOperatorSpec(TsdParams params, int nodes = 64)
      : params_(validate(params)), nodes_(nodes) {
    if (nodes < 16) throw std::invalid_argument("SteinOperatorSpec: nodes must be >= 16");
    if (params_.plus) plus_rule_ = gauss_laguerre_generalized(nodes, -params_.plus->beta);
    if (params_.minus) minus_rule_ = gauss_laguerre_generalized(nodes, -params_.minus->beta);
  }

  const TsdParams& params() const { return params_; }
  int nodes() const { return nodes_; }

  template <class F>
  double apply(F&& f, double x) const {
    return -x * f(x) + jump_integral(f, x, plus_rule_, minus_rule_);
  }

  // Same value from a rule with twice the nodes, for error estimates.
  template <class F>
  double apply_refined(F&& f, double x) const {
    ensure_refined();
    return -x * f(x) + jump_integral(f, x, plus_refined_, minus_refined_);
  }

 private:
  template <class F>
  double jump_integral(F&& f, double x, const std::optional<QuadratureRule>& plus,
                       const std::optional<QuadratureRule>& minus) const {
    double s = 0.0;
    if (plus) {
      const TsdSide& side = *params_.plus;
      const double scale = side.alpha * std::pow(side.lambda, side.beta - 1.0);
      double acc = 0.0;
      for (std::size_t i = 0; i < plus->size(); ++i)
        acc += plus->weights[i] * f(x + plus->nodes[i] / side.lambda);
      s += scale * acc;
    }
    if (minus) {
      const TsdSide& side = *params_.minus;
      const double scale = side.alpha * std::pow(side.lambda, side.beta - 1.0);
      double acc = 0.0;
      for (std::size_t i = 0; i < minus->size(); ++i)
        acc += minus->weights[i] * f(x - minus->nodes[i] / side.lambda);
      s -= scale * acc;
    }
    return s;
  }

  void ensure_refined() const {
    if (params_.plus && !plus_refined_)
      plus_refined_ = gauss_laguerre_generalized(2 * nodes_, -params_.plus->beta);
    if (params_.minus && !minus_refined_)
      minus_refined_ = gauss_laguerre_generalized(2 * nodes_, -params_.minus->beta);
  }

  TsdParams params_;
  int nodes_;
  std::optional<QuadratureRule> plus_rule_, minus_rule_;
  mutable std::optional<QuadratureRule> plus_refined_, minus_refined_;
};

template <class F>
double stein_apply(const SteinOperatorSpec& spec, F&& f, double x) {
  return spec.apply(std::forward<F>(f), x);
}

struct CheckedValue {
  double value = 0.0;
  double error_estimate = 0.0;
};

// Node-doubling error estimate; throws on non-convergence.
template <class F>
CheckedValue stein_apply_checked(const SteinOperatorSpec& spec, F&& f, double x) {
  const double coarse = spec.apply(f, x);
  const double fine = spec.apply_refined(f, x);
  const double err = std::abs(fine - coarse);
  if (err > 1e-5)
    throw NumericalError("stein_apply: node doubling changed the value by " +
                         std::to_string(err));
  return {fine, err};
}

struct ResidualEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::size_t n = 0;

  bool consistent_with_zero(double k = 4.0) const {
    return std::abs(estimate) <= k * stderr_;
  }
};

namespace detail {

// Deterministic chunked mean/stderr independent of the thread count:
// per-chunk partial sums are combined in chunk order.
template <class Term>
ResidualEstimate chunked_mean(std::size_t n, int threads, Term&& term) {
  const std::size_t chunk = kChunk;
  const std::size_t chunks = (n + chunk - 1) / chunk;
  std::vector<double> sums(chunks, 0.0), sqs(chunks, 0.0);
  const auto worker = [&](std::size_t first) {
    for (std::size_t c = first; c < chunks; c += std::size_t(std::max(threads, 1))) {
      const std::size_t begin = c * chunk;
      const std::size_t end = std::min(begin + chunk, n);
      double s = 0.0, q = 0.0;
      for (std::size_t i = begin; i < end; ++i) {
        const double v = term(i);
        s += v;
        q += v * v;
      }
      sums[c] = s;
      sqs[c] = q;
    }
  };
  if (threads <= 1 || chunks <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, std::size_t(t));
    for (auto& th : pool) th.join();
  }
  double s = 0.0, q = 0.0;
  for (std::size_t c = 0; c < chunks; ++c) {
    s += sums[c];
    q += sqs[c];
  }
  ResidualEstimate r;
  r.n = n;
  r.estimate = s / double(n);
  const double var = std::max(q / double(n) - r.estimate * r.estimate, 0.0);
  r.stderr_ = std::sqrt(var / double(n));
  return r;
}

}  // namespace detail

// Monte Carlo mean of A f over the samples.
template <class F>
ResidualEstimate identity_residual(const SteinOperatorSpec& spec, const SampleSet& samples,
                                   F&& f, int threads = 1) {
  const double* xs = samples.values.data();
  return detail::chunked_mean(samples.size(), threads,
                              [&](std::size_t i) { return spec.apply(f, xs[i]); });
}

// E X f(X) - EX E[f(X) + (1/lambda) f'(X+Y)] with paired Exp(lambda)
// draws Y; zero in expectation iff X is Gamma(alpha, lambda).
inline ResidualEstimate gamma_identity_residual(double alpha, double lambda,
                                                const SampleSet& xs, const SampleSet& ys,
                                                const SmoothFn& f, int threads = 1) {
  if (xs.size() != ys.size())
    throw std::invalid_argument("gamma_identity_residual: paired sample sets must match");
  const double ex = alpha / lambda;
  const double* x = xs.values.data();
  const double* y = ys.values.data();
  return detail::chunked_mean(xs.size(), threads, [&, ex, lambda](std::size_t i) {
    return x[i] * f.f(x[i]) - ex * (f.f(x[i]) + f.df(x[i] + y[i]) / lambda);
  });
}

// E[sigma^2 X f''(X) + (sigma^2 r + 2 theta X) f'(X) + (r theta - X) f(X)].
inline ResidualEstimate vg_identity_residual(double sigma2, double r, double theta,
                                             const SampleSet& xs, const SmoothFn& f,
                                             int threads = 1) {
  const double* x = xs.values.data();
  return detail::chunked_mean(xs.size(), threads, [&, sigma2, r, theta](std::size_t i) {
    const double v = x[i];
    return sigma2 * v * f.d2f(v) + (sigma2 * r + 2.0 * theta * v) * f.df(v) +
           (r * theta - v) * f.f(v);
  });
}

// mean Y f(Y) - (1/lambda^2) mean[Y^L f''(Y^L) + 2 f'(Y^L)]; for Laplace
// samples the equilibrium law is the law itself (fixed point).
inline ResidualEstimate laplace_equilibrium_residual(double lambda, const SampleSet& ys,
                                                     const SampleSet& yls, const SmoothFn& f,
                                                     int threads = 1) {
  const double* y = ys.values.data();
  const double* yl = yls.values.data();
  const auto lhs = detail::chunked_mean(ys.size(), threads,
                                        [&](std::size_t i) { return y[i] * f.f(y[i]); });
  const auto rhs = detail::chunked_mean(yls.size(), threads, [&, lambda](std::size_t i) {
    return (yl[i] * f.d2f(yl[i]) + 2.0 * f.df(yl[i])) / (lambda * lambda);
  });
  ResidualEstimate r;
  r.n = ys.size();
  r.estimate = lhs.estimate - rhs.estimate;
  r.stderr_ = std::sqrt(lhs.stderr_ * lhs.stderr_ + rhs.stderr_ * rhs.stderr_);
  return r;
}

}  // namespace tstein
