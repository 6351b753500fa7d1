// Exact and rejection samplers for everything the experiments need.
//
// Determinism contract: output depends only on (spec, seed).  Draws are
// produced in chunks of 2^16, one stream per chunk, each stream a pure
// function of (seed, salt, chunk index); worker threads split chunks, so
// any thread count yields the single-threaded output.
#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "tstein/errors.hpp"
#include "tstein/params.hpp"
#include "tstein/rng.hpp"

namespace tstein {

struct SampleSet {
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::string spec;
  // Rejection diagnostics (1.0 for exact samplers).
  double acceptance_rate = 1.0;

  std::size_t size() const { return values.size(); }

  double mean() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s / double(values.size());
  }
  double variance() const {
    const double m = mean();
    double s = 0.0;
    for (double v : values) s += (v - m) * (v - m);
    return s / double(values.size() - 1);
  }
};

// Eigenvalues (l_1,...,l_d) of a finite-rank quadratic functional
// G = sum l_i (N_i^2 - 1) of i.i.d. standard normals.
struct ChaosSpec {
  std::vector<double> eigenvalues;
};

inline const ChaosSpec& validate(const ChaosSpec& c) {
  if (c.eigenvalues.empty()) throw std::invalid_argument("ChaosSpec: eigenvalues must be nonempty");
  bool nonzero = false;
  for (double l : c.eigenvalues) nonzero = nonzero || l != 0.0;
  if (!nonzero) throw std::invalid_argument("ChaosSpec: at least one eigenvalue must be nonzero");
  return c;
}

namespace detail {

constexpr std::size_t kChunk = std::size_t(1) << 16;

// Fills out[] chunk by chunk; fill(stream, ptr, count) draws `count`
// consecutive values from one stream.
template <class Fill>
void run_chunked(std::uint64_t seed, std::uint64_t salt, std::vector<double>& out,
                 int threads, Fill&& fill) {
  const std::size_t n = out.size();
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  const auto worker = [&](std::size_t first) {
    for (std::size_t c = first; c < chunks; c += std::size_t(std::max(threads, 1))) {
      RngStream stream(seed, salt, c);
      const std::size_t begin = c * kChunk;
      const std::size_t count = std::min(kChunk, n - begin);
      fill(stream, out.data() + begin, count);
    }
  };
  if (threads <= 1 || chunks <= 1) {
    worker(0);
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker, std::size_t(t));
  for (auto& th : pool) th.join();
}

inline double gamma_draw(RngStream& rng, double alpha) {
  // Marsaglia-Tsang; for alpha < 1 boost via G(alpha+1) * U^{1/alpha}.
  double boost = 1.0;
  double a = alpha;
  if (a < 1.0) {
    boost = std::pow(rng.uniform(), 1.0 / a);
    a += 1.0;
  }
  const double d = a - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return boost * d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return boost * d * v;
  }
}

// One-sided tempered stable draw for beta in (0,1): a positive stable
// proposal (Kanter's two-uniform representation, Laplace exponent
// c s^beta with c = -alpha Gamma(-beta)) accepted with probability
// e^{-lambda S}.  The tilt's normalizer cancels, so acceptance is exact.
struct TiltedStableSampler {
  double beta, lambda, scale;
  std::uint64_t accepted = 0, proposed = 0;

  TiltedStableSampler(double alpha, double beta_, double lambda_)
      : beta(beta_), lambda(lambda_) {
    const double c = -alpha * std::tgamma(-beta_);
    scale = std::pow(c, 1.0 / beta_);
  }

  double operator()(RngStream& rng) {
    const double b = beta;
    for (std::uint64_t stall = 0; stall < 1000000; ++stall) {
      ++proposed;
      const double theta = M_PI * rng.uniform();
      const double e = rng.exponential();
      const double a = std::pow(std::sin(b * theta), b / (1.0 - b)) *
                       std::sin((1.0 - b) * theta) /
                       std::pow(std::sin(theta), 1.0 / (1.0 - b));
      const double s = scale * std::pow(a / e, (1.0 - b) / b);
      if (std::log(rng.uniform()) <= -lambda * s) {
        ++accepted;
        return s;
      }
    }
    throw NumericalError("tempered stable sampler: 1e6 consecutive rejections");
  }
};

inline std::string tsd_spec_string(const TsdParams& p) {
  std::ostringstream os;
  os << "tsd(";
  if (p.plus) os << p.plus->alpha << "," << p.plus->beta << "," << p.plus->lambda;
  else os << "absent";
  os << ";";
  if (p.minus) os << p.minus->alpha << "," << p.minus->beta << "," << p.minus->lambda;
  else os << "absent";
  os << ")";
  return os.str();
}

}  // namespace detail

inline SampleSet sample_gamma(double alpha, double lambda, std::size_t n, std::uint64_t seed,
                              int threads = 1) {
  if (!(alpha > 0.0 && lambda > 0.0))
    throw std::invalid_argument("sample_gamma: alpha and lambda must be positive");
  SampleSet out;
  out.seed = seed;
  {
    std::ostringstream os;
    os << "gamma(alpha=" << alpha << ",lambda=" << lambda << ")|marsaglia-tsang";
    out.spec = os.str();
  }
  out.values.resize(n);
  detail::run_chunked(seed, 0x67616d6dULL, out.values, threads,
                      [alpha, lambda](RngStream& rng, double* p, std::size_t m) {
                        for (std::size_t i = 0; i < m; ++i)
                          p[i] = detail::gamma_draw(rng, alpha) / lambda;
                      });
  return out;
}

inline SampleSet sample_exponential(double lambda, std::size_t n, std::uint64_t seed,
                                    int threads = 1) {
  if (!(lambda > 0.0)) throw std::invalid_argument("sample_exponential: lambda must be positive");
  SampleSet out;
  out.seed = seed;
  out.spec = "exponential(lambda=" + std::to_string(lambda) + ")|inverse-cdf";
  out.values.resize(n);
  detail::run_chunked(seed, 0x65787020ULL, out.values, threads,
                      [lambda](RngStream& rng, double* p, std::size_t m) {
                        for (std::size_t i = 0; i < m; ++i) p[i] = rng.exponential(lambda);
                      });
  return out;
}

inline SampleSet sample_normal(double sigma, std::size_t n, std::uint64_t seed, int threads = 1) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sample_normal: sigma must be positive");
  SampleSet out;
  out.seed = seed;
  out.spec = "normal(0," + std::to_string(sigma) + "^2)|polar";
  out.values.resize(n);
  detail::run_chunked(seed, 0x6e6f726dULL, out.values, threads,
                      [sigma](RngStream& rng, double* p, std::size_t m) {
                        for (std::size_t i = 0; i < m; ++i) p[i] = sigma * rng.normal();
                      });
  return out;
}

// Product of two independent standard normals, scaled by sx*sy.
inline SampleSet sample_product_normal(double sx, double sy, std::size_t n, std::uint64_t seed,
                                       int threads = 1) {
  SampleSet out;
  out.seed = seed;
  out.spec = "product-normal(" + std::to_string(sx) + "," + std::to_string(sy) + ")";
  out.values.resize(n);
  detail::run_chunked(seed, 0x70726f64ULL, out.values, threads,
                      [sx, sy](RngStream& rng, double* p, std::size_t m) {
                        for (std::size_t i = 0; i < m; ++i)
                          p[i] = sx * rng.normal() * sy * rng.normal();
                      });
  return out;
}

// X = X+ - X- with independent one-sided parts; gamma draws when the
// side's beta is 0, tilted-stable rejection otherwise.
inline SampleSet sample_tsd(const TsdParams& params, std::size_t n, std::uint64_t seed,
                            int threads = 1) {
  validate(params);
  SampleSet out;
  out.seed = seed;
  out.spec = detail::tsd_spec_string(params) + "|sides:gamma/tilt-reject";
  out.values.resize(n);
  std::atomic<std::uint64_t> accepted{0}, proposed{0};
  const TsdParams p = params;
  detail::run_chunked(
      seed, 0x74736420ULL, out.values, threads,
      [&p, &accepted, &proposed](RngStream& rng, double* outp, std::size_t m) {
        std::optional<detail::TiltedStableSampler> plus_ts, minus_ts;
        if (p.plus && p.plus->beta != 0.0)
          plus_ts.emplace(p.plus->alpha, p.plus->beta, p.plus->lambda);
        if (p.minus && p.minus->beta != 0.0)
          minus_ts.emplace(p.minus->alpha, p.minus->beta, p.minus->lambda);
        for (std::size_t i = 0; i < m; ++i) {
          double x = 0.0;
          if (p.plus) {
            x += p.plus->beta == 0.0 ? detail::gamma_draw(rng, p.plus->alpha) / p.plus->lambda
                                     : (*plus_ts)(rng);
          }
          if (p.minus) {
            x -= p.minus->beta == 0.0 ? detail::gamma_draw(rng, p.minus->alpha) / p.minus->lambda
                                      : (*minus_ts)(rng);
          }
          outp[i] = x;
        }
        if (plus_ts) {
          accepted += plus_ts->accepted;
          proposed += plus_ts->proposed;
        }
        if (minus_ts) {
          accepted += minus_ts->accepted;
          proposed += minus_ts->proposed;
        }
      });
  if (proposed > 0) out.acceptance_rate = double(accepted) / double(proposed);
  return out;
}

// Centered summand for geometric sums: mean 0, finite variance.
struct YSpec {
  enum class Kind { two_point, uniform, laplace } kind = Kind::two_point;
  double a = 1.0;  // +-a, [-a,a], or Laplace scale a

  double variance() const {
    switch (kind) {
      case Kind::two_point: return a * a;
      case Kind::uniform: return a * a / 3.0;
      case Kind::laplace: return 2.0 * a * a;
    }
    return 0.0;
  }
  // rho = E|Y|^3
  double third_abs_moment() const {
    switch (kind) {
      case Kind::two_point: return a * a * a;
      case Kind::uniform: return a * a * a / 4.0;
      case Kind::laplace: return 6.0 * a * a * a;
    }
    return 0.0;
  }
  const char* name() const {
    switch (kind) {
      case Kind::two_point: return "two-point";
      case Kind::uniform: return "uniform";
      case Kind::laplace: return "laplace";
    }
    return "?";
  }
};

namespace detail {

inline double y_draw(RngStream& rng, const YSpec& y) {
  switch (y.kind) {
    case YSpec::Kind::two_point:
      return rng.uniform() < 0.5 ? -y.a : y.a;
    case YSpec::Kind::uniform:
      return y.a * (2.0 * rng.uniform() - 1.0);
    case YSpec::Kind::laplace: {
      const double u = 2.0 * rng.uniform() - 1.0;
      return u < 0.0 ? y.a * std::log1p(u) : -y.a * std::log1p(-u);
    }
  }
  return 0.0;
}

// Geo(p) on {0,1,2,...}: P(N=k) = p(1-p)^k.
inline std::uint64_t geometric_draw(RngStream& rng, double p) {
  return std::uint64_t(std::log(rng.uniform()) / std::log1p(-p));
}

// Triangular density (a-|u|)/a^2 on [-a,a] by inverse CDF.
inline double equilibrium_two_point_draw(RngStream& rng, double a) {
  const double u = rng.uniform();
  return u < 0.5 ? -a + a * std::sqrt(2.0 * u) : a - a * std::sqrt(2.0 * (1.0 - u));
}

}  // namespace detail

// S_p = sqrt(p) * sum_{k=1}^{N_p} Y_k, N_p ~ Geo(p) starting at 0.
inline SampleSet sample_geometric_sum(double p, const YSpec& y, std::size_t n,
                                      std::uint64_t seed, int threads = 1) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("sample_geometric_sum: p in (0,1)");
  SampleSet out;
  out.seed = seed;
  out.spec = "geo-sum(p=" + std::to_string(p) + ",y=" + y.name() + ")";
  out.values.resize(n);
  detail::run_chunked(seed, 0x67656f73ULL, out.values, threads,
                      [p, y](RngStream& rng, double* outp, std::size_t m) {
                        const double sp = std::sqrt(p);
                        for (std::size_t i = 0; i < m; ++i) {
                          const std::uint64_t N = detail::geometric_draw(rng, p);
                          double s = 0.0;
                          for (std::uint64_t k = 0; k < N; ++k) s += detail::y_draw(rng, y);
                          outp[i] = sp * s;
                        }
                      });
  return out;
}

// G = sum l_i (N_i^2 - 1).
inline SampleSet sample_second_chaos(const ChaosSpec& chaos, std::size_t n, std::uint64_t seed,
                                     int threads = 1) {
  validate(chaos);
  SampleSet out;
  out.seed = seed;
  {
    std::ostringstream os;
    os << "second-chaos(";
    for (std::size_t i = 0; i < chaos.eigenvalues.size(); ++i)
      os << (i ? "," : "") << chaos.eigenvalues[i];
    os << ")";
    out.spec = os.str();
  }
  out.values.resize(n);
  const std::vector<double> ev = chaos.eigenvalues;
  detail::run_chunked(seed, 0x63686173ULL, out.values, threads,
                      [&ev](RngStream& rng, double* outp, std::size_t m) {
                        for (std::size_t i = 0; i < m; ++i) {
                          double g = 0.0;
                          for (double l : ev) {
                            const double z = rng.normal();
                            g += l * (z * z - 1.0);
                          }
                          outp[i] = g;
                        }
                      });
  return out;
}

// Centered equilibrium law of the symmetric two-point +-a variable:
// triangular density (a-|u|)/a^2 on [-a,a].
inline SampleSet sample_equilibrium_two_point(double a, std::size_t n, std::uint64_t seed,
                                              int threads = 1) {
  if (!(a > 0.0)) throw std::invalid_argument("sample_equilibrium_two_point: a must be positive");
  SampleSet out;
  out.seed = seed;
  out.spec = "equilibrium-two-point(a=" + std::to_string(a) + ")|inverse-cdf";
  out.values.resize(n);
  detail::run_chunked(seed, 0x65717562ULL, out.values, threads,
                      [a](RngStream& rng, double* outp, std::size_t m) {
                        for (std::size_t i = 0; i < m; ++i)
                          outp[i] = detail::equilibrium_two_point_draw(rng, a);
                      });
  return out;
}

// Coupled pair (S_p, S_p^L) with S_p^L = sqrt(p)(sum_{k<=N_p} Y_k + Y^L),
// sharing the geometric count and the summands.  Two-point Y only.
struct GeometricSumPair {
  SampleSet s;
  SampleSet s_equilibrium;
};

inline GeometricSumPair sample_geometric_sum_pair(double p, double a, std::size_t n,
                                                  std::uint64_t seed, int threads = 1) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("sample_geometric_sum_pair: p in (0,1)");
  GeometricSumPair out;
  out.s.seed = out.s_equilibrium.seed = seed;
  out.s.spec = "geo-sum-pair(p=" + std::to_string(p) + ",a=" + std::to_string(a) + ")|S";
  out.s_equilibrium.spec =
      "geo-sum-pair(p=" + std::to_string(p) + ",a=" + std::to_string(a) + ")|S^L";
  out.s.values.resize(n);
  out.s_equilibrium.values.resize(n);
  double* s2 = out.s_equilibrium.values.data();
  const double* base = out.s.values.data();
  detail::run_chunked(seed, 0x67656f70ULL, out.s.values, threads,
                      [p, a, s2, base](RngStream& rng, double* outp, std::size_t m) {
                        const double sp = std::sqrt(p);
                        const std::size_t off = std::size_t(outp - base);
                        for (std::size_t i = 0; i < m; ++i) {
                          const std::uint64_t N = detail::geometric_draw(rng, p);
                          double s = 0.0;
                          for (std::uint64_t k = 0; k < N; ++k)
                            s += rng.uniform() < 0.5 ? -a : a;
                          const double yl = detail::equilibrium_two_point_draw(rng, a);
                          outp[i] = sp * s;
                          s2[off + i] = sp * (s + yl);
                        }
                      });
  return out;
}

}  // namespace tstein
