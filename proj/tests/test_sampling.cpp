#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "tstein/density.hpp"
#include "tstein/distances.hpp"
#include "tstein/levy_cf.hpp"
#include "tstein/sampling.hpp"

using namespace tstein;

namespace {
constexpr std::uint64_t kSeed = 0xC0FFEE;

double skewness(const SampleSet& s) {
  const double m = s.mean();
  double s2 = 0.0, s3 = 0.0;
  for (double v : s.values) {
    const double d = v - m;
    s2 += d * d;
    s3 += d * d * d;
  }
  s2 /= double(s.size());
  s3 /= double(s.size());
  return s3 / std::pow(s2, 1.5);
}
}  // namespace

TEST_CASE("identical (spec, seed) gives identical sequences") {
  const SampleSet a = sample_gamma(2.0, 1.0, 5000, kSeed);
  const SampleSet b = sample_gamma(2.0, 1.0, 5000, kSeed);
  REQUIRE(a.values == b.values);
  const SampleSet c = sample_gamma(2.0, 1.0, 5000, kSeed + 1);
  REQUIRE(a.values != c.values);
}

TEST_CASE("thread count does not change the draws") {
  const SampleSet a = sample_tsd(TsdParams::laplace(1.0), 300000, kSeed, 1);
  const SampleSet b = sample_tsd(TsdParams::laplace(1.0), 300000, kSeed, 2);
  REQUIRE(a.values == b.values);
  const SampleSet c = sample_gamma(1.5, 2.0, 200000, kSeed, 3);
  const SampleSet d = sample_gamma(1.5, 2.0, 200000, kSeed, 1);
  REQUIRE(c.values == d.values);
}

TEST_CASE("gamma sampler matches the first two cumulants") {
  const std::size_t n = 1000000;
  const SampleSet s = sample_gamma(2.0, 1.0, n, kSeed);
  const double se_mean = std::sqrt(2.0 / double(n));
  REQUIRE(std::abs(s.mean() - 2.0) <= 5.0 * se_mean);

  const SampleSet e = sample_exponential(3.0, 100000, kSeed);
  REQUIRE(std::abs(e.mean() - 1.0 / 3.0) <= 5.0 * (1.0 / 3.0) / std::sqrt(100000.0));

  const SampleSet small = sample_gamma(0.4, 2.0, 200000, kSeed);
  REQUIRE(std::abs(small.mean() - 0.2) <=
          5.0 * std::sqrt(0.4 / 4.0 / 200000.0));
}

TEST_CASE("tsd sampler: laplace variance and skewness") {
  const std::size_t n = 100000;
  const SampleSet s = sample_tsd(TsdParams::laplace(1.0), n, kSeed);
  // kappa_2 = 2, kappa_4 = 12: sd of the sample variance ~ sqrt((k4+2k2^2)/n)
  const double se_var = std::sqrt((12.0 + 2.0 * 4.0) / double(n));
  REQUIRE(std::abs(s.variance() - 2.0) <= 5.0 * se_var);
  REQUIRE(std::abs(skewness(s)) <= 5.0 * std::sqrt(6.0 / double(n)) * 3.0);
}

TEST_CASE("one-sided tempered stable mean matches kappa_1") {
  const TsdParams p = TsdParams::positive(1.0, 0.5, 2.0);
  const std::size_t n = 100000;
  const SampleSet s = sample_tsd(p, n, kSeed);
  const double k1 = cumulant(p, 1), k2 = cumulant(p, 2);
  REQUIRE(std::abs(s.mean() - k1) <= 5.0 * std::sqrt(k2 / double(n)));
  REQUIRE(s.acceptance_rate > 1e-4);
  // exact acceptance probability of the exponential tilt is e^{-c lambda^beta}
  const double expected_rate = std::exp(-(-std::tgamma(-0.5)) * std::sqrt(2.0));
  REQUIRE(std::abs(s.acceptance_rate - expected_rate) <= 0.1 * expected_rate);
}

TEST_CASE("kolmogorov distance between tsd draws and the inversion cdf") {
  const TsdParams p = TsdParams::laplace(1.0);
  const SampleSet s = sample_tsd(p, 100000, kSeed);
  const CdfGrid cdf = make_cdf(p);
  REQUIRE(kolmogorov_distance(s, cdf) <= 0.01);
}

TEST_CASE("geometric sums obey the Wald variance identity") {
  // Var(S_p) = (1-p) Var(Y)
  const std::size_t n = 200000;
  for (double p : {0.5, 0.1, 0.01}) {
    const YSpec y{YSpec::Kind::two_point, 1.0};
    const SampleSet s = sample_geometric_sum(p, y, n, kSeed);
    const double target = (1.0 - p) * y.variance();
    // rough fourth-moment stderr for the sample variance
    double m = s.mean(), s4 = 0.0;
    for (double v : s.values) s4 += std::pow(v - m, 4);
    s4 /= double(n);
    const double se = std::sqrt(std::max(s4 - target * target, 0.0) / double(n));
    REQUIRE(std::abs(s.variance() - target) <= 5.0 * se);
  }
}

TEST_CASE("geometric sum at p near 1 is mostly zero") {
  const SampleSet s = sample_geometric_sum(0.999, YSpec{YSpec::Kind::two_point, 1.0}, 50000, kSeed);
  std::size_t zeros = 0;
  for (double v : s.values) zeros += v == 0.0;
  REQUIRE(double(zeros) / double(s.size()) >= 0.99);
}

TEST_CASE("geometric sum determinism across uniform and laplace summands") {
  for (auto kind : {YSpec::Kind::uniform, YSpec::Kind::laplace}) {
    const YSpec y{kind, 0.7};
    const SampleSet a = sample_geometric_sum(0.05, y, 20000, kSeed);
    const SampleSet b = sample_geometric_sum(0.05, y, 20000, kSeed);
    REQUIRE(a.values == b.values);
    REQUIRE(std::abs(a.mean()) <= 5.0 * std::sqrt(a.variance() / 20000.0));
  }
}

TEST_CASE("second chaos: single eigenvalue is a centered chi-square") {
  const SampleSet s = sample_second_chaos(ChaosSpec{{1.0}}, 100000, kSeed);
  REQUIRE(std::abs(s.mean()) <= 5.0 * std::sqrt(2.0 / 100000.0));
  REQUIRE(std::abs(s.variance() - 2.0) <= 5.0 * std::sqrt(60.0 / 100000.0));
}

TEST_CASE("second chaos (c,-c) equals a scaled product of normals") {
  // c (N1^2 - N2^2) = 2c Z1 Z2 in law
  const double c = 0.5;
  const SampleSet g = sample_second_chaos(ChaosSpec{{c, -c}}, 100000, kSeed);
  const SampleSet prod = sample_product_normal(1.0, 1.0, 100000, kSeed + 9);
  SampleSet scaled = prod;
  for (double& v : scaled.values) v *= 2.0 * c;
  REQUIRE(wasserstein1(g, scaled) <= 0.02);
}

TEST_CASE("second chaos (1/2,-1/2,1/2,-1/2) is Laplace(0,1)") {
  const SampleSet g =
      sample_second_chaos(ChaosSpec{{0.5, -0.5, 0.5, -0.5}}, 100000, kSeed);
  const auto laplace_cdf = [](double x) {
    return x < 0.0 ? 0.5 * std::exp(x) : 1.0 - 0.5 * std::exp(-x);
  };
  REQUIRE(kolmogorov_distance(g, laplace_cdf) <= 0.01);
}

TEST_CASE("chaos spec validation") {
  REQUIRE_THROWS(validate(ChaosSpec{{}}));
  REQUIRE_THROWS(validate(ChaosSpec{{0.0, 0.0}}));
}

TEST_CASE("equilibrium two-point law: moments of the triangular density") {
  const double a = 1.3;
  const std::size_t n = 200000;
  const SampleSet s = sample_equilibrium_two_point(a, n, kSeed);
  // E|Y^L| = a/3, E(Y^L)^2 = a^2/6, symmetric
  double abs_mean = 0.0;
  for (double v : s.values) abs_mean += std::abs(v);
  abs_mean /= double(n);
  REQUIRE(std::abs(abs_mean - a / 3.0) <= 5.0 * a * std::sqrt(1.0 / (18.0 * double(n))));
  REQUIRE(std::abs(s.mean()) <= 5.0 * std::sqrt(a * a / 6.0 / double(n)));
  REQUIRE(std::abs(s.variance() - a * a / 6.0) <= 5.0 * a * a * std::sqrt(1.0 / double(n)));
}

TEST_CASE("equilibrium defining relation for g(x) = x^4") {
  // E g(Y) - g(0) = (1/lambda^2) E g''(Y^L) with Y = +-a, lambda^2 = 2/a^2:
  // LHS = a^4, RHS = (a^2/2) * 12 * E (Y^L)^2 = a^4.
  const double a = 0.9;
  const std::size_t n = 500000;
  const SampleSet yl = sample_equilibrium_two_point(a, n, kSeed);
  double rhs = 0.0, rhs2 = 0.0;
  for (double v : yl.values) {
    const double term = (a * a / 2.0) * 12.0 * v * v;
    rhs += term;
    rhs2 += term * term;
  }
  rhs /= double(n);
  rhs2 /= double(n);
  const double se = std::sqrt(std::max(rhs2 - rhs * rhs, 0.0) / double(n));
  REQUIRE(std::abs(rhs - std::pow(a, 4)) <= 5.0 * se);
}

TEST_CASE("coupled pair: E|S_p - S_p^L| = a sqrt(p) / 3") {
  const double a = 0.7071067811865476, p = 0.05;
  const std::size_t n = 400000;
  const GeometricSumPair pair = sample_geometric_sum_pair(p, a, n, kSeed);
  double gap = 0.0, gap2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double g = std::abs(pair.s.values[i] - pair.s_equilibrium.values[i]);
    gap += g;
    gap2 += g * g;
  }
  gap /= double(n);
  gap2 /= double(n);
  const double se = std::sqrt(std::max(gap2 - gap * gap, 0.0) / double(n));
  REQUIRE(std::abs(gap - a * std::sqrt(p) / 3.0) <= 5.0 * se);
}

TEST_CASE("sample sets carry provenance") {
  const SampleSet s = sample_tsd(TsdParams::positive(1.0, 0.5, 2.0), 1000, kSeed);
  REQUIRE(s.seed == kSeed);
  REQUIRE(s.spec.find("tsd(") != std::string::npos);
  REQUIRE(s.spec.find("absent") != std::string::npos);
}
