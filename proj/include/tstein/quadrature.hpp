// Gauss-Legendre and generalized Gauss-Laguerre quadrature rules.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace tstein {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
// by Newton iteration on the Legendre recurrence.
inline QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

// Gauss-Legendre rule mapped to [a, b].
inline QuadratureRule gauss_legendre(int n, double a, double b) {
  QuadratureRule rule = gauss_legendre(n);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    rule.nodes[i] = c + h * rule.nodes[i];
    rule.weights[i] *= h;
  }
  return rule;
}

// Generalized Gauss-Laguerre rule: integrates f against u^a e^{-u} on
// (0, inf) exactly for polynomial f of degree <= 2n-1.  Requires a > -1.
// Newton iteration on the generalized Laguerre recurrence with the
// classical initial guesses.
inline QuadratureRule gauss_laguerre_generalized(int n, double a) {
  if (n < 1) throw std::invalid_argument("gauss_laguerre_generalized: n must be >= 1");
  if (a <= -1.0) throw std::invalid_argument("gauss_laguerre_generalized: exponent must be > -1");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  double x = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i == 0) {
      x = (1.0 + a) * (3.0 + 0.92 * a) / (1.0 + 2.4 * n + 1.8 * a);
    } else if (i == 1) {
      x += (15.0 + 6.25 * a) / (1.0 + 0.9 * a + 2.5 * n);
    } else {
      const double ai = i - 1;
      x += ((1.0 + 2.55 * ai) / (1.9 * ai) + 1.26 * ai * a / (1.0 + 3.5 * ai)) *
           (x - rule.nodes[i - 2]) / (1.0 + 0.3 * a);
    }
    double p1 = 0.0, pp = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
      double p0 = 1.0;
      p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0 + a - x) * p1 - (j + a) * p2) / (j + 1.0);
      }
      pp = (n * p0 - (n + a) * p1) / x;
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-14 * std::max(1.0, std::abs(x))) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] =
        -std::exp(std::lgamma(a + n) - std::lgamma(double(n))) / (pp * n * p1);
  }
  return rule;
}

}  // namespace tstein
