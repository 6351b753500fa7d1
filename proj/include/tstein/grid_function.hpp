// A real function stored as values on a uniform grid, with local cubic
// interpolation between nodes and constant extrapolation outside.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace tstein {

class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(double x0, double dx, std::vector<double> values)
      : x0_(x0), dx_(dx), values_(std::move(values)) {
    if (!(dx_ > 0.0)) throw std::invalid_argument("GridFunction: dx must be positive");
    if (values_.size() < 8) throw std::invalid_argument("GridFunction: need at least 8 nodes");
  }

  double x0() const { return x0_; }
  double dx() const { return dx_; }
  std::size_t size() const { return values_.size(); }
  double x_at(std::size_t i) const { return x0_ + dx_ * double(i); }
  double x_max() const { return x_at(values_.size() - 1); }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  // Local 4-point cubic between nodes; clamps to the edge value outside.
  double operator()(double x) const {
    const std::ptrdiff_t n = std::ptrdiff_t(values_.size());
    const double s = (x - x0_) / dx_;
    if (s <= 0.0) return values_.front();
    if (s >= double(n - 1)) return values_.back();
    std::ptrdiff_t i = std::ptrdiff_t(s);
    i = std::clamp<std::ptrdiff_t>(i, 1, n - 3);
    const double t = s - double(i);
    const double ym = values_[i - 1], y0 = values_[i], y1 = values_[i + 1], y2 = values_[i + 2];
    // Lagrange cubic through nodes (-1, 0, 1, 2) evaluated at t in [0,1].
    const double c0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
    const double c1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
    const double c2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
    const double c3 = (t + 1.0) * t * (t - 1.0) / 6.0;
    return c0 * ym + c1 * y0 + c2 * y1 + c3 * y2;
  }

  double trapezoid_mass() const {
    double s = 0.5 * (values_.front() + values_.back());
    for (std::size_t i = 1; i + 1 < values_.size(); ++i) s += values_[i];
    return s * dx_;
  }

  // Trapezoid integral of g against this function over the grid span.
  template <class G>
  double integrate_against(G&& g) const {
    double s = 0.5 * (values_.front() * g(x_at(0)) +
                      values_.back() * g(x_max()));
    for (std::size_t i = 1; i + 1 < values_.size(); ++i) s += values_[i] * g(x_at(i));
    return s * dx_;
  }

 private:
  double x0_ = 0.0;
  double dx_ = 1.0;
  std::vector<double> values_;
};

// Monotone CDF built from a nonnegative density grid by cumulative
// trapezoid; linear interpolation keeps it monotone, 0 to the left of the
// grid and the accumulated mass to the right, both clamped to [0, 1].
class CdfGrid {
 public:
  CdfGrid() = default;
  explicit CdfGrid(const GridFunction& density) : x0_(density.x0()), dx_(density.dx()) {
    const auto& v = density.values();
    cum_.resize(v.size());
    cum_[0] = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) {
      const double a = std::max(v[i - 1], 0.0), b = std::max(v[i], 0.0);
      cum_[i] = cum_[i - 1] + 0.5 * dx_ * (a + b);
    }
  }

  double operator()(double x) const {
    const double s = (x - x0_) / dx_;
    if (s <= 0.0) return 0.0;
    if (s >= double(cum_.size() - 1)) return std::min(cum_.back(), 1.0);
    const std::size_t i = std::size_t(s);
    const double t = s - double(i);
    return std::min(cum_[i] * (1.0 - t) + cum_[i + 1] * t, 1.0);
  }

  double total_mass() const { return cum_.back(); }

 private:
  double x0_ = 0.0, dx_ = 1.0;
  std::vector<double> cum_;
};

}  // namespace tstein
