// Smooth test functions h with certified sup-norms of h..h'''' (the H_r
// membership certificates), the default dictionary used for the smooth
// discrepancy lower bound, and the small registry of rapidly decaying f's
// used by the Monte Carlo identity residuals.
#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tstein {

class TestFunction {
 public:
  using Fn = std::function<double(double)>;

  TestFunction() = default;
  TestFunction(std::string name, std::array<Fn, 5> derivs, std::array<double, 5> norms)
      : name_(std::move(name)), deriv_(std::move(derivs)), norm_(norms) {
    validate_certificates();
  }

  const std::string& name() const { return name_; }
  double operator()(double x) const { return deriv_[0](x); }
  double d(int k, double x) const { return deriv_[std::size_t(k)](x); }
  double norm(int k) const { return norm_[std::size_t(k)]; }

  // Member of H_r iff all certified norms through order r are <= 1.
  bool in_class(int r) const {
    for (int k = 0; k <= r; ++k)
      if (norm_[std::size_t(k)] > 1.0) return false;
    return true;
  }

 private:
  // Certificates must be true upper bounds: audit on a dense grid.
  void validate_certificates() const {
    for (int k = 0; k <= 4; ++k) {
      double sup = 0.0;
      for (int i = -6000; i <= 6000; ++i)
        sup = std::max(sup, std::abs(deriv_[std::size_t(k)](i * 0.005)));
      if (sup > norm_[std::size_t(k)] * (1.0 + 1e-9) + 1e-12)
        throw std::logic_error("TestFunction '" + name_ + "': certificate for order " +
                               std::to_string(k) + " is not an upper bound");
    }
  }

  std::string name_;
  std::array<Fn, 5> deriv_;
  std::array<double, 5> norm_{};
};

// h(x) = c sin(omega x + phase) with c = min(1, omega^{-r});
// |h^{(k)}| <= c omega^k <= 1 for k <= r.
inline TestFunction sine_entry(double omega, double phase, int r) {
  const double c = std::min(1.0, std::pow(omega, -double(r)));
  std::array<TestFunction::Fn, 5> d;
  std::array<double, 5> norms;
  for (int k = 0; k <= 4; ++k) {
    const double amp = c * std::pow(omega, k);
    d[std::size_t(k)] = [omega, phase, amp, k](double x) {
      return amp * std::sin(omega * x + phase + 0.5 * M_PI * k);
    };
    norms[std::size_t(k)] = amp;
  }
  std::string name = "sin(" + std::to_string(omega) + "x" +
                     (phase != 0.0 ? "+pi/2" : "") + ")*" + std::to_string(c);
  return TestFunction(std::move(name), std::move(d), norms);
}

// h(x) = tanh((x - x0)/2), a logistic step; every derivative norm is
// well below 1, so these sit in H_4 at unit scale.
inline TestFunction logistic_entry(double x0) {
  auto T = [x0](double x) { return std::tanh(0.5 * (x - x0)); };
  std::array<TestFunction::Fn, 5> d;
  d[0] = [T](double x) { return T(x); };
  d[1] = [T](double x) {
    const double t = T(x);
    return 0.5 * (1.0 - t * t);
  };
  d[2] = [T](double x) {
    const double t = T(x);
    return -0.5 * t * (1.0 - t * t);
  };
  d[3] = [T](double x) {
    const double t = T(x);
    return -0.25 * (1.0 - t * t) * (1.0 - 3.0 * t * t);
  };
  d[4] = [T](double x) {
    const double t = T(x);
    return 0.0625 * (1.0 - t * t) * t * (16.0 - 24.0 * t * t);
  };
  // sup |t(1-t^2)| = 2/(3 sqrt 3); sup |(1-t^2)(1-3t^2)| = 1;
  // sup |t(1-t^2)(16-24t^2)| = 4.0856 (attained at t^2 = (15-sqrt 105)/30).
  std::array<double, 5> norms = {1.0, 0.5, 0.19245009, 0.25, 0.255350};
  return TestFunction("tanh((x-" + std::to_string(x0) + ")/2)", std::move(d), norms);
}

struct Dictionary {
  int r = 3;
  std::vector<TestFunction> entries;
};

// Sinusoids over a small frequency ladder plus logistic steps; every
// entry certified in H_r (asserted at build time).
inline Dictionary default_dictionary(int r) {
  if (r < 1 || r > 4) throw std::invalid_argument("default_dictionary: r must be in 1..4");
  Dictionary dict;
  dict.r = r;
  for (double omega : {0.25, 0.5, 1.0, 2.0, 4.0})
    for (double phase : {0.0, 0.5 * M_PI})
      dict.entries.push_back(sine_entry(omega, phase, r));
  for (double x0 : {-1.0, 0.0, 1.0}) dict.entries.push_back(logistic_entry(x0));
  for (const TestFunction& h : dict.entries)
    if (!h.in_class(r))
      throw std::logic_error("default_dictionary: entry '" + h.name() + "' is not in H_" +
                             std::to_string(r));
  return dict;
}

// A smooth, rapidly decaying f with two analytic derivatives, the test
// function class for the Stein identity residuals.
struct SmoothFn {
  std::string name;
  std::function<double(double)> f, df, d2f;
};

inline SmoothFn builtin_f(const std::string& name) {
  if (name == "gauss")
    return {name, [](double x) { return std::exp(-x * x); },
            [](double x) { return -2.0 * x * std::exp(-x * x); },
            [](double x) { return (4.0 * x * x - 2.0) * std::exp(-x * x); }};
  if (name == "xgauss")
    return {name, [](double x) { return x * std::exp(-x * x); },
            [](double x) { return (1.0 - 2.0 * x * x) * std::exp(-x * x); },
            [](double x) { return (4.0 * x * x * x - 6.0 * x) * std::exp(-x * x); }};
  if (name == "singauss")
    return {name, [](double x) { return std::sin(x) * std::exp(-x * x); },
            [](double x) { return (std::cos(x) - 2.0 * x * std::sin(x)) * std::exp(-x * x); },
            [](double x) {
              return ((4.0 * x * x - 3.0) * std::sin(x) - 4.0 * x * std::cos(x)) *
                     std::exp(-x * x);
            }};
  if (name == "cauchy")
    return {name, [](double x) { return 1.0 / (1.0 + x * x); },
            [](double x) {
              const double d = 1.0 + x * x;
              return -2.0 * x / (d * d);
            },
            [](double x) {
              const double d = 1.0 + x * x;
              return (6.0 * x * x - 2.0) / (d * d * d);
            }};
  if (name == "tanhgauss")
    return {name,
            [](double x) { return std::tanh(x) * std::exp(-x * x); },
            [](double x) {
              const double t = std::tanh(x);
              return ((1.0 - t * t) - 2.0 * x * t) * std::exp(-x * x);
            },
            [](double x) {
              const double t = std::tanh(x);
              return (-2.0 * t * (1.0 - t * t) - 2.0 * t - 4.0 * x * (1.0 - t * t) +
                      4.0 * x * x * t) *
                     std::exp(-x * x);
            }};
  throw std::invalid_argument("builtin_f: unknown name '" + name + "'");
}

inline std::vector<SmoothFn> builtin_f_dictionary() {
  return {builtin_f("gauss"), builtin_f("xgauss"), builtin_f("singauss"), builtin_f("cauchy"),
          builtin_f("tanhgauss")};
}

}  // namespace tstein
