// The self-decomposability semigroup P_t h(x) = E h(x e^{-t} + X_(t)),
// its generator, and the Stein-equation solver
//   f_h(x) = -int_0^inf e^{-t} E h'(x e^{-t} + X_(t)) dt
//          = -int_0^1  E h'(s x + X_(-log s)) ds.
//
// The inner law X_(t) has cf phi(z)/phi(e^{-t}z).  When every present
// side has beta = 0 its total jump intensity is finite, so X_(t) is an
// atom at 0 of mass e^{-t(sum alpha)} = s^A plus an absolutely continuous
// remainder recovered by inverting phi_t - s^A.  For beta > 0 at small t
// the remainder is a spike narrower than any affordable grid; those nodes
// fall back to a third-order moment expansion.
//
// Derivative grids use the differentiated representation
//   f_h^{(k)}(x) = -int_0^1 s^k E h^{(k+1)}(s x + X_(t(s))) ds,
// not finite differences of f_h.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <list>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tstein/density.hpp"
#include "tstein/errors.hpp"
#include "tstein/grid_function.hpp"
#include "tstein/levy_cf.hpp"
#include "tstein/params.hpp"
#include "tstein/quadrature.hpp"
#include "tstein/stein_op.hpp"
#include "tstein/test_function.hpp"

namespace tstein {

struct SemigroupOptions {
  int inner_n = 2048;            // grid points for inner-law densities
  int max_inner_n = 1 << 20;     // escalation cap before Taylor fallback
  double tail_tol = 3e-11;       // tail-correction target for inner laws
  std::size_t cache_capacity = 256;
};

struct InnerLaw {
  double t = 0.0;
  double s = 1.0;      // e^{-t}
  double atom = 0.0;   // point mass at 0 (all-beta-0 laws)
  std::optional<GridFunction> ac;  // signed grid of the continuous part
  bool taylor = false;
  double m1 = 0.0, m2 = 0.0, m3 = 0.0;  // raw moments of X_(t)

  // E g^{(k)}(a + X_(t)) where g supplies derivatives k..k+3 (clamped to
  // order 4) for the Taylor path.
  template <class DerivFn>
  double expect_shifted(DerivFn&& gd, int k, double a) const {
    if (taylor) {
      double v = gd(k, a);
      if (k + 1 <= 4) v += m1 * gd(k + 1, a);
      if (k + 2 <= 4) v += 0.5 * m2 * gd(k + 2, a);
      if (k + 3 <= 4) v += m3 / 6.0 * gd(k + 3, a);
      return v;
    }
    double v = atom * gd(k, a);
    v += ac->integrate_against([&](double y) { return gd(k, a + y); });
    return v;
  }
};

namespace detail {

inline bool all_sides_beta_zero(const TsdParams& p) {
  if (p.plus && p.plus->beta != 0.0) return false;
  if (p.minus && p.minus->beta != 0.0) return false;
  return true;
}

inline double total_alpha(const TsdParams& p) {
  double a = 0.0;
  if (p.plus) a += p.plus->alpha;
  if (p.minus) a += p.minus->alpha;
  return a;
}

// phi_t - atom and its derivatives, from psi(z) = eta(z) - eta(sz).
inline SpectralFunction inner_spectral_function(const TsdParams& p, double s, double atom) {
  SpectralFunction g;
  g.value = [p, s, atom](double z) {
    return std::exp(cf_exponent(p, z) - cf_exponent(p, s * z)) - atom;
  };
  g.derivs = [p, s, atom](double z) {
    const auto e1 = cf_exponent_derivs(p, z);
    const auto e2 = cf_exponent_derivs(p, s * z);
    const cplx p0 = e1[0] - e2[0];
    const cplx p1 = e1[1] - s * e2[1];
    const cplx p2 = e1[2] - s * s * e2[2];
    const cplx p3 = e1[3] - s * s * s * e2[3];
    const cplx phi = std::exp(p0);
    std::array<cplx, 4> d;
    d[0] = phi - atom;
    d[1] = p1 * phi;
    d[2] = (p2 + p1 * p1) * phi;
    d[3] = (p3 + 3.0 * p1 * p2 + p1 * p1 * p1) * phi;
    return d;
  };
  return g;
}

inline InnerLaw make_inner_law(const TsdParams& p, double t, const SemigroupOptions& opt) {
  InnerLaw law;
  law.t = t;
  law.s = std::exp(-t);
  const double s = law.s;
  const double k1 = cumulant(p, 1) * (1.0 - s);
  const double k2 = cumulant(p, 2) * (1.0 - s * s);
  const double k3 = cumulant(p, 3) * (1.0 - s * s * s);
  law.m1 = k1;
  law.m2 = k2 + k1 * k1;
  law.m3 = k3 + 3.0 * k2 * k1 + k1 * k1 * k1;
  if (t == 0.0) {  // degenerate at 0
    law.taylor = true;
    law.m1 = law.m2 = law.m3 = 0.0;
    return law;
  }
  if (all_sides_beta_zero(p)) law.atom = std::pow(s, total_alpha(p));

  const SpectralFunction g = inner_spectral_function(p, s, law.atom);
  const double halfwidth = std::max(10.0 * std::sqrt(k2), 30.0 / p.min_lambda());
  int n = opt.inner_n;
  while (std::abs(g.value(M_PI * double(n) / (2.0 * halfwidth))) > 0.05 && n < opt.max_inner_n)
    n *= 2;
  if (std::abs(g.value(M_PI * double(n) / (2.0 * halfwidth))) > 0.05) {
    law.taylor = true;
    return law;
  }

  const double dx = 2.0 * halfwidth / double(n);
  // snap the origin onto the grid: the continuous part can kink or jump
  // at 0, and the midpoint convention needs a node there
  const double x0 = std::round((k1 - halfwidth) / dx) * dx;
  InversionOptions iopt;
  iopt.oversample = 4;
  iopt.tail_abs_tol = opt.tail_tol;
  std::vector<double> values = invert_to_grid(g, x0, dx, std::size_t(n), iopt);
  GridFunction fn(x0, dx, std::move(values));
  const double mass = fn.trapezoid_mass();
  if (std::abs(mass - (1.0 - law.atom)) > 0.05)
    throw NumericalError("inner law at t=" + std::to_string(t) + ": grid mass " +
                         std::to_string(mass) + " but expected " +
                         std::to_string(1.0 - law.atom));
  law.ac = std::move(fn);
  return law;
}

}  // namespace detail

// The operator family P_t for one parameter set, with a bounded cache of
// inner laws keyed by t.
class Semigroup {
 public:
  explicit Semigroup(TsdParams p, SemigroupOptions opt = {})
      : params_(validate(p)), opt_(opt) {}

  const TsdParams& params() const { return params_; }

  const InnerLaw& inner_law(double t) {
    auto it = cache_.find(t);
    if (it != cache_.end()) return it->second;
    if (cache_.size() >= opt_.cache_capacity) cache_.erase(cache_.begin());
    return cache_.emplace(t, detail::make_inner_law(params_, t, opt_)).first->second;
  }

  // P_t h(x) for plain callables (no Taylor fallback available).
  template <class H>
  double apply(H&& h, double t, double x) {
    if (t < 0.0) throw std::invalid_argument("Semigroup::apply: t must be >= 0");
    if (t == 0.0) return h(x);  // P_0 is the identity
    const InnerLaw& law = inner_law(t);
    if (law.taylor)
      throw NumericalError("Semigroup::apply: inner law at t=" + std::to_string(t) +
                           " needs the moment fallback; supply a TestFunction");
    const double a = law.s * x;
    double v = law.atom * h(a);
    v += law.ac->integrate_against([&](double y) { return h(a + y); });
    return v;
  }

  // P_t h(x) with derivative information for small-t fallbacks.
  double apply(const TestFunction& h, double t, double x) {
    if (t < 0.0) throw std::invalid_argument("Semigroup::apply: t must be >= 0");
    if (t == 0.0) return h(x);
    const InnerLaw& law = inner_law(t);
    return law.expect_shifted([&](int k, double a) { return h.d(k, a); }, 0, law.s * x);
  }

  // P_t h on a uniform grid.
  template <class H>
  GridFunction apply_grid(H&& h, double t, double xmin, double xmax, std::size_t n) {
    const double dx = (xmax - xmin) / double(n - 1);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = apply(h, t, xmin + dx * double(i));
    return GridFunction(xmin, dx, std::move(v));
  }

 private:
  TsdParams params_;
  SemigroupOptions opt_;
  std::map<double, InnerLaw> cache_;
};

// Generator T f(x) = -x f'(x) + int f'(x+u) u nu(du) = A(f')(x).
inline double generator_apply(const SteinOperatorSpec& spec, const SmoothFn& f, double x) {
  return spec.apply([&](double v) { return f.df(v); }, x);
}

inline double generator_apply(const SteinOperatorSpec& spec, const GridFunction& f, double x) {
  const double d = f.dx();
  return spec.apply([&](double v) { return (f(v + d) - f(v - d)) / (2.0 * d); }, x);
}

struct SteinSolution {
  TsdParams params;
  TestFunction h;
  GridFunction f, f1, f2, f3;
  double e_h = 0.0;  // E h(X)
  int t_nodes = 0;

  // A f_h(x) - (h(x) - E h(X)); zero for the exact solution.
  double residual(const SteinOperatorSpec& spec, double x) const {
    const GridFunction& g = f;
    return spec.apply([&g](double v) { return g(v); }, x) - (h(x) - e_h);
  }
};

struct SolveOptions {
  int t_nodes = 64;
  int grid_n = 1024;
  SemigroupOptions semigroup;
};

namespace detail {

// Dense tables of h^{(1)}..h^{(4)} spanning every argument the solver
// needs; table lookups replace std::function calls in the hot loop.
struct DerivTables {
  std::array<GridFunction, 4> table;  // orders 1..4
  double lo = 0.0, hi = 0.0;

  DerivTables(const TestFunction& h, double lo_, double hi_, double step) : lo(lo_), hi(hi_) {
    const std::size_t n = std::size_t((hi - lo) / step) + 2;
    for (int k = 1; k <= 4; ++k) {
      std::vector<double> v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = h.d(k, lo + step * double(i));
      table[std::size_t(k - 1)] = GridFunction(lo, step, std::move(v));
    }
  }
  double operator()(int k, double a) const { return table[std::size_t(k - 1)](a); }
};

}  // namespace detail

inline SteinSolution solve_stein(const TsdParams& params, const TestFunction& h, double xmin,
                                 double xmax, SolveOptions opt = {}) {
  validate(params);
  if (!(xmax > xmin)) throw std::invalid_argument("solve_stein: xmax must exceed xmin");
  SteinSolution sol;
  sol.params = params;
  sol.h = h;
  sol.t_nodes = opt.t_nodes;

  Semigroup sg(params, opt.semigroup);
  const QuadratureRule srule = gauss_legendre(opt.t_nodes, 0.0, 1.0);

  const double k1 = cumulant(params, 1);
  const double inner_halfwidth =
      std::max(10.0 * std::sqrt(cumulant(params, 2)), 30.0 / params.min_lambda());
  const double reach = inner_halfwidth + std::abs(k1) + 1.0;
  const double lo = std::min(xmin, 0.0) - reach;
  const double hi = std::max(xmax, 0.0) + reach;
  const detail::DerivTables hd(h, lo, hi, 0.002);

  const std::size_t n = std::size_t(opt.grid_n);
  const double dx = (xmax - xmin) / double(n - 1);
  std::array<std::vector<double>, 4> acc;
  for (auto& a : acc) a.assign(n, 0.0);

  for (int j = 0; j < opt.t_nodes; ++j) {
    const double s = srule.nodes[j];
    const double w = srule.weights[j];
    const InnerLaw& law = sg.inner_law(-std::log(s));
    double sk = 1.0;
    for (int k = 0; k < 4; ++k) {
      const double weight = w * sk;
      for (std::size_t i = 0; i < n; ++i) {
        const double a = s * (xmin + dx * double(i));
        acc[std::size_t(k)][i] -=
            weight * law.expect_shifted([&hd](int kk, double aa) { return hd(kk, aa); },
                                        k + 1, a);
      }
      sk *= s;
    }
  }

  sol.f = GridFunction(xmin, dx, std::move(acc[0]));
  sol.f1 = GridFunction(xmin, dx, std::move(acc[1]));
  sol.f2 = GridFunction(xmin, dx, std::move(acc[2]));
  sol.f3 = GridFunction(xmin, dx, std::move(acc[3]));
  sol.e_h = expectation(density_grid(params), [&h](double x) { return h(x); }).value;
  return sol;
}

struct BoundCheck {
  std::string name;
  double measured = 0.0;
  double limit = 0.0;
  double slack = 0.0;  // limit - measured
};

struct BoundsReport {
  std::vector<BoundCheck> checks;

  bool all_hold(double tol = 0.0) const {
    for (const auto& c : checks)
      if (c.slack < -tol) return false;
    return true;
  }
};

namespace detail {
inline double grid_sup_abs(const GridFunction& g) {
  double m = 0.0;
  for (double v : g.values()) m = std::max(m, std::abs(v));
  return m;
}
}  // namespace detail

// Norm bounds of the solution, the Lipschitz bound on f'' (constant
// ||h''''||/4, grid pairs at distance <= 2), and for the symmetric
// beta = 0 case the bound ||x f''(x)|| <= 2(||h''|| + alpha/(3 lambda) ||h'''||).
inline BoundsReport check_bounds(const SteinSolution& sol) {
  BoundsReport rep;
  const TestFunction& h = sol.h;
  rep.checks.push_back({"sup|f| <= ||h'||", detail::grid_sup_abs(sol.f), h.norm(1), 0.0});
  rep.checks.push_back(
      {"sup|f'| <= ||h''||/2", detail::grid_sup_abs(sol.f1), 0.5 * h.norm(2), 0.0});
  rep.checks.push_back(
      {"sup|f''| <= ||h'''||/3", detail::grid_sup_abs(sol.f2), h.norm(3) / 3.0, 0.0});
  rep.checks.push_back(
      {"sup|f'''| <= ||h''''||/4", detail::grid_sup_abs(sol.f3), h.norm(4) / 4.0, 0.0});

  const GridFunction& f2 = sol.f2;
  const std::size_t n = f2.size();
  const std::size_t kmax = std::size_t(2.0 / f2.dx());
  double lip = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 1; k <= kmax && i + k < n; ++k)
      lip = std::max(lip, std::abs(f2.values()[i + k] - f2.values()[i]) / (f2.dx() * double(k)));
  rep.checks.push_back({"lip(f'') <= ||h''''||/4", lip, h.norm(4) / 4.0, 0.0});

  const SpecialCase tag = special_case_of(sol.params);
  if (tag == SpecialCase::laplace || tag == SpecialCase::symmetric_vg) {
    const double alpha = sol.params.plus->alpha;
    const double lambda = sol.params.plus->lambda;
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      m = std::max(m, std::abs(f2.x_at(i) * f2.values()[i]));
    rep.checks.push_back({"sup|x f''| <= 2(||h''|| + a/(3l)||h'''||)", m,
                          2.0 * (h.norm(2) + alpha / (3.0 * lambda) * h.norm(3)), 0.0});
  }
  for (auto& c : rep.checks) c.slack = c.limit - c.measured;
  return rep;
}

}  // namespace tstein
