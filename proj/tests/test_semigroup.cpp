#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "tstein/density.hpp"
#include "tstein/quadrature.hpp"
#include "tstein/semigroup.hpp"
#include "tstein/test_function.hpp"

using namespace tstein;

namespace {
const TestFunction kTanh = logistic_entry(0.0);
}

TEST_CASE("P_0 is the identity, exactly") {
  Semigroup sg(TsdParams::laplace(2.0));
  for (double x : {-3.0, 0.0, 1.7}) {
    REQUIRE(sg.apply([](double v) { return std::sin(v); }, 0.0, x) == std::sin(x));
    REQUIRE(sg.apply(kTanh, 0.0, x) == kTanh(x));
  }
}

TEST_CASE("P_t at large t forgets x and converges to E h(X)") {
  const TsdParams p = TsdParams::laplace(2.0);
  Semigroup sg(p);
  const auto grid = density_grid(p);
  const double eh = expectation(grid, [&](double v) { return kTanh(v); }).value;
  for (double x : {-2.0, 0.0, 3.0}) {
    REQUIRE_THAT(sg.apply(kTanh, 40.0, x), Catch::Matchers::WithinAbs(eh, 1e-6));
  }
}

TEST_CASE("semigroup composition P_{s+t} = P_t P_s at s = t = 0.5") {
  const TsdParams p = TsdParams::laplace(2.0);
  SemigroupOptions opt;
  opt.inner_n = 16384;
  Semigroup sg(p, opt);
  const auto h = [](double v) { return std::tanh(v); };
  const GridFunction inner = sg.apply_grid(h, 0.5, -40.0, 40.0, 4001);
  for (double x : {-2.0, -0.3, 0.0, 1.0, 2.5}) {
    const double lhs = sg.apply(h, 1.0, x);
    const double rhs = sg.apply([&inner](double v) { return inner(v); }, 0.5, x);
    REQUIRE_THAT(lhs, Catch::Matchers::WithinAbs(rhs, 1e-5));
  }
}

TEST_CASE("generator closed forms") {
  const TsdParams p = TsdParams::laplace(2.0);
  const SteinOperatorSpec spec(p);

  SmoothFn id;
  id.name = "x";
  id.f = [](double x) { return x; };
  id.df = [](double) { return 1.0; };
  id.d2f = [](double) { return 0.0; };
  const double k1 = cumulant(p, 1);
  for (double x : {-1.5, 0.0, 2.0})
    REQUIRE_THAT(generator_apply(spec, id, x), Catch::Matchers::WithinAbs(-x + k1, 1e-12));

  SmoothFn c;
  c.name = "const";
  c.f = [](double) { return 5.0; };
  c.df = [](double) { return 0.0; };
  c.d2f = [](double) { return 0.0; };
  for (double x : {-1.5, 0.0, 2.0})
    REQUIRE(generator_apply(spec, c, x) == 0.0);
}

TEST_CASE("generator matches the finite-difference limit of P_t") {
  const TsdParams p = TsdParams::laplace(2.0);
  SemigroupOptions opt;
  opt.inner_n = 16384;
  Semigroup sg(p, opt);
  const SteinOperatorSpec spec(p);
  const SmoothFn f = builtin_f("gauss");
  const double t = 1e-3;
  for (double x : {-1.0, 0.2, 1.4}) {
    const double fd = (sg.apply(f.f, t, x) - f.f(x)) / t;
    REQUIRE_THAT(fd, Catch::Matchers::WithinAbs(generator_apply(spec, f, x), 5e-3));
  }
}

TEST_CASE("constant h solves to f identically zero") {
  std::array<TestFunction::Fn, 5> d;
  d[0] = [](double) { return 0.4; };
  for (int k = 1; k <= 4; ++k) d[std::size_t(k)] = [](double) { return 0.0; };
  const TestFunction hconst("const", std::move(d), {0.4, 0.0, 0.0, 0.0, 0.0});
  const SteinSolution sol = solve_stein(TsdParams::laplace(2.0), hconst, -6.0, 6.0);
  for (double v : sol.f.values()) REQUIRE(std::abs(v) <= 1e-12);
}

TEST_CASE("solver residual is small for laplace(2)") {
  const TsdParams p = TsdParams::laplace(2.0);
  const SteinSolution sol = solve_stein(p, kTanh, -26.0, 26.0);
  const SteinOperatorSpec spec(p);
  double sup = 0.0;
  for (double x = -4.0; x <= 4.0; x += 0.1)
    sup = std::max(sup, std::abs(sol.residual(spec, x)));
  REQUIRE(sup <= 1e-3);
}

TEST_CASE("solution norm bounds, Lipschitz bound and the symmetric-case x f'' bound") {
  const TsdParams p = TsdParams::laplace(2.0);
  const SteinSolution sol = solve_stein(p, kTanh, -26.0, 26.0);
  const BoundsReport rep = check_bounds(sol);
  REQUIRE(rep.checks.size() == 6);  // 4 norms + lipschitz + |x f''|
  for (const auto& c : rep.checks) {
    INFO(c.name << ": measured " << c.measured << " vs limit " << c.limit);
    REQUIRE(c.slack >= 0.0);
  }
}

TEST_CASE("derivative grids follow the differentiated representation") {
  const TsdParams p = TsdParams::laplace(2.0);
  const SteinSolution sol = solve_stein(p, kTanh, -8.0, 8.0);
  // f1 should equal the centered difference of f away from the edges
  double sup = 0.0;
  for (std::size_t i = 2; i + 2 < sol.f.size(); ++i) {
    const double fd =
        (sol.f.values()[i + 1] - sol.f.values()[i - 1]) / (2.0 * sol.f.dx());
    sup = std::max(sup, std::abs(fd - sol.f1.values()[i]));
  }
  REQUIRE(sup <= 1e-4);
}

TEST_CASE("g_h consistency: f_h is the derivative of the resolvent integral") {
  const TsdParams p = TsdParams::laplace(2.0);
  SemigroupOptions sopt;
  sopt.inner_n = 8192;
  Semigroup sg(p, sopt);
  const double eh = expectation(density_grid(p), [&](double v) { return kTanh(v); }).value;
  const QuadratureRule srule = gauss_legendre(64, 0.0, 1.0);
  const auto g_h = [&](double x) {
    double acc = 0.0;
    for (std::size_t j = 0; j < srule.size(); ++j) {
      const double s = srule.nodes[j];
      acc -= srule.weights[j] * (sg.apply(kTanh, -std::log(s), x) - eh) / s;
    }
    return acc;
  };
  const SteinSolution sol = solve_stein(p, kTanh, -8.0, 8.0);
  const double d = 1e-3;
  for (double x : {-1.0, 0.0, 0.8}) {
    const double fd = (g_h(x + d) - g_h(x - d)) / (2.0 * d);
    REQUIRE_THAT(fd, Catch::Matchers::WithinAbs(sol.f(x), 1e-3));
  }
}

TEST_CASE("|phi_t| <= 1 across the (z, t) range") {
  const TsdParams p = TsdParams::two_sided(1.0, 0.5, 2.0, 0.7, 0.0, 1.3);
  for (double t : {0.01, 0.3, 2.0, 10.0})
    for (double z : {0.1, 1.0, 7.0, 30.0}) REQUIRE(std::abs(cf_t(p, z, t)) <= 1.0 + 1e-12);
}

TEST_CASE("beta > 0 inner laws fall back gracefully and still solve") {
  const TsdParams p = TsdParams::two_sided(1.0, 0.5, 2.0, 1.0, 0.5, 2.0);
  SolveOptions opt;
  opt.semigroup.max_inner_n = 1 << 16;
  const SteinSolution sol = solve_stein(p, kTanh, -20.0, 20.0, opt);
  const SteinOperatorSpec spec(p);
  double sup = 0.0;
  for (double x = -3.0; x <= 3.0; x += 0.25)
    sup = std::max(sup, std::abs(sol.residual(spec, x)));
  // precision targets apply to the beta = 0 laws; this is a smoke bound
  REQUIRE(sup <= 0.05);
}

TEST_CASE("inner law failure reports the offending t") {
  // a fresh Semigroup applied to a plain callable cannot use the moment
  // fallback; with an impossibly small escalation cap it must say which t
  const TsdParams p = TsdParams::two_sided(1.0, 0.5, 2.0, 1.0, 0.5, 2.0);
  SemigroupOptions opt;
  opt.inner_n = 256;
  opt.max_inner_n = 256;
  Semigroup sg(p, opt);
  try {
    sg.apply([](double v) { return std::exp(-v * v); }, 1e-4, 0.0);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    REQUIRE(std::string(e.what()).find("t=") != std::string::npos);
  }
}
