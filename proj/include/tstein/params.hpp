// Parameter records for the two-sided tempered stable family and the
// variance-gamma subfamily, with validation, conversions and
// special-case detection.
#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace tstein {

// One side of the jump measure: intensity alpha, stability index beta,
// tempering rate lambda.
struct TsdSide {
  double alpha = 0.0;
  double beta = 0.0;
  double lambda = 0.0;
};

// Parameters of TSD(alpha+, beta+, lambda+; alpha-, beta-, lambda-).
// Either side may be absent (one-sided laws); at least one side present.
struct TsdParams {
  std::optional<TsdSide> plus;
  std::optional<TsdSide> minus;

  bool one_sided() const { return !(plus && minus); }

  // Smallest tempering rate over the present sides.
  double min_lambda() const {
    double m = std::numeric_limits<double>::infinity();
    if (plus) m = std::min(m, plus->lambda);
    if (minus) m = std::min(m, minus->lambda);
    return m;
  }

  double max_beta() const {
    double m = 0.0;
    if (plus) m = std::max(m, plus->beta);
    if (minus) m = std::max(m, minus->beta);
    return m;
  }

  static TsdParams two_sided(double ap, double bp, double lp, double am, double bm, double lm) {
    return TsdParams{TsdSide{ap, bp, lp}, TsdSide{am, bm, lm}};
  }
  static TsdParams positive(double a, double b, double l) {
    return TsdParams{TsdSide{a, b, l}, std::nullopt};
  }
  static TsdParams negative(double a, double b, double l) {
    return TsdParams{std::nullopt, TsdSide{a, b, l}};
  }
  // Symmetric beta = 0 case TSD(alpha,0,lambda;alpha,0,lambda).
  static TsdParams symmetric_vg(double alpha, double lambda) {
    return two_sided(alpha, 0.0, lambda, alpha, 0.0, lambda);
  }
  static TsdParams laplace(double lambda) { return symmetric_vg(1.0, lambda); }
};

namespace detail {
inline void validate_side(const TsdSide& s, const char* tag) {
  using std::string;
  if (!(s.alpha > 0.0) || !std::isfinite(s.alpha))
    throw std::invalid_argument(string("alpha") + tag + " must be positive");
  if (!(s.beta >= 0.0 && s.beta < 1.0))
    throw std::invalid_argument(string("beta") + tag + " out of [0,1)");
  if (!(s.lambda > 0.0) || !std::isfinite(s.lambda))
    throw std::invalid_argument(string("lambda") + tag + " must be positive");
}
}  // namespace detail

// Returns the record iff all range invariants hold; throws
// std::invalid_argument with a field-level message otherwise.
inline const TsdParams& validate(const TsdParams& p) {
  if (!p.plus && !p.minus)
    throw std::invalid_argument("at least one side must be present");
  if (p.plus) detail::validate_side(*p.plus, "_plus");
  if (p.minus) detail::validate_side(*p.minus, "_minus");
  return p;
}

// Variance-gamma parameterizations.  Vg0 is the jump-measure form, Vg1
// the closed-form cf (same parameters, Frullani-equivalent), Vg2 the
// (sigma^2, r, theta) form used by the second-order Stein identity.
struct Vg0 {
  double alpha = 0.0, lambda_plus = 0.0, lambda_minus = 0.0;
};
struct Vg1 {
  double alpha = 0.0, lambda_plus = 0.0, lambda_minus = 0.0;
};
struct Vg2 {
  double sigma2 = 0.0, r = 0.0, theta = 0.0;
};

using VgParams = std::variant<Vg0, Vg1, Vg2>;

inline const VgParams& validate(const VgParams& v) {
  if (const Vg2* q = std::get_if<Vg2>(&v)) {
    if (!(q->sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be positive");
    if (!(q->r > 0.0)) throw std::invalid_argument("r must be positive");
    if (!std::isfinite(q->theta)) throw std::invalid_argument("theta must be finite");
    return v;
  }
  double alpha, lp, lm;
  if (const Vg0* q = std::get_if<Vg0>(&v)) {
    alpha = q->alpha; lp = q->lambda_plus; lm = q->lambda_minus;
  } else {
    const Vg1& w = std::get<Vg1>(v);
    alpha = w.alpha; lp = w.lambda_plus; lm = w.lambda_minus;
  }
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(lp > 0.0)) throw std::invalid_argument("lambda_plus must be positive");
  if (!(lm > 0.0)) throw std::invalid_argument("lambda_minus must be positive");
  return v;
}

// All three parameterizations of one variance-gamma law.
struct VgForms {
  Vg0 vg0;
  Vg1 vg1;
  Vg2 vg2;

  // Lambda = 1/lambda+ - 1/lambda- (equals 2*theta).
  double Lambda() const { return 1.0 / vg1.lambda_plus - 1.0 / vg1.lambda_minus; }

  TsdParams tsd() const {
    return TsdParams::two_sided(vg1.alpha, 0.0, vg1.lambda_plus,
                                vg1.alpha, 0.0, vg1.lambda_minus);
  }
};

// Populates all three variants describing the same law.  Conversions are
// exact rational expressions: sigma^2 = 1/(l+ l-), 2 theta = 1/l+ - 1/l-,
// r = 2 alpha, and back via 1/l± = ±theta + sqrt(theta^2 + sigma^2).
inline VgForms vg_convert(const VgParams& v) {
  validate(v);
  VgForms out;
  if (const Vg2* q = std::get_if<Vg2>(&v)) {
    const double root = std::sqrt(q->theta * q->theta + q->sigma2);
    const double inv_lp = q->theta + root;
    const double inv_lm = root - q->theta;
    out.vg1 = Vg1{q->r / 2.0, 1.0 / inv_lp, 1.0 / inv_lm};
    out.vg0 = Vg0{out.vg1.alpha, out.vg1.lambda_plus, out.vg1.lambda_minus};
    out.vg2 = *q;
    return out;
  }
  if (const Vg0* q = std::get_if<Vg0>(&v)) {
    out.vg0 = *q;
    out.vg1 = Vg1{q->alpha, q->lambda_plus, q->lambda_minus};
  } else {
    const Vg1& w = std::get<Vg1>(v);
    out.vg1 = w;
    out.vg0 = Vg0{w.alpha, w.lambda_plus, w.lambda_minus};
  }
  const double lp = out.vg1.lambda_plus, lm = out.vg1.lambda_minus;
  out.vg2 = Vg2{1.0 / (lp * lm), 2.0 * out.vg1.alpha, 0.5 * (1.0 / lp - 1.0 / lm)};
  return out;
}

enum class SpecialCase {
  gamma,
  negated_gamma,
  laplace,
  symmetric_vg,
  vg,
  bilateral_gamma,
  general,
};

inline const char* to_string(SpecialCase c) {
  switch (c) {
    case SpecialCase::gamma: return "gamma";
    case SpecialCase::negated_gamma: return "negated-gamma";
    case SpecialCase::laplace: return "laplace";
    case SpecialCase::symmetric_vg: return "symmetric-vg";
    case SpecialCase::vg: return "vg";
    case SpecialCase::bilateral_gamma: return "bilateral-gamma";
    case SpecialCase::general: return "general";
  }
  return "general";
}

// Most specific tag for the law.  Comparisons are exact on stored values;
// tags drive algorithm selection and must be deterministic.
inline SpecialCase special_case_of(const TsdParams& p) {
  validate(p);
  if (p.plus && !p.minus)
    return p.plus->beta == 0.0 ? SpecialCase::gamma : SpecialCase::general;
  if (p.minus && !p.plus)
    return p.minus->beta == 0.0 ? SpecialCase::negated_gamma : SpecialCase::general;
  const TsdSide& a = *p.plus;
  const TsdSide& b = *p.minus;
  if (a.beta != 0.0 || b.beta != 0.0) return SpecialCase::general;
  if (a.alpha == b.alpha) {
    if (a.lambda == b.lambda)
      return a.alpha == 1.0 ? SpecialCase::laplace : SpecialCase::symmetric_vg;
    return SpecialCase::vg;
  }
  return SpecialCase::bilateral_gamma;
}

}  // namespace tstein
