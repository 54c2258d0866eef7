#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "qloc/concentration.hpp"
#include "qloc/entropy.hpp"

namespace qloc {

namespace detail {

// ln(1 + u) / u extended continuously through u = 0; log1p keeps it stable
// arbitrarily close to the origin.
inline double log1p_over(double u) {
  if (std::isinf(u)) return 0.0;
  if (std::abs(u) < 1e-14) return 1.0;
  return std::log1p(u) / u;
}

// Order-dependent constant of the Beckner-type bound,
//   B(alpha) = -(1/2) [ ln(alpha)/(1 - alpha) + ln(beta)/(1 - beta) ],
// rewritten through log1p_over so the alpha -> 1 limit B = 1 comes out
// exactly and the alpha -> infinity limit gives ln 2.
inline double beckner_order_term(double alpha) {
  if (std::isnan(alpha) || alpha < 1.0)
    throw std::invalid_argument("bound_beckner: alpha must be >= 1");
  const double a = alpha - 1.0;
  const double b = std::isinf(alpha) ? -0.5 : -a / (2.0 * alpha - 1.0);  // beta - 1
  return 0.5 * (log1p_over(a) + log1p_over(b));
}

}  // namespace detail

/// Entropy-sum bound -ln lambda0(gamma); order-independent.
inline double bound_maassen_uffink(double gamma, int node_count = 64) {
  return -std::log(solve_concentration(gamma, node_count).lambda0);
}

/// Entropy-sum bound -2 ln((1 + sqrt(lambda0)) / 2); order-independent and
/// never tighter than bound_maassen_uffink, but it also constrains the
/// coarse marginals directly.
inline double bound_deutsch(double gamma, int node_count = 64) {
  const double c = std::sqrt(solve_concentration(gamma, node_count).lambda0);
  return -2.0 * std::log(0.5 * (1.0 + c));
}

/// Order-dependent bound B(alpha) + ln pi - ln gamma. Positive (and hence
/// usable) only below the order's threshold gamma; the raw value is returned
/// for any gamma so callers can see the sign change.
inline double bound_beckner(double alpha, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("bound_beckner: gamma must be positive");
  return detail::beckner_order_term(alpha) + std::log(std::numbers::pi) - std::log(gamma);
}

/// Largest gamma at which the Beckner-type bound is still positive:
///   (pi / alpha) (2 alpha - 1)^((2 alpha - 1) / (2 (alpha - 1))),
/// equal to e pi at alpha = 1 and decreasing to 2 pi as alpha -> infinity.
inline double beckner_threshold(double alpha) {
  if (std::isnan(alpha) || alpha < 1.0)
    throw std::invalid_argument("beckner_threshold: alpha must be >= 1");
  if (std::isinf(alpha)) return 2.0 * std::numbers::pi;
  const double a = alpha - 1.0;
  if (std::abs(a) < 1e-8) return std::numbers::e * std::numbers::pi;
  const double expo = (2.0 * alpha - 1.0) / (2.0 * a) * std::log1p(2.0 * a);
  return std::numbers::pi / alpha * std::exp(expo);
}

/// Best bound on the full intra-bin entropy sum at conjugate orders
/// (alpha, beta): the Beckner branch while it is positive, the eigenvalue
/// branch -ln lambda0 otherwise, whichever is larger. At alpha = 1 this is
/// exactly -ln min(gamma / (e pi), lambda0(gamma)).
inline double best_bound_ab(double gamma, double alpha = 1.0, int node_count = 64) {
  const double lam = solve_concentration(gamma, node_count).lambda0;
  const double mu = -std::log(lam);
  const double raw = bound_beckner(alpha, gamma);
  return raw > 0.0 ? std::max(raw, mu) : mu;
}

/// Best bound on the coarse-marginal entropy sum: the Beckner branch while
/// positive, else -ln of the single-bin product limit (1 + sqrt(lambda0))^2/4.
/// At alpha = 1 this is -ln min(gamma / (e pi), (1 + sqrt(lambda0))^2 / 4).
inline double best_bound_qp(double gamma, double alpha = 1.0, int node_count = 64) {
  const double lam = solve_concentration(gamma, node_count).lambda0;
  // Same expression as bound_deutsch so the two routes agree bit for bit.
  const double d = -2.0 * std::log(0.5 * (1.0 + std::sqrt(lam)));
  const double raw = bound_beckner(alpha, gamma);
  return raw > 0.0 ? std::max(raw, d) : d;
}

/// Limit on q_k + p_l for any single pair of bins: 1 + sqrt(lambda0).
inline double single_bin_bound(double gamma, int node_count = 64) {
  return 1.0 + std::sqrt(solve_concentration(gamma, node_count).lambda0);
}

/// Limit on the product q_k p_l: (1 + sqrt(lambda0))^2 / 4.
inline double single_bin_product_bound(double gamma, int node_count = 64) {
  const double s = single_bin_bound(gamma, node_count);
  return 0.25 * s * s;
}

/// Everything the bounds layer knows about one (gamma, alpha) pair, derived
/// from a single eigenvalue solve.
struct BoundReport {
  double gamma = 0.0;
  double alpha = 1.0;
  double beta = 1.0;
  double lambda0 = 0.0;
  double c_max = 0.0;
  double bound_mu = 0.0;       // -ln lambda0
  double bound_deutsch = 0.0;  // -2 ln((1 + c_max)/2)
  double beckner_raw = 0.0;    // may be negative
  bool beckner_valid = false;  // beckner_raw > 0
  double best_ab = 0.0;
  double best_qp = 0.0;

  /// The Beckner-type bound only when it is usable.
  std::optional<double> bound_beckner_value() const {
    return beckner_valid ? std::optional<double>(beckner_raw) : std::nullopt;
  }
};

namespace detail {

inline BoundReport report_from_lambda0(double gamma, double alpha, double lambda0) {
  BoundReport r;
  r.gamma = gamma;
  const OrderPair orders = conjugate_order(alpha);
  r.alpha = orders.alpha;
  r.beta = orders.beta;
  r.lambda0 = lambda0;
  r.c_max = std::sqrt(lambda0);
  r.bound_mu = -std::log(lambda0);
  r.bound_deutsch = -2.0 * std::log(0.5 * (1.0 + r.c_max));
  r.beckner_raw = bound_beckner(alpha, gamma);
  r.beckner_valid = r.beckner_raw > 0.0;
  r.best_ab = r.beckner_valid ? std::max(r.beckner_raw, r.bound_mu) : r.bound_mu;
  r.best_qp = r.beckner_valid ? std::max(r.beckner_raw, r.bound_deutsch) : r.bound_deutsch;
  return r;
}

}  // namespace detail

inline BoundReport make_bound_report(double gamma, double alpha, int node_count = 64) {
  return detail::report_from_lambda0(
      gamma, alpha, solve_concentration(gamma, node_count).lambda0);
}

}  // namespace qloc
