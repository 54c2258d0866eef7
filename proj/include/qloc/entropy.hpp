#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qloc/distribution.hpp"

namespace qloc {

/// Pair of entropy orders (alpha, beta) tied by 1/alpha + 1/beta = 2.
struct OrderPair {
  double alpha = 1.0;
  double beta = 1.0;

  bool shannon() const { return alpha == 1.0; }
};

/// Conjugate order beta = alpha/(2 alpha - 1) for alpha >= 1.
/// alpha = 1 is self-conjugate; alpha = +infinity pairs with beta = 1/2.
inline OrderPair conjugate_order(double alpha) {
  if (std::isnan(alpha) || alpha < 1.0)
    throw std::invalid_argument("conjugate_order: alpha must be >= 1");
  if (std::isinf(alpha)) return {alpha, 0.5};
  return {alpha, alpha / (2.0 * alpha - 1.0)};
}

/// Shannon entropy -sum w ln w in nats. Zero-weight bins contribute nothing.
inline double shannon_entropy(const ProbabilityDistribution& dist) {
  double h = 0.0;
  for (double w : dist.weights())
    if (w > 0.0) h -= w * std::log(w);
  return h;
}

/// Renyi entropy of positive order: ln(sum w^order) / (1 - order).
///
/// Orders within 1e-8 of 1 are routed through the Shannon limit to avoid
/// the 0/0 cancellation; order = +infinity yields the min-entropy -ln max w.
inline double renyi_entropy(const ProbabilityDistribution& dist, double order) {
  if (std::isnan(order) || !(order > 0.0))
    throw std::invalid_argument("renyi_entropy: order must be > 0");
  if (std::isinf(order)) return -std::log(dist.max_weight());
  if (std::abs(order - 1.0) < 1e-8) return shannon_entropy(dist);
  double s = 0.0;
  for (double w : dist.weights())
    if (w > 0.0) s += std::pow(w, order);
  return std::log(s) / (1.0 - order);
}

}  // namespace qloc
