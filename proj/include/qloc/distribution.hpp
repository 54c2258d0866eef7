#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qloc {

/// Discrete probability distribution over a contiguous range of integer bin
/// indices. Stores the index of the first bin plus one weight per bin.
///
/// Weights down to -1e-12 are treated as quadrature noise and clamped to
/// zero; anything more negative is a real error and rejected. Total mass is
/// cached; it equals 1 for marginal distributions but may fall below 1 for
/// truncated expansions, so normalization is a query, not a constructor
/// invariant.
class ProbabilityDistribution {
 public:
  static constexpr double kNegativeFloor = -1e-12;

  ProbabilityDistribution(int first_bin, std::vector<double> weights)
      : first_(first_bin), weights_(std::move(weights)) {
    if (weights_.empty())
      throw std::invalid_argument("ProbabilityDistribution: no weights");
    total_ = 0.0;
    max_ = 0.0;
    for (double& w : weights_) {
      if (!(w >= kNegativeFloor))
        throw std::invalid_argument(
            "ProbabilityDistribution: negative weight below noise floor");
      w = std::max(w, 0.0);
      total_ += w;
      max_ = std::max(max_, w);
    }
    if (!(total_ > 0.0))
      throw std::invalid_argument("ProbabilityDistribution: all weights zero");
  }

  int first_bin() const { return first_; }
  int last_bin() const { return first_ + static_cast<int>(weights_.size()) - 1; }
  std::size_t size() const { return weights_.size(); }

  const std::vector<double>& weights() const { return weights_; }
  double total() const { return total_; }
  double max_weight() const { return max_; }
  bool normalized(double tol = 1e-9) const { return std::abs(total_ - 1.0) <= tol; }

  /// Weight of the bin with absolute index `bin`; zero outside the stored range.
  double operator[](int bin) const {
    const int k = bin - first_;
    if (k < 0 || k >= static_cast<int>(weights_.size())) return 0.0;
    return weights_[static_cast<std::size_t>(k)];
  }

 private:
  int first_;
  std::vector<double> weights_;
  double total_;
  double max_;
};

}  // namespace qloc
