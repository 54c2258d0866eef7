#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace qloc {

enum class Space { position, momentum };

inline Space conjugate_space(Space s) {
  return s == Space::position ? Space::momentum : Space::position;
}

/// Uniform sample grid. Sample i sits at origin + i*step and owns the cell
/// [point - step/2, point + step/2]; lo()/hi() are the extents of the full
/// cell cover, so span() == count * step exactly.
struct GridSpec {
  double origin = 0.0;
  double step = 1.0;
  int count = 0;
  Space space = Space::position;

  double point(int i) const { return origin + i * step; }
  double lo() const { return origin - 0.5 * step; }
  double hi() const { return origin + (count - 0.5) * step; }
  double span() const { return count * step; }

  void validate() const {
    if (!(std::isfinite(origin)))
      throw std::invalid_argument("GridSpec: origin must be finite");
    if (!(step > 0.0) || !std::isfinite(step))
      throw std::invalid_argument("GridSpec: step must be positive");
    if (count < 2) throw std::invalid_argument("GridSpec: count must be >= 2");
  }

  bool operator==(const GridSpec&) const = default;
};

/// Complex amplitudes sampled on a uniform grid, renormalized at construction
/// so that step * sum |psi_i|^2 = 1. The pre-scaling norm is kept as
/// raw_norm(); a value far from 1 flags a state that lost mass to truncation.
class GridState {
 public:
  GridState(GridSpec grid, std::vector<std::complex<double>> amplitudes,
            double hbar = 1.0)
      : grid_(grid), amp_(std::move(amplitudes)), hbar_(hbar) {
    grid_.validate();
    if (!(hbar_ > 0.0) || !std::isfinite(hbar_))
      throw std::invalid_argument("GridState: hbar must be positive");
    if (amp_.size() != static_cast<std::size_t>(grid_.count))
      throw std::invalid_argument("GridState: amplitude count != grid count");
    double s = 0.0;
    for (const auto& a : amp_) s += std::norm(a);
    s *= grid_.step;
    if (!(s > 0.0) || !std::isfinite(s))
      throw std::invalid_argument("GridState: norm is zero or not finite");
    raw_norm_ = std::sqrt(s);
    const double inv = 1.0 / raw_norm_;
    for (auto& a : amp_) a *= inv;
  }

  const GridSpec& grid() const { return grid_; }
  const std::vector<std::complex<double>>& amplitudes() const { return amp_; }
  Space space() const { return grid_.space; }
  double hbar() const { return hbar_; }

  /// Grid L2 norm before renormalization.
  double raw_norm() const { return raw_norm_; }

  /// Grid L2 norm after renormalization; 1 up to rounding.
  double norm() const {
    double s = 0.0;
    for (const auto& a : amp_) s += std::norm(a);
    return std::sqrt(s * grid_.step);
  }

 private:
  GridSpec grid_;
  std::vector<std::complex<double>> amp_;
  double hbar_;
  double raw_norm_;
};

/// Normalized Gaussian wave packet sampled on a position grid:
///
///   psi(x) = pi^(-1/4) w^(-1/2) exp(-(x - center)^2 / (2 w^2))
///            * exp(i shift x / hbar)
///
/// so |psi|^2 has standard deviation w/sqrt(2) about `center` and the
/// momentum density has standard deviation hbar/(w sqrt(2)) about `shift`.
///
/// The grid must hold the state: the analytic probability mass outside the
/// grid extent, and outside the conjugate band (+-pi hbar/step around
/// `shift`) that the sampling can represent, must each stay below 1e-12.
/// Grids that are too narrow or too coarse are rejected.
inline GridState make_gaussian(double center, double momentum_shift, double width,
                               const GridSpec& grid, double hbar = 1.0) {
  grid.validate();
  if (grid.space != Space::position)
    throw std::invalid_argument("make_gaussian: grid must be a position grid");
  if (!(width > 0.0) || !std::isfinite(width))
    throw std::invalid_argument("make_gaussian: width must be positive");
  if (!(hbar > 0.0)) throw std::invalid_argument("make_gaussian: hbar must be positive");
  if (!std::isfinite(center) || !std::isfinite(momentum_shift))
    throw std::invalid_argument("make_gaussian: center/shift must be finite");

  // |psi|^2 restricted to [a, b] integrates to (erf((b-c)/w) - erf((a-c)/w))/2.
  const double tail_lo = 0.5 * std::erfc((center - grid.lo()) / width);
  const double tail_hi = 0.5 * std::erfc((grid.hi() - center) / width);
  if (tail_lo + tail_hi >= 1e-12)
    throw std::invalid_argument(
        "make_gaussian: grid extent too narrow, position tail mass >= 1e-12");

  // Sampling at `step` represents momenta within +-pi hbar/step of the carrier.
  const double band = std::numbers::pi * hbar / grid.step;
  const double wp = hbar / width;  // momentum-density width parameter
  const double alias = 0.5 * std::erfc((band + momentum_shift) / wp) +
                       0.5 * std::erfc((band - momentum_shift) / wp);
  if (alias >= 1e-12)
    throw std::invalid_argument(
        "make_gaussian: grid step too coarse, momentum tail mass >= 1e-12");

  const double amp0 = std::pow(std::numbers::pi, -0.25) / std::sqrt(width);
  std::vector<std::complex<double>> amp(static_cast<std::size_t>(grid.count));
  for (int i = 0; i < grid.count; ++i) {
    const double x = grid.point(i);
    const double u = (x - center) / width;
    const double mag = amp0 * std::exp(-0.5 * u * u);
    amp[static_cast<std::size_t>(i)] =
        std::polar(mag, momentum_shift * x / hbar);
  }
  return GridState(grid, std::move(amp), hbar);
}

}  // namespace qloc
