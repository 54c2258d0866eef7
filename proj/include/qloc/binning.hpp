#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qloc/distribution.hpp"
#include "qloc/grid.hpp"
#include "qloc/quadrature.hpp"

namespace qloc {

/// Bin j covers [(j - 1/2) w, (j + 1/2) w]; bins tile the line, edges at
/// half-integer multiples of the width. An exact edge point belongs to the
/// upper bin.
inline double bin_lower(int j, double width) { return (j - 0.5) * width; }
inline double bin_upper(int j, double width) { return (j + 0.5) * width; }
inline int bin_index_of(double s, double width) {
  return static_cast<int>(std::floor(s / width + 0.5));
}

/// Contiguous range of bin indices.
struct BinRange {
  int first = 0;
  int count = 0;

  int last() const { return first + count - 1; }
};

/// Conjugate pair of bin widths; gamma = delta_x * delta_p / hbar is the
/// only combination the uncertainty bounds depend on.
struct BinningScheme {
  double delta_x = 1.0;
  double delta_p = 1.0;
  double hbar = 1.0;

  BinningScheme(double dx, double dp, double hb = 1.0)
      : delta_x(dx), delta_p(dp), hbar(hb) {
    if (!(delta_x > 0.0) || !(delta_p > 0.0) || !(hbar > 0.0))
      throw std::invalid_argument("BinningScheme: widths and hbar must be positive");
  }

  double gamma() const { return delta_x * delta_p / hbar; }
  double width(Space s) const { return s == Space::position ? delta_x : delta_p; }
};

/// Bin masses q_j = integral over bin j of |psi|^2, for every bin meeting
/// the grid extent.
///
/// Each sample owns its grid cell; a cell straddling a bin edge donates
/// |psi_i|^2 times the overlap length to each side. This conserves the grid
/// norm exactly, so the result sums to 1 at machine precision and converges
/// at second order in the step.
inline ProbabilityDistribution coarse_grain(const GridState& state, double bin_width) {
  if (!(bin_width > 0.0) || !std::isfinite(bin_width))
    throw std::invalid_argument("coarse_grain: bin width must be positive");
  const GridSpec& g = state.grid();
  const double h = g.step;
  if (bin_width / h < 2.0)
    throw std::invalid_argument("coarse_grain: fewer than 2 samples per bin");

  const int k_lo = bin_index_of(g.lo(), bin_width);
  const int k_hi = bin_index_of(g.hi(), bin_width);
  std::vector<double> w(static_cast<std::size_t>(k_hi - k_lo + 1), 0.0);

  for (int i = 0; i < g.count; ++i) {
    const double f = std::norm(state.amplitudes()[static_cast<std::size_t>(i)]);
    if (f == 0.0) continue;
    const double cell_lo = g.point(i) - 0.5 * h;
    const double cell_hi = cell_lo + h;
    int ka = std::clamp(bin_index_of(cell_lo, bin_width), k_lo, k_hi);
    int kb = std::clamp(bin_index_of(cell_hi, bin_width), k_lo, k_hi);
    if (ka == kb) {
      w[static_cast<std::size_t>(ka - k_lo)] += f * h;
    } else {
      // h < width/2, so a cell meets at most one edge.
      const double edge = bin_upper(ka, bin_width);
      w[static_cast<std::size_t>(ka - k_lo)] += f * std::max(0.0, edge - cell_lo);
      w[static_cast<std::size_t>(kb - k_lo)] += f * std::max(0.0, cell_hi - edge);
    }
  }

  ProbabilityDistribution dist(k_lo, std::move(w));
  if (!dist.normalized(1e-9))
    throw std::runtime_error("coarse_grain: bin masses do not sum to 1");
  return dist;
}

/// Slot -> frequency order for the intra-bin Fourier basis. Slots enumerate
/// orders as 0, -1, +1, -2, +2, ... so slot 0 is the constant mode and a
/// basis of size B covers orders -B/2 .. (B-1)/2 going symmetrically outward.
inline int basis_order(int slot) {
  if (slot < 0) throw std::invalid_argument("basis_order: slot must be >= 0");
  return (slot % 2 == 0) ? slot / 2 : -(slot + 1) / 2;
}

/// Orthonormal Fourier mode of order m on bin k:
///   phi(s) = width^(-1/2) exp(2 pi i m (s - k width) / width)  inside the bin,
///   0 outside. Modes with distinct orders are orthonormal in L2 of the bin.
struct BinBasisFunction {
  int bin_index = 0;
  int order = 0;
  double width = 1.0;

  std::complex<double> operator()(double s) const {
    if (s < bin_lower(bin_index, width) || s > bin_upper(bin_index, width))
      return {0.0, 0.0};
    const double phase =
        2.0 * std::numbers::pi * order * (s - bin_index * width) / width;
    return std::polar(1.0 / std::sqrt(width), phase);
  }
};

inline BinBasisFunction bin_fourier_basis(int bin_index, int order, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("bin_fourier_basis: width must be positive");
  return {bin_index, order, width};
}

/// Projections of a state onto the intra-bin Fourier modes of one bin,
/// coefficients[slot] = <phi_{k, basis_order(slot)} | psi>.
struct BinCoefficients {
  int bin_index = 0;
  int basis_size = 0;
  std::vector<std::complex<double>> coefficients;

  /// Captured mass sum |c|^2; bounded by the bin mass q_k (Bessel).
  double power() const {
    double s = 0.0;
    for (const auto& c : coefficients) s += std::norm(c);
    return s;
  }
};

namespace detail {

inline double sinc(double z) { return z == 0.0 ? 1.0 : std::sin(z) / z; }

// Exact integral of conj(phi_{k,m}) over [a, b] inside bin k, divided by the
// width^(-1/2) normalization (applied once by the caller):
//   integral = len * sinc(pi m len / w) * exp(-2 pi i m (mid - k w) / w).
inline std::complex<double> mode_segment_integral(int m, double a, double b,
                                                  double k_center, double w) {
  const double len = b - a;
  const double mid = 0.5 * (a + b);
  const double omega = 2.0 * std::numbers::pi * m / w;
  return std::polar(len * sinc(0.5 * omega * len), -omega * (mid - k_center));
}

}  // namespace detail

/// Coefficients <phi_km | psi> for all slots of a size-`basis_size` basis.
///
/// The state is read as the piecewise-constant interpolant on its grid cells
/// and each mode is integrated against it exactly (the oscillatory factor is
/// handled in closed form per cell, so accuracy is limited only by the cell
/// size, not by the mode order). With this rule sum_m |a_km|^2 <= q_k holds
/// at machine precision against coarse_grain on the same grid.
inline BinCoefficients bin_coefficients(const GridState& state,
                                        const BinningScheme& scheme, int bin_index,
                                        int basis_size) {
  if (basis_size < 1)
    throw std::invalid_argument("bin_coefficients: basis size must be >= 1");
  const double w = scheme.width(state.space());
  const GridSpec& g = state.grid();
  const double h = g.step;
  if (w / h < 2.0)
    throw std::invalid_argument("bin_coefficients: fewer than 2 samples per bin");

  const double lo = bin_lower(bin_index, w);
  const double hi = bin_upper(bin_index, w);
  const double k_center = bin_index * w;

  int ia = static_cast<int>(std::ceil((lo - g.origin) / h - 0.5)) - 1;
  int ib = static_cast<int>(std::floor((hi - g.origin) / h + 0.5)) + 1;
  ia = std::max(ia, 0);
  ib = std::min(ib, g.count - 1);

  const int mmax = basis_size / 2;
  std::vector<std::complex<double>> mode(static_cast<std::size_t>(mmax) + 1);

  BinCoefficients out;
  out.bin_index = bin_index;
  out.basis_size = basis_size;
  out.coefficients.assign(static_cast<std::size_t>(basis_size), {0.0, 0.0});

  // Full cells share one set of segment integrals up to a running phase.
  bool have_full = false;
  std::vector<std::complex<double>> full_mag(static_cast<std::size_t>(mmax) + 1);

  for (int i = ia; i <= ib; ++i) {
    const std::complex<double> psi = state.amplitudes()[static_cast<std::size_t>(i)];
    const double cell_lo = g.point(i) - 0.5 * h;
    const double a = std::max(cell_lo, lo);
    const double b = std::min(cell_lo + h, hi);
    if (!(b > a)) continue;

    if (b - a == h) {
      if (!have_full) {
        for (int m = 0; m <= mmax; ++m)
          full_mag[static_cast<std::size_t>(m)] = std::polar(
              h * detail::sinc(std::numbers::pi * m * h / w), 0.0);
        have_full = true;
      }
      const double mid = 0.5 * (a + b);
      const std::complex<double> e1 =
          std::polar(1.0, -2.0 * std::numbers::pi * (mid - k_center) / w);
      std::complex<double> em{1.0, 0.0};
      for (int m = 0; m <= mmax; ++m) {
        mode[static_cast<std::size_t>(m)] = full_mag[static_cast<std::size_t>(m)] * em;
        em *= e1;
      }
    } else {
      for (int m = 0; m <= mmax; ++m)
        mode[static_cast<std::size_t>(m)] =
            detail::mode_segment_integral(m, a, b, k_center, w);
    }

    for (int slot = 0; slot < basis_size; ++slot) {
      const int m = basis_order(slot);
      const std::complex<double> seg =
          m >= 0 ? mode[static_cast<std::size_t>(m)]
                 : std::conj(mode[static_cast<std::size_t>(-m)]);
      out.coefficients[static_cast<std::size_t>(slot)] += psi * seg;
    }
  }

  const double scale = 1.0 / std::sqrt(w);
  for (auto& c : out.coefficients) c *= scale;
  return out;
}

/// Matrix elements U[k m, l n] = (2 pi hbar)^(-1/2) * double integral over
/// position bin k and momentum bin l of exp(i p x / hbar) conj(phi_km) theta_ln.
/// Rows (k, m) of |U|^2 summed over a complete (l, n) set approach 1; over the
/// truncated ranges kept here the sum stays <= 1 and the worst shortfall is
/// reported as row_defect.
struct OverlapTensor {
  BinRange position_bins;
  BinRange momentum_bins;
  int basis_size = 0;
  std::vector<std::complex<double>> entries;
  double row_defect = 0.0;  // max over (k, m) of 1 - sum_{l,n} |U|^2
  double max_abs = 0.0;

  const std::complex<double>& at(int k, int m_slot, int l, int n_slot) const {
    const int kr = k - position_bins.first;
    const int lr = l - momentum_bins.first;
    if (kr < 0 || kr >= position_bins.count || lr < 0 || lr >= momentum_bins.count ||
        m_slot < 0 || m_slot >= basis_size || n_slot < 0 || n_slot >= basis_size)
      throw std::out_of_range("OverlapTensor::at: index outside stored ranges");
    const std::size_t idx =
        ((static_cast<std::size_t>(kr) * static_cast<std::size_t>(basis_size) +
          static_cast<std::size_t>(m_slot)) *
             static_cast<std::size_t>(momentum_bins.count) +
         static_cast<std::size_t>(lr)) *
            static_cast<std::size_t>(basis_size) +
        static_cast<std::size_t>(n_slot);
    return entries[idx];
  }
};

/// Computes the overlap tensor over the given bin ranges by tensor-product
/// Gauss-Legendre quadrature on each bin pair. `nodes_per_axis` must resolve
/// the fastest oscillation: roughly gamma * (|l| + 1/2) / (2 pi) + basis/2
/// cycles across a position bin, so the default 48 is adequate for the small
/// gammas and ranges used in practice; raise it for gamma beyond ~10 or
/// basis sizes beyond ~16.
inline OverlapTensor overlap_tensor(const BinningScheme& scheme,
                                    const BinRange& position_bins,
                                    const BinRange& momentum_bins, int basis_size,
                                    int nodes_per_axis = 48) {
  if (position_bins.count < 1 || momentum_bins.count < 1)
    throw std::invalid_argument("overlap_tensor: empty bin range");
  if (basis_size < 1) throw std::invalid_argument("overlap_tensor: basis size must be >= 1");
  if (nodes_per_axis < 32)
    throw std::invalid_argument("overlap_tensor: need at least 32 quadrature nodes per axis");

  const QuadratureRule rule = gauss_legendre(nodes_per_axis);
  const int q = nodes_per_axis;
  const int b = basis_size;
  const double dx = scheme.delta_x, dp = scheme.delta_p, hbar = scheme.hbar;

  OverlapTensor out;
  out.position_bins = position_bins;
  out.momentum_bins = momentum_bins;
  out.basis_size = b;
  out.entries.assign(static_cast<std::size_t>(position_bins.count) * b *
                         static_cast<std::size_t>(momentum_bins.count) * b,
                     {0.0, 0.0});

  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * hbar * dx * dp);
  // Mode phases on reference nodes: conj(phi_m)(x) ~ exp(-i pi m t),
  // theta_n(p) ~ exp(+i pi n u) with t, u in [-1, 1] across the bin.
  std::vector<std::complex<double>> phi(static_cast<std::size_t>(b) * q);
  std::vector<std::complex<double>> theta(static_cast<std::size_t>(b) * q);
  for (int slot = 0; slot < b; ++slot) {
    const int m = basis_order(slot);
    for (int i = 0; i < q; ++i) {
      const double ang = std::numbers::pi * m * rule.nodes[static_cast<std::size_t>(i)];
      phi[static_cast<std::size_t>(slot) * q + i] = std::polar(1.0, -ang);
      theta[static_cast<std::size_t>(slot) * q + i] = std::polar(1.0, ang);
    }
  }

  std::vector<std::complex<double>> kernel(static_cast<std::size_t>(q) * q);
  std::vector<std::complex<double>> partial(static_cast<std::size_t>(b) * q);

  for (int kr = 0; kr < position_bins.count; ++kr) {
    const int k = position_bins.first + kr;
    for (int lr = 0; lr < momentum_bins.count; ++lr) {
      const int l = momentum_bins.first + lr;
      for (int i = 0; i < q; ++i) {
        const double x = (k + 0.5 * rule.nodes[static_cast<std::size_t>(i)]) * dx;
        const double wx = 0.5 * dx * rule.weights[static_cast<std::size_t>(i)];
        for (int j = 0; j < q; ++j) {
          const double p = (l + 0.5 * rule.nodes[static_cast<std::size_t>(j)]) * dp;
          const double wp = 0.5 * dp * rule.weights[static_cast<std::size_t>(j)];
          kernel[static_cast<std::size_t>(i) * q + j] =
              std::polar(wx * wp, p * x / hbar);
        }
      }
      for (int slot = 0; slot < b; ++slot) {
        for (int j = 0; j < q; ++j) {
          std::complex<double> acc{0.0, 0.0};
          for (int i = 0; i < q; ++i)
            acc += phi[static_cast<std::size_t>(slot) * q + i] *
                   kernel[static_cast<std::size_t>(i) * q + j];
          partial[static_cast<std::size_t>(slot) * q + j] = acc;
        }
      }
      for (int ms = 0; ms < b; ++ms) {
        for (int ns = 0; ns < b; ++ns) {
          std::complex<double> acc{0.0, 0.0};
          for (int j = 0; j < q; ++j)
            acc += partial[static_cast<std::size_t>(ms) * q + j] *
                   theta[static_cast<std::size_t>(ns) * q + j];
          const std::size_t idx =
              ((static_cast<std::size_t>(kr) * b + static_cast<std::size_t>(ms)) *
                   static_cast<std::size_t>(momentum_bins.count) +
               static_cast<std::size_t>(lr)) *
                  b +
              static_cast<std::size_t>(ns);
          out.entries[idx] = norm * acc;
        }
      }
    }
  }

  out.max_abs = 0.0;
  out.row_defect = 0.0;
  for (int kr = 0; kr < position_bins.count; ++kr) {
    for (int ms = 0; ms < b; ++ms) {
      double row = 0.0;
      for (int lr = 0; lr < momentum_bins.count; ++lr) {
        for (int ns = 0; ns < b; ++ns) {
          const std::size_t idx =
              ((static_cast<std::size_t>(kr) * b + static_cast<std::size_t>(ms)) *
                   static_cast<std::size_t>(momentum_bins.count) +
               static_cast<std::size_t>(lr)) *
                  b +
              static_cast<std::size_t>(ns);
          const double a2 = std::norm(out.entries[idx]);
          row += a2;
          out.max_abs = std::max(out.max_abs, std::sqrt(a2));
        }
      }
      out.row_defect = std::max(out.row_defect, 1.0 - row);
    }
  }
  return out;
}

/// Distribution over (bin, mode) labels from expanding the state in the
/// intra-bin bases of the bins in `bins`: weight |a_km|^2 at flat index
/// (k - bins.first) * basis_size + slot.
///
/// captured_mass is the total kept weight. It falls short of 1 by whatever
/// the bin range and basis truncation discard; that deficit is left visible
/// (no renormalization) and low_mass flags a capture below 0.999.
struct IntraBinExpansion {
  ProbabilityDistribution distribution;
  double captured_mass = 0.0;
  bool low_mass = false;
};

inline IntraBinExpansion joint_entropy_distribution(const GridState& state,
                                                    const BinningScheme& scheme,
                                                    int basis_size,
                                                    const BinRange& bins) {
  if (bins.count < 1)
    throw std::invalid_argument("joint_entropy_distribution: empty bin range");
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(bins.count) * basis_size);
  for (int k = bins.first; k <= bins.last(); ++k) {
    const BinCoefficients bc = bin_coefficients(state, scheme, k, basis_size);
    for (const auto& c : bc.coefficients) w.push_back(std::norm(c));
  }
  ProbabilityDistribution dist(0, std::move(w));
  const double captured = dist.total();
  return {std::move(dist), captured, captured < 0.999};
}

}  // namespace qloc
