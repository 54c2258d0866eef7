#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "qloc/grid.hpp"

namespace qloc {

/// Conjugate grid of `g`: same count N, step 2 pi hbar / (N * g.step),
/// origin at -floor(N/2) steps so the grid brackets zero, opposite space.
inline GridSpec conjugate_grid(const GridSpec& g, double hbar = 1.0) {
  g.validate();
  if (!(hbar > 0.0)) throw std::invalid_argument("conjugate_grid: hbar must be positive");
  const double step = 2.0 * std::numbers::pi * hbar / (g.count * g.step);
  return {-(g.count / 2) * step, step, g.count, conjugate_space(g.space)};
}

namespace detail {

// Shared core of both transform directions. With sign = -1 this evaluates
//
//   out_k = step/sqrt(2 pi hbar) * sum_j in_j exp(-i t_k s_j / hbar)
//
// on the target points t_k, and with sign = +1 the conjugate sum. Splitting
// the phase as t_k s_j = t_k s_0 + t_0 j ds + j k ds dt reduces the double
// sum to one radix-2 FFT plus two O(N) phase ramps; dt ds = 2 pi hbar / N
// makes the FFT factor exact, so the pair of directions inverts to machine
// precision and Parseval holds by unitarity.
inline GridState transform_impl(const GridState& state, const GridSpec& target,
                                int sign) {
  const GridSpec& g = state.grid();
  target.validate();
  if (target.space != conjugate_space(g.space))
    throw std::invalid_argument("fourier: target grid lives in the wrong space");
  if (target.count != g.count)
    throw std::invalid_argument("fourier: target grid must keep the sample count");
  const double hbar = state.hbar();
  const double twopih = 2.0 * std::numbers::pi * hbar;
  if (std::abs(target.step * g.count * g.step / twopih - 1.0) > 1e-9)
    throw std::invalid_argument("fourier: target step is not conjugate to source step");

  const int n = g.count;
  const double ds = g.step, dt = target.step;
  std::vector<std::complex<double>> work(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j)
    work[static_cast<std::size_t>(j)] =
        state.amplitudes()[static_cast<std::size_t>(j)] *
        std::polar(1.0, sign * target.origin * j * ds / hbar);

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> out(static_cast<std::size_t>(n));
  if (sign < 0) {
    fft.fwd(out, work);
  } else {
    fft.inv(out, work);  // includes 1/N
    for (auto& v : out) v *= static_cast<double>(n);
  }

  const double scale = ds / std::sqrt(twopih);
  for (int k = 0; k < n; ++k)
    out[static_cast<std::size_t>(k)] *=
        scale * std::polar(1.0, sign * target.point(k) * g.origin / hbar);
  return GridState(target, std::move(out), hbar);
}

}  // namespace detail

/// Momentum representation psi~(p) = (2 pi hbar)^(-1/2) integral dx
/// exp(-i p x / hbar) psi(x), sampled on `target` (which must be conjugate
/// to the state's grid: same count, step * N * source step = 2 pi hbar).
inline GridState fourier_transform(const GridState& state, const GridSpec& target) {
  if (state.space() != Space::position)
    throw std::invalid_argument("fourier_transform: state must be in position space");
  return detail::transform_impl(state, target, -1);
}

inline GridState fourier_transform(const GridState& state) {
  return fourier_transform(state, conjugate_grid(state.grid(), state.hbar()));
}

/// Position representation psi(x) = (2 pi hbar)^(-1/2) integral dp
/// exp(+i p x / hbar) psi~(p) on `target`. Exact inverse of
/// fourier_transform when the grids match.
inline GridState inverse_fourier_transform(const GridState& state,
                                           const GridSpec& target) {
  if (state.space() != Space::momentum)
    throw std::invalid_argument(
        "inverse_fourier_transform: state must be in momentum space");
  return detail::transform_impl(state, target, +1);
}

inline GridState inverse_fourier_transform(const GridState& state) {
  return inverse_fourier_transform(state, conjugate_grid(state.grid(), state.hbar()));
}

/// Zero-pad `state` to `new_count` samples at the same step, splitting the
/// padding evenly. Amplitudes are unchanged, so the represented function and
/// its transform are too; only the conjugate-grid resolution improves.
inline GridState widen_grid(const GridState& state, int new_count) {
  const GridSpec& g = state.grid();
  if (new_count < g.count)
    throw std::invalid_argument("widen_grid: new count must be >= current count");
  const int pad_left = (new_count - g.count) / 2;
  GridSpec wider{g.origin - pad_left * g.step, g.step, new_count, g.space};
  std::vector<std::complex<double>> amp(static_cast<std::size_t>(new_count));
  for (int i = 0; i < g.count; ++i)
    amp[static_cast<std::size_t>(i + pad_left)] =
        state.amplitudes()[static_cast<std::size_t>(i)];
  return GridState(wider, std::move(amp), state.hbar());
}

}  // namespace qloc
