#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "qloc/quadrature.hpp"

namespace qloc {

/// Kernel of the band-and-bin concentration problem on [-1, 1]:
///   K(t, s) = sin(gamma (t - s) / 4) / (pi (t - s)),
/// with the diagonal limit gamma / (4 pi). Symmetric and positive definite;
/// its largest eigenvalue is the maximal probability concentration a
/// bin-limited state can carry in one conjugate bin.
inline double sinc_kernel(double gamma, double t, double s) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("sinc_kernel: gamma must be positive");
  const double d = t - s;
  if (d == 0.0) return gamma / (4.0 * std::numbers::pi);
  return std::sin(0.25 * gamma * d) / (std::numbers::pi * d);
}

/// Leading eigenpair of the sinc kernel, discretized by Nystrom collocation
/// on a Gauss-Legendre rule.
struct ConcentrationEigenSolution {
  double gamma = 0.0;
  int node_count = 0;
  QuadratureRule rule;

  double lambda0 = 0.0;              // largest eigenvalue, clamped below 1
  std::vector<double> eigenvector;   // Psi at the nodes, sum w Psi^2 = 1, Psi(0) > 0
  std::vector<double> spectrum_head; // leading eigenvalues above the noise
                                     // floor 1e-13, descending, at most 8
  double convergence_delta = 0.0;    // |lambda0(n) - lambda0(n/2)|

  bool converged(double tol = 1e-8) const { return convergence_delta <= tol; }
};

namespace detail {

// Largest eigenvalue of the symmetrized Nystrom matrix
// A_ij = sqrt(w_i) K(t_i, t_j) sqrt(w_j); same spectrum as the
// non-symmetric collocation matrix, but safe for the symmetric solver.
inline Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> nystrom_eigs(
    double gamma, const QuadratureRule& rule) {
  const int n = static_cast<int>(rule.size());
  std::vector<double> sqw(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    sqw[static_cast<std::size_t>(i)] = std::sqrt(rule.weights[static_cast<std::size_t>(i)]);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = rule.weights[static_cast<std::size_t>(i)] * gamma / (4.0 * std::numbers::pi);
    for (int j = 0; j < i; ++j) {
      const double v = sqw[static_cast<std::size_t>(i)] * sqw[static_cast<std::size_t>(j)] *
                       sinc_kernel(gamma, rule.nodes[static_cast<std::size_t>(i)],
                                   rule.nodes[static_cast<std::size_t>(j)]);
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("solve_concentration: eigensolver failed");
  return es;
}

inline double nystrom_top_eigenvalue(double gamma, int node_count) {
  return nystrom_eigs(gamma, gauss_legendre(node_count)).eigenvalues().maxCoeff();
}

}  // namespace detail

/// Solves the concentration eigenproblem at the given gamma.
///
/// The exact lambda0 lies strictly inside (0, 1) for every finite gamma, but
/// at large gamma it approaches 1 closer than double rounding; the computed
/// value is clamped to the largest double below 1 so the strict inequality
/// survives. convergence_delta compares against the half-resolution solve;
/// a result with delta above 1e-8 is still returned, flagged, for the caller
/// to judge.
inline ConcentrationEigenSolution solve_concentration(double gamma, int node_count = 64) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("solve_concentration: gamma must be positive");
  if (node_count < 16)
    throw std::invalid_argument("solve_concentration: need at least 16 nodes");

  ConcentrationEigenSolution sol;
  sol.gamma = gamma;
  sol.node_count = node_count;
  sol.rule = gauss_legendre(node_count);

  const auto es = detail::nystrom_eigs(gamma, sol.rule);
  const int n = node_count;
  const double top = std::nextafter(1.0, 0.0);

  sol.lambda0 = std::min(es.eigenvalues()(n - 1), top);

  for (int j = n - 1; j >= 0 && sol.spectrum_head.size() < 8; --j) {
    const double lam = es.eigenvalues()(j);
    if (lam <= 1e-13) break;  // below here Nystrom values are roundoff noise
    sol.spectrum_head.push_back(std::min(lam, top));
  }

  // Undo the symmetrization: Psi_i = v_i / sqrt(w_i) gives the collocation
  // eigenfunction with sum w Psi^2 = |v|^2 = 1 for free.
  sol.eigenvector.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    sol.eigenvector[static_cast<std::size_t>(i)] =
        es.eigenvectors()(i, n - 1) / std::sqrt(sol.rule.weights[static_cast<std::size_t>(i)]);

  // Fix the sign by the Nystrom interpolant at t = 0 (the exact leading
  // eigenfunction is even and nodeless, so its center value cannot vanish).
  double center = 0.0;
  for (int i = 0; i < n; ++i)
    center += sol.rule.weights[static_cast<std::size_t>(i)] *
              sinc_kernel(gamma, 0.0, sol.rule.nodes[static_cast<std::size_t>(i)]) *
              sol.eigenvector[static_cast<std::size_t>(i)];
  if (center < 0.0)
    for (auto& v : sol.eigenvector) v = -v;

  sol.convergence_delta =
      std::abs(sol.lambda0 - detail::nystrom_top_eigenvalue(gamma, node_count / 2));
  return sol;
}

/// Largest overlap magnitude sqrt(lambda0(gamma)).
inline double c_max(double gamma, int node_count = 64) {
  return std::sqrt(solve_concentration(gamma, node_count).lambda0);
}

/// Quadratic form W[psi] = sum_ij w_i w_j K(t_i, t_j) e^{-i eta (t_i - t_j)}
/// psi_i conj(psi_j) for a trial vector sampled at the rule's nodes and
/// normalized to sum w |psi|^2 = 1. Rayleigh-bounded by lambda0 for any eta:
/// the phase twist e^{i eta t} maps trial to trial without changing W.
inline double concentration_functional(std::span<const std::complex<double>> psi,
                                       double gamma, const QuadratureRule& rule,
                                       double eta = 0.0) {
  if (psi.size() != rule.size())
    throw std::invalid_argument("concentration_functional: trial size != rule size");
  double nrm = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) nrm += rule.weights[i] * std::norm(psi[i]);
  if (std::abs(nrm - 1.0) > 1e-6)
    throw std::invalid_argument("concentration_functional: trial is not normalized");

  // The (i, j) and (j, i) terms are conjugates, so each pair is folded into
  // its real part analytically and the imaginary residue vanishes identically.
  double acc = 0.0;
  const std::size_t n = psi.size();
  for (std::size_t i = 0; i < n; ++i) {
    acc += rule.weights[i] * rule.weights[i] *
           sinc_kernel(gamma, rule.nodes[i], rule.nodes[i]) * std::norm(psi[i]);
    for (std::size_t j = 0; j < i; ++j) {
      const double k = rule.weights[i] * rule.weights[j] *
                       sinc_kernel(gamma, rule.nodes[i], rule.nodes[j]);
      const std::complex<double> twist =
          std::polar(1.0, -eta * (rule.nodes[i] - rule.nodes[j]));
      acc += k * 2.0 * (twist * psi[i] * std::conj(psi[j])).real();
    }
  }
  return acc;
}

}  // namespace qloc
