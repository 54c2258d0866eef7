#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qloc/binning.hpp"
#include "qloc/bounds.hpp"
#include "qloc/distribution.hpp"
#include "qloc/entropy.hpp"
#include "qloc/format.hpp"
#include "qloc/fourier.hpp"
#include "qloc/grid.hpp"

namespace qloc {

namespace detail {

// Uniform double in (0, 1] built from the top 53 bits; keeps the stream
// identical across standard libraries, unlike std::uniform_real_distribution.
inline double uniform01(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1p-53;
}

// Standard complex normal via Box-Muller (std::normal_distribution is
// implementation-defined, which would break byte-identical reports).
inline std::complex<double> complex_normal(std::mt19937_64& rng) {
  const double r = std::sqrt(-2.0 * std::log(uniform01(rng)));
  const double a = 2.0 * std::numbers::pi * uniform01(rng);
  return {r * std::cos(a), r * std::sin(a)};
}

}  // namespace detail

/// Position grid whose cells tile the position bins exactly: the step is
/// delta_x / 2^a, the count a power of two, and the origin centers bin 0 on
/// the grid, so every bin edge inside the extent falls on a cell boundary.
/// The count is grown until the extent covers +-x_half and the conjugate
/// step 2 pi hbar / (count * step) drops below max_step_p.
inline GridSpec aligned_grid_for(const BinningScheme& scheme, double x_half,
                                 double p_half, double max_step_x,
                                 double max_step_p) {
  if (!(x_half > 0.0) || !(p_half > 0.0) || !(max_step_x > 0.0) || !(max_step_p > 0.0))
    throw std::invalid_argument("aligned_grid_for: extents and steps must be positive");

  const double dx_bin = scheme.delta_x;
  // The sampling must also represent momenta out to +-p_half.
  const double target =
      std::min({max_step_x, std::numbers::pi * scheme.hbar / p_half, dx_bin / 16.0});
  std::int64_t m = 1;
  while (dx_bin / static_cast<double>(m) > target) m <<= 1;
  const double step = dx_bin / static_cast<double>(m);

  std::int64_t n = m;
  const double twopih = 2.0 * std::numbers::pi * scheme.hbar;
  while (static_cast<double>(n) * step < 2.0 * x_half ||
         twopih / (static_cast<double>(n) * step) > max_step_p) {
    n <<= 1;
    if (n > (std::int64_t{1} << 22))
      throw std::runtime_error("aligned_grid_for: grid would exceed 2^22 samples");
  }

  const std::int64_t bins = n / m;
  const double origin = -static_cast<double>(bins / 2) * dx_bin + 0.5 * step;
  return {origin, step, static_cast<int>(n), Space::position};
}

/// One entry of the built-in verification catalog.
struct CatalogEntry {
  enum class Kind { gaussian, band_limited };

  std::string name;
  Kind kind = Kind::gaussian;
  double width = 1.0;        // Gaussian width parameter w
  double center_bins = 0.0;  // packet center, in units of delta_x
  double shift_bins = 0.0;   // momentum carrier, in units of delta_p
  std::uint64_t seed = 0;    // band-limited states only
};

/// 20 Gaussian packets (widths 1/4..4, optionally off-center by 0.3 delta_x
/// and boosted by 0.7 delta_p) plus 4 seeded random band-limited states.
inline std::vector<CatalogEntry> builtin_catalog(std::uint64_t seed = 20240901u) {
  std::vector<CatalogEntry> v;
  const double widths[] = {0.25, 0.5, 1.0, 2.0, 4.0};
  const double offsets[][2] = {{0.0, 0.0}, {0.3, 0.0}, {0.0, 0.7}, {0.3, 0.7}};
  for (double w : widths) {
    for (const auto& o : offsets) {
      CatalogEntry e;
      e.kind = CatalogEntry::Kind::gaussian;
      e.width = w;
      e.center_bins = o[0];
      e.shift_bins = o[1];
      char buf[64];
      std::snprintf(buf, sizeof(buf), "gauss-w%g-c%g-s%g", w, o[0], o[1]);
      e.name = buf;
      v.push_back(e);
    }
  }
  for (int i = 0; i < 4; ++i) {
    CatalogEntry e;
    e.kind = CatalogEntry::Kind::band_limited;
    e.seed = seed + static_cast<std::uint64_t>(i);
    e.name = "random-band-" + std::to_string(i);
    v.push_back(e);
  }
  return v;
}

/// Realizes a catalog entry on a grid adequate for the given binning.
inline GridState make_catalog_state(const CatalogEntry& entry,
                                    const BinningScheme& scheme) {
  const double hbar = scheme.hbar;
  const double dx = scheme.delta_x, dp = scheme.delta_p;

  if (entry.kind == CatalogEntry::Kind::gaussian) {
    const double w = entry.width;
    const double sx = w / std::sqrt(2.0);
    const double sp = hbar / (w * std::sqrt(2.0));
    const double center = entry.center_bins * dx;
    const double shift = entry.shift_bins * dp;
    // 7.6 sigma keeps both truncated tails under the 1e-12 admission test.
    const GridSpec grid = aligned_grid_for(
        scheme, std::abs(center) + 7.6 * sx + dx, std::abs(shift) + 7.6 * sp + dp,
        std::min(dx, sx) / 64.0, std::min(dp, sp) / 64.0);
    return make_gaussian(center, shift, w, grid, hbar);
  }

  // Band-limited speckle: independent complex-normal momentum samples under
  // a Gaussian envelope, hard-cut at 6 envelope widths, transformed back.
  const double s0 = hbar / std::sqrt(2.0);
  const double env = 2.0 * std::max(dp, s0);
  const double p_half = std::max(7.6 * s0 + dp, 6.0 * env + dp);
  const GridSpec grid =
      aligned_grid_for(scheme, std::max(7.6 / std::sqrt(2.0) + dx, 8.0 * dx), p_half,
                       std::min(dx, s0) / 64.0, std::min(dp, s0) / 64.0);
  const GridSpec pgrid = conjugate_grid(grid, hbar);

  std::mt19937_64 rng(entry.seed);
  std::vector<std::complex<double>> amp(static_cast<std::size_t>(pgrid.count));
  for (int i = 0; i < pgrid.count; ++i) {
    const double p = pgrid.point(i);
    const std::complex<double> z = detail::complex_normal(rng);  // always draw
    if (std::abs(p) > 6.0 * env) continue;
    amp[static_cast<std::size_t>(i)] = z * std::exp(-0.5 * (p / env) * (p / env));
  }
  return inverse_fourier_transform(GridState(pgrid, std::move(amp), hbar), grid);
}

/// Knobs of the verification pipeline.
struct VerifyOptions {
  enum class WithAb { automatic, on, off };

  int node_count = 64;      // eigenvalue solve resolution
  WithAb with_ab = WithAb::automatic;
  // Intra-bin modes per bin. Capture converges like 1/basis_size through the
  // bin-edge discontinuities of the restricted state, and 64 keeps a centered
  // unit-width Gaussian above the 0.999 reliability floor at both automatic
  // gammas; edge-heavy or band-limited-noise states need more.
  int ab_basis_size = 64;
  double mass_threshold = 0.999;  // reliability floor for captured mass
  // Test hook: collapse the coarse distributions to their peak bin, which
  // fabricates an entropy deficit and must drive the case into violation.
  bool corrupt_distributions = false;
};

/// automatic -> intra-bin entropies only at gamma = 1 and gamma = 2 pi.
inline bool with_ab_default(double gamma) {
  return std::abs(gamma - 1.0) < 1e-9 ||
         std::abs(gamma - 2.0 * std::numbers::pi) < 1e-9;
}

struct SlackEntry {
  std::string bound;   // which inequality
  double bound_value;  // right-hand side
  double slack;        // measured sum minus bound_value (>= 0 when satisfied)
};

/// Outcome of checking one state against every applicable inequality.
struct VerificationCase {
  std::string label;
  double gamma = 0.0;
  OrderPair orders;
  BoundReport bounds;

  double entropy_q = 0.0;  // order-alpha entropy of the position bin masses
  double entropy_p = 0.0;  // order-beta entropy of the momentum bin masses
  double max_q = 0.0;
  double max_p = 0.0;
  double single_bin_limit = 0.0;  // 1 + sqrt(lambda0)

  std::optional<double> entropy_a;   // intra-bin (bin, mode) entropies
  std::optional<double> entropy_b;
  std::optional<double> captured_a;  // mass kept by the truncated expansions
  std::optional<double> captured_b;

  std::vector<SlackEntry> slacks;
  double min_slack = 0.0;
  bool reliable = true;

  static constexpr double kSlackTolerance = -1e-8;

  bool passed(double tol = kSlackTolerance) const {
    return reliable && min_slack >= tol;
  }
};

namespace detail {

inline ProbabilityDistribution collapse_to_peak(const ProbabilityDistribution& d) {
  std::vector<double> w(d.size(), 0.0);
  std::size_t arg = 0;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d.weights()[i] > d.weights()[arg]) arg = i;
  w[arg] = d.total();
  return {d.first_bin(), std::move(w)};
}

// Contiguous index range of bins carrying more than droppable mass.
inline BinRange occupied_range(const ProbabilityDistribution& d, double floor) {
  int lo = d.first_bin(), hi = d.last_bin();
  while (lo < hi && d[lo] <= floor) ++lo;
  while (hi > lo && d[hi] <= floor) --hi;
  return {lo, hi - lo + 1};
}

}  // namespace detail

/// Runs the full check of one position-space state against the bounds at one
/// (gamma, alpha) point: coarse-grains both marginals, optionally expands
/// them in intra-bin modes, and records the slack of every applicable
/// inequality. Slacks below -1e-8 mean a violated bound; captured mass below
/// the threshold marks the case unreliable instead of silently passing.
inline VerificationCase verify_state(const std::string& label, const GridState& psi,
                                     const BinningScheme& scheme,
                                     const OrderPair& orders,
                                     const VerifyOptions& opts = {}) {
  if (psi.space() != Space::position)
    throw std::invalid_argument("verify_state: state must be in position space");
  if (std::abs(psi.hbar() - scheme.hbar) > 1e-12 * scheme.hbar)
    throw std::invalid_argument("verify_state: state and scheme disagree on hbar");

  VerificationCase vc;
  vc.label = label;
  vc.gamma = scheme.gamma();
  vc.orders = orders;

  const ConcentrationEigenSolution eig =
      solve_concentration(vc.gamma, opts.node_count);
  vc.bounds = detail::report_from_lambda0(vc.gamma, orders.alpha, eig.lambda0);
  vc.single_bin_limit = 1.0 + std::sqrt(eig.lambda0);

  const GridState phi = fourier_transform(psi);
  ProbabilityDistribution q = coarse_grain(psi, scheme.delta_x);
  ProbabilityDistribution p = coarse_grain(phi, scheme.delta_p);
  if (opts.corrupt_distributions) {
    q = detail::collapse_to_peak(q);
    p = detail::collapse_to_peak(p);
  }

  vc.entropy_q = renyi_entropy(q, orders.alpha);
  vc.entropy_p = renyi_entropy(p, orders.beta);
  vc.max_q = q.max_weight();
  vc.max_p = p.max_weight();

  // The eigenvalue bound -ln lambda0 constrains the intra-bin entropy sum
  // only; the coarse marginals get the single-bin-derived and Beckner-type
  // floors, so no qp slack is recorded against bound_mu.
  const double sum_qp = vc.entropy_q + vc.entropy_p;
  vc.slacks.push_back(
      {"qp_deutsch", vc.bounds.bound_deutsch, sum_qp - vc.bounds.bound_deutsch});
  if (vc.bounds.beckner_valid)
    vc.slacks.push_back(
        {"qp_beckner", vc.bounds.beckner_raw, sum_qp - vc.bounds.beckner_raw});
  vc.slacks.push_back({"qp_best", vc.bounds.best_qp, sum_qp - vc.bounds.best_qp});
  vc.slacks.push_back({"single_bin", vc.single_bin_limit,
                       vc.single_bin_limit - (vc.max_q + vc.max_p)});

  const bool run_ab = opts.with_ab == VerifyOptions::WithAb::on ||
                      (opts.with_ab == VerifyOptions::WithAb::automatic &&
                       with_ab_default(vc.gamma));
  if (run_ab) {
    const IntraBinExpansion a = joint_entropy_distribution(
        psi, scheme, opts.ab_basis_size, detail::occupied_range(q, 1e-14));
    const IntraBinExpansion b = joint_entropy_distribution(
        phi, scheme, opts.ab_basis_size, detail::occupied_range(p, 1e-14));
    vc.entropy_a = renyi_entropy(a.distribution, orders.alpha);
    vc.entropy_b = renyi_entropy(b.distribution, orders.beta);
    vc.captured_a = a.captured_mass;
    vc.captured_b = b.captured_mass;
    if (a.captured_mass < opts.mass_threshold ||
        b.captured_mass < opts.mass_threshold)
      vc.reliable = false;

    const double sum_ab = *vc.entropy_a + *vc.entropy_b;
    vc.slacks.push_back(
        {"ab_eigenvalue", vc.bounds.bound_mu, sum_ab - vc.bounds.bound_mu});
    if (vc.bounds.beckner_valid)
      vc.slacks.push_back(
          {"ab_beckner", vc.bounds.beckner_raw, sum_ab - vc.bounds.beckner_raw});
    vc.slacks.push_back({"ab_best", vc.bounds.best_ab, sum_ab - vc.bounds.best_ab});
  }

  vc.min_slack = vc.slacks.front().slack;
  for (const auto& s : vc.slacks) vc.min_slack = std::min(vc.min_slack, s.slack);
  return vc;
}

/// Locates the gamma where the Beckner-type and eigenvalue bounds exchange
/// roles, by bisection on their difference. The difference is positive at
/// `lo` and negative at `hi` for every finite alpha >= 1; the search stops
/// once the interval shrinks below rel_tol or the difference itself drops
/// below value_tol.
inline double crossover_gamma(double alpha, double lo = 0.1, double hi = 50.0,
                              int node_count = 64, double rel_tol = 1e-6,
                              double value_tol = 0.0) {
  const auto diff = [&](double g) {
    return bound_beckner(alpha, g) + std::log(solve_concentration(g, node_count).lambda0);
  };
  double flo = diff(lo), fhi = diff(hi);
  if (!(flo > 0.0) || !(fhi < 0.0))
    throw std::invalid_argument("crossover_gamma: bounds do not cross inside [lo, hi]");
  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    const double fm = diff(mid);
    if (std::abs(fm) <= value_tol || hi - lo <= rel_tol * mid) break;
    if (fm > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return mid;
}

struct CrossoverPoint {
  double alpha = 1.0;
  double gamma_star = 0.0;
  double bound_value = 0.0;  // common value of the two branches at gamma_star
};

struct BoundSweep {
  std::vector<BoundReport> rows;  // gamma-major, then alpha
  std::vector<CrossoverPoint> crossovers;
};

namespace detail {

// Sweep rows are quantized to 12 significant digits at creation so that the
// in-memory table and any text serialization of it are the same numbers.
inline BoundReport quantize(const BoundReport& r) {
  BoundReport o = r;
  o.gamma = quantize12(r.gamma);
  o.alpha = quantize12(r.alpha);
  o.beta = quantize12(r.beta);
  o.lambda0 = quantize12(r.lambda0);
  o.c_max = quantize12(r.c_max);
  o.bound_mu = quantize12(r.bound_mu);
  o.bound_deutsch = quantize12(r.bound_deutsch);
  o.beckner_raw = quantize12(r.beckner_raw);
  o.best_ab = quantize12(r.best_ab);
  o.best_qp = quantize12(r.best_qp);
  return o;
}

}  // namespace detail

/// Bound table over a gamma grid x alpha list; one eigenvalue solve per
/// gamma feeds every alpha row. Adds the branch crossover per alpha when it
/// lies inside the swept gamma range.
inline BoundSweep sweep_bounds(std::span<const double> gammas,
                               std::span<const double> alphas, int node_count = 64) {
  if (gammas.empty() || alphas.empty())
    throw std::invalid_argument("sweep_bounds: empty gamma or alpha list");
  BoundSweep sweep;
  sweep.rows.reserve(gammas.size() * alphas.size());
  for (double g : gammas) {
    const double lam = solve_concentration(g, node_count).lambda0;
    for (double a : alphas)
      sweep.rows.push_back(detail::quantize(detail::report_from_lambda0(g, a, lam)));
  }
  const double glo = *std::min_element(gammas.begin(), gammas.end());
  const double ghi = *std::max_element(gammas.begin(), gammas.end());
  for (double a : alphas) {
    try {
      const double gs = crossover_gamma(a, std::min(glo, 0.1), std::max(ghi, 50.0),
                                        node_count);
      sweep.crossovers.push_back(
          {quantize12(a), quantize12(gs), quantize12(bound_beckner(a, gs))});
    } catch (const std::invalid_argument&) {
      // No crossing bracketed for this alpha; leave it out of the table.
    }
  }
  return sweep;
}

struct WidthScanPoint {
  double width = 0.0;
  double entropy_q = 0.0;
  double entropy_p = 0.0;
  double entropy_sum = 0.0;
};

struct WidthScanResult {
  double gamma = 0.0;
  OrderPair orders;
  double bound_qp = 0.0;  // best marginal bound, which min_entropy_sum must respect
  std::vector<WidthScanPoint> points;
  double min_entropy_sum = 0.0;
};

/// Entropy sum of centered Gaussians across a width list at square binning
/// delta_x = delta_p = sqrt(gamma hbar). The minimum over widths traces how
/// closely the family approaches the marginal bound.
inline WidthScanResult width_scan(double gamma, std::span<const double> widths,
                                  const OrderPair& orders,
                                  const VerifyOptions& opts = {}) {
  if (widths.empty()) throw std::invalid_argument("width_scan: empty width list");
  const double hbar = 1.0;
  const BinningScheme scheme(std::sqrt(gamma * hbar), std::sqrt(gamma * hbar), hbar);

  WidthScanResult res;
  res.gamma = gamma;
  res.orders = orders;
  res.bound_qp = best_bound_qp(gamma, orders.alpha, opts.node_count);

  for (double w : widths) {
    CatalogEntry e;
    e.kind = CatalogEntry::Kind::gaussian;
    e.width = w;
    const GridState psi = make_catalog_state(e, scheme);
    const GridState phi = fourier_transform(psi);
    WidthScanPoint pt;
    pt.width = w;
    pt.entropy_q = renyi_entropy(coarse_grain(psi, scheme.delta_x), orders.alpha);
    pt.entropy_p = renyi_entropy(coarse_grain(phi, scheme.delta_p), orders.beta);
    pt.entropy_sum = pt.entropy_q + pt.entropy_p;
    res.points.push_back(pt);
  }
  res.min_entropy_sum = res.points.front().entropy_sum;
  for (const auto& pt : res.points)
    res.min_entropy_sum = std::min(res.min_entropy_sum, pt.entropy_sum);
  return res;
}

/// Full catalog x gamma x alpha verification suite.
struct SuiteResult {
  std::vector<VerificationCase> cases;
  double min_slack = 0.0;
  bool all_passed = true;
  bool all_reliable = true;
};

inline SuiteResult verify_catalog(std::span<const double> gammas,
                                  std::span<const double> alphas,
                                  const VerifyOptions& opts = {},
                                  std::uint64_t seed = 20240901u) {
  SuiteResult suite;
  bool first = true;
  const std::vector<CatalogEntry> catalog = builtin_catalog(seed);
  for (double g : gammas) {
    const double hbar = 1.0;
    const BinningScheme scheme(std::sqrt(g * hbar), std::sqrt(g * hbar), hbar);
    for (const auto& entry : catalog) {
      const GridState psi = make_catalog_state(entry, scheme);
      for (double a : alphas) {
        VerificationCase vc =
            verify_state(entry.name, psi, scheme, conjugate_order(a), opts);
        if (first || vc.min_slack < suite.min_slack) suite.min_slack = vc.min_slack;
        first = false;
        suite.all_passed = suite.all_passed && vc.passed();
        suite.all_reliable = suite.all_reliable && vc.reliable;
        suite.cases.push_back(std::move(vc));
      }
    }
  }
  return suite;
}

}  // namespace qloc
