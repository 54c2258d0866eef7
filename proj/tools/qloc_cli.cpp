// Command-line front end: eigenvalue solves, bound tables, width scans, and
// single-state verification runs, emitting CSV or JSON.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qloc/qloc.hpp"

namespace {

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty())
    std::cout << text;
  else
    qloc::write_text_file(output_path, text);
}

int run_eig(double gamma, int nodes) {
  const qloc::ConcentrationEigenSolution sol = qloc::solve_concentration(gamma, nodes);
  std::cout << "gamma             = " << qloc::format_g12(sol.gamma) << '\n'
            << "node_count        = " << sol.node_count << '\n'
            << "lambda0           = " << qloc::format_g12(sol.lambda0) << '\n'
            << "c_max             = " << qloc::format_g12(std::sqrt(sol.lambda0)) << '\n'
            << "convergence_delta = " << qloc::format_g12(sol.convergence_delta) << '\n';
  std::cout << "spectrum_head     =";
  for (double v : sol.spectrum_head) std::cout << ' ' << qloc::format_g12(v);
  std::cout << '\n';
  // lambda0 ~ gamma / 2 pi as gamma -> 0; the ratio makes the regime visible.
  std::cout << "asymptote_ratio   = "
            << qloc::format_g12(sol.lambda0 / (sol.gamma / (2.0 * std::numbers::pi)))
            << '\n';
  if (!sol.converged()) {
    std::cerr << "eig: not converged at " << nodes
              << " nodes (delta = " << qloc::format_g12(sol.convergence_delta)
              << "); raise --nodes\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Coarse-grained position/momentum uncertainty toolkit.\n"
      "gamma = delta_x * delta_p / hbar identifies the binning; lambda0 is the\n"
      "largest eigenvalue of the sinc-kernel integral equation and caps the\n"
      "probability a bin-limited state can concentrate in one conjugate bin."};
  app.require_subcommand(1);

  // ---- eig ----------------------------------------------------------------
  double eig_gamma = 1.0;
  int eig_nodes = 64;
  CLI::App* eig = app.add_subcommand(
      "eig",
      "Solve the concentration eigenproblem at one gamma.\n"
      "Prints: lambda0 (max single-pair concentration), c_max = sqrt(lambda0),\n"
      "convergence_delta (change against the half-resolution solve), and the\n"
      "leading eigenvalues above the numerical floor.");
  eig->add_option("--gamma", eig_gamma, "Bin-width product delta_x*delta_p/hbar")
      ->required()
      ->check(CLI::PositiveNumber);
  eig->add_option("--nodes", eig_nodes, "Quadrature nodes (>= 16)")
      ->capture_default_str();

  // ---- bounds -------------------------------------------------------------
  std::vector<double> b_gammas;
  double b_gmin = 0.1, b_gmax = 50.0;
  int b_gcount = 0;
  std::string b_spacing = "log";
  std::vector<double> b_alphas{1.0};
  int b_nodes = 64;
  std::string b_format = "csv", b_output;
  CLI::App* bounds = app.add_subcommand(
      "bounds",
      "Tabulate every uncertainty bound over a gamma grid and alpha list.\n"
      "Columns: gamma; alpha, beta (conjugate entropy orders); lambda0; c_max;\n"
      "bound_mu = -ln lambda0; bound_deutsch = -2 ln((1+c_max)/2);\n"
      "bound_beckner = B(alpha) + ln(pi) - ln(gamma) (usable while positive);\n"
      "beckner_valid (1 if positive); best_ab, best_qp (tightest valid bound\n"
      "on the intra-bin and bin-mass entropy sums). JSON output adds the\n"
      "branch-crossover gamma per alpha.");
  bounds->add_option("--gamma", b_gammas, "Explicit gamma list (comma separated)")
      ->delimiter(',');
  bounds->add_option("--gamma-min", b_gmin, "Grid start")->capture_default_str();
  bounds->add_option("--gamma-max", b_gmax, "Grid end")->capture_default_str();
  bounds->add_option("--gamma-count", b_gcount, "Grid size (ignored if --gamma given)");
  bounds->add_option("--spacing", b_spacing, "Grid spacing: lin or log")
      ->check(CLI::IsMember({"lin", "log"}))
      ->capture_default_str();
  bounds->add_option("--alpha", b_alphas, "Entropy orders alpha >= 1 (comma separated)")
      ->delimiter(',')
      ->capture_default_str();
  bounds->add_option("--nodes", b_nodes, "Quadrature nodes per solve")
      ->capture_default_str();
  bounds->add_option("--format", b_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  bounds->add_option("--output", b_output, "Write to file instead of stdout");

  // ---- verify -------------------------------------------------------------
  std::string v_state = "gaussian";
  double v_width = 1.0, v_center = 0.0, v_shift = 0.0;
  std::uint64_t v_seed = 20240901;
  double v_gamma = 0.0, v_dx = 0.0, v_dp = 0.0, v_hbar = 1.0, v_alpha = 1.0;
  int v_nodes = 64, v_basis = 64;
  std::string v_ab = "auto", v_format = "json", v_output;
  bool v_corrupt = false;
  CLI::App* verify = app.add_subcommand(
      "verify",
      "Check one state against every applicable uncertainty bound.\n"
      "Reports the order-alpha/beta entropies of the position/momentum bin\n"
      "masses (and of the intra-bin mode expansions when enabled), the bound\n"
      "values, and the slack of each inequality. Exits nonzero if any slack\n"
      "falls below -1e-8 or the captured mass makes the case unreliable.");
  verify->add_option("--state", v_state, "gaussian or random (band-limited speckle)")
      ->check(CLI::IsMember({"gaussian", "random"}))
      ->capture_default_str();
  verify->add_option("--width", v_width, "Gaussian width parameter w")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  verify->add_option("--center", v_center, "Packet center, in units of delta_x")
      ->capture_default_str();
  verify->add_option("--shift", v_shift, "Momentum carrier, in units of delta_p")
      ->capture_default_str();
  verify->add_option("--seed", v_seed, "Seed for --state random")
      ->capture_default_str();
  verify->add_option("--gamma", v_gamma,
                     "Square binning delta_x = delta_p = sqrt(gamma*hbar)");
  verify->add_option("--dx", v_dx, "Position bin width (with --dp)");
  verify->add_option("--dp", v_dp, "Momentum bin width (with --dx)");
  verify->add_option("--hbar", v_hbar, "Planck constant scale")->capture_default_str();
  verify->add_option("--alpha", v_alpha, "Entropy order alpha >= 1 (beta is conjugate)")
      ->capture_default_str();
  verify->add_option("--nodes", v_nodes, "Quadrature nodes for the eigenvalue solve")
      ->capture_default_str();
  verify->add_option("--basis", v_basis, "Intra-bin modes per bin")
      ->capture_default_str();
  verify->add_option("--ab", v_ab, "Intra-bin entropies: auto, on, or off")
      ->check(CLI::IsMember({"auto", "on", "off"}))
      ->capture_default_str();
  verify->add_option("--format", v_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  verify->add_option("--output", v_output, "Write to file instead of stdout");
  verify->add_flag("--corrupt-distributions", v_corrupt)->group("");  // test hook

  // ---- scan ---------------------------------------------------------------
  double s_gamma = 1.0, s_alpha = 1.0, s_hbar = 1.0;
  std::vector<double> s_widths{0.25, 0.5, 1.0, 2.0, 4.0};
  int s_nodes = 64;
  std::string s_format = "csv", s_output;
  CLI::App* scan = app.add_subcommand(
      "scan",
      "Sweep Gaussian widths at square binning and report the entropy sum per\n"
      "width next to the best bin-mass bound; the minimum over widths shows\n"
      "how closely the family approaches it.");
  scan->add_option("--gamma", s_gamma, "Bin-width product")
      ->required()
      ->check(CLI::PositiveNumber);
  scan->add_option("--widths", s_widths, "Gaussian widths (comma separated)")
      ->delimiter(',')
      ->capture_default_str();
  scan->add_option("--alpha", s_alpha, "Entropy order alpha >= 1")
      ->capture_default_str();
  scan->add_option("--hbar", s_hbar, "Planck constant scale")->capture_default_str();
  scan->add_option("--nodes", s_nodes, "Quadrature nodes")->capture_default_str();
  scan->add_option("--format", s_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  scan->add_option("--output", s_output, "Write to file instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (eig->parsed()) return run_eig(eig_gamma, eig_nodes);

    if (bounds->parsed()) {
      std::vector<double> gammas = b_gammas;
      if (gammas.empty()) {
        if (b_gcount < 2)
          throw std::invalid_argument("bounds: give --gamma or --gamma-count >= 2");
        for (int i = 0; i < b_gcount; ++i) {
          const double t = static_cast<double>(i) / (b_gcount - 1);
          gammas.push_back(b_spacing == "log"
                               ? b_gmin * std::pow(b_gmax / b_gmin, t)
                               : b_gmin + t * (b_gmax - b_gmin));
        }
      }
      const qloc::BoundSweep sweep = qloc::sweep_bounds(gammas, b_alphas, b_nodes);
      emit(b_format == "csv" ? qloc::bounds_csv(sweep.rows)
                             : qloc::bounds_json(sweep).dump(2) + "\n",
           b_output);
      return 0;
    }

    if (verify->parsed()) {
      if ((v_gamma > 0.0) == (v_dx > 0.0 || v_dp > 0.0))
        throw std::invalid_argument("verify: give --gamma or both --dx and --dp");
      double dx = v_dx, dp = v_dp;
      if (v_gamma > 0.0) dx = dp = std::sqrt(v_gamma * v_hbar);
      if (!(dx > 0.0) || !(dp > 0.0))
        throw std::invalid_argument("verify: bin widths must be positive");
      const qloc::BinningScheme scheme(dx, dp, v_hbar);

      qloc::CatalogEntry entry;
      if (v_state == "gaussian") {
        entry.kind = qloc::CatalogEntry::Kind::gaussian;
        entry.width = v_width;
        entry.center_bins = v_center;
        entry.shift_bins = v_shift;
        entry.name = "gaussian";
      } else {
        entry.kind = qloc::CatalogEntry::Kind::band_limited;
        entry.seed = v_seed;
        entry.name = "random-band";
      }

      qloc::VerifyOptions opts;
      opts.node_count = v_nodes;
      opts.ab_basis_size = v_basis;
      opts.with_ab = v_ab == "on"    ? qloc::VerifyOptions::WithAb::on
                     : v_ab == "off" ? qloc::VerifyOptions::WithAb::off
                                     : qloc::VerifyOptions::WithAb::automatic;
      opts.corrupt_distributions = v_corrupt;

      const qloc::GridState psi = qloc::make_catalog_state(entry, scheme);
      const qloc::VerificationCase vc = qloc::verify_state(
          entry.name, psi, scheme, qloc::conjugate_order(v_alpha), opts);
      emit(v_format == "csv" ? qloc::verification_csv(vc)
                             : qloc::verification_json(vc).dump(2) + "\n",
           v_output);
      if (!vc.reliable) {
        std::cerr << "verify: case unreliable (captured mass below threshold)\n";
        return 3;
      }
      if (!vc.passed()) {
        std::cerr << "verify: bound violated, min slack = "
                  << qloc::format_g12(vc.min_slack) << "\n";
        return 4;
      }
      return 0;
    }

    if (scan->parsed()) {
      qloc::VerifyOptions opts;
      opts.node_count = s_nodes;
      const qloc::WidthScanResult res =
          qloc::width_scan(s_gamma, s_widths, qloc::conjugate_order(s_alpha), opts);
      emit(s_format == "csv" ? qloc::width_scan_csv(res)
                             : qloc::width_scan_json(res).dump(2) + "\n",
           s_output);
      if (res.min_entropy_sum < res.bound_qp - 1e-8) {
        std::cerr << "scan: entropy sum fell below the bound\n";
        return 4;
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
