#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qloc/io.hpp"

using nlohmann::json;
using qloc::BoundReport;
using qloc::bounds_csv;
using qloc::bounds_json;
using qloc::BoundSweep;
using qloc::conjugate_order;
using qloc::format_g12;
using qloc::parse_bounds_csv;
using qloc::quantize12;
using qloc::sweep_bounds;
using qloc::verification_csv;
using qloc::verification_json;
using qloc::width_scan_csv;
using qloc::width_scan_json;

namespace {

std::filesystem::path scratch_file(const std::string& stem) {
  static std::atomic<int> counter{0};
  static const auto dir = [] {
    auto d = std::filesystem::temp_directory_path() /
             ("qloc-io-cli-" + std::to_string(::getpid()));
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir / (stem + "-" + std::to_string(counter++));
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

struct CliRun {
  int exit_code = -1;
  std::string out;
  std::string err;
};

CliRun run_cli(const std::string& args) {
  const auto out = scratch_file("stdout");
  const auto err = scratch_file("stderr");
  const std::string cmd = std::string("\"") + QLOC_CLI_PATH + "\" " + args +
                          " > " + out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  CliRun r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(out);
  r.err = read_file(err);
  return r;
}

double value_of_line(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key, 0) == 0) {
      const auto eq = line.find('=');
      REQUIRE(eq != std::string::npos);
      return std::strtod(line.c_str() + eq + 1, nullptr);
    }
  }
  FAIL("missing line: " << key);
  return 0.0;
}

}  // namespace

TEST_CASE("12-digit text round trip is the quantization fixed point") {
  const std::vector<double> values{std::numbers::pi,    0.158056727448, 1e-15,
                                   -2.0 / 3.0,          6.023e23,       1.0,
                                   0.999999999999,      1e-308};
  for (double v : values) {
    const double q = quantize12(v);
    CHECK(std::strtod(format_g12(v).c_str(), nullptr) == q);
    CHECK(quantize12(q) == q);
    CHECK(format_g12(q) == format_g12(v));
  }
  CHECK(format_g12(0.0) == "0");
}

TEST_CASE("bounds CSV: quantized rows survive a write/parse cycle bit-exactly") {
  const std::vector<double> gammas{0.5, 1.0, 2.0 * std::numbers::pi};
  const std::vector<double> alphas{1.0, 2.0};
  const BoundSweep sweep = sweep_bounds(gammas, alphas, 64);

  const std::string text = bounds_csv(sweep.rows);
  CHECK(text.rfind(qloc::kBoundsCsvHeader, 0) == 0);

  const std::vector<BoundReport> parsed = parse_bounds_csv(text);
  REQUIRE(parsed.size() == sweep.rows.size());
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    CHECK(parsed[i].gamma == sweep.rows[i].gamma);
    CHECK(parsed[i].alpha == sweep.rows[i].alpha);
    CHECK(parsed[i].beta == sweep.rows[i].beta);
    CHECK(parsed[i].lambda0 == sweep.rows[i].lambda0);
    CHECK(parsed[i].c_max == sweep.rows[i].c_max);
    CHECK(parsed[i].bound_mu == sweep.rows[i].bound_mu);
    CHECK(parsed[i].bound_deutsch == sweep.rows[i].bound_deutsch);
    CHECK(parsed[i].beckner_raw == sweep.rows[i].beckner_raw);
    CHECK(parsed[i].beckner_valid == sweep.rows[i].beckner_valid);
    CHECK(parsed[i].best_ab == sweep.rows[i].best_ab);
    CHECK(parsed[i].best_qp == sweep.rows[i].best_qp);
  }
  CHECK(bounds_csv(parsed) == text);

  CHECK_THROWS_AS(parse_bounds_csv("gamma,alpha\n1,2\n"), std::invalid_argument);
  std::string bad = text;
  bad += "1,2,3\n";
  CHECK_THROWS_AS(parse_bounds_csv(bad), std::invalid_argument);
}

TEST_CASE("bounds JSON carries rows and crossovers under a schema version") {
  const std::vector<double> gammas{5.0, 9.0};
  const std::vector<double> alphas{1.0};
  const BoundSweep sweep = sweep_bounds(gammas, alphas, 64);
  const json j = bounds_json(sweep);

  CHECK(j.at("schema_version") == 1);
  REQUIRE(j.at("rows").size() == 2);
  const json& row = j.at("rows")[0];
  for (const char* key :
       {"gamma", "alpha", "beta", "lambda0", "c_max", "bound_mu", "bound_deutsch",
        "bound_beckner", "beckner_valid", "best_ab", "best_qp"})
    CHECK(row.contains(key));
  CHECK(row.at("gamma").get<double>() == sweep.rows[0].gamma);
  CHECK(row.at("bound_beckner").get<double>() == sweep.rows[0].beckner_raw);

  REQUIRE(sweep.crossovers.size() == 1);
  REQUIRE(j.at("crossovers").size() == 1);
  CHECK(j.at("crossovers")[0].at("alpha") == 1.0);
  CHECK(j.at("crossovers")[0].at("gamma_star").get<double>() ==
        sweep.crossovers[0].gamma_star);
}

TEST_CASE("verification JSON and CSV expose the same case") {
  const qloc::BinningScheme scheme(1.0, 1.0);
  qloc::CatalogEntry e;
  e.width = 1.0;
  const qloc::GridState psi = qloc::make_catalog_state(e, scheme);
  const auto vc = qloc::verify_state("g", psi, scheme, conjugate_order(1.0));

  const json j = verification_json(vc);
  CHECK(j.at("schema_version") == 1);
  CHECK(j.at("label") == "g");
  CHECK(j.at("passed") == true);
  CHECK(j.at("reliable") == true);
  CHECK(j.at("min_slack").get<double>() == vc.min_slack);
  REQUIRE(j.at("slacks").size() == vc.slacks.size());
  for (std::size_t i = 0; i < vc.slacks.size(); ++i) {
    CHECK(j.at("slacks")[i].at("bound") == vc.slacks[i].bound);
    CHECK(j.at("slacks")[i].at("slack").get<double>() == vc.slacks[i].slack);
  }
  CHECK(j.contains("entropy_a"));
  CHECK(j.at("captured_a").get<double>() >= 0.999);

  const std::string csv = verification_csv(vc);
  std::istringstream in(csv);
  std::string header, row;
  REQUIRE(std::getline(in, header));
  REQUIRE(std::getline(in, row));
  CHECK(header ==
        "label,gamma,alpha,beta,entropy_q,entropy_p,entropy_a,entropy_b,"
        "captured_a,captured_b,max_q,max_p,single_bin_limit,lambda0,bound_mu,"
        "bound_deutsch,bound_beckner,beckner_valid,best_ab,best_qp,min_slack,"
        "reliable,passed");
  CHECK(std::count(row.begin(), row.end(), ',') == 22);
  CHECK(row.rfind("g,1,", 0) == 0);
  CHECK(row.substr(row.size() - 4) == ",1,1");  // reliable, passed
}

TEST_CASE("verification CSV leaves absent intra-bin fields empty") {
  const double gamma = 0.5;
  const qloc::BinningScheme scheme(std::sqrt(gamma), std::sqrt(gamma));
  qloc::CatalogEntry e;
  const qloc::GridState psi = qloc::make_catalog_state(e, scheme);
  const auto vc = qloc::verify_state("g", psi, scheme, conjugate_order(1.0));
  REQUIRE_FALSE(vc.entropy_a.has_value());

  std::istringstream in(verification_csv(vc));
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(std::count(row.begin(), row.end(), ',') == 22);
  CHECK(row.find(",,,,") != std::string::npos);  // entropy_a..captured_b
}

TEST_CASE("width scan serializations agree with the result object") {
  const std::vector<double> widths{0.5, 1.0};
  const auto res = qloc::width_scan(1.0, widths, conjugate_order(1.0));

  const json j = width_scan_json(res);
  CHECK(j.at("schema_version") == 1);
  CHECK(j.at("gamma") == 1.0);
  CHECK(j.at("bound_qp").get<double>() == res.bound_qp);
  REQUIRE(j.at("points").size() == 2);
  CHECK(j.at("points")[1].at("width") == 1.0);
  CHECK(j.at("min_entropy_sum").get<double>() == res.min_entropy_sum);

  std::istringstream in(width_scan_csv(res));
  std::string line;
  std::getline(in, line);
  CHECK(line == "width,entropy_q,entropy_p,entropy_sum");
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 2);
}

TEST_CASE("write_text_file reports unwritable targets") {
  CHECK_THROWS_AS(qloc::write_text_file("/nonexistent-dir/x.csv", "a"),
                  std::runtime_error);
  const auto p = scratch_file("roundtrip");
  qloc::write_text_file(p.string(), "alpha\nbeta\n");
  CHECK(read_file(p) == "alpha\nbeta\n");
}

// ---- end-to-end CLI ---------------------------------------------------------

TEST_CASE("cli: help lists the four subcommands") {
  const CliRun r = run_cli("--help");
  CHECK(r.exit_code == 0);
  for (const char* sub : {"eig", "bounds", "verify", "scan"})
    CHECK(r.out.find(sub) != std::string::npos);
}

TEST_CASE("cli eig: prints the solution to 12 significant digits") {
  const CliRun r = run_cli("eig --gamma 1");
  CHECK(r.exit_code == 0);
  const double lam = value_of_line(r.out, "lambda0");
  CHECK(lam == quantize12(qloc::solve_concentration(1.0, 64).lambda0));
  CHECK(value_of_line(r.out, "c_max") ==
        quantize12(std::sqrt(qloc::solve_concentration(1.0, 64).lambda0)));
  CHECK(r.out.find("spectrum_head") != std::string::npos);

  const CliRun small = run_cli("eig --gamma 0.01");
  CHECK(small.exit_code == 0);
  CHECK(value_of_line(small.out, "asymptote_ratio") ==
        Catch::Approx(1.0).margin(0.005));
}

TEST_CASE("cli eig: bad arguments and non-convergence are distinct failures") {
  CHECK(run_cli("eig --gamma -1").exit_code != 0);
  CHECK(run_cli("eig").exit_code != 0);

  const CliRun r = run_cli("eig --gamma 200");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("not converged") != std::string::npos);
  CHECK(run_cli("eig --gamma 200 --nodes 256").exit_code == 0);
}

TEST_CASE("cli bounds: csv file output parses and is deterministic") {
  const auto f1 = scratch_file("bounds1.csv");
  const auto f2 = scratch_file("bounds2.csv");
  const std::string args = "bounds --gamma 1,2 --alpha 1,2 --output ";
  CHECK(run_cli(args + f1.string()).exit_code == 0);
  CHECK(run_cli(args + f2.string()).exit_code == 0);

  const std::string text = read_file(f1);
  CHECK(text == read_file(f2));
  const auto rows = parse_bounds_csv(text);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].gamma == 1.0);
  CHECK(rows[1].alpha == 2.0);
  CHECK(rows[2].gamma == 2.0);
  for (const auto& r : rows) CHECK(r.beckner_valid);
  CHECK(rows[0].lambda0 == quantize12(qloc::solve_concentration(1.0, 64).lambda0));
}

TEST_CASE("cli bounds: json format and failure modes") {
  const CliRun r = run_cli("bounds --gamma 5,9 --alpha 1 --format json");
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("schema_version") == 1);
  CHECK(j.at("rows").size() == 2);
  REQUIRE(j.at("crossovers").size() == 1);
  const double gs = j.at("crossovers")[0].at("gamma_star").get<double>();
  CHECK(gs > 5.0);
  CHECK(gs < 9.0);

  CHECK(run_cli("bounds").exit_code != 0);  // no grid given
  CHECK(run_cli("bounds --gamma 1 --output /nonexistent-dir/t.csv").exit_code == 1);
}

TEST_CASE("cli verify: passing case, json shape, determinism") {
  const CliRun r = run_cli("verify --gamma 1 --format json");
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("passed") == true);
  CHECK(j.at("reliable") == true);
  CHECK(j.at("min_slack").get<double>() > 0.0);
  REQUIRE(j.at("slacks").size() == 7);
  CHECK(j.at("slacks")[0].at("bound") == "qp_deutsch");
  CHECK(j.at("captured_a").get<double>() >= 0.999);

  const CliRun again = run_cli("verify --gamma 1 --format json");
  CHECK(again.out == r.out);
}

TEST_CASE("cli verify: exit codes separate unreliable from violated") {
  // Corrupting the distributions at a gamma with no intra-bin pass leaves the
  // case reliable, so the bound violation itself is what fails the run.
  const CliRun violated = run_cli("verify --gamma 0.5 --corrupt-distributions");
  CHECK(violated.exit_code == 4);
  CHECK(violated.err.find("violated") != std::string::npos);

  // A speckle state with too few intra-bin modes is unreliable, not violated.
  const CliRun low =
      run_cli("verify --gamma 1 --state random --ab on --basis 16");
  CHECK(low.exit_code == 3);
  CHECK(low.err.find("unreliable") != std::string::npos);

  CHECK(run_cli("verify --gamma 1 --dx 1 --dp 1").exit_code == 1);
  CHECK(run_cli("verify").exit_code == 1);
  CHECK(run_cli("verify --dx 1").exit_code == 1);
}

TEST_CASE("cli scan: csv rows per width and the bound line") {
  const auto f = scratch_file("scan.csv");
  const CliRun r =
      run_cli("scan --gamma 1 --widths 0.5,1,2 --output " + f.string());
  CHECK(r.exit_code == 0);
  std::istringstream in(read_file(f));
  std::string line;
  std::getline(in, line);
  CHECK(line == "width,entropy_q,entropy_p,entropy_sum");
  std::vector<std::string> rows;
  while (std::getline(in, line))
    if (!line.empty()) rows.push_back(line);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].rfind("0.5,", 0) == 0);
  CHECK(rows[2].rfind("2,", 0) == 0);

  const CliRun j = run_cli("scan --gamma 1 --widths 1 --format json");
  CHECK(j.exit_code == 0);
  CHECK(json::parse(j.out).at("points").size() == 1);
}
