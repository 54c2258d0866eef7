#pragma once

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qloc/format.hpp"
#include "qloc/harness.hpp"

namespace qloc {

/// Column order of the bounds table; fixed, consumers may rely on it.
inline constexpr const char* kBoundsCsvHeader =
    "gamma,alpha,beta,lambda0,c_max,bound_mu,bound_deutsch,bound_beckner,"
    "beckner_valid,best_ab,best_qp";

inline std::string bounds_csv(const std::vector<BoundReport>& rows) {
  std::string out = kBoundsCsvHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += format_g12(r.gamma) + ',' + format_g12(r.alpha) + ',' +
           format_g12(r.beta) + ',' + format_g12(r.lambda0) + ',' +
           format_g12(r.c_max) + ',' + format_g12(r.bound_mu) + ',' +
           format_g12(r.bound_deutsch) + ',' + format_g12(r.beckner_raw) + ',' +
           (r.beckner_valid ? "1" : "0") + ',' + format_g12(r.best_ab) + ',' +
           format_g12(r.best_qp) + '\n';
  }
  return out;
}

/// Parses text produced by bounds_csv. The header line must match the fixed
/// column order verbatim; rows written from quantized reports parse back to
/// bit-identical values.
inline std::vector<BoundReport> parse_bounds_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kBoundsCsvHeader)
    throw std::invalid_argument("parse_bounds_csv: unexpected header");
  std::vector<BoundReport> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 11)
      throw std::invalid_argument("parse_bounds_csv: wrong column count");
    const auto num = [&](int i) { return std::strtod(cells[static_cast<std::size_t>(i)].c_str(), nullptr); };
    BoundReport r;
    r.gamma = num(0);
    r.alpha = num(1);
    r.beta = num(2);
    r.lambda0 = num(3);
    r.c_max = num(4);
    r.bound_mu = num(5);
    r.bound_deutsch = num(6);
    r.beckner_raw = num(7);
    r.beckner_valid = cells[8] == "1";
    r.best_ab = num(9);
    r.best_qp = num(10);
    rows.push_back(r);
  }
  return rows;
}

inline nlohmann::json bound_report_json(const BoundReport& r) {
  nlohmann::json j;
  j["gamma"] = r.gamma;
  j["alpha"] = r.alpha;
  j["beta"] = r.beta;
  j["lambda0"] = r.lambda0;
  j["c_max"] = r.c_max;
  j["bound_mu"] = r.bound_mu;
  j["bound_deutsch"] = r.bound_deutsch;
  j["bound_beckner"] = r.beckner_raw;
  j["beckner_valid"] = r.beckner_valid;
  j["best_ab"] = r.best_ab;
  j["best_qp"] = r.best_qp;
  return j;
}

inline nlohmann::json bounds_json(const BoundSweep& sweep) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : sweep.rows) j["rows"].push_back(bound_report_json(r));
  j["crossovers"] = nlohmann::json::array();
  for (const auto& c : sweep.crossovers)
    j["crossovers"].push_back(
        {{"alpha", c.alpha}, {"gamma_star", c.gamma_star}, {"bound_value", c.bound_value}});
  return j;
}

inline nlohmann::json verification_json(const VerificationCase& vc) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["label"] = vc.label;
  j["gamma"] = vc.gamma;
  j["alpha"] = vc.orders.alpha;
  j["beta"] = vc.orders.beta;
  j["bounds"] = bound_report_json(vc.bounds);
  j["entropy_q"] = vc.entropy_q;
  j["entropy_p"] = vc.entropy_p;
  j["max_q"] = vc.max_q;
  j["max_p"] = vc.max_p;
  j["single_bin_limit"] = vc.single_bin_limit;
  if (vc.entropy_a) j["entropy_a"] = *vc.entropy_a;
  if (vc.entropy_b) j["entropy_b"] = *vc.entropy_b;
  if (vc.captured_a) j["captured_a"] = *vc.captured_a;
  if (vc.captured_b) j["captured_b"] = *vc.captured_b;
  j["slacks"] = nlohmann::json::array();
  for (const auto& s : vc.slacks)
    j["slacks"].push_back(
        {{"bound", s.bound}, {"bound_value", s.bound_value}, {"slack", s.slack}});
  j["min_slack"] = vc.min_slack;
  j["reliable"] = vc.reliable;
  j["passed"] = vc.passed();
  return j;
}

/// Flat single-row rendering of a verification case; optional fields are
/// left empty. Per-inequality slacks live in the JSON form only.
inline std::string verification_csv(const VerificationCase& vc) {
  const auto opt = [](const std::optional<double>& v) {
    return v ? format_g12(*v) : std::string();
  };
  std::string out =
      "label,gamma,alpha,beta,entropy_q,entropy_p,entropy_a,entropy_b,"
      "captured_a,captured_b,max_q,max_p,single_bin_limit,lambda0,bound_mu,"
      "bound_deutsch,bound_beckner,beckner_valid,best_ab,best_qp,min_slack,"
      "reliable,passed\n";
  out += vc.label + ',' + format_g12(vc.gamma) + ',' + format_g12(vc.orders.alpha) +
         ',' + format_g12(vc.orders.beta) + ',' + format_g12(vc.entropy_q) + ',' +
         format_g12(vc.entropy_p) + ',' + opt(vc.entropy_a) + ',' +
         opt(vc.entropy_b) + ',' + opt(vc.captured_a) + ',' + opt(vc.captured_b) +
         ',' + format_g12(vc.max_q) + ',' + format_g12(vc.max_p) + ',' +
         format_g12(vc.single_bin_limit) + ',' + format_g12(vc.bounds.lambda0) +
         ',' + format_g12(vc.bounds.bound_mu) + ',' +
         format_g12(vc.bounds.bound_deutsch) + ',' + format_g12(vc.bounds.beckner_raw) +
         ',' + (vc.bounds.beckner_valid ? "1" : "0") + ',' +
         format_g12(vc.bounds.best_ab) + ',' + format_g12(vc.bounds.best_qp) + ',' +
         format_g12(vc.min_slack) + ',' + (vc.reliable ? "1" : "0") + ',' +
         (vc.passed() ? "1" : "0") + '\n';
  return out;
}

inline nlohmann::json width_scan_json(const WidthScanResult& res) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["gamma"] = res.gamma;
  j["alpha"] = res.orders.alpha;
  j["beta"] = res.orders.beta;
  j["bound_qp"] = res.bound_qp;
  j["points"] = nlohmann::json::array();
  for (const auto& pt : res.points)
    j["points"].push_back({{"width", pt.width},
                           {"entropy_q", pt.entropy_q},
                           {"entropy_p", pt.entropy_p},
                           {"entropy_sum", pt.entropy_sum}});
  j["min_entropy_sum"] = res.min_entropy_sum;
  return j;
}

inline std::string width_scan_csv(const WidthScanResult& res) {
  std::string out = "width,entropy_q,entropy_p,entropy_sum\n";
  for (const auto& pt : res.points)
    out += format_g12(pt.width) + ',' + format_g12(pt.entropy_q) + ',' +
           format_g12(pt.entropy_p) + ',' + format_g12(pt.entropy_sum) + '\n';
  return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_text_file: cannot open " + path);
  f << content;
  f.flush();
  if (!f) throw std::runtime_error("write_text_file: write failed for " + path);
}

}  // namespace qloc
