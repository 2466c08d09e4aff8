#pragma once

// Polytope text format and machine-readable reports.
//
// Polytope files: first non-comment line "m d", then m lines of d + 1 reals
// "a_i1 ... a_id b_i" meaning a_i . x <= b_i. '#' starts a comment; blank
// lines are ignored.

#include "hvol/volume.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace hvol {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<double> parse_reals(std::string_view line, int line_no) {
  std::vector<double> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v))
      fail_input("line " + std::to_string(line_no) + ": bad number '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

inline std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

}  // namespace detail

inline HPolytope parse_polytope(std::string_view text) {
  int line_no = 0;
  long m = -1;
  long d = -1;
  std::vector<std::vector<double>> rows;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    std::vector<double> vals = detail::parse_reals(line, line_no);
    if (m < 0) {
      if (vals.size() != 2 || vals[0] != std::floor(vals[0]) || vals[1] != std::floor(vals[1]) ||
          vals[0] < 1 || vals[1] < 1)
        fail_input("line " + std::to_string(line_no) + ": header must be two positive integers 'm d'");
      m = static_cast<long>(vals[0]);
      d = static_cast<long>(vals[1]);
      continue;
    }
    if (static_cast<long>(vals.size()) != d + 1)
      fail_input("line " + std::to_string(line_no) + ": expected " + std::to_string(d + 1) +
                 " numbers, found " + std::to_string(vals.size()));
    if (static_cast<long>(rows.size()) == m)
      fail_input("line " + std::to_string(line_no) + ": more than " + std::to_string(m) + " rows");
    rows.push_back(std::move(vals));
  }
  if (m < 0) fail_input("missing 'm d' header");
  if (static_cast<long>(rows.size()) != m)
    fail_input("expected " + std::to_string(m) + " rows, found " + std::to_string(rows.size()));

  Matrix A(m, d);
  Vector b(m);
  for (long i = 0; i < m; ++i) {
    for (long j = 0; j < d; ++j) A(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    b[i] = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)];
  }
  return HPolytope(std::move(A), std::move(b));
}

/// Canonical form: header plus one row per facet, 17 significant digits.
inline std::string write_polytope(const HPolytope& P) {
  std::string out = std::to_string(P.num_facets()) + " " + std::to_string(P.dimension()) + "\n";
  for (int i = 0; i < P.num_facets(); ++i) {
    for (int j = 0; j < P.dimension(); ++j) out += detail::format_real(P.A()(i, j)) + " ";
    out += detail::format_real(P.b()[i]) + "\n";
  }
  return out;
}

inline HPolytope read_polytope_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_input("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_polytope(ss.str());
}

inline nlohmann::json to_json(const VolumeEstimate& e) {
  return nlohmann::json{{"volume", e.volume},
                        {"log_volume", e.log_volume},
                        {"N", e.N},
                        {"W", e.W},
                        {"alpha", e.alpha},
                        {"beta", e.beta},
                        {"counts", e.counts},
                        {"topped_up", e.topped_up},
                        {"ratios", e.ratios},
                        {"det_correction", e.det_correction},
                        {"rounding_iterations", e.rounding_iterations},
                        {"inner_radius", e.inner_radius},
                        {"outer_radius", e.outer_radius},
                        {"elapsed_seconds", e.elapsed_seconds},
                        {"seed", e.seed},
                        {"stream", e.stream},
                        {"warnings", e.warnings}};
}

inline nlohmann::json to_json(const RunStatistics& s) {
  nlohmann::json runs = nlohmann::json::array();
  for (const RunRecord& r : s.runs) {
    nlohmann::json j{{"index", r.index}};
    if (r.estimate) {
      j["estimate"] = to_json(*r.estimate);
    } else {
      j["error"] = r.error;
    }
    runs.push_back(std::move(j));
  }
  nlohmann::json out{{"k", s.k},
                     {"failures", s.failures},
                     {"mean", s.mean},
                     {"min", s.min},
                     {"max", s.max},
                     {"std_dev", s.std_dev},
                     {"spread", s.spread},
                     {"total_seconds", s.total_seconds},
                     {"runs", std::move(runs)}};
  out["exact_volume"] = s.exact_volume ? nlohmann::json(*s.exact_volume) : nlohmann::json(nullptr);
  out["rel_err_mean"] = s.rel_err_mean ? nlohmann::json(*s.rel_err_mean) : nlohmann::json(nullptr);
  return out;
}

/// One row per repetition.
inline std::string to_csv(const RunStatistics& s) {
  std::string out =
      "index,volume,log_volume,N,W,alpha,beta,det_correction,rounding_iterations,elapsed_seconds,seed,"
      "stream,error\n";
  for (const RunRecord& r : s.runs) {
    out += std::to_string(r.index) + ",";
    if (r.estimate) {
      const VolumeEstimate& e = *r.estimate;
      out += detail::format_real(e.volume) + "," + detail::format_real(e.log_volume) + "," +
             std::to_string(e.N) + "," + std::to_string(e.W) + "," + std::to_string(e.alpha) + "," +
             std::to_string(e.beta) + "," + detail::format_real(e.det_correction) + "," +
             std::to_string(e.rounding_iterations) + "," + detail::format_real(e.elapsed_seconds) + "," +
             std::to_string(e.seed) + "," + std::to_string(e.stream) + ",\n";
    } else {
      std::string msg = r.error;
      for (char& c : msg)
        if (c == ',' || c == '\n') c = ';';
      out += std::string(11, ',') + "\"" + msg + "\"\n";
    }
  }
  return out;
}

}  // namespace hvol
