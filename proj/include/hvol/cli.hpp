#pragma once

// Command-line front end. Exit codes: 0 success, 1 input error, 2 numerical
// failure.

#include "hvol/generators.hpp"
#include "hvol/io.hpp"
#include "hvol/volume.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace hvol::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNumerical = 2;

/// Substream reserved for random generators, disjoint from repetition
/// substreams 0..k-1.
inline constexpr std::uint64_t kGeneratorStream = std::uint64_t{1} << 63;

struct InputOptions {
  std::string file;
  std::string generate;
};

struct LoadedPolytope {
  HPolytope polytope;
  std::optional<double> exact_volume;
  std::string source;
};

inline LoadedPolytope load_input(const InputOptions& in, std::uint64_t seed) {
  if (in.file.empty() == in.generate.empty()) fail_input("give exactly one of --file or --generate");
  if (!in.file.empty()) return {read_polytope_file(in.file), std::nullopt, in.file};
  RngStream rng(seed, kGeneratorStream);
  GeneratedPolytope g = generate(in.generate, rng);
  return {std::move(g.polytope), g.exact_volume, "generate:" + in.generate};
}

inline std::string sci(double v, int digits = 4) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*e", digits, v);
  return buf;
}

inline std::string fixed3(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

inline double round_millis(double seconds) { return std::round(seconds * 1000.0) / 1000.0; }

inline std::uint64_t entropy_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) fail_input("cannot write '" + path + "'");
  out << text;
}

/// Runs the command line; argv[0] is the program name.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Volume approximation of H-polytopes by multiphase Monte Carlo"};
  app.require_subcommand(1);

  InputOptions input;
  std::optional<std::uint64_t> seed_opt;
  auto add_input = [&](CLI::App* cmd) {
    auto* file = cmd->add_option("--file", input.file, "polytope file ('m d' header, rows 'a_1 .. a_d b')");
    auto* gen = cmd->add_option("--generate", input.generate,
                                "generator KIND:PARAMS (cube:d, cross:d, simplex:d, simplex-product:d, "
                                "skinny-cube:d, rh:d:m, birkhoff:n)");
    file->excludes(gen);
    cmd->add_option("--seed", seed_opt, "master seed (default: from entropy)");
  };

  // estimate
  auto* estimate = app.add_subcommand("estimate", "estimate the volume");
  add_input(estimate);
  double epsilon = 1.0;
  std::string walk_name = "cdhr";
  int walk_len = 0;
  std::string oracle_name = "facet";
  std::string round_value;
  int repeat = 1;
  int parallel = 1;
  std::optional<double> exact_volume;
  std::optional<long> samples;
  std::string json_path;
  std::string csv_path;
  estimate->add_option("--epsilon", epsilon, "target approximation (sets N)")->check(CLI::PositiveNumber);
  estimate->add_option("--walk", walk_name, "hit-and-run variant")->check(CLI::IsMember({"cdhr", "rdhr"}));
  estimate->add_option("--walk-len", walk_len, "steps per point (default floor(10 + d/10))")
      ->check(CLI::PositiveNumber);
  estimate->add_option("--oracle", oracle_name, "boundary oracle")
      ->check(CLI::IsMember({"facet", "membership"}));
  auto* round_opt =
      estimate->add_option("--round", round_value, "enable rounding, optional axes-ratio threshold (1.5)")
          ->expected(0, 1);
  estimate->add_option("--repeat", repeat, "independent repetitions")->check(CLI::PositiveNumber);
  estimate->add_option("--parallel", parallel, "repetitions run concurrently")->check(CLI::PositiveNumber);
  estimate->add_option("--exact-volume", exact_volume, "known volume, enables error columns");
  estimate->add_option("--samples", samples, "points per phase, overriding the epsilon formula")
      ->check(CLI::PositiveNumber);
  estimate->add_option("--json", json_path, "write a JSON report");
  estimate->add_option("--csv", csv_path, "write one CSV row per repetition");

  // chebyshev
  auto* chebyshev = app.add_subcommand("chebyshev", "largest inscribed ball");
  add_input(chebyshev);

  // generate
  auto* gen_cmd = app.add_subcommand("generate", "write a generated polytope in the text format");
  std::string gen_kind;
  std::string output_path;
  std::optional<std::uint64_t> gen_seed;
  gen_cmd->add_option("kind", gen_kind, "generator KIND:PARAMS")->required();
  gen_cmd->add_option("-o,--output", output_path, "output path (default stdout)");
  gen_cmd->add_option("--seed", gen_seed, "seed for random generators");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (*gen_cmd) {
      const std::uint64_t seed = gen_seed.value_or(0);
      RngStream rng(seed, kGeneratorStream);
      const GeneratedPolytope g = generate(gen_kind, rng);
      std::string text = "# " + g.name + "\n";
      if (g.exact_volume) text += "# exact volume " + detail::format_real(*g.exact_volume) + "\n";
      text += write_polytope(g.polytope);
      if (output_path.empty()) {
        out << text;
      } else {
        write_text_file(output_path, text);
      }
      return kExitOk;
    }

    const std::uint64_t seed = seed_opt.value_or(entropy_seed());
    const LoadedPolytope loaded = load_input(input, seed);
    const HPolytope& P = loaded.polytope;

    if (*chebyshev) {
      const Ball ball = chebyshev_ball(P);
      out << "dimension: " << P.dimension() << "\nfacets: " << P.num_facets() << "\ncenter:";
      for (Eigen::Index i = 0; i < ball.center.size(); ++i) out << " " << detail::format_real(ball.center[i]);
      out << "\nradius: " << detail::format_real(ball.radius) << "\n";
      return kExitOk;
    }

    VolumeParams params;
    params.epsilon = epsilon;
    params.walk.variant = walk_name == "rdhr" ? WalkType::rdhr : WalkType::cdhr;
    params.walk.walk_length = walk_len;
    params.walk.oracle = oracle_name == "membership" ? OracleType::membership : OracleType::facet;
    params.sample_count = samples;
    params.seed = seed;
    if (round_opt->count() > 0) {
      params.rounding.enabled = true;
      if (!round_value.empty()) {
        try {
          params.rounding.threshold = std::stod(round_value);
        } catch (const std::exception&) {
          fail_input("--round expects a number, got '" + round_value + "'");
        }
      }
      if (!(params.rounding.threshold > 1.0)) fail_input("--round threshold must exceed 1");
    }
    const std::optional<double> exact = exact_volume ? exact_volume : loaded.exact_volume;
    if (exact && !(*exact > 0.0)) fail_input("--exact-volume must be positive");

    const int d = P.dimension();
    const long N = params.sample_count.value_or(sample_count(d, epsilon));
    const int W = effective_walk_length(params.walk, d);

    RunStatistics stats = estimate_with_statistics(P, params, repeat, exact, parallel);

    out << "polytope: " << loaded.source << " (d=" << d << ", m=" << P.num_facets() << ")\n";
    out << "seed: " << seed << "\n";
    out << "N=" << N << " W=" << W << " walk=" << walk_name << " oracle=" << oracle_name
        << " rounding=" << (params.rounding.enabled ? "on(" + detail::format_real(params.rounding.threshold) + ")" : "off")
        << "\n";
    for (const RunRecord& run : stats.runs) {
      out << "run " << run.index << ": ";
      if (run.estimate) {
        const VolumeEstimate& e = *run.estimate;
        out << "volume=" << sci(e.volume) << " phases=" << (e.beta - e.alpha)
            << " time=" << fixed3(e.elapsed_seconds) << "s";
        if (e.rounding_iterations > 0) out << " rounding-iterations=" << e.rounding_iterations;
        out << "\n";
        for (const std::string& w : e.warnings) out << "  warning: " << w << "\n";
      } else {
        out << "failed: " << run.error << "\n";
      }
    }
    if (stats.failures < stats.k) {
      out << "mean=" << sci(stats.mean) << " min=" << sci(stats.min) << " max=" << sci(stats.max)
          << " std-dev=" << sci(stats.std_dev) << " spread=" << fixed3(stats.spread) << "\n";
      if (stats.exact_volume) {
        out << "exact=" << sci(*stats.exact_volume) << " rel-error=" << sci(*stats.rel_err_mean, 3) << "\n";
      }
      out << "total-time=" << fixed3(stats.total_seconds) << "s\n";
    }

    if (!json_path.empty()) {
      nlohmann::json report;
      report["command"] = "estimate";
      report["input"] = {{"source", loaded.source}, {"dimension", d}, {"facets", P.num_facets()}};
      report["params"] = {{"epsilon", epsilon},
                          {"walk", walk_name},
                          {"walk_length", W},
                          {"oracle", oracle_name},
                          {"rounding", params.rounding.enabled ? nlohmann::json(params.rounding.threshold)
                                                               : nlohmann::json(nullptr)},
                          {"N", N},
                          {"seed", seed},
                          {"repeat", repeat}};
      nlohmann::json js = to_json(stats);
      js["total_seconds"] = round_millis(stats.total_seconds);
      for (auto& run : js["runs"]) {
        if (run.contains("estimate"))
          run["estimate"]["elapsed_seconds"] = round_millis(run["estimate"]["elapsed_seconds"].get<double>());
      }
      report["statistics"] = std::move(js);
      write_text_file(json_path, report.dump(2) + "\n");
    }
    if (!csv_path.empty()) write_text_file(csv_path, to_csv(stats));

    if (stats.failures > 0) {
      for (const RunRecord& run : stats.runs) {
        if (!run.estimate) {
          err << "error: repetition " << run.index << ": " << run.error << "\n";
          return run.error_kind == ErrorKind::invalid_input ? kExitInput : kExitNumerical;
        }
      }
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::invalid_input ? kExitInput : kExitNumerical;
  }
}

}  // namespace hvol::cli
