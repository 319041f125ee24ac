#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ciprng/battery.hpp"
#include "ciprng/graphgen.hpp"
#include "ciprng/io.hpp"
#include "ciprng/markov.hpp"
#include "ciprng/prng.hpp"

namespace ciprng {

// File-based stage functions behind the CLI subcommands. Every stage that
// writes artifacts also writes a manifest carrying the resolved
// parameters, so re-running the same invocation reproduces the outputs
// byte for byte.

struct GenFnOptions {
  int n = 4;
  double rate = 0.0;
  int count = 1;
  std::uint32_t seed = kZeroSeedFallback;
  bool dedup = false;
  int max_attempts = 500;
  std::string output_path;  // empty: no files written
};

struct GenFnOutcome {
  std::vector<BooleanFunction> functions;
  std::vector<double> achieved_rates;
  bool any_saturated = false;
};

inline GenFnOutcome run_genfn(const GenFnOptions& options) {
  require(options.count >= 1, "gen-fn: count must be >= 1");
  GenFnOutcome outcome;
  std::vector<BooleanFunction> generated;
  for (int i = 0; i < options.count; ++i) {
    GenerationParams params{options.n, options.rate, options.max_attempts,
                            options.seed + static_cast<std::uint32_t>(i)};
    GenerationResult result = generate_scc_function(params);
    result.function.set_name("gen-n" + std::to_string(options.n) + "-s" +
                             std::to_string(params.seed));
    outcome.any_saturated |= result.saturated;
    outcome.achieved_rates.push_back(result.achieved_rate);
    generated.push_back(std::move(result.function));
  }
  outcome.functions =
      options.dedup ? dedup_functions(generated) : std::move(generated);

  if (!options.output_path.empty()) {
    std::ostringstream lines;
    for (const BooleanFunction& f : outcome.functions)
      lines << function_to_json(f).dump() << "\n";
    write_text_file(options.output_path, lines.str());
    RunManifest manifest;
    manifest.subcommand = "gen-fn";
    manifest.parameters = {{"n", options.n},
                           {"rate", options.rate},
                           {"count", options.count},
                           {"seed", options.seed},
                           {"dedup", options.dedup},
                           {"max_attempts", options.max_attempts}};
    manifest.outputs = {options.output_path};
    write_manifest(manifest, options.output_path + ".manifest.json");
  }
  return outcome;
}

/// Re-checks strong connectivity of stored functions; returns one flag per
/// document in file order.
inline std::vector<bool> verify_functions(const std::string& path) {
  std::vector<bool> ok;
  for (const BooleanFunction& f : load_function_lines(path))
    ok.push_back(is_strongly_connected(build_graph(f)));
  return ok;
}

struct AnalyzeOptions {
  std::string function_path;
  double epsilon = 0.01;
  std::size_t t_max = 1000;
  std::uint32_t start = 0;
  bool worst_case = false;
  std::string output_prefix;  // empty: no files written
};

inline DeviationProfile run_analyze(const AnalyzeOptions& options) {
  BooleanFunction f = load_function(options.function_path);
  DeviationProfile profile =
      options.worst_case
          ? sufficient_iterations_worst_case(f, options.epsilon,
                                             options.t_max)
          : sufficient_iterations(f, options.start, options.epsilon,
                                  options.t_max);
  if (profile.function_name.empty()) profile.function_name = "unnamed";

  if (!options.output_prefix.empty()) {
    write_text_file(options.output_prefix + ".csv", profile_to_csv(profile));
    write_text_file(options.output_prefix + ".json",
                    profile_to_json(profile).dump(2) + "\n");
    RunManifest manifest;
    manifest.subcommand = "analyze";
    manifest.parameters = {{"fn", options.function_path},
                           {"epsilon", options.epsilon},
                           {"tmax", options.t_max},
                           {"start", options.start},
                           {"worst_case", options.worst_case}};
    manifest.inputs = {options.function_path};
    manifest.outputs = {options.output_prefix + ".csv",
                        options.output_prefix + ".json"};
    write_manifest(manifest, options.output_prefix + ".manifest.json");
  }
  return profile;
}

enum class StreamFormat { bits, bytes, ints };

struct GenerateOptions {
  std::string function_path;  // empty with legacy = true: negation
  bool legacy = false;
  int n = 4;  // used by the legacy generator when no function file given
  std::size_t b = 1;
  std::uint32_t seed = kZeroSeedFallback;
  std::size_t rounds = 1;
  StreamFormat format = StreamFormat::bits;
  bool strict_paper = false;
  std::string output_path;
};

namespace detail {

inline std::string format_stream(const std::vector<std::uint32_t>& outputs,
                                 int n, StreamFormat format) {
  std::ostringstream out;
  switch (format) {
    case StreamFormat::ints:
      for (std::uint32_t v : outputs) out << v << "\n";
      break;
    case StreamFormat::bits:
      for (std::uint32_t v : outputs)
        for (int i = 1; i <= n; ++i) out << (((v >> (n - i)) & 1u) ? '1' : '0');
      out << "\n";
      break;
    case StreamFormat::bytes: {
      unsigned char byte = 0;
      int filled = 0;
      for (std::uint32_t v : outputs) {
        for (int i = 1; i <= n; ++i) {
          byte = static_cast<unsigned char>((byte << 1) |
                                            ((v >> (n - i)) & 1u));
          if (++filled == 8) {
            out.put(static_cast<char>(byte));
            byte = 0;
            filled = 0;
          }
        }
      }
      if (filled > 0) out.put(static_cast<char>(byte << (8 - filled)));
      break;
    }
  }
  return out.str();
}

}  // namespace detail

struct GenerateOutcome {
  std::vector<std::uint32_t> outputs;
  int n = 0;
};

inline GenerateOutcome run_generate(const GenerateOptions& options) {
  GenerateOutcome outcome;
  Xorshift32 rng{XorshiftState(options.seed)};
  if (options.legacy) {
    BooleanFunction f = options.function_path.empty()
                            ? BooleanFunction::negation(options.n)
                            : load_function(options.function_path);
    Configuration x0(f.n(), options.seed % (1u << f.n()));
    LegacyGenerator<Xorshift32> g(std::move(f), rng, x0,
                                  options.strict_paper);
    outcome.n = g.n();
    outcome.outputs = output_sequence(g, options.rounds);
  } else {
    BooleanFunction f = load_function(options.function_path);
    Configuration x0(f.n(), options.seed % (1u << f.n()));
    CiGenerator<Xorshift32> g(std::move(f), options.b, rng, x0);
    outcome.n = g.n();
    outcome.outputs = output_sequence(g, options.rounds);
  }

  if (!options.output_path.empty()) {
    write_text_file(options.output_path,
                    detail::format_stream(outcome.outputs, outcome.n,
                                          options.format));
    RunManifest manifest;
    manifest.subcommand = "generate";
    manifest.parameters = {
        {"fn", options.function_path},
        {"legacy", options.legacy},
        {"n", outcome.n},
        {"b", options.b},
        {"seed", options.seed},
        {"rounds", options.rounds},
        {"x0", options.seed % (1u << outcome.n)},
        {"format", options.format == StreamFormat::bits    ? "bits"
                   : options.format == StreamFormat::bytes ? "bytes"
                                                           : "ints"},
        {"strict_paper", options.strict_paper}};
    if (!options.function_path.empty())
      manifest.inputs = {options.function_path};
    manifest.outputs = {options.output_path};
    write_manifest(manifest, options.output_path + ".manifest.json");
  }
  return outcome;
}

struct TestOptions {
  std::string function_path;
  std::size_t b = 1;
  std::size_t streams = 100;
  std::size_t bits = 1000000;
  std::uint32_t seed = kZeroSeedFallback;
  BatteryConfig battery;
  std::string output_prefix;
};

struct TestOutcomeFiles {
  TestReport report;
  RepartitionMatrix repartition;
};

/// Generates streams x bits of output as one continuous generator run cut
/// into equal sequences, runs the battery, and tallies the successor
/// repartition of the integer outputs along the way.
inline TestOutcomeFiles run_test(const TestOptions& options) {
  require(options.streams >= 1, "test: streams must be >= 1");
  require(options.bits >= 128, "test: bits must be >= 128");
  BooleanFunction f = load_function(options.function_path);
  const int n = f.n();
  const std::size_t size = std::size_t{1} << n;
  const std::size_t rounds_per_stream =
      (options.bits + static_cast<std::size_t>(n) - 1) /
      static_cast<std::size_t>(n);

  Configuration x0(n, options.seed % (1u << n));
  CiGenerator<Xorshift32> g(f, options.b, Xorshift32{XorshiftState(options.seed)},
                            x0);

  TestOutcomeFiles outcome;
  outcome.repartition.n = n;
  outcome.repartition.counts.assign(size * size, 0);

  BitStream stream;
  stream.reserve(options.streams * rounds_per_stream *
                 static_cast<std::size_t>(n));
  std::uint32_t previous = 0;
  bool have_previous = false;
  for (std::size_t r = 0; r < options.streams * rounds_per_stream; ++r) {
    std::uint32_t x = g.round();
    stream.append_configuration(x, n);
    if (have_previous) ++outcome.repartition.counts[previous * size + x];
    previous = x;
    have_previous = true;
  }

  std::vector<BitSpan> spans;
  const std::size_t chunk = rounds_per_stream * static_cast<std::size_t>(n);
  for (std::size_t i = 0; i < options.streams; ++i)
    spans.emplace_back(stream, i * chunk, options.bits);
  outcome.report = run_battery(spans, options.battery);

  if (!options.output_prefix.empty()) {
    write_text_file(options.output_prefix + ".report.json",
                    report_to_json(outcome.report).dump(2) + "\n");
    write_text_file(options.output_prefix + ".report.txt",
                    report_to_table(outcome.report));
    write_text_file(options.output_prefix + ".repartition.csv",
                    repartition_to_csv(outcome.repartition));
    RunManifest manifest;
    manifest.subcommand = "test";
    manifest.parameters = {{"fn", options.function_path},
                           {"b", options.b},
                           {"streams", options.streams},
                           {"bits", options.bits},
                           {"seed", options.seed},
                           {"block_frequency_m", options.battery.block_frequency_m},
                           {"serial_m", options.battery.serial_m},
                           {"approximate_entropy_m",
                            options.battery.approximate_entropy_m},
                           {"alpha", options.battery.alpha}};
    manifest.inputs = {options.function_path};
    manifest.outputs = {options.output_prefix + ".report.json",
                        options.output_prefix + ".report.txt",
                        options.output_prefix + ".repartition.csv"};
    write_manifest(manifest, options.output_prefix + ".manifest.json");
  }
  return outcome;
}

struct TraceOptions {
  std::string function_path;
  std::uint32_t x0 = 0;
  std::vector<int> strategy;
};

inline std::vector<std::uint32_t> run_trace(const TraceOptions& options) {
  BooleanFunction f = load_function(options.function_path);
  Strategy strategy(options.strategy, f.n());
  auto states = trace_G(f, strategy, Configuration(f.n(), options.x0),
                        strategy.size());
  std::vector<std::uint32_t> values;
  values.reserve(states.size());
  for (const Configuration& c : states) values.push_back(c.value());
  return values;
}

struct PipelineOptions {
  int n = 4;
  double rate = 0.05;
  std::size_t streams = 100;
  std::size_t bits = 1000000;
  std::uint32_t seed = kZeroSeedFallback;
  double epsilon = 0.01;
  std::size_t t_max = 1000;
  int max_attempts = 500;
  BatteryConfig battery;
  std::string output_dir;
};

struct PipelineOutcome {
  BooleanFunction function;
  DeviationProfile profile;
  TestReport report;
};

/// gen-fn -> analyze (b := sufficient_iterations) -> test, with file
/// handoff inside output_dir and a combined report at the end.
inline PipelineOutcome run_pipeline(const PipelineOptions& options) {
  namespace fs = std::filesystem;
  require(!options.output_dir.empty(), "pipeline: output directory required");
  fs::create_directories(options.output_dir);
  const std::string dir = options.output_dir + "/";

  GenFnOptions genfn;
  genfn.n = options.n;
  genfn.rate = options.rate;
  genfn.count = 1;
  genfn.seed = options.seed;
  genfn.max_attempts = options.max_attempts;
  genfn.output_path = dir + "function.jsonl";
  GenFnOutcome generated = run_genfn(genfn);
  save_function(generated.functions.front(), dir + "function.json");

  AnalyzeOptions analyze;
  analyze.function_path = dir + "function.json";
  analyze.epsilon = options.epsilon;
  analyze.t_max = options.t_max;
  analyze.output_prefix = dir + "profile";
  DeviationProfile profile = run_analyze(analyze);

  TestOptions test;
  test.function_path = dir + "function.json";
  test.b = std::max<std::size_t>(1, profile.sufficient_iterations);
  test.streams = options.streams;
  test.bits = options.bits;
  test.seed = options.seed;
  test.battery = options.battery;
  test.output_prefix = dir + "battery";
  TestOutcomeFiles tested = run_test(test);

  nlohmann::json combined;
  combined["function"] = function_to_json(generated.functions.front());
  combined["achieved_rate"] = generated.achieved_rates.front();
  combined["profile"] = profile_to_json(profile);
  combined["b"] = test.b;
  combined["report"] = report_to_json(tested.report);
  write_text_file(dir + "combined.json", combined.dump(2) + "\n");

  RunManifest manifest;
  manifest.subcommand = "pipeline";
  manifest.parameters = {{"n", options.n},
                         {"rate", options.rate},
                         {"streams", options.streams},
                         {"bits", options.bits},
                         {"seed", options.seed},
                         {"epsilon", options.epsilon},
                         {"tmax", options.t_max},
                         {"max_attempts", options.max_attempts}};
  manifest.outputs = {dir + "function.json", dir + "profile.json",
                      dir + "battery.report.json", dir + "combined.json"};
  write_manifest(manifest, dir + "pipeline.manifest.json");

  return {generated.functions.front(), std::move(profile),
          std::move(tested.report)};
}

}  // namespace ciprng
