#pragma once

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ciprng/battery.hpp"
#include "ciprng/bitcore.hpp"
#include "ciprng/markov.hpp"

namespace ciprng {

inline constexpr const char* kToolVersion = "0.1.0";

/// I/O failure with the offending path attached.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- BooleanFunction JSON: {"n": <int>, "images": [...], "name": <opt>}

inline nlohmann::json function_to_json(const BooleanFunction& f) {
  nlohmann::json j;
  j["n"] = f.n();
  j["images"] = f.images();
  if (!f.name().empty()) j["name"] = f.name();
  return j;
}

inline BooleanFunction function_from_json(const nlohmann::json& j) {
  if (!j.contains("n") || !j.contains("images"))
    throw io_error("function document needs \"n\" and \"images\"");
  int n = j.at("n").get<int>();
  auto images = j.at("images").get<std::vector<std::uint32_t>>();
  std::string name = j.value("name", std::string{});
  return BooleanFunction(n, std::move(images), std::move(name));
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_text_file(const std::string& path,
                            const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write " + path);
  out << content;
}

inline BooleanFunction load_function(const std::string& path) {
  auto j = nlohmann::json::parse(read_text_file(path), nullptr, false);
  if (j.is_discarded()) throw io_error("invalid JSON in " + path);
  return function_from_json(j);
}

inline void save_function(const BooleanFunction& f, const std::string& path) {
  write_text_file(path, function_to_json(f).dump() + "\n");
}

/// One function document per line (what gen-fn emits).
inline std::vector<BooleanFunction> load_function_lines(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);
  std::vector<BooleanFunction> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw io_error("invalid JSON line in " + path);
    out.push_back(function_from_json(j));
  }
  if (out.empty()) throw io_error("no function documents in " + path);
  return out;
}

// ---- Run manifest: enough resolved state to reproduce a run bit-for-bit.

struct RunManifest {
  std::string subcommand;
  nlohmann::json parameters;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
};

inline void write_manifest(const RunManifest& manifest,
                           const std::string& path) {
  nlohmann::json j;
  j["subcommand"] = manifest.subcommand;
  j["parameters"] = manifest.parameters;
  j["inputs"] = manifest.inputs;
  j["outputs"] = manifest.outputs;
  j["version"] = kToolVersion;
  write_text_file(path, j.dump(2) + "\n");
}

// ---- Deviation profile serialization

inline std::string profile_to_csv(const DeviationProfile& profile) {
  std::ostringstream out;
  out << "t,deviation\n";
  out << std::setprecision(17);
  for (std::size_t t = 1; t <= profile.deviations.size(); ++t)
    out << t << "," << profile.deviations[t - 1] << "\n";
  return out.str();
}

inline nlohmann::json profile_to_json(const DeviationProfile& profile) {
  nlohmann::json j;
  j["function"] = profile.function_name;
  j["start"] = profile.start;
  j["floor_deviation"] = profile.floor_deviation;
  j["sufficient_iterations"] = profile.sufficient_iterations;
  j["convergent"] = profile.convergent;
  j["period"] = profile.period;
  return j;
}

// ---- Test report serialization

inline nlohmann::json report_to_json(const TestReport& report) {
  nlohmann::json j;
  j["alpha"] = report.alpha;
  j["sequence_length"] = report.sequence_length;
  j["sequence_count"] = report.sequence_count;
  j["elapsed_seconds"] = report.elapsed_seconds;
  j["implemented_passed"] = report.implemented_passed;
  j["implemented_total"] = report.implemented_total;
  j["tests"] = nlohmann::json::array();
  for (const TestRow& row : report.rows) {
    nlohmann::json r;
    r["name"] = row.name;
    r["implemented"] = row.implemented;
    if (!row.implemented) {
      r["status"] = "external";
    } else if (!row.applicable) {
      r["status"] = "not-applicable";
    } else {
      r["status"] = row.pass ? "pass" : "fail";
      r["pt"] = row.pt;
      r["sub_pt"] = row.sub_pt;
      r["proportion"] = row.proportion;
    }
    j["tests"].push_back(r);
  }
  return j;
}

/// Human-readable table in the reference row layout; unimplemented slots
/// print as "external", inapplicable ones as NaN.
inline std::string report_to_table(const TestReport& report) {
  std::ostringstream out;
  out << "NIST SP 800-22 results (P_T), " << report.sequence_count
      << " sequences x " << report.sequence_length << " bits, alpha "
      << report.alpha << "\n";
  for (const TestRow& row : report.rows) {
    out << "  " << std::left << std::setw(48) << row.name << " ";
    if (!row.implemented) {
      out << "external";
    } else if (!row.applicable) {
      out << "NaN";
    } else {
      out << std::fixed << std::setprecision(5) << row.pt
          << (row.pass ? "  pass" : "  FAIL");
      out.unsetf(std::ios::fixed);
    }
    out << "\n";
  }
  out << "  Success (implemented subset): " << report.implemented_passed
      << "/" << report.implemented_total << "\n";
  out << "  Computational time: " << std::setprecision(4)
      << report.elapsed_seconds << " s\n";
  return out.str();
}

inline std::string repartition_to_csv(const RepartitionMatrix& m) {
  const std::size_t size = std::size_t{1} << m.n;
  std::ostringstream out;
  out << "x,y,count\n";
  for (std::size_t x = 0; x < size; ++x)
    for (std::size_t y = 0; y < size; ++y)
      out << x << "," << y << "," << m.counts[x * size + y] << "\n";
  return out.str();
}

}  // namespace ciprng
