#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "srvol/model.hpp"

namespace srvol::cli {

inline constexpr const char* kSchemaVersion = "1";

// JSON text, or the path of a JSON file.
StructureModel parse_model(const std::string& path_or_text);
// Built-in model name, JSON text or path.
StructureModel resolve_model(const std::string& arg, int k = 3);

// Integer, p/q fraction or decimal literal.
Rational parse_number(const std::string& text);
// A named point of the model or a comma-separated list of numbers.
RationalPoint parse_point(const StructureModel& model, const std::string& arg);

struct RunOptions {
  std::string model_arg;
  std::optional<std::string> point;
  std::optional<std::string> stratum;
  std::uint64_t seed = 1;
  std::optional<int> depth;
  std::optional<std::size_t> budget;
  int shells = 8;
  std::optional<int> samples;
  std::optional<int> k;
  std::string format = "json";
};

struct Report {
  nlohmann::ordered_json json;  // schema_version, command, inputs, seed, results, timings
  std::string csv;              // filled for --format csv where supported
  int exit_code = 0;            // 1 when an `examples` expectation mismatched
};

const std::vector<std::string>& commands();

// `examples` ignores `model` and runs the built-in suite.
Report run(const std::string& command, StructureModel model, const RunOptions& options);

}  // namespace srvol::cli
