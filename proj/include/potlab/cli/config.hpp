#pragma once

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "potlab/lab/cases.hpp"

namespace potlab::cli {

/// Raised for anything that maps to exit code 2.
struct ConfigError : Error {
  using Error::Error;
};

struct RunConfig {
  std::vector<lab::InequalityCase> cases;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  bool refine = false;
  bool probe_mode = false;
};

namespace detail {

/// 1-based line and column of a byte offset.
inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < offset; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text, const std::string& source = "<config>") {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = detail::line_column(text, e.byte);
    throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
  }
  static const std::set<std::string> keys = {"cases", "output_dir", "seed", "refine", "probe_mode"};
  try {
    if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
    for (const auto& [key, value] : j.items())
      if (!keys.count(key)) throw InvalidArgument("unknown config key '" + key + "'");
    RunConfig c;
    c.output_dir = j.value("output_dir", c.output_dir);
    c.seed = j.value("seed", c.seed);
    c.refine = j.value("refine", c.refine);
    c.probe_mode = j.value("probe_mode", c.probe_mode);
    if (!j.contains("cases") || !j["cases"].is_array()) throw InvalidArgument("config needs a 'cases' array");
    std::set<std::string> ids;
    for (const auto& cj : j["cases"]) {
      lab::InequalityCase ic = cj.get<lab::InequalityCase>();
      if (!ids.insert(ic.id).second) throw InvalidArgument("duplicate case id '" + ic.id + "'");
      c.cases.push_back(std::move(ic));
    }
    return c;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(source + ": " + e.what());
  }
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace potlab::cli
