#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "potlab/cli/config.hpp"
#include "potlab/lab/cases.hpp"

namespace potlab::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_gated_failure = 1;
inline constexpr int exit_config_error = 2;

inline const char* csv_header = "result_id,n,N,q_or_l,lhs,rhs,ratio,constant,seed,wall_ms\n";

/// 12 significant digits, '.' separator regardless of locale.
inline std::string format_number(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

inline std::string csv_row(const lab::InequalityReport& r) {
  std::string s = r.result_id;
  s += ',' + std::to_string(r.n) + ',' + std::to_string(r.N);
  for (double x : {r.q_or_l, r.lhs, r.rhs, r.ratio, r.constant}) s += ',' + format_number(x);
  s += ',' + std::to_string(r.seed) + ',' + format_number(r.wall_ms) + '\n';
  return s;
}

/// CSV body without the wall-clock column, for reproducibility comparisons.
inline std::string csv_body_without_timing(const std::string& csv) {
  std::string out;
  std::size_t start = 0;
  while (start < csv.size()) {
    std::size_t end = csv.find('\n', start);
    if (end == std::string::npos) end = csv.size();
    const std::string line = csv.substr(start, end - start);
    out += line.substr(0, line.rfind(',')) + '\n';
    start = end + 1;
  }
  return out;
}

/// Expanded cases ordered by id.
inline std::vector<lab::InequalityCase> expand_all(const RunConfig& cfg) {
  std::vector<lab::InequalityCase> out;
  for (const auto& c : cfg.cases)
    for (auto& e : lab::expand(c, cfg.seed)) out.push_back(std::move(e));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i].id == out[i - 1].id) throw ConfigError("duplicate case id '" + out[i].id + "' after expansion");
  return out;
}

/// Runs every case on a pool of `jobs` threads; results keep the input order.
inline std::vector<lab::InequalityReport> run_cases(const std::vector<lab::InequalityCase>& cases,
                                                    const lab::RunOptions& opt, int jobs) {
  std::vector<lab::InequalityReport> out(cases.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) out[i] = lab::run_case(cases[i], opt);
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(cases.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return out;
}

inline std::string results_csv(const std::vector<lab::InequalityReport>& reports) {
  std::string s = csv_header;
  for (const auto& r : reports) s += csv_row(r);
  return s;
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + p.string() + "'");
  out << text;
}

/// Writes one JSON per case and results.csv; returns the exit code.
inline int write_and_summarize(const std::vector<lab::InequalityReport>& reports, const std::string& dir,
                               std::ostream& err) {
  std::filesystem::create_directories(dir);
  for (const auto& r : reports) write_file(std::filesystem::path(dir) / (r.case_id + ".json"), nlohmann::json(r).dump(2) + "\n");
  write_file(std::filesystem::path(dir) / "results.csv", results_csv(reports));
  int failed = 0;
  for (const auto& r : reports) {
    if (!r.gated || r.passed) continue;
    ++failed;
    for (const auto& why : r.failures) err << "FAIL " << r.case_id << " [" << r.result_id << "]: " << why << "\n";
  }
  if (failed) err << failed << " of " << reports.size() << " gated case(s) failed\n";
  return failed ? exit_gated_failure : exit_ok;
}

struct RunOverrides {
  std::string out;
  std::optional<std::uint64_t> seed;
  bool probe = false;
  bool refine = false;
  int jobs = 1;
};

inline int run(const std::string& config_path, const RunOverrides& ov, std::ostream& log, std::ostream& err) {
  std::vector<lab::InequalityCase> cases;
  RunConfig cfg;
  try {
    cfg = load_config(config_path);
    if (ov.seed) cfg.seed = *ov.seed;
    if (!ov.out.empty()) cfg.output_dir = ov.out;
    cfg.probe_mode = cfg.probe_mode || ov.probe;
    cfg.refine = cfg.refine || ov.refine;
    cases = expand_all(cfg);
    std::filesystem::create_directories(cfg.output_dir);
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << "\n";
    return exit_config_error;
  }
  const auto reports = run_cases(cases, {cfg.refine, cfg.probe_mode}, ov.jobs);
  log << reports.size() << " case(s) written to " << cfg.output_dir << "\n";
  try {
    return write_and_summarize(reports, cfg.output_dir, err);
  } catch (const std::exception& e) {
    err << "output error: " << e.what() << "\n";
    return exit_config_error;
  }
}

/// Result ids with their inputs, one line each.
inline std::string list_results() {
  std::string s;
  auto type_name = [](lab::ParamType t) {
    switch (t) {
      case lab::ParamType::number: return "number";
      case lab::ParamType::array: return "array";
      case lab::ParamType::integrand: return "integrand";
      case lab::ParamType::text: return "string";
    }
    return "";
  };
  for (const auto& r : lab::result_specs()) {
    s += r.id + "\n  " + r.summary + "\n  recipes: " + std::to_string(r.recipes);
    if (r.fixed_dim) s += ", n = " + std::to_string(r.fixed_dim);
    if (r.ladder) s += ", ladder (>= 3 entries)";
    if (r.ladder_optional) s += ", ladder optional";
    s += "\n  required:";
    if (r.required.empty()) s += " none";
    for (const auto& [k, t] : r.required) s += std::string(" ") + k + ":" + type_name(t);
    if (!r.optional.empty()) {
      s += "\n  optional:";
      for (const auto& [k, t] : r.optional) s += std::string(" ") + k + ":" + type_name(t);
    }
    s += "\n";
  }
  return s;
}

/// Named (x, y) series pulled from a ladder report.
struct TrendArm {
  std::string name;
  std::vector<double> y;
};

inline std::vector<TrendArm> trend_arms(const lab::InequalityReport& r) {
  auto get = [&](const char* key) { return r.details.at(key).get<std::vector<double>>(); };
  if (r.result_id == "T3ii_sharpness") return {{"ratio", get("ratios")}};
  if (r.result_id == "T1_necessity") return {{"active", get("active_ratios")}, {"control", get("control_ratios")}};
  if (r.result_id == "CONJ_PROBE")
    return {{"trace_zero", get("trace_zero_ratios")},
            {"trace_nonzero", get("trace_nonzero_ratios")},
            {"subcritical", get("subcritical_ratios")}};
  throw InvalidArgument("result '" + r.result_id + "' has no ladder sweep");
}

/// Trend CSV: one block of two-column data per arm, then a footer of
/// monotonicity counts and the fit y = c0 + c1 log(1/x) for each arm.
inline std::string sweep_csv(const lab::InequalityReport& r, const std::vector<double>& ladder) {
  std::string s;
  const auto arms = trend_arms(r);
  for (const auto& arm : arms) {
    s += "# arm " + arm.name + "\nx," + arm.name + "\n";
    for (std::size_t i = 0; i < ladder.size(); ++i) s += format_number(ladder[i]) + ',' + format_number(arm.y[i]) + '\n';
  }
  const auto x = lab::detail::log_inverse(ladder);
  for (const auto& arm : arms) {
    int up = 0, down = 0;
    for (std::size_t i = 1; i < arm.y.size(); ++i) (arm.y[i] > arm.y[i - 1] ? up : down)++;
    const auto fit = lab::fit_line(x, arm.y);
    s += "# " + arm.name + " increasing_steps=" + std::to_string(up) + " non_increasing_steps=" + std::to_string(down) +
         " monotone=" + (down == 0 ? "yes" : "no") + "\n";
    s += "# " + arm.name + " log_fit intercept=" + format_number(fit.intercept) + " slope=" + format_number(fit.slope) +
         " r2=" + format_number(fit.r2) + "\n";
  }
  if (std::isfinite(r.constant)) s += "# constant=" + format_number(r.constant) + "\n";
  s += std::string("# passed=") + (r.passed ? "yes" : "no") + "\n";
  return s;
}

/// Runs one ladder case and writes <out>/<id>_trend.csv.
inline int sweep(const lab::InequalityCase& c, const std::string& out_dir, bool probe, std::ostream& log,
                 std::ostream& err) {
  try {
    if (c.ladder.size() < 3) throw InvalidArgument("ladder too short: a sweep needs at least three entries");
    lab::validate(c);
    const auto spec = lab::result_spec(c.result);
    if (!spec.ladder) throw InvalidArgument("result '" + c.result + "' has no ladder sweep");
    std::filesystem::create_directories(out_dir);
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << "\n";
    return exit_config_error;
  }
  const auto r = lab::run_case(c, {false, probe});
  if (!r.failures.empty() && r.details.empty()) {
    for (const auto& why : r.failures) err << "FAIL " << c.id << ": " << why << "\n";
    return exit_gated_failure;
  }
  const auto path = std::filesystem::path(out_dir) / (c.id + "_trend.csv");
  write_file(path, sweep_csv(r, c.ladder));
  write_file(std::filesystem::path(out_dir) / (c.id + ".json"), nlohmann::json(r).dump(2) + "\n");
  log << "trend written to " << path.string() << "\n";
  if (r.gated && !r.passed) {
    for (const auto& why : r.failures) err << "FAIL " << c.id << ": " << why << "\n";
    return exit_gated_failure;
  }
  return exit_ok;
}

}  // namespace potlab::cli
