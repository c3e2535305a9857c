#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"
#include "potlab/grid.hpp"

namespace potlab::lab {

inline constexpr double nan = std::numeric_limits<double>::quiet_NaN();

// Tolerance policy.
inline constexpr double identity_tol = 0.02;
inline constexpr double pointwise_identity_tol = 0.03;
inline constexpr double bound_tol = 1.02;
inline constexpr double exact_tol = 1e-10;
inline constexpr double refinement_tol = 0.10;

struct InequalityReport {
  std::string case_id;
  std::string result_id;
  int n = 0;
  int N = 0;
  double box_len = 0.0;
  double q_or_l = nan;
  double lhs = nan;
  double rhs = nan;
  double ratio = nan;
  double constant = nan;
  std::uint64_t seed = 0;
  bool degenerate = false;  // 0/0: excluded from ratio statistics
  bool gated = true;        // contributes to the exit code
  bool passed = true;
  std::vector<std::string> failures;
  nlohmann::json details = nlohmann::json::object();
  double wall_ms = 0.0;

  void fail(const std::string& why) {
    passed = false;
    failures.push_back(why);
  }
  void expect(bool ok, const std::string& why) {
    if (!ok) fail(why);
  }
};

inline InequalityReport make_report(const std::string& result_id, const Grid& g, double q_or_l = nan) {
  InequalityReport r;
  r.result_id = result_id;
  r.n = g.dim;
  r.N = g.pts;
  r.box_len = g.box_len;
  r.q_or_l = q_or_l;
  return r;
}

/// Sets ratio = lhs/rhs, flagging 0/0 and rejecting non-finite results.
inline void finish_ratio(InequalityReport& r) {
  if (r.rhs == 0.0) {
    r.degenerate = true;
    r.ratio = nan;
    r.details["degenerate_reason"] = r.lhs == 0.0 ? "zero field" : "zero right-hand side";
    return;
  }
  r.ratio = r.lhs / r.rhs;
  r.expect(std::isfinite(r.ratio), "ratio is not finite");
}

inline nlohmann::json number_or_null(double x) {
  return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

inline void to_json(nlohmann::json& j, const InequalityReport& r) {
  j = nlohmann::json{{"case_id", r.case_id},
                     {"result_id", r.result_id},
                     {"n", r.n},
                     {"N", r.N},
                     {"L", r.box_len},
                     {"q_or_l", number_or_null(r.q_or_l)},
                     {"lhs", number_or_null(r.lhs)},
                     {"rhs", number_or_null(r.rhs)},
                     {"ratio", number_or_null(r.ratio)},
                     {"constant", number_or_null(r.constant)},
                     {"seed", r.seed},
                     {"degenerate", r.degenerate},
                     {"gated", r.gated},
                     {"passed", r.passed},
                     {"failures", r.failures},
                     {"details", r.details},
                     {"wall_ms", r.wall_ms}};
}

}  // namespace potlab::lab
