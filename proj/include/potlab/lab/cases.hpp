#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "potlab/lab/report.hpp"
#include "potlab/lab/theorem1.hpp"
#include "potlab/lab/theorem2.hpp"
#include "potlab/lab/theorem3.hpp"
#include "potlab/lab/theorem4.hpp"
#include "potlab/recipe.hpp"

namespace potlab::lab {

enum class ParamType { number, array, integrand, text };

/// What each result id needs.
struct ResultSpec {
  std::string id;
  std::string summary;
  int recipes = 0;                   // number of field recipes
  int fixed_dim = 0;                 // 0: n = 2 or 3
  bool ladder = false;               // ladder required
  bool ladder_optional = false;
  std::map<std::string, ParamType> required;
  std::map<std::string, ParamType> optional;
  enum class Refine { none, drift, replace } refine = Refine::none;
};

inline const std::vector<ResultSpec>& result_specs() {
  using P = ParamType;
  using R = ResultSpec::Refine;
  static const std::vector<ResultSpec> specs = {
      {"T1", "weighted Hardy functional of grad u for zero-sphere-mean Phi", 1, 0, false, false,
       {{"q", P::number}, {"phi", P::integrand}}, {}, R::drift},
      {"T1_necessity", "ratio growth for Phi with nonzero sphere mean on a delta-pair ladder", 0, 0, true, false,
       {{"q", P::number}, {"phi", P::integrand}, {"control", P::integrand}}, {{"separation", P::array}}, R::none},
      {"T2", "weighted norm of D u for divergence-free f", 1, 0, false, false, {{"q", P::number}}, {}, R::drift},
      {"LEMMA_10x", "weighted norm of the skew matrix curl (-Delta)^{-1} f", 1, 0, false, false,
       {{"q", P::number}}, {{"flux_radius", P::number}}, R::drift},
      {"P1", "q > 1 estimate with the divergence term", 1, 0, false, false, {{"q", P::number}}, {}, R::drift},
      {"P2", "q = 1 estimate with the Hardy seminorm of div f", 1, 0, false, false, {}, {}, R::drift},
      {"T3_IDENTITY", "spectral quadratic form against the kernel double integral", 1, 0, false, false, {}, {},
       R::replace},
      {"T3i", "eps-regularized limit for fields of nonzero mass", 1, 0, false, true, {}, {{"mollifier", P::text}},
       R::none},
      {"T3ii_sharpness", "north-pole extremizer ladder toward the sharp constant", 0, 0, true, false, {},
       {{"a", P::number}, {"b", P::number}}, R::none},
      {"T3iii", "negative-order form bound for mean-zero fields", 1, 0, false, false, {}, {}, R::replace},
      {"COROLLARY", "H^{1-n/2} norm of u against ||grad u||_{L^1}", 1, 0, false, false, {}, {}, R::replace},
      {"CR_IDENTITY", "pointwise identity with the kernel N", 1, 0, false, false, {}, {{"divfree", P::number}},
       R::replace},
      {"CRE_IDENTITY", "gradient form of the pointwise identity", 1, 0, false, false, {}, {}, R::replace},
      {"P4", "potential form of the negative-order bound", 1, 0, false, false, {}, {}, R::replace},
      {"T4", "vorticity estimate for backward-built triples (recipes: g, f0)", 2, 3, false, false, {}, {},
       R::replace},
      {"REMARK5", "Bessel-potential form (recipes: calibration field, test field)", 2, 0, false, false, {}, {},
       R::replace},
      {"CONJ_PROBE", "critical-exponent probe with quadratic integrands", 0, 2, true, false, {},
       {{"trace_zero", P::array}, {"trace_nonzero", P::array}, {"separation", P::array}}, R::none},
  };
  return specs;
}

inline const ResultSpec& result_spec(const std::string& id) {
  for (const auto& s : result_specs())
    if (s.id == id) return s;
  throw InvalidArgument("unknown result id '" + id + "'");
}

/// Ratios at or below this level on both grids count as a symmetry-forced zero,
/// where the relative drift compares rounding noise.
inline constexpr double zero_level_ratio = 1e-8;

struct InequalityCase {
  std::string id;
  std::string result;
  int n = 2;
  double L = 8.0;
  int N = 64;
  std::vector<FieldRecipe> recipes;
  nlohmann::json params = nlohmann::json::object();
  std::vector<double> ladder;
  bool refine = false;
  int repeat = 1;
  std::uint64_t seed = 0;
  bool has_seed = false;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline void check_param(const std::string& key, const nlohmann::json& v, ParamType t) {
  const bool ok = (t == ParamType::number && v.is_number()) || (t == ParamType::text && v.is_string()) ||
                  (t == ParamType::array && v.is_array()) || (t == ParamType::integrand && v.is_object());
  if (!ok) throw InvalidArgument("parameter '" + key + "' has the wrong type");
  if (t == ParamType::array)
    for (const auto& x : v)
      if (!x.is_number()) throw InvalidArgument("parameter '" + key + "' must be an array of numbers");
}

inline HomogeneousIntegrand parse_integrand(const nlohmann::json& j, double q) {
  for (const auto& [key, value] : j.items())
    if (key != "family" && key != "coeffs") throw InvalidArgument("unknown integrand key '" + key + "'");
  if (!j.contains("family") || !j["family"].is_string() || !j.contains("coeffs") || !j["coeffs"].is_array())
    throw InvalidArgument("integrand needs 'family' and 'coeffs'");
  const auto family = j["family"].get<std::string>();
  const auto c = j["coeffs"].get<std::vector<double>>();
  if (family == "abs_power_combo") return abs_power_combo(c, q);
  if (family == "quadratic_form") return quadratic_form(c);
  if (family == "norm_power") {
    require(c.size() == 1, "norm_power takes one coefficient");
    return norm_power(c[0], q);
  }
  throw InvalidArgument("unknown integrand family '" + family + "'");
}

inline Point point_param(const nlohmann::json& params, const std::string& key, const Point& fallback) {
  if (!params.contains(key)) return fallback;
  const auto v = params[key].get<std::vector<double>>();
  Point p{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < v.size() && i < 3; ++i) p[i] = v[i];
  return p;
}

}  // namespace detail

/// Checks the case against its result id; throws InvalidArgument on mismatch.
inline void validate(const InequalityCase& c) {
  const ResultSpec& s = result_spec(c.result);
  if (c.id.empty()) throw InvalidArgument("case needs an id");
  const std::string where = "case '" + c.id + "': ";
  if (c.n != 2 && c.n != 3) throw InvalidArgument(where + "n must be 2 or 3");
  if (s.fixed_dim != 0 && c.n != s.fixed_dim)
    throw InvalidArgument(where + c.result + " needs n = " + std::to_string(s.fixed_dim));
  potlab::detail::validate_grid(c.n, c.L, c.N, c.n == 2 ? 256 : 64);
  if (static_cast<int>(c.recipes.size()) != s.recipes)
    throw InvalidArgument(where + c.result + " takes " + std::to_string(s.recipes) + " recipe(s)");
  if (s.ladder && c.ladder.size() < 3) throw InvalidArgument(where + c.result + " needs a ladder of length >= 3");
  if (!s.ladder && !s.ladder_optional && !c.ladder.empty())
    throw InvalidArgument(where + c.result + " does not take a ladder");
  if (c.repeat < 1) throw InvalidArgument(where + "repeat must be positive");
  for (const auto& [key, t] : s.required) {
    if (!c.params.contains(key)) throw InvalidArgument(where + c.result + " requires parameter '" + key + "'");
    detail::check_param(key, c.params[key], t);
  }
  for (const auto& [key, value] : c.params.items()) {
    if (s.required.count(key)) continue;
    auto it = s.optional.find(key);
    if (it == s.optional.end()) throw InvalidArgument(where + "parameter '" + key + "' is not used by " + c.result);
    detail::check_param(key, value, it->second);
  }
}

inline void from_json(const nlohmann::json& j, InequalityCase& c) {
  static const std::set<std::string> keys = {"id",     "result", "n",      "L",      "N",   "recipes",
                                             "params", "ladder", "refine", "repeat", "seed"};
  if (!j.is_object()) throw InvalidArgument("case must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!keys.count(key)) throw InvalidArgument("unknown case key '" + key + "'");
  if (!j.contains("id") || !j["id"].is_string()) throw InvalidArgument("case needs a string 'id'");
  if (!j.contains("result") || !j["result"].is_string()) throw InvalidArgument("case needs a string 'result'");
  c.id = j["id"].get<std::string>();
  c.result = j["result"].get<std::string>();
  c.n = j.value("n", 2);
  c.L = j.value("L", 8.0);
  c.N = j.value("N", 64);
  c.recipes = j.value("recipes", std::vector<FieldRecipe>{});
  c.params = j.value("params", nlohmann::json::object());
  if (!c.params.is_object()) throw InvalidArgument("case 'params' must be an object");
  c.ladder = j.value("ladder", std::vector<double>{});
  c.refine = j.value("refine", false);
  c.repeat = j.value("repeat", 1);
  c.has_seed = j.contains("seed");
  c.seed = j.value("seed", std::uint64_t{0});
  validate(c);
}

inline void to_json(nlohmann::json& j, const InequalityCase& c) {
  j = nlohmann::json{{"id", c.id},         {"result", c.result}, {"n", c.n},           {"L", c.L},
                     {"N", c.N},           {"recipes", c.recipes}, {"params", c.params}, {"ladder", c.ladder},
                     {"refine", c.refine}, {"repeat", c.repeat}, {"seed", c.seed}};
}

/// Expands repeat into individual cases with ids id-000, id-001, ... and
/// seeds base + k, where base is the case seed or the global seed.
inline std::vector<InequalityCase> expand(const InequalityCase& c, std::uint64_t global_seed) {
  const std::uint64_t base = c.has_seed ? c.seed : global_seed;
  if (c.repeat == 1) {
    InequalityCase one = c;
    one.seed = base;
    one.has_seed = true;
    return {one};
  }
  std::vector<InequalityCase> out;
  for (int k = 0; k < c.repeat; ++k) {
    InequalityCase one = c;
    char buf[16];
    std::snprintf(buf, sizeof buf, "-%03d", k);
    one.id = c.id + buf;
    one.repeat = 1;
    one.seed = base + static_cast<std::uint64_t>(k);
    one.has_seed = true;
    out.push_back(one);
  }
  return out;
}

struct RunOptions {
  bool refine = false;
  bool probe_mode = false;
};

namespace detail {

/// Recipe seeds derive from the case seed and the recipe position; the
/// calibration field of REMARK5 keeps a seed independent of repeat index.
inline FieldRecipe seeded(const FieldRecipe& r, std::uint64_t case_seed, std::size_t index) {
  FieldRecipe out = r;
  out.seed = splitmix64(case_seed + 0x632BE59BD9B4E019ull * (index + 1)) ^ r.seed;
  return out;
}

inline InequalityReport evaluate(const InequalityCase& c, int N, const RunOptions& opt) {
  const Grid g = make_grid(c.n, c.L, N);
  const auto& p = c.params;
  auto field = [&](std::size_t i) { return generate(seeded(c.recipes[i], c.seed, i), g); };
  auto vec = [&](std::size_t i) { return generate_vector(seeded(c.recipes[i], c.seed, i), g); };
  auto scal = [&](std::size_t i) { return generate_scalar(seeded(c.recipes[i], c.seed, i), g); };
  const std::string& id = c.result;
  if (id == "T1") {
    const double q = p["q"].get<double>();
    return theorem1_check(scal(0), parse_integrand(p["phi"], q), q, opt.probe_mode);
  }
  if (id == "T1_necessity") {
    const double q = p["q"].get<double>();
    return theorem1_necessity_probe(g, parse_integrand(p["phi"], q), parse_integrand(p["control"], q), q, c.ladder,
                                    point_param(p, "separation", Point{0.125 * c.L, 0.0, 0.0}), opt.probe_mode);
  }
  if (id == "T2") return theorem2_check(vec(0), p["q"].get<double>(), opt.probe_mode);
  if (id == "LEMMA_10x") {
    const VectorField f = vec(0);
    InequalityReport r = lemma10x_check(f, p["q"].get<double>(), opt.probe_mode);
    if (p.contains("flux_radius")) {
      const InequalityReport fr = flux_recursion_check(f, p["flux_radius"].get<double>());
      r.details["flux_recursion"] = fr.details;
      for (const auto& why : fr.failures) r.fail(why);
    }
    return r;
  }
  if (id == "P1") return prop1_check(vec(0), p["q"].get<double>());
  if (id == "P2") return prop2_check(vec(0));
  if (id == "T3_IDENTITY") return theorem3_identity_check(vec(0));
  if (id == "T3i") {
    const auto moll = p.value("mollifier", std::string("compact_bump"));
    if (moll != "compact_bump" && moll != "gaussian") throw InvalidArgument("unknown mollifier '" + moll + "'");
    const auto prof = moll == "gaussian" ? spectral::Mollifier::gaussian : spectral::Mollifier::compact_bump;
    return c.ladder.empty() ? theorem3i_limit_check(vec(0), {8, 4, 2, 1}, prof)
                            : theorem3i_limit_check(vec(0), c.ladder, prof);
  }
  if (id == "T3ii_sharpness")
    return theorem3ii_sharpness(g, c.ladder, p.value("a", 0.1), p.value("b", 0.2375 * c.L));
  if (id == "T3iii") return theorem3iii_check(vec(0));
  if (id == "COROLLARY") return corollary_check(scal(0));
  if (id == "CR_IDENTITY") {
    const GeneratedField f = field(0);
    const auto* v = std::get_if<VectorField>(&f);
    if (!v) throw InvalidArgument("CR_IDENTITY needs a vector recipe");
    return cr_identity_check(*v, p.value("divfree", 0.0) != 0.0);
  }
  if (id == "CRE_IDENTITY") return cre_identity_check(scal(0));
  if (id == "P4") return prop4_check(vec(0));
  if (id == "T4") return theorem4_check(vec(0), vec(1));
  if (id == "REMARK5") {
    const double cal = remark5_calibrate(generate_vector(c.recipes[0], g));
    InequalityReport r = remark5_check(vec(1), cal);
    return r;
  }
  if (id == "CONJ_PROBE") {
    const auto tz = p.value("trace_zero", std::vector<double>{1, 0, 0, -1});
    const auto tn = p.value("trace_nonzero", std::vector<double>{1, 0, 0, 0});
    return conjecture_probe(g, tz, tn, c.ladder, point_param(p, "separation", Point{0.125 * c.L, 0.0, 0.0}));
  }
  throw InvalidArgument("unhandled result id '" + id + "'");
}

inline int grid_cap(int n) { return n == 2 ? 256 : 64; }

}  // namespace detail

/// Runs one expanded case. Errors raised by a checker become a failed report.
inline InequalityReport run_case(const InequalityCase& c, const RunOptions& opt = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  InequalityReport r;
  try {
    r = detail::evaluate(c, c.N, opt);
    const ResultSpec& s = result_spec(c.result);
    if ((c.refine || opt.refine) && s.refine != ResultSpec::Refine::none) {
      if (2 * c.N > detail::grid_cap(c.n)) {
        r.details["refinement"] = {{"skipped", "2N exceeds the grid limit"}};
      } else {
        InequalityReport fine = detail::evaluate(c, 2 * c.N, opt);
        const double drift = std::abs(fine.ratio - r.ratio) / std::abs(r.ratio);
        nlohmann::json trend = {{"N", c.N},
                                {"ratio_N", number_or_null(r.ratio)},
                                {"N2", 2 * c.N},
                                {"ratio_2N", number_or_null(fine.ratio)},
                                {"drift", number_or_null(drift)}};
        fine.details["refinement"] = trend;
        fine.details["coarse_failures"] = r.failures;
        if (s.refine == ResultSpec::Refine::drift) {
          for (const auto& why : r.failures) fine.fail("at N: " + why);
          const bool zero_level = std::abs(r.ratio) <= zero_level_ratio && std::abs(fine.ratio) <= zero_level_ratio;
          fine.details["refinement"]["zero_level"] = zero_level;
          if (!r.degenerate && !fine.degenerate && !zero_level)
            fine.expect(drift < refinement_tol, "ratio drifts by " + std::to_string(drift) + " from N to 2N");
        }
        r = fine;
      }
    }
  } catch (const std::exception& e) {
    r = InequalityReport{};
    r.result_id = c.result;
    r.n = c.n;
    r.N = c.N;
    r.box_len = c.L;
    r.fail(std::string("error: ") + e.what());
  }
  r.case_id = c.id;
  r.seed = c.seed;
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace potlab::lab
