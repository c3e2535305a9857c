#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "potlab/field.hpp"
#include "potlab/profiles.hpp"
#include "potlab/spectral.hpp"

namespace potlab {

enum class RecipeKind {
  gaussian_bump,
  dipole_pair,
  radial_ring,
  divfree_projected,
  gradient_of,
  extremizer_northpole
};

inline const std::vector<std::pair<RecipeKind, std::string>>& recipe_kind_names() {
  static const std::vector<std::pair<RecipeKind, std::string>> names = {
      {RecipeKind::gaussian_bump, "gaussian_bump"},
      {RecipeKind::dipole_pair, "dipole_pair"},
      {RecipeKind::radial_ring, "radial_ring"},
      {RecipeKind::divfree_projected, "divfree_projected"},
      {RecipeKind::gradient_of, "gradient_of"},
      {RecipeKind::extremizer_northpole, "extremizer_northpole"}};
  return names;
}

inline std::string to_string(RecipeKind k) {
  for (const auto& [kind, name] : recipe_kind_names())
    if (kind == k) return name;
  return "unknown";
}

inline RecipeKind parse_recipe_kind(const std::string& s) {
  for (const auto& [kind, name] : recipe_kind_names())
    if (name == s) return kind;
  throw InvalidArgument("unknown recipe kind '" + s + "'");
}

/// Parameters form a flat name -> number map. Common names:
///   cx cy cz        centre
///   width           Gaussian sigma (or mollifier radius)
///   amp | ax ay az  scalar or vector amplitude
///   vector          1 for a vector-valued bump
///   count           number of random bumps (0: single deterministic bump)
///   width_min width_max  range of random widths
///   mean_zero       1 to apply mean_subtract
struct FieldRecipe {
  RecipeKind kind = RecipeKind::gaussian_bump;
  std::map<std::string, double> params;
  std::uint64_t seed = 0;

  double get(const std::string& key, double fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  }
  bool has(const std::string& key) const { return params.count(key) != 0; }
};

using GeneratedField = std::variant<ScalarField, VectorField>;

inline const std::set<std::string>& recipe_param_names(RecipeKind k) {
  static const std::map<RecipeKind, std::set<std::string>> names = {
      {RecipeKind::gaussian_bump,
       {"cx", "cy", "cz", "width", "amp", "ax", "ay", "az", "vector", "count", "width_min",
        "width_max", "mean_zero"}},
      {RecipeKind::dipole_pair,
       {"px", "py", "pz", "mx", "my", "mz", "width", "amp", "ax", "ay", "az", "vector", "compact",
        "unit_mass"}},
      {RecipeKind::radial_ring, {"radius", "width", "amp"}},
      {RecipeKind::divfree_projected,
       {"cx", "cy", "cz", "width", "amp", "ax", "ay", "az", "count", "width_min", "width_max"}},
      {RecipeKind::gradient_of,
       {"cx", "cy", "cz", "width", "amp", "count", "width_min", "width_max"}},
      {RecipeKind::extremizer_northpole, {"a", "b", "rho", "align_axis", "amp"}}};
  return names.at(k);
}

inline void to_json(nlohmann::json& j, const FieldRecipe& r) {
  j = nlohmann::json{{"kind", to_string(r.kind)}, {"params", r.params}, {"seed", r.seed}};
}

inline void from_json(const nlohmann::json& j, FieldRecipe& r) {
  if (!j.is_object()) throw InvalidArgument("recipe must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (key != "kind" && key != "params" && key != "seed")
      throw InvalidArgument("unknown recipe key '" + key + "'");
  if (!j.contains("kind") || !j["kind"].is_string()) throw InvalidArgument("recipe needs a string 'kind'");
  r.kind = parse_recipe_kind(j["kind"].get<std::string>());
  r.params.clear();
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw InvalidArgument("recipe 'params' must be an object");
    const auto& allowed = recipe_param_names(r.kind);
    for (const auto& [key, value] : j["params"].items()) {
      if (!allowed.count(key))
        throw InvalidArgument("unknown parameter '" + key + "' for " + to_string(r.kind));
      if (!value.is_number()) throw InvalidArgument("parameter '" + key + "' must be a number");
      r.params[key] = value.get<double>();
    }
  }
  r.seed = j.value("seed", std::uint64_t{0});
}

namespace detail {

inline Point centre_of(const FieldRecipe& r, const std::string& prefix, const Point& fallback) {
  return {r.get(prefix + "x", fallback[0]), r.get(prefix + "y", fallback[1]),
          r.get(prefix + "z", fallback[2])};
}

inline double distance(const Point& a, const Point& b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

inline double norm_of(const Point& a, int n) { return distance(a, Point{0.0, 0.0, 0.0}, n); }

inline void check_support(double radius, const Grid& g) {
  if (radius > 0.25 * g.box_len * (1.0 + 1e-12))
    throw SupportOverflow("field support radius " + std::to_string(radius) + " exceeds L/4 = " +
                          std::to_string(0.25 * g.box_len));
}

struct Bump {
  Point centre{0.0, 0.0, 0.0};
  double sigma = 1.0;
  std::array<double, 3> amp{1.0, 0.0, 0.0};
};

inline constexpr double bump_cut = 4.0;

inline double bumps_support(const std::vector<Bump>& bumps, int n) {
  double s = 0.0;
  for (const auto& b : bumps) s = std::max(s, norm_of(b.centre, n) + bump_cut * b.sigma);
  return s;
}

/// Random bumps with widths in [wmin, wmax] and supports inside L/4.
inline std::vector<Bump> random_bumps(const Grid& g, int count, double wmin, double wmax,
                                      std::uint64_t seed) {
  require(count > 0, "random bumps: count must be positive");
  require(wmin > 0.0 && wmax >= wmin, "random bumps: need 0 < width_min <= width_max");
  require(bump_cut * wmax <= 0.25 * g.box_len, "random bumps: width_max too large for the box");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Bump> out;
  for (int b = 0; b < count; ++b) {
    Bump bump;
    bump.sigma = wmin + (wmax - wmin) * uni(rng);
    Point dir{0.0, 0.0, 0.0};
    double len = 0.0;
    while (len < 1e-6) {
      for (int a = 0; a < g.dim; ++a) dir[a] = gauss(rng);
      len = norm_of(dir, g.dim);
    }
    const double rmax = std::max(0.0, 0.25 * g.box_len - bump_cut * bump.sigma);
    const double rad = rmax * uni(rng);
    for (int a = 0; a < g.dim; ++a) bump.centre[a] = dir[a] / len * rad;
    for (int a = 0; a < 3; ++a) bump.amp[a] = a < g.dim ? gauss(rng) : 0.0;
    out.push_back(bump);
  }
  return out;
}

inline std::vector<Bump> recipe_bumps(const FieldRecipe& r, const Grid& g) {
  const int count = static_cast<int>(r.get("count", 0.0));
  if (count > 0) {
    const double wmin = r.get("width_min", 0.045 * g.box_len);
    const double wmax = r.get("width_max", 0.0625 * g.box_len);
    return random_bumps(g, count, wmin, wmax, r.seed);
  }
  Bump b;
  b.centre = centre_of(r, "c", Point{0.0, 0.0, 0.0});
  b.sigma = r.get("width", g.box_len / 16.0);
  require(b.sigma > 0.0, "bump width must be positive");
  const double amp = r.get("amp", 1.0);
  b.amp = {r.get("ax", amp), r.get("ay", 0.0), r.get("az", 0.0)};
  return {b};
}

inline std::vector<double> sample_bumps(const Grid& g, const std::vector<Bump>& bumps, int comp) {
  std::vector<double> v(g.size(), 0.0);
  for (const auto& b : bumps) {
    if (b.amp[comp] == 0.0) continue;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double r = distance(g.point(i), b.centre, g.dim);
      v[i] += b.amp[comp] * profile::gaussian(r, b.sigma, bump_cut);
    }
  }
  return v;
}

inline std::vector<double> reference_bump(const Grid& g) {
  std::vector<double> ref(g.size());
  const double sigma = g.box_len / 16.0;
  for (std::size_t i = 0; i < ref.size(); ++i) ref[i] = profile::gaussian(g.radius(i), sigma, bump_cut);
  return ref;
}

inline void mean_subtract_values(std::vector<double>& v, const std::vector<double>& ref) {
  const double ratio = pairwise_sum(v) / pairwise_sum(ref);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= ratio * ref[i];
  // one refinement sweep removes the rounding residue of the first pass
  const double rest = pairwise_sum(v) / pairwise_sum(ref);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= rest * ref[i];
}

}  // namespace detail

/// Removes the discrete mean by subtracting a multiple of a fixed radial
/// reference bump supported in |x| <= L/4, so compact support is kept.
inline ScalarField mean_subtract(const ScalarField& f) {
  ScalarField out = f;
  detail::mean_subtract_values(out.values, detail::reference_bump(f.grid));
  out.support_radius = std::max(f.support_radius, 0.25 * f.grid.box_len);
  return out;
}

inline VectorField mean_subtract(const VectorField& f) {
  VectorField out = f;
  const auto ref = detail::reference_bump(f.grid);
  for (auto& c : out.comp) detail::mean_subtract_values(c, ref);
  out.support_radius = std::max(f.support_radius, 0.25 * f.grid.box_len);
  return out;
}

namespace detail {

inline GeneratedField gen_gaussian(const FieldRecipe& r, const Grid& g) {
  const auto bumps = recipe_bumps(r, g);
  const double support = bumps_support(bumps, g.dim);
  check_support(support, g);
  const bool vec = r.get("vector", 0.0) != 0.0;
  const bool mz = r.get("mean_zero", 0.0) != 0.0;
  if (!vec) {
    ScalarField f(g, sample_bumps(g, bumps, 0), support);
    return mz ? mean_subtract(f) : f;
  }
  VectorField v(g, support);
  for (int j = 0; j < g.dim; ++j) v.comp[j] = sample_bumps(g, bumps, j);
  return mz ? GeneratedField(mean_subtract(v)) : GeneratedField(v);
}

inline GeneratedField gen_dipole(const FieldRecipe& r, const Grid& g) {
  const Point p = centre_of(r, "p", Point{2.0, 0.0, 0.0});
  const Point m = centre_of(r, "m", Point{-2.0, 0.0, 0.0});
  const double w = r.get("width", 0.5);
  require(w > 0.0, "dipole width must be positive");
  const bool compact = r.get("compact", 0.0) != 0.0;
  const bool unit = r.get("unit_mass", 0.0) != 0.0;
  const double reach = compact ? w : bump_cut * w;
  const double support = std::max(norm_of(p, g.dim), norm_of(m, g.dim)) + reach;
  check_support(support, g);
  auto pole = [&](const Point& c) {
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double d = distance(g.point(i), c, g.dim);
      v[i] = compact ? profile::compact_bump(d / w) : profile::gaussian(d, w, bump_cut);
    }
    if (unit) {
      const double s = pairwise_sum(v) * g.cell_volume();
      require(s > 0.0, "dipole pole not resolved by the grid");
      for (double& x : v) x /= s;
    }
    return v;
  };
  const auto bp = pole(p);
  const auto bm = pole(m);
  std::vector<double> diff(g.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = bp[i] - bm[i];
  const bool vec = r.get("vector", 0.0) != 0.0;
  if (!vec) {
    ScalarField f(g, diff, support);
    for (double& x : f.values) x *= r.get("amp", 1.0);
    return mean_subtract(f);
  }
  VectorField v(g, support);
  const double amp = r.get("amp", 1.0);
  const std::array<double, 3> a{r.get("ax", amp), r.get("ay", 0.0), r.get("az", 0.0)};
  for (int j = 0; j < g.dim; ++j)
    for (std::size_t i = 0; i < diff.size(); ++i) v.comp[j][i] = a[j] * diff[i];
  return mean_subtract(v);
}

inline GeneratedField gen_ring(const FieldRecipe& r, const Grid& g) {
  const double R = r.get("radius", g.box_len / 8.0);
  const double w = r.get("width", g.box_len / 64.0);
  require(w > 0.0 && R >= 0.0, "ring radius and width must be positive");
  const double support = R + bump_cut * w;
  check_support(support, g);
  ScalarField f(g, support);
  const double amp = r.get("amp", 1.0);
  for (std::size_t i = 0; i < f.values.size(); ++i)
    f.values[i] = amp * profile::gaussian(std::abs(g.radius(i) - R), w, bump_cut);
  return mean_subtract(f);
}

inline GeneratedField gen_divfree(const FieldRecipe& r, const Grid& g) {
  auto bumps = recipe_bumps(r, g);
  check_support(bumps_support(bumps, g.dim), g);
  VectorField v(g);
  for (const auto& b : bumps) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Point x = g.point(i);
      const double d = distance(x, b.centre, g.dim);
      if (d == 0.0) continue;
      const double dp = profile::gaussian_deriv(d, b.sigma, bump_cut) / d;
      Point grad{0.0, 0.0, 0.0};
      for (int a = 0; a < g.dim; ++a) grad[a] = dp * (x[a] - b.centre[a]);
      if (g.dim == 2) {
        // stream function psi = amp_0 * G: v = (d2 psi, -d1 psi)
        v.comp[0][i] += b.amp[0] * grad[1];
        v.comp[1][i] -= b.amp[0] * grad[0];
      } else {
        // vector potential A = amp * G: v = grad G x amp
        v.comp[0][i] += grad[1] * b.amp[2] - grad[2] * b.amp[1];
        v.comp[1][i] += grad[2] * b.amp[0] - grad[0] * b.amp[2];
        v.comp[2][i] += grad[0] * b.amp[1] - grad[1] * b.amp[0];
      }
    }
  }
  // remove the sampling residue of the mean, then project exactly
  for (auto& c : v.comp) {
    const double m = pairwise_sum(c) / static_cast<double>(c.size());
    for (double& x : c) x -= m;
  }
  return spectral::leray_project(v);
}

inline GeneratedField gen_gradient(const FieldRecipe& r, const Grid& g) {
  const auto bumps = recipe_bumps(r, g);
  const double support = bumps_support(bumps, g.dim);
  check_support(support, g);
  VectorField v(g, support);
  for (const auto& b : bumps) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Point x = g.point(i);
      const double d = distance(x, b.centre, g.dim);
      if (d == 0.0) continue;
      const double dp = b.amp[0] * profile::gaussian_deriv(d, b.sigma, bump_cut) / d;
      for (int a = 0; a < g.dim; ++a) v.comp[a][i] += dp * (x[a] - b.centre[a]);
    }
  }
  return mean_subtract(v);
}

/// g = e_n eta(|x - c|) phi_rho((x - c)/|x - c|): eta a smooth plateau on
/// [a, b], phi_rho a bump of the chord distance to the north pole. With
/// align_axis = 1 the apex c sits at (h/2, ..., h/2), on a column of cell centres.
inline GeneratedField gen_northpole(const FieldRecipe& r, const Grid& g) {
  const double a = r.get("a", 1.0);
  const double b = r.get("b", 2.0);
  const double rho = r.get("rho", 0.2);
  require(0.0 <= a && a < b, "extremizer: need 0 <= a < b");
  require(rho > 0.0, "extremizer: rho must be positive");
  Point c{0.0, 0.0, 0.0};
  if (r.get("align_axis", 0.0) != 0.0)
    for (int k = 0; k < g.dim; ++k) c[k] = 0.5 * g.spacing();
  const double support = norm_of(c, g.dim) + b;
  check_support(support, g);
  VectorField v(g, support);
  const int n = g.dim;
  const double amp = r.get("amp", 1.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    Point x = g.point(i);
    for (int k = 0; k < n; ++k) x[k] -= c[k];
    const double d = norm_of(x, n);
    if (d == 0.0) continue;
    const double eta = profile::plateau(d, a, b);
    if (eta == 0.0) continue;
    double chord2 = 0.0;
    for (int k = 0; k < n - 1; ++k) chord2 += (x[k] / d) * (x[k] / d);
    chord2 += (x[n - 1] / d - 1.0) * (x[n - 1] / d - 1.0);
    v.comp[n - 1][i] = amp * eta * profile::compact_bump(std::sqrt(chord2) / rho);
  }
  return v;
}

}  // namespace detail

/// Deterministic given (recipe, seed, grid).
inline GeneratedField generate(const FieldRecipe& r, const Grid& g) {
  for (const auto& [key, value] : r.params)
    if (!recipe_param_names(r.kind).count(key))
      throw InvalidArgument("unknown parameter '" + key + "' for " + to_string(r.kind));
  switch (r.kind) {
    case RecipeKind::gaussian_bump:
      return detail::gen_gaussian(r, g);
    case RecipeKind::dipole_pair:
      return detail::gen_dipole(r, g);
    case RecipeKind::radial_ring:
      return detail::gen_ring(r, g);
    case RecipeKind::divfree_projected:
      return detail::gen_divfree(r, g);
    case RecipeKind::gradient_of:
      return detail::gen_gradient(r, g);
    case RecipeKind::extremizer_northpole:
      return detail::gen_northpole(r, g);
  }
  throw InvalidArgument("unhandled recipe kind");
}

inline ScalarField generate_scalar(const FieldRecipe& r, const Grid& g) {
  auto f = generate(r, g);
  if (auto* s = std::get_if<ScalarField>(&f)) return *s;
  throw InvalidArgument(to_string(r.kind) + " recipe does not produce a scalar field here");
}

inline VectorField generate_vector(const FieldRecipe& r, const Grid& g) {
  auto f = generate(r, g);
  if (auto* v = std::get_if<VectorField>(&f)) return *v;
  throw InvalidArgument(to_string(r.kind) + " recipe does not produce a vector field here");
}

}  // namespace potlab
