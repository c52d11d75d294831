#pragma once

// JSON experiment configuration and descriptor parsing.

#include "roughvar/kernels.hpp"
#include "roughvar/sample.hpp"

#include <json.hpp>

#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace roughvar::config {

using json = nlohmann::json;

/// Thrown for malformed or out-of-range configuration values.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridSpec {
  int n = 1;
  std::size_t m = 1024;
  double L = 8.0;
};

struct LadderSpec {
  int k_min = -3;
  int k_max = 2;
  int fine = 3;
};

struct WeightCheck {
  grid::FunctionSpec w = grid::Constant{1.0};
  double tau = 1.0;
  double s = 2.0;
  double r_prime = 2.0;
};

struct TestSet {
  std::size_t count = 8;
  std::uint64_t seed = 1;
  std::vector<std::string> kinds{"band_limited", "gaussian", "indicator", "bump"};
};

struct SweepSpec {
  std::vector<std::size_t> m{256, 512, 1024};
  std::vector<int> fine{1, 2, 4};
  std::vector<int> s_range{0, 1, 2, 3};
  std::vector<int> d_max{0, 1, 2, 3};
};

struct ExperimentConfig {
  GridSpec grid;
  kernels::OmegaSpec omega = kernels::OddSign{};
  grid::FunctionSpec b = grid::LogAbs{};
  int u = 1;
  double rho = 3.0;
  std::vector<double> ps{1.5, 2.0, 3.0};
  LadderSpec ladder;
  std::optional<WeightCheck> weight;
  TestSet tests;
  SweepSpec sweep;
  double slack = 0.15;
  int bmo_depth = 8;
  double alpha_n = 0.01;
  /// Empty optional: every registered check.
  std::optional<std::vector<std::string>> checks;
};

namespace detail {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

inline std::array<double, 2> point_or(const json& j, const char* key, std::array<double, 2> fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (!v.is_array() || v.empty() || v.size() > 2) throw ConfigError(std::string("'") + key + "' must be a number or [x, y]");
  return {v[0].get<double>(), v.size() > 1 ? v[1].get<double>() : 0.0};
}

inline std::string kind_of(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (!j.is_object() || !j.contains("kind")) throw ConfigError("descriptor needs a 'kind'");
  return j.at("kind").get<std::string>();
}

}  // namespace detail

inline grid::FunctionSpec parse_function(const json& j) {
  const std::string k = detail::kind_of(j);
  const json o = j.is_object() ? j : json::object();
  using namespace grid;
  if (k == "gaussian") return Gaussian{detail::get_or(o, "sigma", 1.0), detail::point_or(o, "center", {0, 0})};
  if (k == "bump") return Bump{detail::point_or(o, "center", {0, 0}), detail::get_or(o, "width", 1.0)};
  if (k == "indicator") return Indicator{detail::point_or(o, "lo", {0, 0}), detail::point_or(o, "hi", {1, 1})};
  if (k == "log_abs") return LogAbs{};
  if (k == "sin_log_abs") return SinLogAbs{};
  if (k == "power_abs") return PowerAbs{detail::get_or(o, "alpha", 0.5)};
  if (k == "band_limited")
    return BandLimitedRandom{detail::get_or<std::uint64_t>(o, "seed", 0), detail::get_or(o, "cutoff", 1.0),
                             detail::get_or(o, "low_cut", 0.0)};
  if (k == "constant") return Constant{detail::get_or(o, "value", 1.0)};
  if (k == "coordinate") return Coordinate{detail::get_or(o, "axis", 0)};
  if (k == "monomial") return Monomial{detail::get_or(o, "axis", 0), detail::get_or(o, "degree", 2)};
  throw ConfigError("unknown function kind '" + k + "'");
}

inline kernels::OmegaSpec parse_omega(const json& j) {
  const std::string k = detail::kind_of(j);
  const json o = j.is_object() ? j : json::object();
  using namespace kernels;
  const auto res = detail::get_or<std::size_t>(o, "resolution", 256);
  if (k == "odd_sign") return OddSign{res};
  if (k == "cos_k") return CosK{detail::get_or(o, "k", 1), res};
  if (k.rfind("cos_", 0) == 0) {
    try {
      return CosK{std::stoi(k.substr(4)), res};
    } catch (const std::exception&) {
      throw ConfigError("bad cos_<k> kernel '" + k + "'");
    }
  }
  if (k == "constant") return ConstantOmega{detail::get_or(o, "value", 1.0), res};
  if (k == "trig")
    return Trig{detail::get_or(o, "c0", 0.0), detail::get_or(o, "cos", std::vector<double>{}),
                detail::get_or(o, "sin", std::vector<double>{}), res};
  if (k == "pair") return Pair{detail::get_or(o, "plus", 1.0), detail::get_or(o, "minus", -1.0)};
  if (k == "llogl_spike")
    return LloglSpike{detail::get_or(o, "kappa", 3), detail::get_or(o, "c", 0.1),
                      detail::get_or<std::size_t>(o, "resolution", 4096)};
  throw ConfigError("unknown kernel kind '" + k + "'");
}

inline json to_json(const grid::FunctionSpec& spec) {
  return std::visit(
      [](const auto& d) -> json {
        using T = std::decay_t<decltype(d)>;
        using namespace grid;
        if constexpr (std::is_same_v<T, Gaussian>) return {{"kind", "gaussian"}, {"sigma", d.sigma}, {"center", d.center}};
        else if constexpr (std::is_same_v<T, Bump>) return {{"kind", "bump"}, {"center", d.center}, {"width", d.width}};
        else if constexpr (std::is_same_v<T, Indicator>) return {{"kind", "indicator"}, {"lo", d.lo}, {"hi", d.hi}};
        else if constexpr (std::is_same_v<T, LogAbs>) return {{"kind", "log_abs"}};
        else if constexpr (std::is_same_v<T, SinLogAbs>) return {{"kind", "sin_log_abs"}};
        else if constexpr (std::is_same_v<T, PowerAbs>) return {{"kind", "power_abs"}, {"alpha", d.alpha}};
        else if constexpr (std::is_same_v<T, BandLimitedRandom>)
          return {{"kind", "band_limited"}, {"seed", d.seed}, {"cutoff", d.cutoff}, {"low_cut", d.low_cut}};
        else if constexpr (std::is_same_v<T, Constant>) return {{"kind", "constant"}, {"value", d.value}};
        else if constexpr (std::is_same_v<T, Coordinate>) return {{"kind", "coordinate"}, {"axis", d.axis}};
        else return {{"kind", "monomial"}, {"axis", d.axis}, {"degree", d.degree}};
      },
      spec);
}

inline json to_json(const kernels::OmegaSpec& spec) {
  return std::visit(
      [](const auto& d) -> json {
        using T = std::decay_t<decltype(d)>;
        using namespace kernels;
        if constexpr (std::is_same_v<T, OddSign>) return {{"kind", "odd_sign"}, {"resolution", d.resolution}};
        else if constexpr (std::is_same_v<T, CosK>) return {{"kind", "cos_k"}, {"k", d.k}, {"resolution", d.resolution}};
        else if constexpr (std::is_same_v<T, ConstantOmega>)
          return {{"kind", "constant"}, {"value", d.value}, {"resolution", d.resolution}};
        else if constexpr (std::is_same_v<T, Trig>)
          return {{"kind", "trig"}, {"c0", d.c0}, {"cos", d.cos}, {"sin", d.sin}, {"resolution", d.resolution}};
        else if constexpr (std::is_same_v<T, Pair>) return {{"kind", "pair"}, {"plus", d.plus}, {"minus", d.minus}};
        else return {{"kind", "llogl_spike"}, {"kappa", d.kappa}, {"c", d.c}, {"resolution", d.resolution}};
      },
      spec);
}

inline void validate(const ExperimentConfig& c) {
  if (c.grid.n != 1 && c.grid.n != 2) throw ConfigError("grid.n must be 1 or 2");
  if (c.grid.m < 8 || (c.grid.m & (c.grid.m - 1)) != 0) throw ConfigError("grid.m must be a power of two >= 8");
  if (!(c.grid.L > 0)) throw ConfigError("grid.L must be positive");
  if (c.u < 0) throw ConfigError("u must be nonnegative");
  if (!(c.rho >= 1)) throw ConfigError("rho must be >= 1");
  if (c.ps.empty()) throw ConfigError("p list must be nonempty");
  for (double p : c.ps)
    if (!(p > 1) || !std::isfinite(p)) throw ConfigError("every p must lie in (1, inf)");
  if (c.ladder.k_max < c.ladder.k_min || c.ladder.fine < 1) throw ConfigError("ladder needs k_min <= k_max, fine >= 1");
  if (c.tests.count == 0) throw ConfigError("tests.count must be positive");
  if (!(c.slack > 0)) throw ConfigError("slack must be positive");
  if (c.bmo_depth < 0) throw ConfigError("bmo_depth must be nonnegative");
  if (c.weight && !(c.weight->s > 1)) throw ConfigError("weight.s must exceed 1");
  for (const auto& k : c.tests.kinds)
    if (k != "band_limited" && k != "gaussian" && k != "indicator" && k != "bump")
      throw ConfigError("unknown test kind '" + k + "'");
  if (c.tests.kinds.empty()) throw ConfigError("tests.kinds must be nonempty");
}

inline ExperimentConfig from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  ExperimentConfig c;
  using detail::get_or;
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    c.grid.n = get_or(g, "n", c.grid.n);
    c.grid.m = get_or(g, "m", c.grid.m);
    c.grid.L = get_or(g, "L", c.grid.L);
  }
  if (j.contains("omega")) c.omega = parse_omega(j.at("omega"));
  if (j.contains("b")) c.b = parse_function(j.at("b"));
  c.u = get_or(j, "u", c.u);
  c.rho = get_or(j, "rho", c.rho);
  c.ps = get_or(j, "p", c.ps);
  if (j.contains("ladder")) {
    const auto& l = j.at("ladder");
    c.ladder.k_min = get_or(l, "k_min", c.ladder.k_min);
    c.ladder.k_max = get_or(l, "k_max", c.ladder.k_max);
    c.ladder.fine = get_or(l, "fine", c.ladder.fine);
  }
  if (j.contains("weight") && !j.at("weight").is_null()) {
    const auto& w = j.at("weight");
    WeightCheck wc;
    if (w.contains("w")) wc.w = parse_function(w.at("w"));
    wc.tau = get_or(w, "tau", wc.tau);
    wc.s = get_or(w, "s", wc.s);
    wc.r_prime = get_or(w, "r_prime", wc.r_prime);
    c.weight = wc;
  }
  if (j.contains("tests")) {
    const auto& t = j.at("tests");
    c.tests.count = get_or(t, "count", c.tests.count);
    c.tests.seed = get_or(t, "seed", c.tests.seed);
    c.tests.kinds = get_or(t, "kinds", c.tests.kinds);
  }
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    c.sweep.m = get_or(s, "m", c.sweep.m);
    c.sweep.fine = get_or(s, "fine", c.sweep.fine);
    c.sweep.s_range = get_or(s, "s_range", c.sweep.s_range);
    c.sweep.d_max = get_or(s, "d_max", c.sweep.d_max);
  }
  c.slack = get_or(j, "slack", c.slack);
  c.bmo_depth = get_or(j, "bmo_depth", c.bmo_depth);
  c.alpha_n = get_or(j, "alpha_n", c.alpha_n);
  if (j.contains("checks")) c.checks = get_or(j, "checks", std::vector<std::string>{});
  validate(c);
  return c;
}

inline json to_json(const ExperimentConfig& c) {
  json j;
  j["grid"] = {{"n", c.grid.n}, {"m", c.grid.m}, {"L", c.grid.L}};
  j["omega"] = to_json(c.omega);
  j["b"] = to_json(c.b);
  j["u"] = c.u;
  j["rho"] = c.rho;
  j["p"] = c.ps;
  j["ladder"] = {{"k_min", c.ladder.k_min}, {"k_max", c.ladder.k_max}, {"fine", c.ladder.fine}};
  if (c.weight)
    j["weight"] = {{"w", to_json(c.weight->w)}, {"tau", c.weight->tau}, {"s", c.weight->s}, {"r_prime", c.weight->r_prime}};
  j["tests"] = {{"count", c.tests.count}, {"seed", c.tests.seed}, {"kinds", c.tests.kinds}};
  j["sweep"] = {{"m", c.sweep.m}, {"fine", c.sweep.fine}, {"s_range", c.sweep.s_range}, {"d_max", c.sweep.d_max}};
  j["slack"] = c.slack;
  j["bmo_depth"] = c.bmo_depth;
  j["alpha_n"] = c.alpha_n;
  if (c.checks) j["checks"] = *c.checks;
  return j;
}

inline ExperimentConfig load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return from_json(j);
}

}  // namespace roughvar::config
