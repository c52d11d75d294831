#pragma once

// Empirical verification: operator-ratio estimates, refinement sweeps and the
// consolidated check suite.

#include "roughvar/config.hpp"
#include "roughvar/lpal.hpp"
#include "roughvar/variation.hpp"
#include "roughvar/weights.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>

namespace roughvar::harness {

using config::ConfigError;
using config::ExperimentConfig;
using config::json;
using grid::Grid;
using grid::SampledFunction;

enum class Target { sio_commutator, avg_commutator, long_variation, short_variation, square_function };

inline std::string to_string(Target t) {
  switch (t) {
    case Target::sio_commutator: return "sio-commutator";
    case Target::avg_commutator: return "avg-commutator";
    case Target::long_variation: return "long";
    case Target::short_variation: return "short";
    case Target::square_function: return "square-function";
  }
  return "?";
}

inline Target parse_target(const std::string& s) {
  for (auto t : {Target::sio_commutator, Target::avg_commutator, Target::long_variation, Target::short_variation,
                 Target::square_function})
    if (to_string(t) == s) return t;
  throw ConfigError("unknown target '" + s + "'");
}

struct TestFunction {
  std::size_t index = 0;
  grid::FunctionSpec spec;
  std::string descriptor;
};

/// Seeded test functions; parameters depend on the seed, L and n only, never on m.
inline std::vector<TestFunction> make_test_set(const ExperimentConfig& cfg) {
  std::mt19937_64 rng(cfg.tests.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double L = cfg.grid.L;
  const bool two = cfg.grid.n == 2;
  auto point = [&](double spread) {
    const double x = (2 * U(rng) - 1) * spread;
    const double y = (2 * U(rng) - 1) * spread;
    return std::array<double, 2>{x, two ? y : 0.0};
  };
  std::vector<TestFunction> out;
  for (std::size_t i = 0; i < cfg.tests.count; ++i) {
    const std::string& kind = cfg.tests.kinds[i % cfg.tests.kinds.size()];
    grid::FunctionSpec spec;
    if (kind == "band_limited") {
      const std::uint64_t seed = rng();
      spec = grid::BandLimitedRandom{seed, 0.75 + 1.25 * U(rng), 0.0};
    } else if (kind == "gaussian") {
      const double sigma = L * (0.02 + 0.06 * U(rng));
      spec = grid::Gaussian{sigma, point(L / 4)};
    } else if (kind == "indicator") {
      const auto c = point(L / 4);
      const double hx = L * (0.04 + 0.12 * U(rng)), hy = L * (0.04 + 0.12 * U(rng));
      spec = grid::Indicator{{c[0] - hx, c[1] - hy}, {c[0] + hx, c[1] + hy}};
    } else {
      const auto c = point(L / 4);
      spec = grid::Bump{c, L * (0.05 + 0.2 * U(rng))};
    }
    out.push_back({i, spec, grid::describe(spec)});
  }
  return out;
}

struct RatioRow {
  std::size_t index = 0;
  std::string descriptor;
  double numerator = 0.0;
  double denominator = 0.0;
  double ratio = 0.0;
};

/// sup over the test set of ||target f||_{L^p(w)} / (||b||_*^u ||f||_{L^p(w)}).
struct NormEstimate {
  Target target = Target::sio_commutator;
  double p = 2.0;
  std::size_t m = 0;
  double bmo = 0.0;
  double ratio = 0.0;
  std::size_t witness = 0;
  std::string witness_descriptor;
  std::vector<RatioRow> rows;
};

/// Running record of the pointwise dominations T* <= V_rho + min_r |a_r| and
/// V_rho <= 2 (long + short) over every family inspected.
struct FamilyAudit {
  std::size_t families = 0;
  std::size_t points = 0;
  std::size_t maximal_violations = 0;
  std::size_t split_violations = 0;
  double maximal_excess = -std::numeric_limits<double>::infinity();
  double split_excess = -std::numeric_limits<double>::infinity();
  double maximal_tolerance = 1e-12;
  double split_tolerance = 1e-9;

  void inspect(const operators::FamilySample& fam, const variation::VariationField& full) {
    const auto lv = variation::long_variation(fam, full.rho);
    const auto sv = variation::short_variation(fam);
    const std::size_t R = fam.length();
    const bool cplx = fam.is_complex();
    for (std::size_t p = 0; p < fam.points(); ++p) {
      double mx = 0, mn = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < R; ++r) {
        const double a = cplx ? std::abs(fam.at(p, r)) : std::abs(fam.re[p * R + r]);
        mx = std::max(mx, a);
        mn = std::min(mn, a);
      }
      const double e1 = mx - (full.values[p] + mn);
      const double e2 = full.values[p] - 2 * (lv.values[p] + sv.values[p]);
      maximal_excess = std::max(maximal_excess, e1);
      split_excess = std::max(split_excess, e2);
      if (e1 > maximal_tolerance * std::max(1.0, mx)) ++maximal_violations;
      if (e2 > split_tolerance * std::max(1.0, full.values[p])) ++split_violations;
    }
    ++families;
    points += fam.points();
  }
};

struct EvalOptions {
  /// Multiplies b before use.
  double b_scale = 1.0;
  FamilyAudit* audit = nullptr;
  /// Replaces the seeded test set.
  std::optional<std::vector<TestFunction>> tests;
};

inline Grid make_grid(const ExperimentConfig& cfg) { return grid::make_grid(cfg.grid.n, cfg.grid.m, cfg.grid.L); }

inline int bmo_depth(const ExperimentConfig& cfg, const Grid& g) {
  int d = cfg.bmo_depth;
  while (d > 0 && (std::size_t(1) << d) > g.m) --d;
  return d;
}

/// NormEstimates for several targets from shared family evaluations, one per (target, p).
inline std::map<Target, std::vector<NormEstimate>> evaluate_targets(const ExperimentConfig& cfg,
                                                                    const std::vector<Target>& targets,
                                                                    EvalOptions opt = {}) {
  config::validate(cfg);
  const Grid g = make_grid(cfg);
  const auto omega = kernels::make_omega(cfg.omega, g);
  auto b = grid::sample(cfg.b, g);
  if (opt.b_scale != 1.0) b = opt.b_scale * b;
  const double bmo = weights::bmo_norm(b, weights::make_cube_family(g, bmo_depth(cfg, g)));
  if (cfg.u > 0 && !(bmo > 0)) throw std::invalid_argument("zero BMO norm: ratio undefined for a constant symbol");
  const double bmo_u = cfg.u > 0 ? std::pow(bmo, cfg.u) : 1.0;
  std::optional<SampledFunction> w;
  if (cfg.weight) w = grid::sample(cfg.weight->w, g);
  auto norm = [&](const SampledFunction& f, double p) { return w ? grid::lp_norm(f, p, *w) : grid::lp_norm(f, p); };

  auto wants = [&](Target t) { return std::find(targets.begin(), targets.end(), t) != targets.end(); };
  const bool need_sio = wants(Target::sio_commutator) || wants(Target::long_variation) || wants(Target::short_variation);
  const bool need_avg = wants(Target::avg_commutator);
  const auto ladder = operators::make_ladder(cfg.ladder.k_min, cfg.ladder.k_max, cfg.ladder.fine);
  std::optional<operators::FamilyPlan> sio_plan, avg_plan;
  if (need_sio) sio_plan.emplace(operators::FamilyKind::sio, omega, ladder, g);
  if (need_avg) avg_plan.emplace(operators::FamilyKind::avg, omega, ladder, g);
  std::optional<lpal::FilterBank> bank;
  if (wants(Target::square_function)) bank = lpal::make_filter_bank(g);

  std::map<Target, std::vector<NormEstimate>> out;
  for (auto t : targets) {
    auto& v = out[t];
    for (double p : cfg.ps) {
      NormEstimate e;
      e.target = t;
      e.p = p;
      e.m = g.m;
      e.bmo = bmo;
      v.push_back(e);
    }
  }
  const SampledFunction* bp = cfg.u > 0 ? &b : nullptr;
  bool any = false;
  auto record = [&](Target t, const TestFunction& tf, const SampledFunction& field, const std::vector<double>& fn) {
    auto& v = out[t];
    for (std::size_t k = 0; k < cfg.ps.size(); ++k) {
      RatioRow row{tf.index, tf.descriptor, norm(field, cfg.ps[k]), bmo_u * fn[k], 0.0};
      row.ratio = row.numerator / row.denominator;
      if (v[k].rows.empty() || row.ratio > v[k].ratio) {
        v[k].ratio = row.ratio;
        v[k].witness = tf.index;
        v[k].witness_descriptor = tf.descriptor;
      }
      v[k].rows.push_back(row);
    }
  };
  operators::FamilySample fam;
  for (const auto& tf : opt.tests ? *opt.tests : make_test_set(cfg)) {
    const auto f = grid::sample(tf.spec, g);
    std::vector<double> fn;
    for (double p : cfg.ps) fn.push_back(norm(f, p));
    if (fn[0] == 0) continue;  // zero test functions carry no information
    any = true;
    if (need_sio) {
      sio_plan->evaluate_into(fam, f, bp, cfg.u);
      const auto full = variation::pointwise_variation(fam, cfg.rho);
      if (opt.audit) opt.audit->inspect(fam, full);
      if (wants(Target::sio_commutator)) record(Target::sio_commutator, tf, full.as_function(), fn);
      if (wants(Target::long_variation))
        record(Target::long_variation, tf, variation::long_variation(fam, cfg.rho).as_function(), fn);
      if (wants(Target::short_variation))
        record(Target::short_variation, tf, variation::short_variation(fam).as_function(), fn);
    }
    if (need_avg) {
      avg_plan->evaluate_into(fam, f, bp, cfg.u);
      const auto full = variation::pointwise_variation(fam, cfg.rho);
      if (opt.audit) opt.audit->inspect(fam, full);
      record(Target::avg_commutator, tf, full.as_function(), fn);
    }
    if (bank) {
      const auto S = lpal::square_function(*bank, f, {bank->l_min, bank->l_max}, bp, cfg.u);
      record(Target::square_function, tf, S, fn);
    }
  }
  if (!any) throw std::invalid_argument("test set contains no nonzero function");
  return out;
}

inline std::vector<NormEstimate> estimate_ratio(const ExperimentConfig& cfg, Target target, EvalOptions opt = {}) {
  return evaluate_targets(cfg, {target}, opt).at(target);
}

// Reports.

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
  Table table;
  double seconds = 0.0;
};

struct SuiteReport {
  std::vector<CheckResult> checks;
  std::map<std::string, double> fitted;
  json environment = json::object();

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
  }
  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

/// Timings are kept out of the value sections so equal inputs give equal documents.
inline json to_json(const SuiteReport& r, bool timings = true) {
  json j;
  j["passed"] = r.passed();
  j["checks"] = json::array();
  for (const auto& c : r.checks)
    j["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"tolerance", c.tolerance},
                           {"detail", c.detail}});
  j["fitted"] = r.fitted;
  j["environment"] = r.environment;
  if (timings) {
    json t = json::object();
    for (const auto& c : r.checks) t[c.name] = c.seconds;
    j["timings"] = t;
  }
  return j;
}

inline void write_csv(const Table& t, std::ostream& os) {
  auto cell = [](const json& v) -> std::string {
    if (v.is_null()) return "";
    if (v.is_string()) {
      const std::string s = v.get<std::string>();
      if (s.find_first_of(",\"") == std::string::npos) return s;
      std::string q = "\"";
      for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      return q + "\"";
    }
    return v.dump();
  };
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell(row[i]);
    os << "\n";
  }
}

enum class Format { json, csv, both };

inline Format parse_format(const std::string& s) {
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  if (s == "both") return Format::both;
  throw ConfigError("format must be json, csv or both");
}

/// report.json and tables/<check>.csv under dir.
inline void write_report(const SuiteReport& r, const std::filesystem::path& dir, Format fmt = Format::both) {
  std::filesystem::create_directories(dir);
  if (fmt != Format::csv) {
    std::ofstream os(dir / "report.json");
    if (!os) throw std::runtime_error("cannot write " + (dir / "report.json").string());
    os << to_json(r).dump(2) << "\n";
  }
  if (fmt != Format::json) {
    std::filesystem::create_directories(dir / "tables");
    for (const auto& c : r.checks) {
      if (c.table.columns.empty()) continue;
      std::ofstream os(dir / "tables" / (c.name + ".csv"));
      if (!os) throw std::runtime_error("cannot write table for " + c.name);
      write_csv(c.table, os);
    }
  }
}

inline json environment(const ExperimentConfig& cfg) {
  return {{"config", config::to_json(cfg)}, {"fftw", std::string(fftw_version)}};
}

// Refinement sweeps.

enum class Axis { m, ladder_density, s_range, d_max };

inline std::string to_string(Axis a) {
  switch (a) {
    case Axis::m: return "m";
    case Axis::ladder_density: return "ladder_density";
    case Axis::s_range: return "s_range";
    case Axis::d_max: return "d_max";
  }
  return "?";
}

inline Axis parse_axis(const std::string& s) {
  for (auto a : {Axis::m, Axis::ladder_density, Axis::s_range, Axis::d_max})
    if (to_string(a) == s || (a == Axis::ladder_density && s == "fine")) return a;
  throw ConfigError("unknown sweep axis '" + s + "'");
}

namespace detail {

template <class T>
void require_increasing(const std::vector<T>& v, const std::string& axis) {
  if (v.size() < 3) throw ConfigError("sweep over " + axis + " needs at least 3 values");
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) throw ConfigError("sweep values for " + axis + " must be strictly increasing");
}

/// Scale k nearest 0 at which the mollified decomposition is defined on g.
inline int decomposition_scale(const Grid& g) {
  const auto J = operators::resolvable_scales(g);
  int best = std::numeric_limits<int>::min();
  for (int k = J.j_min; k <= J.j_max; ++k)
    if (kernels::mollifier_representable(k, g) && (best == std::numeric_limits<int>::min() || std::abs(k) < std::abs(best)))
      best = k;
  if (best == std::numeric_limits<int>::min()) throw std::invalid_argument("no scale supports the decomposition on this grid");
  return best;
}

inline CheckResult m_sweep(const ExperimentConfig& cfg) {
  CheckResult c;
  c.table.columns = {"m", "p", "ratio", "witness"};
  std::vector<std::vector<double>> ratios;  // [m][p]
  for (std::size_t m : cfg.sweep.m) {
    auto cm = cfg;
    cm.grid.m = m;
    const auto est = estimate_ratio(cm, Target::sio_commutator);
    ratios.emplace_back();
    for (const auto& e : est) {
      ratios.back().push_back(e.ratio);
      c.table.rows.push_back({m, e.p, e.ratio, e.witness_descriptor});
    }
  }
  double worst = 0;
  const auto& a = ratios[ratios.size() - 2];
  const auto& z = ratios.back();
  for (std::size_t k = 0; k < z.size(); ++k) worst = std::max(worst, std::max(a[k], z[k]) / std::min(a[k], z[k]) - 1);
  c.value = worst;
  c.tolerance = cfg.slack;
  c.passed = worst <= cfg.slack;
  c.detail = "max/min - 1 over the last two sizes";
  return c;
}

inline CheckResult ladder_sweep(const ExperimentConfig& cfg) {
  for (std::size_t i = 1; i < cfg.sweep.fine.size(); ++i)
    if (cfg.sweep.fine[i] % cfg.sweep.fine[i - 1] != 0)
      throw ConfigError("ladder densities must divide one another so the ladders nest");
  CheckResult c;
  c.table.columns = {"fine", "test", "mean_variation"};
  const Grid g = make_grid(cfg);
  const auto omega = kernels::make_omega(cfg.omega, g);
  const auto b = grid::sample(cfg.b, g);
  const auto tests = make_test_set(cfg);
  const std::size_t n_tests = std::min<std::size_t>(tests.size(), 4);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < n_tests; ++t) {
    const auto f = grid::sample(tests[t].spec, g);
    std::vector<double> prev;
    for (int fine : cfg.sweep.fine) {
      const auto ladder = operators::make_ladder(cfg.ladder.k_min, cfg.ladder.k_max, fine);
      const auto fam = operators::evaluate_family(operators::FamilyKind::avg, f, cfg.u > 0 ? &b : nullptr, cfg.u,
                                                  omega, ladder);
      const auto V = variation::pointwise_variation(fam, cfg.rho);
      double mean = 0;
      for (double v : V.values) mean += v / double(V.values.size());
      c.table.rows.push_back({fine, tests[t].descriptor, mean});
      if (!prev.empty())
        for (std::size_t p = 0; p < V.values.size(); ++p)
          worst = std::max(worst, (prev[p] - V.values[p]) / std::max(1.0, prev[p]));
      prev = V.values;
    }
  }
  c.value = worst;
  c.tolerance = 1e-12;
  c.passed = worst <= 1e-12;
  c.detail = "largest relative pointwise decrease under refinement";
  return c;
}

inline CheckResult s_range_sweep(const ExperimentConfig& cfg) {
  CheckResult c;
  c.table.columns = {"s_range", "residual"};
  const Grid g = make_grid(cfg);
  const auto omega = kernels::make_omega(cfg.omega, g);
  const auto tests = make_test_set(cfg);
  const auto f = grid::sample(tests.front().spec, g);
  const int k = decomposition_scale(g);
  double prev = std::numeric_limits<double>::infinity(), worst = -std::numeric_limits<double>::infinity();
  for (int s : cfg.sweep.s_range) {
    const double r = operators::decomposition_residual(f, omega, k, s);
    c.table.rows.push_back({s, r});
    if (std::isfinite(prev)) worst = std::max(worst, r - prev);
    prev = r;
  }
  c.value = worst;
  c.tolerance = 1e-12;
  c.passed = worst <= 1e-12;
  c.detail = "largest increase of the residual between consecutive s_range values (k = " + std::to_string(k) + ")";
  return c;
}

inline CheckResult d_max_sweep(const ExperimentConfig& cfg) {
  CheckResult c;
  c.table.columns = {"d_max", "tail_mass", "reconstruction_error"};
  const auto omega = kernels::make_omega(cfg.omega, cfg.grid.n);
  double prev = std::numeric_limits<double>::infinity(), worst = -std::numeric_limits<double>::infinity();
  double recon = 0;
  for (int d : cfg.sweep.d_max) {
    const auto lev = kernels::levelset_decompose(omega, d);
    double err = 0;
    for (std::size_t k = 0; k < omega.samples.size(); ++k) {
      double s = 0;
      for (const auto& piece : lev.pieces) s += piece.samples[k];
      err = std::max(err, std::abs(s - omega.samples[k]));
    }
    recon = std::max(recon, err);
    c.table.rows.push_back({d, lev.tail_mass, err});
    if (std::isfinite(prev)) worst = std::max(worst, lev.tail_mass - prev);
    prev = lev.tail_mass;
  }
  c.value = worst;
  c.tolerance = 1e-12;
  c.passed = worst <= 1e-12 && recon <= 1e-9 * std::max(1.0, omega.max_abs());
  c.detail = "largest increase of the level-set tail mass; pieces sum back to Omega";
  return c;
}

template <class Fn>
CheckResult timed(const std::string& name, Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult c;
  try {
    c = fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    c = CheckResult{};
    c.passed = false;
    c.value = std::numeric_limits<double>::quiet_NaN();
    c.detail = std::string("precondition failed: ") + e.what();
  }
  c.name = name;
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return c;
}

}  // namespace detail

inline SuiteReport refinement_sweep(const ExperimentConfig& cfg, Axis axis) {
  config::validate(cfg);
  SuiteReport r;
  r.environment = environment(cfg);
  const std::string name = "sweep." + to_string(axis);
  switch (axis) {
    case Axis::m: detail::require_increasing(cfg.sweep.m, "m"); break;
    case Axis::ladder_density: detail::require_increasing(cfg.sweep.fine, "ladder density"); break;
    case Axis::s_range: detail::require_increasing(cfg.sweep.s_range, "s_range"); break;
    case Axis::d_max: detail::require_increasing(cfg.sweep.d_max, "d_max"); break;
  }
  r.checks.push_back(detail::timed(name, [&] {
    switch (axis) {
      case Axis::m: return detail::m_sweep(cfg);
      case Axis::ladder_density: return detail::ladder_sweep(cfg);
      case Axis::s_range: return detail::s_range_sweep(cfg);
      case Axis::d_max: return detail::d_max_sweep(cfg);
    }
    return CheckResult{};
  }));
  return r;
}

// The check registry.

struct SuiteContext {
  FamilyAudit audit;
  std::map<std::string, double> fitted;
};

using CheckFn = std::function<CheckResult(const ExperimentConfig&, SuiteContext&)>;

namespace checks {

inline CheckResult dp_oracle(const ExperimentConfig& cfg, SuiteContext&) {
  CheckResult c;
  c.table.columns = {"rho", "sequences", "max_error"};
  std::mt19937_64 rng(cfg.tests.seed);
  std::uniform_int_distribution<int> len(2, 12);
  std::normal_distribution<double> N;
  const std::vector<double> rhos{1.0, 1.5, 2.0, 3.0};
  std::vector<double> err(rhos.size(), 0.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> a(static_cast<std::size_t>(len(rng)));
    for (auto& v : a) v = N(rng);
    const std::size_t n = a.size();
    for (std::size_t k = 0; k < rhos.size(); ++k) {
      const double rho = rhos[k];
      double best = 0;
      for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        double s = 0;
        long prev = -1;
        for (std::size_t i = 0; i < n; ++i)
          if (mask & (1u << i)) {
            if (prev >= 0) s += std::pow(std::abs(a[i] - a[static_cast<std::size_t>(prev)]), rho);
            prev = static_cast<long>(i);
          }
        best = std::max(best, s);
      }
      const double brute = std::pow(best, 1.0 / rho);
      err[k] = std::max(err[k], std::abs(variation::variation_norm(a, rho) - brute));
    }
  }
  for (std::size_t k = 0; k < rhos.size(); ++k) c.table.rows.push_back({rhos[k], 1000, err[k]});
  c.value = *std::max_element(err.begin(), err.end());
  c.tolerance = 1e-12;
  c.passed = c.value <= c.tolerance;
  c.detail = "DP against exhaustive subsequence search, lengths 2-12";
  return c;
}

inline CheckResult monotonicity(const ExperimentConfig& cfg, SuiteContext&) {
  CheckResult c;
  c.table.columns = {"property", "cases", "failures"};
  std::mt19937_64 rng(cfg.tests.seed + 1);
  std::normal_distribution<double> N;
  const auto ladder = operators::make_ladder(-3, 1, 4);
  const Grid g = grid::make_grid(1, 16, 1.0);
  std::size_t rho_fail = 0, refine_fail = 0, cases = 0;
  const std::vector<double> rhos{1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 8.0};
  for (int trial = 0; trial < 100; ++trial) {
    operators::FamilySample fam;
    fam.grid = g;
    fam.ladder = ladder;
    fam.re.resize(g.size() * ladder.size());
    for (auto& v : fam.re) v = N(rng);
    if (trial % 3 == 0) {
      fam.im.resize(fam.re.size());
      for (auto& v : fam.im) v = N(rng);
    }
    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < ladder.size(); ++r)
      if (rng() % 2) keep.push_back(r);
    if (keep.empty()) keep.push_back(0);
    std::vector<double> radii;
    for (auto r : keep) radii.push_back(ladder.radii[r]);
    operators::FamilySample sub = fam;
    sub.ladder = operators::ladder_from_radii(radii);
    sub.re.assign(g.size() * keep.size(), 0.0);
    if (fam.is_complex()) sub.im.assign(sub.re.size(), 0.0);
    for (std::size_t p = 0; p < g.size(); ++p)
      for (std::size_t k = 0; k < keep.size(); ++k) {
        sub.re[p * keep.size() + k] = fam.re[p * ladder.size() + keep[k]];
        if (fam.is_complex()) sub.im[p * keep.size() + k] = fam.im[p * ladder.size() + keep[k]];
      }
    std::vector<double> prev;
    for (double rho : rhos) {
      const auto V = variation::pointwise_variation(fam, rho);
      const auto Vs = variation::pointwise_variation(sub, rho);
      for (std::size_t p = 0; p < g.size(); ++p) {
        if (!prev.empty() && V.values[p] > prev[p] * (1 + 1e-12)) ++rho_fail;
        if (Vs.values[p] > V.values[p] * (1 + 1e-12)) ++refine_fail;
        ++cases;
      }
      prev = V.values;
    }
  }
  c.table.rows.push_back({"nonincreasing_in_rho", cases, rho_fail});
  c.table.rows.push_back({"nondecreasing_under_refinement", cases, refine_fail});
  c.value = double(rho_fail + refine_fail);
  c.tolerance = 0;
  c.passed = rho_fail + refine_fail == 0;
  c.detail = "100 random families, 7 exponents";
  return c;
}

inline std::size_t index_of(const Grid& g, double x) {
  return static_cast<std::size_t>(std::llround((x + g.L) / g.h));
}

inline CheckResult closed_forms(const ExperimentConfig&, SuiteContext&) {
  CheckResult c;
  c.table.columns = {"quantity", "computed", "expected", "error"};
  const Grid g = grid::make_grid(1, 8192, 8.0);
  const auto f = grid::sample(grid::Indicator{{0, 0}, {1, 0}}, g);
  const auto omega = kernels::make_omega(kernels::OddSign{}, 1);
  const double h = operators::truncated_sio(f, omega, 0.1).values[index_of(g, 2.0)].real();
  const auto b = grid::sample(grid::Coordinate{0}, g);
  const double k = operators::apply_commutator(operators::Sio{omega, 0.1}, f, b, 1).values[g.origin_index()].real();
  const double e1 = std::abs(h - std::log(2.0)), e2 = std::abs(k - 0.9);
  c.table.rows.push_back({"truncated_sio_at_2", h, std::log(2.0), e1});
  c.table.rows.push_back({"commutator_at_0", k, 0.9, e2});
  c.value = std::max(e1, e2);
  c.tolerance = 1e-3;
  c.passed = c.value <= c.tolerance;
  c.detail = "odd_sign, m = 8192, eps = 0.1, f = 1_[0,1]";
  return c;
}

inline CheckResult cauchy(const ExperimentConfig&, SuiteContext&) {
  CheckResult c;
  c.table.columns = {"n_theta", "eps", "relative_error"};
  const Grid g = grid::make_grid(1, 1024, 8.0);
  const auto b = grid::sample(grid::LogAbs{}, g);
  const double bmo = weights::bmo_norm(b, weights::make_cube_family(g, 8));
  const auto f = grid::sample(grid::BandLimitedRandom{4, 4.0}, g);
  const auto direct = operators::apply_commutator(operators::Mollifier{0}, f, b, 1);
  const double eps = 0.1 / bmo;
  const auto contour = operators::cauchy_commutator(operators::Mollifier{0}, f, b, eps, 128);
  c.value = grid::lp_norm(contour - direct, 2) / grid::lp_norm(direct, 2);
  c.table.rows.push_back({128, eps, c.value});
  c.tolerance = 1e-8;
  c.passed = c.value <= c.tolerance;
  c.detail = "b = log_abs, mollifier k = 0, m = 1024";
  return c;
}

inline CheckResult decomposition(const ExperimentConfig&, SuiteContext&) {
  CheckResult c;
  c.table.columns = {"s_range", "residual"};
  const Grid g = grid::make_grid(1, 2048, 16.0);
  const auto omega = kernels::make_omega(kernels::OddSign{}, 1);
  const auto f = grid::sample(grid::BandLimitedRandom{1, 8.0}, g);
  const auto J = operators::resolvable_scales(g);
  const int full = J.j_max - J.j_min;
  double prev = std::numeric_limits<double>::infinity(), rise = -std::numeric_limits<double>::infinity(), last = 0;
  for (int s = 0; s <= full; ++s) {
    last = operators::decomposition_residual(f, omega, 0, s);
    c.table.rows.push_back({s, last});
    if (std::isfinite(prev)) rise = std::max(rise, last - prev);
    prev = last;
  }
  c.value = last;
  c.tolerance = 1e-8;
  c.passed = last <= 1e-8 && rise <= 1e-12;
  c.detail = "full coverage residual; largest step increase " + json(rise).dump();
  return c;
}

inline CheckResult partition(const ExperimentConfig&, SuiteContext&) {
  CheckResult c;
  c.table.columns = {"n", "m", "l_min", "l_max", "defect"};
  double worst = 0;
  for (int n : {1, 2})
    for (std::size_t m : {std::size_t(64), std::size_t(512), std::size_t(4096)}) {
      if (n == 2 && m > 512) continue;
      const auto bank = lpal::make_filter_bank(grid::make_grid(n, m, 8.0));
      worst = std::max(worst, bank.partition_defect);
      c.table.rows.push_back({n, m, bank.l_min, bank.l_max, bank.partition_defect});
    }
  c.value = worst;
  c.tolerance = 1e-12;
  c.passed = worst <= 1e-12;
  c.detail = "max over lattice of |sum phi^2 - 1|";
  return c;
}

inline CheckResult bony(const ExperimentConfig& cfg, SuiteContext&) {
  CheckResult c;
  c.table.columns = {"seed", "residual", "interior"};
  const Grid g = grid::make_grid(1, 4096, 8.0);
  const auto bank = lpal::make_filter_bank(g);
  double worst = 0;
  bool interior = true;
  for (std::uint64_t s = 0; s < 3; ++s) {
    const std::uint64_t seed = cfg.tests.seed * 100 + s;
    const auto f = grid::sample(grid::BandLimitedRandom{seed, bank.interior_high(), bank.interior_low()}, g);
    const auto h = grid::sample(grid::BandLimitedRandom{seed + 50, bank.interior_high(), bank.interior_low()}, g);
    const auto parts = lpal::bony_decompose(bank, f, h);
    worst = std::max(worst, parts.residual);
    interior = interior && parts.interior;
    c.table.rows.push_back({seed, parts.residual, parts.interior});
  }
  c.value = worst;
  c.tolerance = 1e-9;
  c.passed = worst <= 1e-9 && interior;
  c.detail = "interior band-limited pairs, m = 4096, defect " + json(bank.partition_defect).dump();
  return c;
}

inline CheckResult derivative(const ExperimentConfig&, SuiteContext&) {
  CheckResult c;
  c.table.columns = {"t", "delta", "relative_error"};
  const Grid g = grid::make_grid(1, 32768, 4.0);
  const auto omega = kernels::make_omega(kernels::OddSign{}, 1);
  const auto f = grid::sample(grid::Gaussian{0.5, {0.3, 0}}, g);
  const double delta = 1e-3;
  double worst = 0;
  for (double t : {1.25, 1.5}) {
    const auto fam = operators::evaluate_family(operators::FamilyKind::sio, f, nullptr, 0, omega,
                                                operators::ladder_from_radii({t - delta, t + delta}));
    const auto fd = (1.0 / (2 * delta)) * (fam.column(1) - fam.column(0));
    const auto exact = operators::sphere_mean_derivative(f, omega, 0, t);
    const double e = grid::lp_norm(fd - exact, 2) / grid::lp_norm(exact, 2);
    worst = std::max(worst, e);
    c.table.rows.push_back({t, delta, e});
  }
  c.value = worst;
  c.tolerance = 1e-3;
  c.passed = worst <= 1e-3;
  c.detail = "derivative of the truncated family against central differences, smooth f";
  return c;
}

/// Ratio stability of V_rho of both commutator families between the last two sizes of sweep.m.
inline CheckResult theorem_surrogate(const ExperimentConfig& cfg, SuiteContext& ctx) {
  if (!(cfg.rho > 2)) throw std::invalid_argument("theorem checks need rho > 2");
  if (cfg.sweep.m.size() < 2) throw std::invalid_argument("theorem check needs two grid sizes in sweep.m");
  CheckResult c;
  c.table.columns = {"target", "m", "p", "ratio", "witness"};
  const std::vector<Target> targets{Target::sio_commutator, Target::avg_commutator};
  std::vector<std::map<Target, std::vector<NormEstimate>>> runs;
  for (std::size_t i = cfg.sweep.m.size() - 2; i < cfg.sweep.m.size(); ++i) {
    auto cm = cfg;
    cm.grid.m = cfg.sweep.m[i];
    runs.push_back(evaluate_targets(cm, targets, {1.0, &ctx.audit}));
  }
  double worst = 0;
  for (auto t : targets)
    for (std::size_t k = 0; k < cfg.ps.size(); ++k) {
      const double a = runs[0].at(t)[k].ratio, z = runs[1].at(t)[k].ratio;
      worst = std::max(worst, std::max(a, z) / std::min(a, z) - 1);
      for (const auto& run : runs) {
        const auto& e = run.at(t)[k];
        c.table.rows.push_back({to_string(t), e.m, e.p, e.ratio, e.witness_descriptor});
        ctx.fitted["ratio." + to_string(t) + ".m" + std::to_string(e.m) + ".p" + json(e.p).dump()] = e.ratio;
      }
    }
  c.value = worst;
  c.tolerance = cfg.slack;
  c.passed = worst <= cfg.slack;
  c.detail = "max/min - 1 of the sup ratio between m = " + std::to_string(cfg.sweep.m[cfg.sweep.m.size() - 2]) +
             " and m = " + std::to_string(cfg.sweep.m.back()) + ", " + kernels::describe(cfg.omega);
  return c;
}

/// Families from the configured grid and test set, added to the audit.
inline void audit_families(const ExperimentConfig& cfg, SuiteContext& ctx) {
  const Grid g = make_grid(cfg);
  const auto omega = kernels::make_omega(cfg.omega, g);
  const auto b = grid::sample(cfg.b, g);
  const auto ladder = operators::make_ladder(cfg.ladder.k_min, cfg.ladder.k_max, cfg.ladder.fine);
  std::vector<operators::FamilyKind> kinds{operators::FamilyKind::avg};
  if (omega.cancelling()) kinds.push_back(operators::FamilyKind::sio);
  for (auto kind : kinds) {
    const operators::FamilyPlan plan(kind, omega, ladder, g);
    operators::FamilySample fam;
    for (const auto& tf : make_test_set(cfg)) {
      plan.evaluate_into(fam, grid::sample(tf.spec, g), cfg.u > 0 ? &b : nullptr, cfg.u);
      ctx.audit.inspect(fam, variation::pointwise_variation(fam, cfg.rho));
    }
  }
}

inline CheckResult maximal_domination(const ExperimentConfig& cfg, SuiteContext& ctx) {
  audit_families(cfg, ctx);
  CheckResult c;
  c.table.columns = {"families", "points", "violations", "max_excess"};
  c.table.rows.push_back({ctx.audit.families, ctx.audit.points, ctx.audit.maximal_violations, ctx.audit.maximal_excess});
  c.value = double(ctx.audit.maximal_violations);
  c.tolerance = 0;
  c.passed = ctx.audit.maximal_violations == 0;
  c.detail = "T* <= V_rho + min_r |T_r| pointwise, slack 1e-12";
  return c;
}

inline CheckResult long_short(const ExperimentConfig& cfg, SuiteContext& ctx) {
  if (ctx.audit.families == 0) audit_families(cfg, ctx);
  CheckResult c;
  c.table.columns = {"families", "points", "violations", "max_excess"};
  c.table.rows.push_back({ctx.audit.families, ctx.audit.points, ctx.audit.split_violations, ctx.audit.split_excess});
  c.value = double(ctx.audit.split_violations);
  c.tolerance = 0;
  c.passed = ctx.audit.split_violations == 0;
  c.detail = "V_rho <= 2 (long + short) pointwise, slack 1e-9";
  return c;
}

inline CheckResult weights_check(const ExperimentConfig&, SuiteContext&) {
  CheckResult c;
  c.table.columns = {"property", "measured", "passed"};
  bool ok = true;
  auto row = [&](const std::string& what, double v, bool pass) {
    c.table.rows.push_back({what, v, pass});
    ok = ok && pass;
  };
  double unit_dev = 0;
  for (int n : {1, 2}) {
    const Grid g = grid::make_grid(n, 64, 1.0);
    const auto one = grid::sample(grid::Constant{1.0}, g);
    for (double p : {1.0, 1.5, 2.0, 3.0})
      unit_dev = std::max(unit_dev, std::abs(weights::ap_characteristic(one, p, weights::make_cube_family(g, 5)) - 1));
  }
  row("unit_weight_deviation", unit_dev, unit_dev == 0);
  const Grid g = grid::make_grid(1, 2048, 1.0);
  const auto cubes = weights::make_cube_family(g, 8);
  const auto b = grid::sample(grid::LogAbs{}, g);
  double consist = 0;
  for (double lambda : {0.5, -0.3}) {
    const double e = weights::exp_weight_characteristic(b, lambda, 2, cubes).value;
    const double d = weights::ap_characteristic(grid::sample(grid::PowerAbs{lambda}, g), 2, cubes);
    consist = std::max(consist, std::abs(e - d) / d);
  }
  row("exp_power_relative_difference", consist, consist <= 1e-10);
  const auto prof = weights::ap_refinement_profile(grid::PowerAbs{-2.0}, 2, 1, 1.0, {4, 5, 6, 7, 8});
  row("power_abs(-2)_last_depth_ratio", prof.last_ratio, prof.growing && !prof.stable);
  const auto stable = weights::ap_refinement_profile(grid::PowerAbs{0.5}, 2, 1, 1.0, {6, 7, 8, 9});
  row("power_abs(0.5)_last_depth_ratio", stable.last_ratio, stable.stable);
  std::size_t nest_fail = 0;
  const std::vector<grid::FunctionSpec> builtins{grid::Constant{2.0}, grid::PowerAbs{0.5}, grid::PowerAbs{-0.5},
                                                 grid::PowerAbs{0.9}, grid::PowerAbs{-2.0}, grid::Bump{{0.2, 0}, 0.5}};
  for (const auto& spec : builtins) {
    auto w = grid::sample(spec, g);
    for (auto& v : w.values) v = std::max(v.real(), 1e-3);  // bump vanishes off its support
    double prev = std::numeric_limits<double>::infinity();
    for (double p : {1.0, 1.5, 2.0, 3.0, 6.0}) {
      const double v = weights::ap_characteristic(w, p, cubes);
      if (v > prev * (1 + 1e-12) || v < 1 - 1e-12) ++nest_fail;
      prev = v;
    }
  }
  row("nesting_failures", double(nest_fail), nest_fail == 0);
  c.value = consist;
  c.tolerance = 1e-10;
  c.passed = ok;
  c.detail = "unit weight, exp/power identity, not-A2 growth, A_p nesting";
  return c;
}

inline CheckResult oscillation(const ExperimentConfig& cfg, SuiteContext& ctx) {
  CheckResult c;
  c.table.columns = {"k", "tau", "C", "witness_distance"};
  const Grid g = grid::make_grid(1, 16384, 32.0);
  const auto b = grid::sample(grid::LogAbs{}, g);
  const double bmo = weights::bmo_norm(b, weights::make_cube_family(g, 12));
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (int k = -3; k <= 3; ++k) {
    const auto fit = lpal::lowpass_oscillation(b, k, 0.25, 4000, cfg.tests.seed, bmo);
    lo = std::min(lo, fit.C);
    hi = std::max(hi, fit.C);
    c.table.rows.push_back({k, 0.25, fit.C, fit.witness_distance});
    ctx.fitted["oscillation.C.k" + std::to_string(k)] = fit.C;
  }
  for (double tau : {0.1, 0.4}) {
    const auto fit = lpal::lowpass_oscillation(b, 0, tau, 4000, cfg.tests.seed, bmo);
    c.table.rows.push_back({0, tau, fit.C, fit.witness_distance});
    ctx.fitted["oscillation.C.tau" + json(tau).dump()] = fit.C;
  }
  ctx.fitted["oscillation.C_ratio_tau0.1_over_tau0.4"] =
      ctx.fitted["oscillation.C.tau0.1"] / ctx.fitted["oscillation.C.tau0.4"];
  c.value = hi / lo;
  c.tolerance = 2.0;
  c.passed = lo > 0 && c.value <= 2.0;
  c.detail = "max/min of the fitted constant over k = -3..3, tau = 0.25, b = log_abs";
  return c;
}

inline CheckResult symbol_decay(const ExperimentConfig& cfg, SuiteContext& ctx) {
  CheckResult c;
  c.table.columns = {"xi", "envelope"};
  const Grid g = grid::make_grid(1, 1 << 14, 64.0);
  const auto rep = kernels::symbol_decay(kernels::annulus_kernel(kernels::make_omega(kernels::OddSign{}, 1), 0, g), {-7, 6});
  for (auto [x, y] : rep.bins) c.table.rows.push_back({x, y});
  ctx.fitted["decay.gamma"] = rep.gamma;
  ctx.fitted["decay.C"] = rep.C;
  ctx.fitted["decay.low_exponent"] = rep.low.exponent;
  const auto om = kernels::make_omega(cfg.omega, cfg.grid.n);
  ctx.fitted["omega.l1"] = om.l1;
  for (int k = 0; k < 3; ++k) ctx.fitted["omega.llogl" + std::to_string(k + 1)] = om.llogl[static_cast<std::size_t>(k)];
  c.value = rep.gamma;
  c.tolerance = 0;
  c.passed = rep.gamma > 0 && rep.conclusive && rep.low.conclusive && std::abs(rep.low.exponent - 1) <= 0.1;
  c.detail = "odd_sign annulus symbol: low slope " + json(rep.low.exponent).dump() + ", fitted decay gamma";
  return c;
}

inline CheckResult ratio_coherence(const ExperimentConfig& cfg, SuiteContext& ctx) {
  if (!kernels::make_omega(cfg.omega, cfg.grid.n).cancelling())
    throw std::invalid_argument("singular-integral targets need a cancelling kernel");
  CheckResult c;
  c.table.columns = {"p", "full", "long", "short"};
  const auto est = evaluate_targets(cfg, {Target::sio_commutator, Target::long_variation, Target::short_variation},
                                    {1.0, &ctx.audit});
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < cfg.ps.size(); ++k) {
    const double full = est.at(Target::sio_commutator)[k].ratio;
    const double lv = est.at(Target::long_variation)[k].ratio, sv = est.at(Target::short_variation)[k].ratio;
    c.table.rows.push_back({cfg.ps[k], full, lv, sv});
    worst = std::max({worst, lv - (2 * full + 1e-9), sv - (2 * full + 1e-9)});
  }
  c.value = worst;
  c.tolerance = 0;
  c.passed = worst <= 0;
  c.detail = "long and short ratios against twice the full ratio";
  return c;
}

inline CheckResult determinism(const ExperimentConfig& cfg, SuiteContext&) {
  CheckResult c;
  c.table.columns = {"p", "first", "second"};
  const auto a = estimate_ratio(cfg, Target::avg_commutator), z = estimate_ratio(cfg, Target::avg_commutator);
  std::size_t diffs = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    c.table.rows.push_back({a[k].p, a[k].ratio, z[k].ratio});
    if (a[k].ratio != z[k].ratio || a[k].witness != z[k].witness) ++diffs;
    for (std::size_t i = 0; i < a[k].rows.size(); ++i)
      if (a[k].rows[i].ratio != z[k].rows[i].ratio) ++diffs;
  }
  c.value = double(diffs);
  c.tolerance = 0;
  c.passed = diffs == 0;
  c.detail = "identical config and seed give bit-identical ratios";
  return c;
}

inline CheckResult scaling(const ExperimentConfig& cfg, SuiteContext&) {
  if (cfg.u != 1) throw std::invalid_argument("scaling check is defined for u = 1");
  CheckResult c;
  c.table.columns = {"p", "ratio", "ratio_scaled", "relative_difference"};
  const auto a = estimate_ratio(cfg, Target::avg_commutator);
  const auto z = estimate_ratio(cfg, Target::avg_commutator, {3.0, nullptr});
  double worst = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = std::abs(z[k].ratio - a[k].ratio) / a[k].ratio;
    worst = std::max(worst, d);
    c.table.rows.push_back({a[k].p, a[k].ratio, z[k].ratio, d});
  }
  c.value = worst;
  c.tolerance = 1e-12;
  c.passed = worst <= 1e-12;
  c.detail = "b -> 3b leaves the ratio invariant";
  return c;
}

inline CheckResult theorem_radius(const ExperimentConfig& cfg, SuiteContext& ctx) {
  CheckResult c;
  c.table.columns = {"p", "radius", "weight_characteristic"};
  const Grid g = make_grid(cfg);
  const auto cubes = weights::make_cube_family(g, bmo_depth(cfg, g));
  const double bmo = weights::bmo_norm(grid::sample(cfg.b, g), cubes);
  if (!(bmo > 0)) throw std::invalid_argument("zero BMO norm: b is constant");
  const config::WeightCheck wc = cfg.weight.value_or(config::WeightCheck{});
  auto w = grid::sample(wc.w, g);
  for (auto& v : w.values) v = std::pow(v.real(), wc.tau);
  const double As = weights::ap_characteristic(w, wc.s, cubes);
  bool ok = std::isfinite(As) && As >= 1 - 1e-12;
  for (double p : cfg.ps) {
    const double eps = weights::theorem1_radius(std::abs(wc.tau), p, wc.r_prime, bmo, wc.s, cfg.alpha_n);
    c.table.rows.push_back({p, eps, As});
    ctx.fitted["radius.p" + json(p).dump()] = eps;
    ok = ok && eps > 0 && std::isfinite(eps);
  }
  c.value = As;
  c.tolerance = 0;
  c.passed = ok;
  c.detail = "[w^tau]_{A_s} and the admissible radius per p";
  return c;
}

}  // namespace checks

inline const std::vector<std::pair<std::string, CheckFn>>& registry() {
  static const std::vector<std::pair<std::string, CheckFn>> r{
      {"variation.dp_oracle", checks::dp_oracle},
      {"variation.monotonicity", checks::monotonicity},
      {"operators.closed_forms", checks::closed_forms},
      {"operators.cauchy", checks::cauchy},
      {"operators.decomposition", checks::decomposition},
      {"lpal.partition", checks::partition},
      {"lpal.bony", checks::bony},
      {"operators.derivative", checks::derivative},
      {"harness.theorem_surrogate", checks::theorem_surrogate},
      {"harness.ratio_coherence", checks::ratio_coherence},
      {"operators.maximal_domination", checks::maximal_domination},
      {"variation.long_short", checks::long_short},
      {"weights.characteristics", checks::weights_check},
      {"lpal.oscillation", checks::oscillation},
      {"kernels.symbol_decay", checks::symbol_decay},
      {"harness.determinism", checks::determinism},
      {"harness.scaling", checks::scaling},
      {"weights.theorem_radius", checks::theorem_radius},
  };
  return r;
}

inline std::vector<std::string> check_names() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : registry()) out.push_back(name);
  return out;
}

/// Runs the named checks in registry order. Check failures are recorded; configuration errors throw.
inline SuiteReport run_checks(const ExperimentConfig& cfg, const std::vector<std::string>& names) {
  config::validate(cfg);
  if (names.empty()) throw ConfigError("empty check registry");
  for (const auto& n : names) {
    const auto& r = registry();
    if (std::none_of(r.begin(), r.end(), [&](const auto& e) { return e.first == n; }))
      throw ConfigError("unknown check '" + n + "'");
  }
  SuiteReport rep;
  rep.environment = environment(cfg);
  SuiteContext ctx;
  for (const auto& [name, fn] : registry()) {
    if (std::find(names.begin(), names.end(), name) == names.end()) continue;
    rep.checks.push_back(detail::timed(name, [&] { return fn(cfg, ctx); }));
  }
  rep.fitted = ctx.fitted;
  return rep;
}

inline SuiteReport run_suite(const ExperimentConfig& cfg) { return run_checks(cfg, cfg.checks.value_or(check_names())); }

}  // namespace roughvar::harness
