#pragma once

// Command-line front end. Every verb produces a SuiteReport written as
// report.json and tables/<check>.csv under --out.

#include "roughvar/harness.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace roughvar::cli {

using harness::CheckResult;
using harness::SuiteReport;
using grid::Grid;

enum Status : int { ok = 0, check_failed = 1, usage_error = 2 };

struct Command {
  std::string verb;
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<double> rho;
  std::string format = "both";
  bool quiet = false;
  std::string sequence;
  std::string axis = "m";
  std::string checks;
};

namespace detail {

inline std::vector<double> parse_sequence(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw config::ConfigError("bad sequence entry '" + item + "'");
    }
    if (used != item.size()) throw config::ConfigError("bad sequence entry '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw config::ConfigError("sequence is empty");
  return out;
}

inline std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

inline CheckResult estimate_check(const std::string& name, const std::vector<harness::NormEstimate>& est) {
  CheckResult c;
  c.name = name;
  c.passed = true;
  c.table.columns = {"p", "test", "descriptor", "numerator", "denominator", "ratio"};
  for (const auto& e : est) {
    c.value = std::max(c.value, e.ratio);
    for (const auto& r : e.rows) c.table.rows.push_back({e.p, r.index, r.descriptor, r.numerator, r.denominator, r.ratio});
  }
  std::ostringstream d;
  for (const auto& e : est) d << "p=" << config::json(e.p).dump() << ": " << config::json(e.ratio).dump() << " (" << e.witness_descriptor << "); ";
  c.detail = d.str();
  return c;
}

inline SuiteReport variation_verb(const Command& cmd, const config::ExperimentConfig& cfg) {
  SuiteReport r;
  r.environment = harness::environment(cfg);
  if (!cmd.sequence.empty()) {
    const auto a = parse_sequence(cmd.sequence);
    CheckResult c;
    c.name = "variation.sequence";
    c.value = variation::variation_norm(a, cfg.rho);
    c.passed = true;
    c.detail = "V_rho of " + std::to_string(a.size()) + " values, rho = " + config::json(cfg.rho).dump();
    c.table.columns = {"index", "value"};
    for (std::size_t i = 0; i < a.size(); ++i) c.table.rows.push_back({i, a[i]});
    r.checks.push_back(c);
    return r;
  }
  const auto est = harness::evaluate_targets(
      cfg, {harness::Target::sio_commutator, harness::Target::long_variation, harness::Target::short_variation});
  for (const auto& [t, e] : est) r.checks.push_back(estimate_check("variation." + harness::to_string(t), e));
  return r;
}

inline SuiteReport family_verb(const config::ExperimentConfig& cfg, harness::Target t) {
  SuiteReport r;
  r.environment = harness::environment(cfg);
  r.checks.push_back(estimate_check(harness::to_string(t), harness::estimate_ratio(cfg, t)));
  return r;
}

inline SuiteReport commutator_verb(const config::ExperimentConfig& cfg) {
  SuiteReport r;
  r.environment = harness::environment(cfg);
  const Grid g = harness::make_grid(cfg);
  const auto omega = kernels::make_omega(cfg.omega, g);
  const auto b = grid::sample(cfg.b, g);
  const double bmo = weights::bmo_norm(b, weights::make_cube_family(g, harness::bmo_depth(cfg, g)));
  if (!(bmo > 0)) throw std::invalid_argument("zero BMO norm: b is constant");
  const double eps = std::ldexp(1.0, cfg.ladder.k_min);
  const operators::OperatorSpec spec = operators::Sio{omega, eps};
  CheckResult c;
  c.name = "commutator";
  c.passed = true;
  c.table.columns = {"test", "descriptor", "p", "ratio", "contour_relative_error"};
  double worst = 0;
  for (const auto& tf : harness::make_test_set(cfg)) {
    const auto f = grid::sample(tf.spec, g);
    const double f2 = grid::lp_norm(f, 2);
    if (f2 == 0) continue;
    const auto direct = operators::apply_commutator(spec, f, b, cfg.u);
    double contour_err = std::numeric_limits<double>::quiet_NaN();
    if (cfg.u == 1) {
      const auto contour = operators::cauchy_commutator(spec, f, b, 0.1 / bmo, 128);
      const double nd = grid::lp_norm(direct, 2);
      contour_err = nd > 0 ? grid::lp_norm(contour - direct, 2) / nd : 0.0;
      worst = std::max(worst, contour_err);
    }
    for (double p : cfg.ps) {
      const double ratio = grid::lp_norm(direct, p) / (std::pow(bmo, cfg.u) * grid::lp_norm(f, p));
      c.value = std::max(c.value, ratio);
      c.table.rows.push_back({tf.index, tf.descriptor, p, ratio, contour_err});
    }
  }
  c.detail = "truncated commutator at eps = " + config::json(eps).dump() + "; contour reconstruction error " +
             config::json(worst).dump();
  r.checks.push_back(c);
  return r;
}

inline SuiteReport paraproduct_verb(const config::ExperimentConfig& cfg) {
  SuiteReport r;
  r.environment = harness::environment(cfg);
  const Grid g = harness::make_grid(cfg);
  const auto bank = lpal::make_filter_bank(g);
  const auto tests = harness::make_test_set(cfg);
  if (tests.size() < 2) throw config::ConfigError("paraproduct needs tests.count >= 2");
  const auto f = grid::sample(tests[0].spec, g), h = grid::sample(tests[1].spec, g);
  const auto parts = lpal::bony_decompose(bank, f, h);
  CheckResult c;
  c.name = "paraproduct";
  c.value = parts.residual;
  c.passed = true;
  c.table.columns = {"part", "l2_norm"};
  c.table.rows.push_back({"product", grid::lp_norm(f * h, 2)});
  c.table.rows.push_back({"pi_f(g)", grid::lp_norm(parts.pi_fg, 2)});
  c.table.rows.push_back({"pi_g(f)", grid::lp_norm(parts.pi_gf, 2)});
  c.table.rows.push_back({"remainder", grid::lp_norm(parts.remainder, 2)});
  c.detail = std::string("relative residual of the Bony identity for ") + tests[0].descriptor + " and " +
             tests[1].descriptor + (parts.interior ? "" : " (spectra exceed the interior band)");
  r.checks.push_back(c);
  return r;
}

inline SuiteReport weights_verb(const config::ExperimentConfig& cfg) {
  SuiteReport r;
  r.environment = harness::environment(cfg);
  const Grid g = harness::make_grid(cfg);
  const auto cubes = weights::make_cube_family(g, harness::bmo_depth(cfg, g));
  const auto b = grid::sample(cfg.b, g);
  const auto wspec = cfg.weight ? cfg.weight->w : grid::FunctionSpec{grid::Constant{1.0}};
  const auto prof = weights::make_weight_profile(grid::sample(wspec, g), cfg.ps, cubes);
  CheckResult c;
  c.name = "weights";
  c.passed = true;
  c.table.columns = {"quantity", "p", "value"};
  for (const auto& [p, v] : prof.characteristics) {
    c.table.rows.push_back({"A_p", p, v});
    c.value = std::max(c.value, v);
  }
  const double bmo = weights::bmo_norm(b, cubes);
  c.table.rows.push_back({"bmo", nullptr, bmo});
  if (bmo > 0)
    for (double p : cfg.ps) {
      const auto e = weights::exp_weight_characteristic(b, 0, p, cubes, cfg.alpha_n);
      const auto at = weights::exp_weight_characteristic(b, e.admissible_radius, p, cubes, cfg.alpha_n);
      c.table.rows.push_back({"exp_weight_radius", p, e.admissible_radius});
      c.table.rows.push_back({"exp_weight_at_radius", p, at.value});
      if (cfg.weight)
        c.table.rows.push_back({"theorem_radius", p,
                                weights::theorem1_radius(std::abs(cfg.weight->tau), p, cfg.weight->r_prime, bmo,
                                                         cfg.weight->s, cfg.alpha_n)});
    }
  c.detail = "[w]_{A_p} of " + grid::describe(wspec) + ", ||b||_* of " + grid::describe(cfg.b);
  r.checks.push_back(c);
  return r;
}

inline void print_summary(const SuiteReport& r, std::ostream& out) {
  for (const auto& c : r.checks)
    out << (c.passed ? "PASS " : "FAIL ") << c.name << " value=" << config::json(c.value).dump()
        << " tolerance=" << config::json(c.tolerance).dump() << "  " << c.detail << "\n";
  for (const auto& [k, v] : r.fitted) out << "fitted " << k << " = " << config::json(v).dump() << "\n";
}

}  // namespace detail

inline int run(const Command& cmd, std::ostream& out, std::ostream& err) {
  try {
    config::ExperimentConfig cfg = cmd.config_path.empty() ? config::ExperimentConfig{} : config::load(cmd.config_path);
    if (cmd.seed) cfg.tests.seed = *cmd.seed;
    if (cmd.rho) {
      if (!(*cmd.rho >= 1)) throw config::ConfigError("rho must be >= 1");
      cfg.rho = *cmd.rho;
    }
    config::validate(cfg);
    const auto fmt = harness::parse_format(cmd.format);
    SuiteReport report;
    if (cmd.verb == "variation") report = detail::variation_verb(cmd, cfg);
    else if (cmd.verb == "sio") report = detail::family_verb(cfg, harness::Target::sio_commutator);
    else if (cmd.verb == "avg") report = detail::family_verb(cfg, harness::Target::avg_commutator);
    else if (cmd.verb == "commutator") report = detail::commutator_verb(cfg);
    else if (cmd.verb == "paraproduct") report = detail::paraproduct_verb(cfg);
    else if (cmd.verb == "weights") report = detail::weights_verb(cfg);
    else if (cmd.verb == "verify")
      report = cmd.checks.empty() ? harness::run_suite(cfg) : harness::run_checks(cfg, detail::split(cmd.checks));
    else if (cmd.verb == "sweep") report = harness::refinement_sweep(cfg, harness::parse_axis(cmd.axis));
    else throw config::ConfigError("unknown verb '" + cmd.verb + "'");
    harness::write_report(report, cmd.out_dir, fmt);
    if (!cmd.quiet) {
      detail::print_summary(report, out);
      out << "report written to " << cmd.out_dir << "\n";
    }
    return report.passed() ? ok : check_failed;
  } catch (const config::ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return usage_error;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return usage_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return check_failed;
  }
}

/// Parses argv and runs the command; returns the process exit status.
inline int execute(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Variation and commutator experiments for rough singular integrals", "roughvar"};
  app.require_subcommand(1);
  app.fallthrough();
  Command cmd;
  app.add_option("--config", cmd.config_path, "JSON experiment configuration")->check(CLI::ExistingFile);
  app.add_option("--out", cmd.out_dir, "output directory for report.json and tables/");
  app.add_option("--seed", cmd.seed, "override the test-set seed");
  app.add_option("--format", cmd.format, "json, csv or both")->check(CLI::IsMember({"json", "csv", "both"}));
  app.add_flag("--quiet", cmd.quiet, "suppress the summary");
  app.add_option("--rho", cmd.rho, "variation exponent (>= 1)");
  struct Verb {
    const char* name;
    const char* help;
  };
  const Verb verbs[] = {
      {"variation", "variation norm of --sequence, or long/short/full ratios from the config"},
      {"sio", "V_rho ratio of the truncated singular-integral commutator family"},
      {"avg", "V_rho ratio of the averaging commutator family"},
      {"commutator", "truncated commutator norms and contour reconstruction error"},
      {"paraproduct", "Bony decomposition of two test functions"},
      {"weights", "A_p characteristics, BMO norm and admissible radii"},
      {"verify", "run the check suite"},
      {"sweep", "refinement sweep along --axis"},
  };
  for (const auto& v : verbs) {
    auto* sub = app.add_subcommand(v.name, v.help);
    sub->callback([&cmd, name = std::string(v.name)] { cmd.verb = name; });
    if (std::string(v.name) == "variation")
      sub->add_option("--sequence", cmd.sequence, "comma-separated values");
    if (std::string(v.name) == "sweep")
      sub->add_option("--axis", cmd.axis, "m, ladder_density, s_range or d_max");
    if (std::string(v.name) == "verify") sub->add_option("--checks", cmd.checks, "comma-separated subset of checks");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return ok;
    }
    err << "error: " << e.what() << "\n" << app.help();
    return usage_error;
  }
  return run(cmd, out, err);
}

inline int execute(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<const char*> argv{"roughvar"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return execute(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace roughvar::cli
