// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
// An optional argument overrides the configuration path.

#include "roughvar/harness.hpp"

#include <iostream>

using namespace roughvar;
using harness::CheckResult;

namespace {

struct Criterion {
  int id;
  std::string title;
  std::vector<std::string> checks;
  double max_seconds;  // per check; 0 for no limit
};

}  // namespace

int main(int argc, char** argv) {
  const std::string path = argc > 1 ? argv[1] : std::string(ROUGHVAR_CONFIG_DIR) + "/acceptance.json";
  config::ExperimentConfig cfg;
  try {
    cfg = config::load(path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  // The theorem run comes first so its families join the domination audit.
  const std::vector<std::string> order{
      "harness.theorem_surrogate", "variation.dp_oracle",     "variation.monotonicity",
      "operators.closed_forms",    "operators.cauchy",        "operators.decomposition",
      "lpal.partition",            "lpal.bony",               "operators.derivative",
      "harness.ratio_coherence",   "operators.maximal_domination", "variation.long_short",
      "weights.characteristics",   "lpal.oscillation",
  };
  harness::SuiteContext ctx;
  std::map<std::string, CheckResult> results;
  for (const auto& name : order) {
    const auto& reg = harness::registry();
    const auto it = std::find_if(reg.begin(), reg.end(), [&](const auto& e) { return e.first == name; });
    results[name] = harness::detail::timed(name, [&] { return it->second(cfg, ctx); });
    const auto& r = results[name];
    std::cerr << "  " << name << " " << (r.passed ? "ok" : "failed") << " in " << r.seconds << " s\n";
  }

  const std::vector<Criterion> criteria{
      {1, "variation DP matches exhaustive search", {"variation.dp_oracle"}, 10},
      {2, "variation monotone in rho and under refinement", {"variation.monotonicity"}, 0},
      {3, "maximal function dominated by variation plus one member", {"operators.maximal_domination"}, 0},
      {4, "closed-form truncated integral and commutator", {"operators.closed_forms"}, 5},
      {5, "contour reconstruction of the commutator", {"operators.cauchy"}, 0},
      {6, "shell decomposition identity", {"operators.decomposition"}, 0},
      {7, "Bony identity and partition of unity", {"lpal.bony", "lpal.partition"}, 0},
      {8, "spherical-mean derivative against finite differences", {"operators.derivative"}, 0},
      {9, "variation dominated by long plus short", {"variation.long_short"}, 0},
      {10, "commutator variation ratios stable under refinement", {"harness.theorem_surrogate"}, 600},
      {11, "weight characteristics", {"weights.characteristics"}, 0},
      {12, "low-pass oscillation constant independent of scale", {"lpal.oscillation"}, 0},
  };

  bool all = true;
  for (const auto& c : criteria) {
    bool pass = true;
    std::ostringstream info;
    for (const auto& name : c.checks) {
      const auto& r = results.at(name);
      const bool in_time = c.max_seconds <= 0 || r.seconds < c.max_seconds;
      pass = pass && r.passed && in_time;
      info << " [" << name << " value=" << config::json(r.value).dump() << " tolerance=" << config::json(r.tolerance).dump()
           << " seconds=" << config::json(r.seconds).dump() << (in_time ? "" : " over time limit") << "; " << r.detail
           << "]";
    }
    all = all && pass;
    std::cout << "criterion " << c.id << ": " << (pass ? "PASS" : "FAIL") << " " << c.title << info.str() << "\n";
  }
  const auto& audit = ctx.audit;
  std::cout << "audit: " << audit.families << " families, " << audit.points << " points\n";
  for (const auto& [k, v] : ctx.fitted)
    if (k.rfind("ratio.", 0) == 0) std::cout << "fitted " << k << " = " << config::json(v).dump() << "\n";
  return all ? 0 : 1;
}
