// Command-line front end. Deliberately a thin layer over the C API so it
// exercises the same surface other language bindings would use.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "algdiff/algdiff.h"

namespace {

int report(ad_status st) {
  if (st == AD_OK) return 0;
  std::fprintf(stderr, "error: %s\n", ad_last_error());
  return st == AD_EINVAL ? 2 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"algebraic derivative estimation and case-study simulations"};
  app.require_subcommand(1);

  // diff -------------------------------------------------------------
  std::string in_path, column, out_path, mode = "rev", baseline;
  int order = 1, nbar = 0;
  double window = 0;
  auto* diff = app.add_subcommand("diff", "differentiate a CSV column");
  diff->add_option("--in", in_path, "input CSV with a uniform t column")->required();
  diff->add_option("--col", column, "column to differentiate")->required();
  diff->add_option("--order", order, "highest derivative order N")->required();
  diff->add_option("--window", window, "window length T in seconds")->required();
  diff->add_option("--nbar", nbar, "integral order (default N+2)");
  diff->add_option("--mode", mode, "fwd (delay T) or rev (zero delay)")
      ->check(CLI::IsMember({"fwd", "rev"}));
  diff->add_option("--baseline", baseline, "add a comparison column (fd)")
      ->check(CLI::IsMember({"fd"}));
  diff->add_option("--out", out_path, "output CSV")->required();

  // simulate ----------------------------------------------------------
  std::string scenario, config_path, out_dir;
  std::int64_t seed = -1;
  bool no_accommodation = false, no_compensation = false;
  auto* sim = app.add_subcommand("simulate", "run a closed-loop scenario");
  sim->add_option("scenario", scenario,
                  "one of: manipulator rigidbody twotank pertlin pertnl")
      ->required();
  sim->add_option("--config", config_path, "JSON config file");
  sim->add_option("--seed", seed, "noise seed override");
  sim->add_flag("--no-accommodation", no_accommodation,
                "disable fault accommodation (twotank)");
  sim->add_flag("--no-compensation", no_compensation,
                "disable perturbation compensation (pertlin/pertnl)");
  sim->add_option("--out-dir", out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (diff->parsed()) {
    return report(ad_diff_csv(in_path.c_str(), column.c_str(), order, nbar, window,
                              mode == "rev" ? 1 : 0, baseline == "fd" ? 1 : 0,
                              out_path.c_str()));
  }

  std::string config_json;
  if (!config_path.empty()) {
    std::ifstream f(config_path, std::ios::binary);
    if (!f) {
      std::fprintf(stderr, "error: cannot open config file %s\n", config_path.c_str());
      return 2;
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    config_json = ss.str();
  }

  char* metrics = nullptr;
  const ad_status st = ad_simulate(
      scenario.c_str(), config_json.empty() ? nullptr : config_json.c_str(), seed,
      no_accommodation ? 0 : -1, no_compensation ? 0 : -1, out_dir.c_str(), &metrics);
  if (st == AD_OK && metrics) {
    std::fputs(metrics, stdout);
    ad_string_free(metrics);
  }
  return report(st);
}
