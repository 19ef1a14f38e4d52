#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "canonpair/runner.hpp"

namespace {

void add_common_options(CLI::App* sub, canonpair::RunConfig* cfg,
                        std::string* config_path) {
  sub->add_option("--model", cfg->models,
                  "model filter (box, circle, counterexample); repeatable or "
                  "comma separated")
      ->delimiter(',');
  sub->add_option("--checks", cfg->checks,
                  "check filter: 'all' or stable check ids; repeatable or "
                  "comma separated")
      ->delimiter(',');
  sub->add_option("--gamma", cfg->gamma, "circle twist parameter in [0, 1)");
  sub->add_option("--panels", cfg->panels, "quadrature panels per interval");
  sub->add_option("--order", cfg->order, "Gauss-Legendre order per panel");
  sub->add_option("--spectral-n", cfg->spectral_n,
                  "spectral truncation for eigenbasis sums");
  sub->add_option("--seed", cfg->master_seed,
                  "master seed for the samplers (CANONPAIR_SEED as fallback)");
  sub->add_option("--beta-min", cfg->beta_min, "scan grid lower end");
  sub->add_option("--beta-max", cfg->beta_max, "scan grid upper end");
  sub->add_option("--beta-step", cfg->beta_step, "scan grid step (> 0)");
  sub->add_option("--out", cfg->out,
                  "output path (json/csv) or base name (both, scan-beta)");
  sub->add_option("--format", cfg->format, "report format: json, csv or both");
  sub->add_flag("--timing", cfg->timing,
                "record real wall times (reports stop being byte-stable)");
  sub->add_option("--config", *config_path,
                  "flat key=value config file; keys are the flag names "
                  "without dashes, flags override the file");
}

// Keys a subcommand can fix on the command line; the config file and the
// seed environment fallback only fill keys that are still free.
std::set<std::string> keys_given_on_cli(const CLI::App* sub) {
  static const std::pair<const char*, const char*> kKeyFlags[] = {
      {"model", "--model"},           {"checks", "--checks"},
      {"gamma", "--gamma"},           {"panels", "--panels"},
      {"order", "--order"},           {"spectral-n", "--spectral-n"},
      {"seed", "--seed"},             {"beta-min", "--beta-min"},
      {"beta-max", "--beta-max"},     {"beta-step", "--beta-step"},
      {"out", "--out"},               {"format", "--format"},
      {"timing", "--timing"},         {"levels", "--levels"},
  };
  std::set<std::string> keys;
  for (const auto& [key, flag] : kKeyFlags) {
    const CLI::Option* opt =
        const_cast<CLI::App*>(sub)->get_option_no_throw(flag);
    if (opt != nullptr && opt->count() > 0) {
      keys.insert(key);
    }
  }
  return keys;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "canonpair: numerical workbench for canonical operator pairs on "
      "bounded intervals"};
  app.require_subcommand(1);

  canonpair::RunConfig cfg;
  std::string config_path;
  CLI::App* list = app.add_subcommand(
      "list", "print models, checks and the adopted conventions");
  CLI::App* run = app.add_subcommand(
      "run", "execute the check suite and write one report record per check");
  add_common_options(run, &cfg, &config_path);
  CLI::App* scan = app.add_subcommand(
      "scan-beta",
      "scan the shift parameter and detect the invariance set (circle)");
  add_common_options(scan, &cfg, &config_path);
  CLI::App* converge = app.add_subcommand(
      "converge", "re-run a resolution-scalable check at doubling resolution");
  add_common_options(converge, &cfg, &config_path);
  converge->add_option("--levels", cfg.levels,
                       "number of doubling resolution levels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (list->parsed()) {
      return canonpair::cmd_list(std::cout);
    }
    const CLI::App* active = run->parsed()   ? run
                             : scan->parsed() ? scan
                                              : converge;
    std::set<std::string> fixed = keys_given_on_cli(active);
    if (!config_path.empty()) {
      const std::set<std::string> applied =
          canonpair::apply_flat_config_file(cfg, config_path, fixed);
      fixed.insert(applied.begin(), applied.end());
    }
    canonpair::apply_seed_env_fallback(cfg, fixed);
    if (run->parsed()) {
      return canonpair::cmd_run(cfg, std::cout, std::cerr);
    }
    if (scan->parsed()) {
      return canonpair::cmd_scan_beta(cfg, std::cout, std::cerr);
    }
    if (converge->parsed()) {
      return canonpair::cmd_converge(cfg, std::cout, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
