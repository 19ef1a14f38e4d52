#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "canonpair/checks.hpp"
#include "canonpair/report.hpp"

namespace canonpair {

// Everything the subcommands need, filled from flags, environment and the
// optional flat key=value config file (flags win).
struct RunConfig {
  std::vector<std::string> models;  // empty means every catalog model
  std::vector<std::string> checks;  // empty or {"all"} means all applicable
  double gamma = kDefaultGamma;
  int panels = kDefaultPanels;
  int order = kDefaultOrder;
  int spectral_n = kDefaultSpectralN;
  std::uint64_t master_seed = 0;
  double beta_min = -3.0;
  double beta_max = 3.0;
  double beta_step = 0.01;
  std::string out;              // path (json/csv) or base name (both); empty = default
  std::string format = "json";  // json | csv | both
  bool timing = false;          // off by default so reports are byte-stable
  int levels = 4;               // converge subcommand
};

// One "key = value" line of the flat config file.
struct FlatConfigEntry {
  std::string key;
  std::string value;
};

// Parses flat key=value text. Blank lines and lines starting with '#' are
// skipped; a non-blank line without '=' is an error.
std::vector<FlatConfigEntry> parse_flat_config_text(const std::string& text);

// Applies one entry to the config. Keys are the long flag names without the
// leading dashes (model, checks, gamma, ..., timing, levels). Throws
// std::invalid_argument on unknown keys or unparseable values.
void apply_config_entry(RunConfig& cfg, const std::string& key,
                        const std::string& value);

// Loads a flat config file and applies every entry whose key is not already
// fixed on the command line (flags win). Returns the set of keys applied.
// Later duplicates of a key override earlier ones.
std::set<std::string> apply_flat_config_file(
    RunConfig& cfg, const std::string& path,
    const std::set<std::string>& cli_keys);

// Uses CANONPAIR_SEED as the master seed when neither a flag nor the config
// file fixed one. Throws std::invalid_argument if the variable is set but
// not a valid unsigned integer.
void apply_seed_env_fallback(RunConfig& cfg,
                             const std::set<std::string>& fixed_keys);

// Executes the run suite and writes one report record per (check, model)
// pair. Returns 0 when every verdict matches its expectation, 1 on any
// mismatch, 2 on usage or configuration errors.
int cmd_run(const RunConfig& cfg, std::ostream& os, std::ostream& err);

// Prints models, checks and the adopted conventions.
int cmd_list(std::ostream& os);

// Runs the invariance-set scan, writing <out>.csv (beta,defect) and
// <out>.json (detected set). Returns 0 when the detected set agrees with the
// analytic predicate, 1 otherwise, 2 on usage errors.
int cmd_scan_beta(const RunConfig& cfg, std::ostream& os, std::ostream& err);

// Runs a convergence series for one resolution-scalable check and writes a
// report record carrying the series. Exit semantics as cmd_run.
int cmd_converge(const RunConfig& cfg, std::ostream& os, std::ostream& err);

// Shared by cmd_run/cmd_converge and the determinism tests: writes records in
// the configured format(s) to the configured or default location.
void write_records(const std::vector<ReportRecord>& records,
                   const RunConfig& cfg, const std::string& default_base);

}  // namespace canonpair
