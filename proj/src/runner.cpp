#include "canonpair/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "canonpair/textutil.hpp"

namespace canonpair {
namespace {

std::string trim_ws(const std::string& s) {
  const std::string ws = " \t\r\n";
  const std::size_t b = s.find_first_not_of(ws);
  if (b == std::string::npos) {
    return "";
  }
  const std::size_t e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim_ws(item);
    if (!item.empty()) {
      out.push_back(item);
    }
  }
  return out;
}

double parse_config_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty()) {
    throw std::invalid_argument("config key '" + key +
                                "': expected a number, got '" + value + "'");
  }
  return v;
}

int parse_config_int(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty()) {
    throw std::invalid_argument("config key '" + key +
                                "': expected an integer, got '" + value + "'");
  }
  return static_cast<int>(v);
}

std::uint64_t parse_config_u64(const std::string& key,
                               const std::string& value) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty() || value.front() == '-') {
    throw std::invalid_argument("config key '" + key +
                                "': expected an unsigned integer, got '" +
                                value + "'");
  }
  return static_cast<std::uint64_t>(v);
}

bool parse_config_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") {
    return true;
  }
  if (value == "false" || value == "0" || value == "no" || value == "off") {
    return false;
  }
  throw std::invalid_argument("config key '" + key +
                              "': expected a boolean, got '" + value + "'");
}

void validate_numeric_ranges(const RunConfig& cfg) {
  if (!(cfg.gamma >= 0.0 && cfg.gamma < 1.0)) {
    throw std::invalid_argument("gamma must be in [0, 1)");
  }
  if (cfg.panels < 1) {
    throw std::invalid_argument("panels must be >= 1");
  }
  if (cfg.order < 2 || cfg.order > 64) {
    throw std::invalid_argument("order must be in [2, 64]");
  }
  if (cfg.spectral_n < 1) {
    throw std::invalid_argument("spectral-n must be >= 1");
  }
  if (cfg.format != "json" && cfg.format != "csv" && cfg.format != "both") {
    throw std::invalid_argument("format must be json, csv or both");
  }
}

std::vector<std::string> resolve_models(const RunConfig& cfg) {
  const std::vector<std::string> known = model_ids();
  if (cfg.models.empty()) {
    return known;
  }
  std::vector<std::string> out;
  for (const std::string& id : cfg.models) {
    if (std::find(known.begin(), known.end(), id) == known.end()) {
      throw std::invalid_argument("unknown model id '" + id + "'");
    }
    if (std::find(out.begin(), out.end(), id) == out.end()) {
      out.push_back(id);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Expands the check filter against the catalog; only checks wired to the
// given subcommand are eligible, and explicitly named checks belonging to a
// different subcommand are a usage error with a pointer to the right one.
std::vector<std::string> resolve_checks(const RunConfig& cfg,
                                        const std::string& subcommand) {
  const bool want_all =
      cfg.checks.empty() ||
      (cfg.checks.size() == 1 && cfg.checks.front() == "all");
  std::vector<std::string> out;
  if (want_all) {
    for (const CheckInfo& info : check_catalog()) {
      if (info.subcommand == subcommand) {
        out.push_back(info.id);
      }
    }
    return out;
  }
  for (const std::string& id : cfg.checks) {
    const CheckInfo* found = nullptr;
    for (const CheckInfo& info : check_catalog()) {
      if (info.id == id) {
        found = &info;
        break;
      }
    }
    if (found == nullptr) {
      throw std::invalid_argument("unknown check id '" + id + "'");
    }
    if (found->subcommand != subcommand) {
      throw std::invalid_argument("check '" + id + "' is driven by the '" +
                                  found->subcommand + "' subcommand");
    }
    if (std::find(out.begin(), out.end(), id) == out.end()) {
      out.push_back(id);
    }
  }
  return out;
}

CheckContext context_from(const RunConfig& cfg) {
  CheckContext ctx;
  ctx.gamma = cfg.gamma;
  ctx.panels = cfg.panels;
  ctx.order = cfg.order;
  ctx.spectral_n = cfg.spectral_n;
  ctx.master_seed = cfg.master_seed;
  return ctx;
}

std::string expected_of(const CheckResult& r) {
  const auto it = r.params.find("expected");
  return it == r.params.end() ? std::string("pass") : it->second;
}

void print_record_summary(std::ostream& os, const ReportRecord& rec) {
  const CheckResult& r = rec.result;
  const std::string expected = expected_of(r);
  os << "  " << r.check_id << " [" << r.model << "]  verdict=" << r.verdict
     << " expected=" << expected
     << (r.verdict == expected ? "" : "  <-- MISMATCH") << "\n";
}

}  // namespace

std::vector<FlatConfigEntry> parse_flat_config_text(const std::string& text) {
  std::vector<FlatConfigEntry> entries;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const std::string t = trim_ws(line);
    if (t.empty() || t.front() == '#') {
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key=value, got '" + t + "'");
    }
    FlatConfigEntry entry;
    entry.key = trim_ws(t.substr(0, eq));
    entry.value = trim_ws(t.substr(eq + 1));
    if (entry.key.empty()) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": empty key");
    }
    entries.push_back(entry);
  }
  return entries;
}

void apply_config_entry(RunConfig& cfg, const std::string& key,
                        const std::string& value) {
  if (key == "model") {
    cfg.models = split_csv(value);
  } else if (key == "checks") {
    cfg.checks = split_csv(value);
  } else if (key == "gamma") {
    cfg.gamma = parse_config_double(key, value);
  } else if (key == "panels") {
    cfg.panels = parse_config_int(key, value);
  } else if (key == "order") {
    cfg.order = parse_config_int(key, value);
  } else if (key == "spectral-n") {
    cfg.spectral_n = parse_config_int(key, value);
  } else if (key == "seed") {
    cfg.master_seed = parse_config_u64(key, value);
  } else if (key == "beta-min") {
    cfg.beta_min = parse_config_double(key, value);
  } else if (key == "beta-max") {
    cfg.beta_max = parse_config_double(key, value);
  } else if (key == "beta-step") {
    cfg.beta_step = parse_config_double(key, value);
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "format") {
    cfg.format = value;
  } else if (key == "timing") {
    cfg.timing = parse_config_bool(key, value);
  } else if (key == "levels") {
    cfg.levels = parse_config_int(key, value);
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

std::set<std::string> apply_flat_config_file(
    RunConfig& cfg, const std::string& path,
    const std::set<std::string>& cli_keys) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot read config file '" + path + "'");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  std::set<std::string> applied;
  for (const FlatConfigEntry& entry : parse_flat_config_text(buf.str())) {
    if (cli_keys.count(entry.key) > 0) {
      continue;
    }
    apply_config_entry(cfg, entry.key, entry.value);
    applied.insert(entry.key);
  }
  return applied;
}

void apply_seed_env_fallback(RunConfig& cfg,
                             const std::set<std::string>& fixed_keys) {
  if (fixed_keys.count("seed") > 0) {
    return;
  }
  const char* env = std::getenv("CANONPAIR_SEED");
  if (env == nullptr || *env == '\0') {
    return;
  }
  cfg.master_seed = parse_config_u64("CANONPAIR_SEED", env);
}

void write_records(const std::vector<ReportRecord>& records,
                   const RunConfig& cfg, const std::string& default_base) {
  if (cfg.format == "json") {
    const std::string path =
        cfg.out.empty() ? default_base + ".jsonl" : cfg.out;
    write_report_jsonl(records, path);
  } else if (cfg.format == "csv") {
    const std::string path = cfg.out.empty() ? default_base + ".csv" : cfg.out;
    write_report_csv(records, path);
  } else {
    const std::string base = cfg.out.empty() ? default_base : cfg.out;
    write_report_jsonl(records, base + ".jsonl");
    write_report_csv(records, base + ".csv");
  }
}

int cmd_list(std::ostream& os) {
  os << "models:\n";
  os << "  box             interval [-1, 1]; pair (H, T): periodic "
        "Hamiltonian and the sign-split arrival-time kernel\n";
  os << "  circle          interval [0, 2pi]; pair (T, H): coordinate "
        "multiplication and the twisted first-order generator\n";
  os << "  counterexample  interval [0, 1]; pair (Q, P): coordinate "
        "multiplication and a bounded rank-style momentum\n";
  os << "checks:\n";
  for (const CheckInfo& info : check_catalog()) {
    os << "  " << info.id << "  (" << info.subcommand << "; models:";
    for (const std::string& m : info.models) {
      os << " " << m;
    }
    os << ")\n      " << info.description << "\n";
  }
  os << "conventions:\n";
  os << "  U_beta = exp(-i beta T): phase multiplication by exp(-i beta t)\n";
  os << "  V_alpha: translation by alpha with wrap phase exp(-i 2 pi gamma) "
        "per winding\n";
  os << "  generator domain (circle): psi(0) = exp(-i 2 pi gamma) psi(2 pi)\n";
  os << "  box pair order: (H T - T H) f = i f on the dense core\n";
  os << "  defaults: gamma 0.25, panels 20, order 16, spectral N 64, seed 0\n";
  return 0;
}

int cmd_run(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  try {
    validate_numeric_ranges(cfg);
    const std::vector<std::string> models = resolve_models(cfg);
    const std::vector<std::string> checks = resolve_checks(cfg, "run");
    const CheckContext ctx = context_from(cfg);

    // Every explicitly named check must be runnable on at least one of the
    // requested models, otherwise the selection is a usage error. An "all"
    // filter just runs whatever applies.
    const bool explicit_checks =
        !cfg.checks.empty() &&
        !(cfg.checks.size() == 1 && cfg.checks.front() == "all");
    if (explicit_checks) {
      for (const std::string& check : checks) {
        bool any = false;
        for (const std::string& model : models) {
          any = any || check_applies(check, model);
        }
        if (!any) {
          throw std::invalid_argument(
              "check '" + check + "' applies to none of the selected models");
        }
      }
    }

    std::vector<ReportRecord> records;
    for (const std::string& model_id : models) {
      bool needed = false;
      for (const std::string& check : checks) {
        needed = needed || check_applies(check, model_id);
      }
      if (!needed) {
        continue;
      }
      const Model m = make_model(model_id, cfg.gamma, cfg.panels, cfg.order);
      for (const std::string& check : checks) {
        if (!check_applies(check, model_id)) {
          continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        ReportRecord rec;
        rec.result = run_check(check, m, ctx);
        if (cfg.timing) {
          const auto t1 = std::chrono::steady_clock::now();
          rec.wall_time_ms =
              std::chrono::duration<double, std::milli>(t1 - t0).count();
        }
        records.push_back(std::move(rec));
      }
    }
    sort_records(records);
    write_records(records, cfg, "report");

    int mismatches = 0;
    for (const ReportRecord& rec : records) {
      print_record_summary(os, rec);
      if (rec.result.verdict != expected_of(rec.result)) {
        ++mismatches;
      }
    }
    if (mismatches == 0) {
      os << "suite: ok (" << records.size() << " records)\n";
      return 0;
    }
    os << "suite: " << mismatches << " of " << records.size()
       << " records mismatch their expectation\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

int cmd_scan_beta(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  try {
    validate_numeric_ranges(cfg);
    for (const std::string& id : cfg.models) {
      if (id != "circle") {
        throw std::invalid_argument(
            "scan-beta applies to the circle model only");
      }
    }
    if (!(cfg.beta_step > 0.0)) {
      throw std::invalid_argument("beta-step must be positive");
    }
    const Model m = make_circle_model(cfg.gamma, cfg.panels, cfg.order);
    const InvarianceScanResult scan =
        scan_invariance_set(m, cfg.beta_min, cfg.beta_max, cfg.beta_step);

    // Agreement with the analytic predicate: every detected point must be
    // analytic-invariant, and every analytic integer in range must have been
    // detected.
    bool agreement = true;
    for (double b : scan.detected_BI) {
      agreement = agreement && m.bi_analytic(b);
    }
    for (int k = static_cast<int>(std::ceil(cfg.beta_min - 1e-9));
         k <= static_cast<int>(std::floor(cfg.beta_max + 1e-9)); ++k) {
      bool found = false;
      for (double b : scan.detected_BI) {
        found = found || std::abs(b - k) < 1e-9;
      }
      agreement = agreement && found;
    }

    const std::string base = cfg.out.empty() ? "scan" : cfg.out;
    write_scan_csv(scan, base + ".csv");
    write_text_file(base + ".json",
                    scan_to_json(scan, cfg.gamma, cfg.beta_min, cfg.beta_max,
                                 cfg.beta_step, agreement));

    os << "detected_BI:";
    for (double b : scan.detected_BI) {
      os << " " << format_real_short(b);
    }
    os << "\nanalytic agreement: " << (agreement ? "yes" : "no") << "\n";
    return agreement ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

int cmd_converge(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  try {
    validate_numeric_ranges(cfg);
    if (cfg.levels < 1) {
      throw std::invalid_argument("levels must be >= 1");
    }
    std::string check_id = "check_kernel_vs_spectral_T";
    if (!cfg.checks.empty() &&
        !(cfg.checks.size() == 1 && cfg.checks.front() == "all")) {
      if (cfg.checks.size() > 1) {
        throw std::invalid_argument("converge runs one check at a time");
      }
      check_id = cfg.checks.front();
    }
    std::string model_id;
    if (cfg.models.empty()) {
      model_id = (check_id == "check_ccr") ? "circle" : "box";
    } else if (cfg.models.size() == 1) {
      model_id = cfg.models.front();
    } else {
      throw std::invalid_argument("converge runs one model at a time");
    }
    const std::vector<std::string> known = model_ids();
    if (std::find(known.begin(), known.end(), model_id) == known.end()) {
      throw std::invalid_argument("unknown model id '" + model_id + "'");
    }

    const CheckContext ctx = context_from(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    const ConvergenceSeries series =
        run_convergence(check_id, model_id, cfg.levels, ctx);

    // Converged means each level is no worse than the previous one up to 10%
    // wobble, except at or below the closed-form floor where rounding noise
    // dominates.
    bool converged = true;
    for (std::size_t i = 1; i < series.residuals.size(); ++i) {
      converged = converged &&
                  series.residuals[i] <=
                      std::max(1.1 * series.residuals[i - 1], 1e-9);
    }

    ReportRecord rec;
    rec.result.check_id = check_id;
    rec.result.model = model_id;
    rec.result.params["levels"] = std::to_string(cfg.levels);
    rec.result.params["expected"] = "pass";
    rec.result.residuals["final_residual"] = series.residuals.back();
    rec.result.convergence = series;
    rec.result.verdict = converged ? "pass" : "fail";
    if (cfg.timing) {
      const auto t1 = std::chrono::steady_clock::now();
      rec.wall_time_ms =
          std::chrono::duration<double, std::milli>(t1 - t0).count();
    }
    std::vector<ReportRecord> records{rec};
    write_records(records, cfg, "report");

    for (std::size_t i = 0; i < series.residuals.size(); ++i) {
      os << "  level " << i << ": panels=" << series.resolutions[i].panels
         << " order=" << series.resolutions[i].order
         << " N=" << series.resolutions[i].spectral_n
         << " residual=" << format_real17(series.residuals[i]) << "\n";
    }
    print_record_summary(os, rec);
    return converged ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace canonpair
