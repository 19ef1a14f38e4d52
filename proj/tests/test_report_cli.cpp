#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "canonpair/report.hpp"
#include "canonpair/runner.hpp"

using canonpair::CheckResult;
using canonpair::ReportRecord;
using canonpair::RunConfig;

namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Unique scratch path; removed by the caller.
fs::path scratch(const std::string& stem) {
  return fs::temp_directory_path() / ("canonpair_test_" + stem);
}

ReportRecord sample_record() {
  ReportRecord rec;
  rec.result.check_id = "check_demo";
  rec.result.model = "circle";
  rec.result.params["expected"] = "pass";
  rec.result.params["seed"] = "7";
  rec.result.residuals["residual_max"] = 0.1;
  rec.result.defects["twist"] = 0.0;
  rec.result.detected_sign = -1;
  rec.result.verdict = "pass";
  return rec;
}

}  // namespace

TEST_CASE("json records have a fixed field order and 17-digit reals") {
  const ReportRecord rec = sample_record();
  const std::string json = canonpair::report_record_to_json(rec);
  CHECK(json ==
        "{\"schema_version\":\"1\",\"check_id\":\"check_demo\","
        "\"model\":\"circle\",\"params\":{\"expected\":\"pass\",\"seed\":\"7\"}"
        ",\"residuals\":{\"residual_max\":0.10000000000000001},"
        "\"defects\":{\"twist\":0},\"detected_sign\":-1,\"verdict\":\"pass\","
        "\"wall_time_ms\":0}");
}

TEST_CASE("json records without a sign or series use null and omission") {
  ReportRecord rec = sample_record();
  rec.result.detected_sign.reset();
  const std::string json = canonpair::report_record_to_json(rec);
  CHECK(json.find("\"detected_sign\":null") != std::string::npos);
  CHECK(json.find("convergence") == std::string::npos);

  canonpair::ConvergenceSeries series;
  series.resolutions.push_back({4, 16, 16});
  series.resolutions.push_back({8, 16, 32});
  series.residuals = {1e-3, 1e-4};
  rec.result.convergence = series;
  const std::string with_series = canonpair::report_record_to_json(rec);
  CHECK(with_series.find(
            "\"convergence\":{\"resolutions\":[[4,16,16],[8,16,32]],"
            "\"residuals\":[0.001,0.0001]}") != std::string::npos);
  // fixed order: convergence sits between verdict and wall_time_ms
  CHECK(with_series.find("\"verdict\"") <
        with_series.find("\"convergence\""));
  CHECK(with_series.find("\"convergence\"") <
        with_series.find("\"wall_time_ms\""));
}

TEST_CASE("json strings are escaped") {
  ReportRecord rec = sample_record();
  rec.result.params["note"] = "a\"b\\c";
  const std::string json = canonpair::report_record_to_json(rec);
  CHECK(json.find("\"note\":\"a\\\"b\\\\c\"") != std::string::npos);
}

TEST_CASE("csv is long-format with one named value per row") {
  CHECK(canonpair::report_csv_header() ==
        "check_id,model,kind,name,value\n");
  const std::string csv = canonpair::report_record_to_csv(sample_record());
  CHECK(csv.find("check_demo,circle,residual,residual_max,"
                 "0.10000000000000001\n") != std::string::npos);
  CHECK(csv.find("check_demo,circle,defect,twist,0\n") != std::string::npos);
  CHECK(csv.find("check_demo,circle,meta,verdict,pass\n") !=
        std::string::npos);
  CHECK(csv.find("check_demo,circle,meta,detected_sign,-1\n") !=
        std::string::npos);
}

TEST_CASE("records sort by check id, then model") {
  std::vector<ReportRecord> recs(3);
  recs[0].result.check_id = "b_check";
  recs[0].result.model = "circle";
  recs[1].result.check_id = "a_check";
  recs[1].result.model = "counterexample";
  recs[2].result.check_id = "a_check";
  recs[2].result.model = "box";
  canonpair::sort_records(recs);
  CHECK(recs[0].result.check_id == "a_check");
  CHECK(recs[0].result.model == "box");
  CHECK(recs[1].result.model == "counterexample");
  CHECK(recs[2].result.check_id == "b_check");
}

TEST_CASE("report writers produce the advertised files") {
  const fs::path path = scratch("writer.jsonl");
  canonpair::write_report_jsonl({sample_record()}, path.string());
  const std::string content = slurp(path);
  CHECK(content == canonpair::report_record_to_json(sample_record()) + "\n");
  fs::remove(path);

  CHECK_THROWS_AS(canonpair::write_report_jsonl(
                      {sample_record()}, "/nonexistent_dir_xyz/file.jsonl"),
                  std::runtime_error);
}

TEST_CASE("run command: exit codes and deterministic artifacts") {
  std::ostringstream out, err;

  SECTION("all verdicts matching their expectations exits 0") {
    RunConfig cfg;
    cfg.models = {"counterexample"};
    cfg.out = scratch("run_ok.jsonl").string();
    CHECK(canonpair::cmd_run(cfg, out, err) == 0);
    const std::string content = slurp(cfg.out);
    CHECK(content.find("\"check_id\":\"check_ccr\"") != std::string::npos);
    CHECK(content.find("\"verdict\":\"pass\"") != std::string::npos);
    fs::remove(cfg.out);
  }

  SECTION("an honest verdict mismatch exits 1") {
    RunConfig cfg;
    cfg.models = {"circle"};
    cfg.checks = {"check_ladder"};
    cfg.spectral_n = 1;  // starves the spectral action, ladder cannot pass
    cfg.out = scratch("run_mismatch.jsonl").string();
    CHECK(canonpair::cmd_run(cfg, out, err) == 1);
    fs::remove(cfg.out);
  }

  SECTION("usage errors exit 2 without writing") {
    RunConfig cfg;
    cfg.models = {"nope"};
    CHECK(canonpair::cmd_run(cfg, out, err) == 2);

    RunConfig bad_check;
    bad_check.checks = {"no_such_check"};
    CHECK(canonpair::cmd_run(bad_check, out, err) == 2);

    RunConfig bad_gamma;
    bad_gamma.gamma = 1.5;
    CHECK(canonpair::cmd_run(bad_gamma, out, err) == 2);

    RunConfig bad_combo;
    bad_combo.models = {"counterexample"};
    bad_combo.checks = {"check_ladder"};
    CHECK(canonpair::cmd_run(bad_combo, out, err) == 2);

    RunConfig scan_in_run;
    scan_in_run.checks = {"scan_invariance_set"};
    CHECK(canonpair::cmd_run(scan_in_run, out, err) == 2);
    CHECK(err.str().find("scan-beta") != std::string::npos);
  }

  SECTION("identical configs produce byte-identical reports") {
    RunConfig cfg;
    cfg.models = {"circle", "counterexample"};
    cfg.checks = {"check_ccr", "check_weyl_like"};
    cfg.master_seed = 42;
    cfg.out = scratch("det_a.jsonl").string();
    REQUIRE(canonpair::cmd_run(cfg, out, err) == 0);
    RunConfig cfg2 = cfg;
    cfg2.out = scratch("det_b.jsonl").string();
    REQUIRE(canonpair::cmd_run(cfg2, out, err) == 0);
    CHECK(slurp(cfg.out) == slurp(cfg2.out));
    fs::remove(cfg.out);
    fs::remove(cfg2.out);
  }

  SECTION("format both writes a json and a csv twin") {
    RunConfig cfg;
    cfg.models = {"counterexample"};
    cfg.format = "both";
    cfg.out = scratch("twin").string();
    REQUIRE(canonpair::cmd_run(cfg, out, err) == 0);
    CHECK(fs::exists(cfg.out + ".jsonl"));
    CHECK(fs::exists(cfg.out + ".csv"));
    const std::string csv = slurp(cfg.out + ".csv");
    CHECK(csv.rfind("check_id,model,kind,name,value\n", 0) == 0);
    fs::remove(cfg.out + ".jsonl");
    fs::remove(cfg.out + ".csv");
  }
}

TEST_CASE("scan command writes the curve and the detected set") {
  std::ostringstream out, err;
  RunConfig cfg;
  cfg.beta_min = -1.5;
  cfg.beta_max = 1.5;
  cfg.beta_step = 0.01;
  cfg.out = scratch("scan_art").string();
  CHECK(canonpair::cmd_scan_beta(cfg, out, err) == 0);

  const std::string csv = slurp(cfg.out + ".csv");
  CHECK(csv.rfind("beta,defect\n", 0) == 0);
  // 301 grid rows plus the header
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 302);

  const std::string json = slurp(cfg.out + ".json");
  CHECK(json.find("\"detected_BI\":[") != std::string::npos);
  CHECK(json.find("\"analytic_agreement\":true") != std::string::npos);
  fs::remove(cfg.out + ".csv");
  fs::remove(cfg.out + ".json");

  SECTION("usage errors exit 2") {
    RunConfig bad = cfg;
    bad.beta_step = -0.5;
    CHECK(canonpair::cmd_scan_beta(bad, out, err) == 2);
    RunConfig wrong_model = cfg;
    wrong_model.models = {"box"};
    CHECK(canonpair::cmd_scan_beta(wrong_model, out, err) == 2);
  }
}

TEST_CASE("converge command reports a decaying series and exits 0") {
  std::ostringstream out, err;
  RunConfig cfg;
  cfg.levels = 3;
  cfg.out = scratch("conv.jsonl").string();
  CHECK(canonpair::cmd_converge(cfg, out, err) == 0);
  const std::string content = slurp(cfg.out);
  CHECK(content.find("\"check_id\":\"check_kernel_vs_spectral_T\"") !=
        std::string::npos);
  CHECK(content.find("\"convergence\":{\"resolutions\":") !=
        std::string::npos);
  fs::remove(cfg.out);

  RunConfig bad = cfg;
  bad.levels = 0;
  CHECK(canonpair::cmd_converge(bad, out, err) == 2);
}

TEST_CASE("list command names the models, checks and conventions") {
  std::ostringstream out;
  CHECK(canonpair::cmd_list(out) == 0);
  const std::string text = out.str();
  for (const char* needle :
       {"circle", "box", "counterexample", "check_ccr",
        "check_lemma1_exclusion", "check_iterated_commutator",
        "check_weyl_like", "check_theorem2ii", "scan_invariance_set",
        "check_ladder", "check_translation_window",
        "check_weyl_commutation_defect", "check_kernel_vs_spectral_T",
        "U_beta = exp(-i beta T)"}) {
    INFO(needle);
    CHECK(text.find(needle) != std::string::npos);
  }
}

TEST_CASE("flat config text parsing") {
  const auto entries = canonpair::parse_flat_config_text(
      "# comment\n"
      "\n"
      "model = circle, box\n"
      "gamma=0.5\n"
      "  seed =  99  \n");
  REQUIRE(entries.size() == 3);
  CHECK(entries[0].key == "model");
  CHECK(entries[0].value == "circle, box");
  CHECK(entries[1].key == "gamma");
  CHECK(entries[1].value == "0.5");
  CHECK(entries[2].key == "seed");
  CHECK(entries[2].value == "99");

  CHECK_THROWS_AS(canonpair::parse_flat_config_text("gamma 0.5\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(canonpair::parse_flat_config_text("= 0.5\n"),
                  std::invalid_argument);
}

TEST_CASE("config entries map onto the run configuration") {
  RunConfig cfg;
  canonpair::apply_config_entry(cfg, "model", "circle,box");
  REQUIRE(cfg.models.size() == 2);
  CHECK(cfg.models[0] == "circle");
  CHECK(cfg.models[1] == "box");
  canonpair::apply_config_entry(cfg, "gamma", "0.5");
  CHECK(cfg.gamma == 0.5);
  canonpair::apply_config_entry(cfg, "seed", "17");
  CHECK(cfg.master_seed == 17);
  canonpair::apply_config_entry(cfg, "timing", "true");
  CHECK(cfg.timing);
  canonpair::apply_config_entry(cfg, "spectral-n", "32");
  CHECK(cfg.spectral_n == 32);
  canonpair::apply_config_entry(cfg, "beta-step", "0.05");
  CHECK(cfg.beta_step == 0.05);

  CHECK_THROWS_AS(canonpair::apply_config_entry(cfg, "bogus", "1"),
                  std::invalid_argument);
  CHECK_THROWS_AS(canonpair::apply_config_entry(cfg, "gamma", "abc"),
                  std::invalid_argument);
  CHECK_THROWS_AS(canonpair::apply_config_entry(cfg, "seed", "-3"),
                  std::invalid_argument);
  CHECK_THROWS_AS(canonpair::apply_config_entry(cfg, "timing", "maybe"),
                  std::invalid_argument);
}

TEST_CASE("config file application respects command-line precedence") {
  const fs::path path = scratch("prec.ini");
  {
    std::ofstream f(path);
    f << "gamma = 0.5\nseed = 99\n";
  }
  RunConfig cfg;
  cfg.gamma = 0.9;  // pretend --gamma was given
  const auto applied =
      canonpair::apply_flat_config_file(cfg, path.string(), {"gamma"});
  CHECK(cfg.gamma == 0.9);
  CHECK(cfg.master_seed == 99);
  REQUIRE(applied.size() == 1);
  CHECK(applied.count("seed") == 1);
  fs::remove(path);

  RunConfig other;
  CHECK_THROWS_AS(
      canonpair::apply_flat_config_file(other, "/no/such/file.ini", {}),
      std::runtime_error);
}

TEST_CASE("seed environment variable is a fallback, not an override") {
  RunConfig cfg;
  REQUIRE(setenv("CANONPAIR_SEED", "555", 1) == 0);
  canonpair::apply_seed_env_fallback(cfg, {});
  CHECK(cfg.master_seed == 555);

  RunConfig fixed;
  fixed.master_seed = 7;
  canonpair::apply_seed_env_fallback(fixed, {"seed"});
  CHECK(fixed.master_seed == 7);

  REQUIRE(setenv("CANONPAIR_SEED", "not_a_number", 1) == 0);
  RunConfig bad;
  CHECK_THROWS_AS(canonpair::apply_seed_env_fallback(bad, {}),
                  std::invalid_argument);
  unsetenv("CANONPAIR_SEED");

  RunConfig unset_cfg;
  canonpair::apply_seed_env_fallback(unset_cfg, {});
  CHECK(unset_cfg.master_seed == 0);
}
