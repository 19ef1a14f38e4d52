#pragma once

#include <string>
#include <vector>

#include "canonpair/checks.hpp"

namespace canonpair {

// Wire form of one executed check. wall_time_ms stays 0 unless timing was
// requested, so that identical configs produce byte-identical files.
struct ReportRecord {
  std::string schema_version = "1";
  CheckResult result;
  double wall_time_ms = 0.0;
};

// Deterministic report order: (check_id, model).
void sort_records(std::vector<ReportRecord>& records);

// One JSON object (single line, no trailing newline) with the fixed field
// order: schema_version, check_id, model, params, residuals, defects,
// detected_sign, verdict, convergence (omitted when absent), wall_time_ms.
// Reals carry 17 significant digits.
std::string report_record_to_json(const ReportRecord& rec);

// Long-format CSV: one row per named value,
// columns check_id,model,kind,name,value with kind in {residual,defect,meta}.
std::string report_csv_header();
std::string report_record_to_csv(const ReportRecord& rec);

void write_report_jsonl(const std::vector<ReportRecord>& records,
                        const std::string& path);
void write_report_csv(const std::vector<ReportRecord>& records,
                      const std::string& path);

// Invariance-scan artifacts: the defect curve as beta,defect CSV and the
// detected set plus scan parameters as a single JSON document.
void write_scan_csv(const InvarianceScanResult& scan, const std::string& path);
std::string scan_to_json(const InvarianceScanResult& scan, double gamma,
                         double beta_min, double beta_max, double step,
                         bool analytic_agreement);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace canonpair
