#include "canonpair/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "canonpair/textutil.hpp"

namespace canonpair {
namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      case '\r':
        out += "\\r";
        break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string json_string(const std::string& s) {
  return "\"" + json_escape(s) + "\"";
}

std::string json_string_map(const std::map<std::string, std::string>& m) {
  std::string out = "{";
  bool first = true;
  for (const auto& [k, v] : m) {
    if (!first) {
      out += ",";
    }
    first = false;
    out += json_string(k) + ":" + json_string(v);
  }
  return out + "}";
}

std::string json_real_map(const std::map<std::string, double>& m) {
  std::string out = "{";
  bool first = true;
  for (const auto& [k, v] : m) {
    if (!first) {
      out += ",";
    }
    first = false;
    out += json_string(k) + ":" + format_real17(v);
  }
  return out + "}";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') {
      out += "\"\"";
    } else {
      out += c;
    }
  }
  return out + "\"";
}

void write_or_throw(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open output file '" + path + "'");
  }
  out << content;
  out.flush();
  if (!out) {
    throw std::runtime_error("failed while writing '" + path + "'");
  }
}

}  // namespace

void sort_records(std::vector<ReportRecord>& records) {
  std::stable_sort(records.begin(), records.end(),
                   [](const ReportRecord& a, const ReportRecord& b) {
                     if (a.result.check_id != b.result.check_id) {
                       return a.result.check_id < b.result.check_id;
                     }
                     return a.result.model < b.result.model;
                   });
}

std::string report_record_to_json(const ReportRecord& rec) {
  const CheckResult& r = rec.result;
  std::string out = "{";
  out += "\"schema_version\":" + json_string(rec.schema_version);
  out += ",\"check_id\":" + json_string(r.check_id);
  out += ",\"model\":" + json_string(r.model);
  out += ",\"params\":" + json_string_map(r.params);
  out += ",\"residuals\":" + json_real_map(r.residuals);
  out += ",\"defects\":" + json_real_map(r.defects);
  out += ",\"detected_sign\":";
  out += r.detected_sign ? std::to_string(*r.detected_sign) : "null";
  out += ",\"verdict\":" + json_string(r.verdict);
  if (r.convergence) {
    out += ",\"convergence\":{\"resolutions\":[";
    for (std::size_t i = 0; i < r.convergence->resolutions.size(); ++i) {
      const ResolutionLevel& lv = r.convergence->resolutions[i];
      if (i > 0) {
        out += ",";
      }
      out += "[" + std::to_string(lv.panels) + "," + std::to_string(lv.order) +
             "," + std::to_string(lv.spectral_n) + "]";
    }
    out += "],\"residuals\":[";
    for (std::size_t i = 0; i < r.convergence->residuals.size(); ++i) {
      if (i > 0) {
        out += ",";
      }
      out += format_real17(r.convergence->residuals[i]);
    }
    out += "]}";
  }
  out += ",\"wall_time_ms\":" + format_real17(rec.wall_time_ms);
  out += "}";
  return out;
}

std::string report_csv_header() { return "check_id,model,kind,name,value\n"; }

std::string report_record_to_csv(const ReportRecord& rec) {
  const CheckResult& r = rec.result;
  std::ostringstream out;
  const std::string prefix = csv_field(r.check_id) + "," + csv_field(r.model);
  for (const auto& [k, v] : r.residuals) {
    out << prefix << ",residual," << csv_field(k) << "," << format_real17(v)
        << "\n";
  }
  for (const auto& [k, v] : r.defects) {
    out << prefix << ",defect," << csv_field(k) << "," << format_real17(v)
        << "\n";
  }
  if (r.convergence) {
    for (std::size_t i = 0; i < r.convergence->residuals.size(); ++i) {
      const ResolutionLevel& lv = r.convergence->resolutions[i];
      out << prefix << ",residual,convergence_panels=" << lv.panels
          << "_N=" << lv.spectral_n << ","
          << format_real17(r.convergence->residuals[i]) << "\n";
    }
  }
  for (const auto& [k, v] : r.params) {
    out << prefix << ",meta," << csv_field("param:" + k) << "," << csv_field(v)
        << "\n";
  }
  out << prefix << ",meta,verdict," << csv_field(r.verdict) << "\n";
  if (r.detected_sign) {
    out << prefix << ",meta,detected_sign," << *r.detected_sign << "\n";
  }
  out << prefix << ",meta,wall_time_ms," << format_real17(rec.wall_time_ms)
      << "\n";
  return out.str();
}

void write_report_jsonl(const std::vector<ReportRecord>& records,
                        const std::string& path) {
  std::string content;
  for (const ReportRecord& rec : records) {
    content += report_record_to_json(rec);
    content += "\n";
  }
  write_or_throw(path, content);
}

void write_report_csv(const std::vector<ReportRecord>& records,
                      const std::string& path) {
  std::string content = report_csv_header();
  for (const ReportRecord& rec : records) {
    content += report_record_to_csv(rec);
  }
  write_or_throw(path, content);
}

void write_scan_csv(const InvarianceScanResult& scan, const std::string& path) {
  std::string content = "beta,defect\n";
  for (std::size_t i = 0; i < scan.beta_grid.size(); ++i) {
    content += format_real17(scan.beta_grid[i]) + "," +
               format_real17(scan.defect_curve[i]) + "\n";
  }
  write_or_throw(path, content);
}

std::string scan_to_json(const InvarianceScanResult& scan, double gamma,
                         double beta_min, double beta_max, double step,
                         bool analytic_agreement) {
  std::string out = "{";
  out += "\"schema_version\":\"1\"";
  out += ",\"model\":\"circle\"";
  out += ",\"gamma\":" + format_real17(gamma);
  out += ",\"beta_min\":" + format_real17(beta_min);
  out += ",\"beta_max\":" + format_real17(beta_max);
  out += ",\"beta_step\":" + format_real17(step);
  out += ",\"detected_BI\":[";
  for (std::size_t i = 0; i < scan.detected_BI.size(); ++i) {
    if (i > 0) {
      out += ",";
    }
    out += format_real17(scan.detected_BI[i]);
  }
  out += "]";
  out += ",\"analytic_agreement\":";
  out += analytic_agreement ? "true" : "false";
  out += "}\n";
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  write_or_throw(path, content);
}

}  // namespace canonpair
