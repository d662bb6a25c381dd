#pragma once

#include <fstream>
#include <iomanip>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "miai/attacks.hpp"
#include "miai/common.hpp"
#include "miai/metrics.hpp"

namespace miai {

// Prediction dumps: one row per record, CSV and JSON forms.

inline void save_predictions_csv(const std::vector<AttackPrediction>& preds,
                                 const std::string& path) {
  std::ofstream out(path);
  if (!out) fail("cannot write predictions file '", path, "'");
  out << "record_id,predicted,case,queries\n";
  for (const auto& p : preds)
    out << p.record_id << "," << csv::escape(p.predicted) << ","
        << (p.case_tag == 0 ? std::string("none") : std::to_string(p.case_tag)) << ","
        << p.queries << "\n";
}

inline nlohmann::json predictions_to_json(const std::vector<AttackPrediction>& preds) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : preds) {
    nlohmann::json j;
    j["record_id"] = p.record_id;
    j["predicted"] = p.predicted;
    j["case"] = p.case_tag;
    j["queries"] = p.queries;
    if (!p.aux.empty()) j["aux"] = p.aux;
    arr.push_back(std::move(j));
  }
  return arr;
}

inline void save_predictions_json(const std::vector<AttackPrediction>& preds,
                                  const std::string& path) {
  std::ofstream out(path);
  if (!out) fail("cannot write predictions file '", path, "'");
  out << predictions_to_json(preds).dump(2) << "\n";
}

inline std::vector<AttackPrediction> load_predictions_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open predictions file '", path, "'");
  std::string line;
  if (!std::getline(in, line)) fail("predictions file '", path, "' is empty");
  auto header = csv::parse_line(line);
  if (header.size() < 4 || header[0] != "record_id")
    fail("predictions file '", path, "' has an unexpected header");
  std::vector<AttackPrediction> out;
  size_t row = 1;
  while (std::getline(in, line)) {
    if (line.empty() && in.eof()) break;
    auto f = csv::parse_line(line);
    if (f.size() != header.size()) fail("predictions row ", row, " is malformed");
    AttackPrediction p;
    p.record_id = static_cast<size_t>(std::stoull(f[0]));
    p.predicted = f[1];
    p.case_tag = f[2] == "none" ? 0 : std::stoi(f[2]);
    p.queries = std::stoull(f[3]);
    out.push_back(std::move(p));
    ++row;
  }
  return out;
}

// Flat CSV view of a report: one row per slice, parent first.
inline void save_report_csv(const EvaluationReport& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail("cannot write report file '", path, "'");
  out << "slice,tp,tn,fp,fn,precision,recall,accuracy,f1,g_mean,mcc\n";
  auto emit = [&out](const std::string& name, const EvaluationReport& rep) {
    out << csv::escape(name) << "," << rep.counts.tp << "," << rep.counts.tn << ","
        << rep.counts.fp << "," << rep.counts.fn;
    for (double v : {rep.precision, rep.recall, rep.accuracy, rep.f1, rep.g_mean, rep.mcc})
      out << "," << std::fixed << std::setprecision(4) << v * 100.0;
    out << "\n";
  };
  emit("all", r);
  for (const auto& [name, rep] : r.slices) emit(name, rep);
}

// Cross-attack comparison table in the row order the attacks were run.
struct ComparisonRow {
  std::string attack;
  EvaluationReport report;
  uint64_t ledger_queries = 0;
};

inline void save_comparison_csv(const std::vector<ComparisonRow>& rows,
                                const std::string& path) {
  std::ofstream out(path);
  if (!out) fail("cannot write comparison file '", path, "'");
  out << "attack,tp,tn,fp,fn,precision,recall,accuracy,f1,g_mean,mcc,queries\n";
  for (const auto& row : rows) {
    const auto& r = row.report;
    out << csv::escape(row.attack) << "," << r.counts.tp << "," << r.counts.tn << ","
        << r.counts.fp << "," << r.counts.fn;
    for (double v : {r.precision, r.recall, r.accuracy, r.f1, r.g_mean, r.mcc})
      out << "," << std::fixed << std::setprecision(4) << v * 100.0;
    out << "," << row.ledger_queries << "\n";
  }
}

inline std::string comparison_table_text(const std::vector<ComparisonRow>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(22) << "attack" << std::right << std::setw(8) << "TP"
     << std::setw(8) << "TN" << std::setw(8) << "FP" << std::setw(8) << "FN"
     << std::setw(11) << "precision" << std::setw(9) << "recall" << std::setw(10)
     << "accuracy" << std::setw(8) << "F1" << std::setw(9) << "G-mean" << std::setw(9)
     << "MCC" << std::setw(12) << "queries" << "\n";
  for (const auto& row : rows) {
    const auto& r = row.report;
    os << std::left << std::setw(22) << row.attack << std::right << std::setw(8)
       << r.counts.tp << std::setw(8) << r.counts.tn << std::setw(8) << r.counts.fp
       << std::setw(8) << r.counts.fn;
    const double vals[] = {r.precision, r.recall, r.accuracy, r.f1, r.g_mean, r.mcc};
    const int widths[] = {11, 9, 10, 8, 9, 9};
    for (size_t i = 0; i < 6; ++i) os << std::setw(widths[i]) << format_pct(vals[i]);
    os << std::setw(12) << row.ledger_queries << "\n";
  }
  return os.str();
}

// Long-format metric table for external plotting: attack,metric,value.
inline void save_plot_csv(const std::vector<ComparisonRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail("cannot write plot data file '", path, "'");
  out << "attack,metric,value\n";
  static const char* kNames[] = {"precision", "recall", "accuracy", "f1", "g_mean", "mcc"};
  for (const auto& row : rows) {
    const auto& r = row.report;
    double vals[] = {r.precision, r.recall, r.accuracy, r.f1, r.g_mean, r.mcc};
    for (size_t i = 0; i < 6; ++i)
      out << csv::escape(row.attack) << "," << kNames[i] << "," << std::fixed
          << std::setprecision(6) << vals[i] << "\n";
  }
}

}  // namespace miai
