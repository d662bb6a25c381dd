#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "miai/attacks.hpp"
#include "miai/common.hpp"
#include "miai/dataset.hpp"

namespace miai {

struct BinaryCounts {
  int64_t tp = 0, tn = 0, fp = 0, fn = 0;
  int64_t total() const { return tp + tn + fp + fn; }
};

// The six-metric battery computed from integer counts. Zero-denominator
// conventions: precision/recall/F1/MCC are 0 whenever their denominator
// vanishes, which makes an all-negative predictor score 0 across the board.
struct EvaluationReport {
  BinaryCounts counts;
  std::string positive_label;
  double precision = 0.0, recall = 0.0, accuracy = 0.0, f1 = 0.0, g_mean = 0.0, mcc = 0.0;
  std::map<std::string, EvaluationReport> slices;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["positive"] = positive_label;
    j["tp"] = counts.tp;
    j["tn"] = counts.tn;
    j["fp"] = counts.fp;
    j["fn"] = counts.fn;
    j["precision"] = precision;
    j["recall"] = recall;
    j["accuracy"] = accuracy;
    j["f1"] = f1;
    j["g_mean"] = g_mean;
    j["mcc"] = mcc;
    if (!slices.empty()) {
      nlohmann::json s = nlohmann::json::object();
      for (const auto& [name, rep] : slices) s[name] = rep.to_json();
      j["slices"] = std::move(s);
    }
    return j;
  }
};

inline EvaluationReport metrics_from_counts(const BinaryCounts& c,
                                            const std::string& positive = "") {
  EvaluationReport r;
  r.counts = c;
  r.positive_label = positive;
  auto ratio = [](int64_t num, int64_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  r.precision = ratio(c.tp, c.tp + c.fp);
  r.recall = ratio(c.tp, c.tp + c.fn);
  r.accuracy = ratio(c.tp + c.tn, c.total());
  r.f1 = (r.precision + r.recall) == 0.0
             ? 0.0
             : 2.0 * r.precision * r.recall / (r.precision + r.recall);
  double specificity = ratio(c.tn, c.tn + c.fp);
  r.g_mean = std::sqrt(r.recall * specificity);
  if ((c.tp + c.fp) == 0 || (c.tp + c.fn) == 0 || (c.tn + c.fp) == 0 || (c.tn + c.fn) == 0) {
    r.mcc = 0.0;
  } else {
    double num = static_cast<double>(c.tp) * static_cast<double>(c.tn) -
                 static_cast<double>(c.fp) * static_cast<double>(c.fn);
    double den = std::sqrt(static_cast<double>(c.tp + c.fp)) *
                 std::sqrt(static_cast<double>(c.tp + c.fn)) *
                 std::sqrt(static_cast<double>(c.tn + c.fp)) *
                 std::sqrt(static_cast<double>(c.tn + c.fn));
    r.mcc = num / den;
  }
  return r;
}

// Percentage with two decimals, the tables' display format.
inline std::string format_pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f%%", v * 100.0);
  return buf;
}

// Scores attack predictions against the dataset's true sensitive values.
// Predictions must cover exactly the dataset rows they were produced from
// (record_id is the row index).
inline EvaluationReport score(const std::vector<AttackPrediction>& predictions,
                              const Dataset& truth, const std::string& positive) {
  if (truth.schema.k() != 2)
    fail("binary evaluation needs a 2-value sensitive attribute, got k=", truth.schema.k());
  BinaryCounts c;
  for (const auto& p : predictions) {
    if (p.record_id >= truth.size())
      fail("prediction record id ", p.record_id, " outside dataset of ", truth.size());
    const std::string& actual = truth.sensitive_value(p.record_id);
    bool actual_pos = actual == positive;
    bool predicted_pos = p.predicted == positive;
    if (predicted_pos) ++(actual_pos ? c.tp : c.fp);
    else ++(actual_pos ? c.fn : c.tn);
  }
  return metrics_from_counts(c, positive);
}

// One report per attack case tag (1/2/3), mounted under case:<n>.
inline std::map<std::string, EvaluationReport> per_case_breakdown(
    const std::vector<AttackPrediction>& predictions, const Dataset& truth,
    const std::string& positive) {
  std::map<int, std::vector<AttackPrediction>> by_case;
  for (const auto& p : predictions) by_case[p.case_tag].push_back(p);
  std::map<std::string, EvaluationReport> out;
  for (const auto& [tag, preds] : by_case)
    out[tag == 0 ? "case:none" : "case:" + std::to_string(tag)] = score(preds, truth, positive);
  return out;
}

// Partition by the record's true target label and score each part.
inline std::map<std::string, EvaluationReport> per_class_breakdown(
    const std::vector<AttackPrediction>& predictions, const Dataset& truth,
    const std::string& positive) {
  std::map<std::string, std::vector<AttackPrediction>> parts;
  for (const auto& l : truth.schema.target().domain) parts[l];
  for (const auto& p : predictions) parts[truth.label(p.record_id)].push_back(p);
  std::map<std::string, EvaluationReport> out;
  for (const auto& [label, preds] : parts)
    out["class:" + label] = preds.empty() ? metrics_from_counts({}, positive)
                                          : score(preds, truth, positive);
  return out;
}

using GroupingFn = std::function<std::string(const Dataset&, size_t row)>;

// One report per group plus the combined report (the returned parent).
// Every record must map to a group.
inline EvaluationReport group_analysis(const std::vector<AttackPrediction>& predictions,
                                       const Dataset& truth, const std::string& positive,
                                       const GroupingFn& grouping) {
  std::map<std::string, std::vector<AttackPrediction>> groups;
  for (const auto& p : predictions) {
    std::string g = grouping(truth, p.record_id);
    if (g.empty()) fail("record ", p.record_id, " has no group");
    groups[g].push_back(p);
  }
  EvaluationReport combined = score(predictions, truth, positive);
  for (const auto& [g, preds] : groups)
    combined.slices["group:" + g] = score(preds, truth, positive);
  return combined;
}

// The Adult education clustering: Edu1 pre-high-school, Edu2 high-school
// graduates and some college, Edu3 associate degrees and beyond.
inline GroupingFn education_grouping(const std::string& attribute = "education") {
  return [attribute](const Dataset& d, size_t row) -> std::string {
    static const std::map<std::string, std::string> kGroups = {
        {"Preschool", "Edu1"},   {"1st-4th", "Edu1"},    {"5th-6th", "Edu1"},
        {"7th-8th", "Edu1"},     {"9th", "Edu1"},        {"10th", "Edu1"},
        {"11th", "Edu1"},        {"12th", "Edu1"},       {"HS-grad", "Edu2"},
        {"Some-college", "Edu2"}, {"Assoc-voc", "Edu3"}, {"Assoc-acdm", "Edu3"},
        {"Bachelors", "Edu3"},   {"Masters", "Edu3"},    {"Prof-school", "Edu3"},
        {"Doctorate", "Edu3"}};
    const std::string& v = d.records[row].at(d.schema.require_index(attribute)).as_text();
    auto it = kGroups.find(v);
    return it == kGroups.end() ? std::string() : it->second;
  };
}

}  // namespace miai
