#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "miai/common.hpp"
#include "miai/dataset.hpp"
#include "miai/decision_tree.hpp"
#include "miai/feature.hpp"
#include "miai/neural_net.hpp"

namespace miai {

enum class ModelFamily { decision_tree, neural_net };

inline std::string to_string(ModelFamily f) {
  return f == ModelFamily::decision_tree ? "decision-tree" : "neural-net";
}

// What an oracle hands back for one query: the argmax label, its score, and
// (when exposed) the full score vector in class-label order.
struct PredictionResponse {
  std::string label;
  double confidence = 0.0;
  std::optional<std::vector<double>> scores;
};

// A trained target classifier. Prediction is a pure function of
// (model, features): identical input always yields identical output.
class TargetModel {
 public:
  ModelFamily family = ModelFamily::decision_tree;
  std::vector<std::string> class_labels;
  FeatureCodec codec;
  DecisionTree tree;
  NeuralNet net;
  // Schema document of the training dataset; published by the HTTP oracle.
  nlohmann::json schema_doc;

  size_t m() const { return class_labels.size(); }

  std::vector<double> score_vector(const FeatureVector& row) const {
    if (family == ModelFamily::decision_tree) return tree.scores(row, codec.specs());
    return net.forward(codec.encode_dense(row));
  }

  PredictionResponse predict_row(const FeatureVector& row) const {
    std::vector<double> s = score_vector(row);
    size_t best = 0;
    for (size_t c = 1; c < s.size(); ++c)
      if (s[c] > s[best]) best = c;
    PredictionResponse r;
    r.label = class_labels[best];
    r.confidence = s[best];
    r.scores = std::move(s);
    return r;
  }

  PredictionResponse predict(const AttributeMap& attrs) const {
    return predict_row(codec.from_map(attrs));
  }

  nlohmann::json to_json() const {
    nlohmann::json doc;
    doc["format_version"] = 1;
    doc["family"] = to_string(family);
    doc["class_labels"] = class_labels;
    doc["features"] = codec.to_json();
    if (!schema_doc.is_null()) doc["schema"] = schema_doc;
    if (family == ModelFamily::decision_tree) doc["tree"] = tree.to_json();
    else doc["net"] = net.to_json();
    return doc;
  }

  static TargetModel from_json(const nlohmann::json& doc) {
    int version = doc.value("format_version", 0);
    if (version != 1) fail("unsupported model format version ", version);
    TargetModel m;
    std::string fam = doc.at("family").get<std::string>();
    if (fam == "decision-tree") m.family = ModelFamily::decision_tree;
    else if (fam == "neural-net") m.family = ModelFamily::neural_net;
    else fail("unknown model family '", fam, "'");
    m.class_labels = doc.at("class_labels").get<std::vector<std::string>>();
    m.codec = FeatureCodec::from_json(doc.at("features"));
    if (doc.contains("schema")) m.schema_doc = doc["schema"];
    if (m.family == ModelFamily::decision_tree) m.tree = DecisionTree::from_json(doc.at("tree"));
    else m.net = NeuralNet::from_json(doc.at("net"));
    return m;
  }

  void save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) fail("cannot write model file '", path, "'");
    out << to_json().dump() << "\n";
  }

  static TargetModel load(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open model file '", path, "'");
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const std::exception& e) {
      fail("model file '", path, "' is not valid JSON: ", e.what());
    }
    return from_json(doc);
  }
};

namespace detail {

inline void dataset_to_rows(const Dataset& train, const FeatureCodec& codec,
                            std::vector<FeatureVector>& rows, std::vector<int>& labels) {
  const Attribute& target = train.schema.target();
  rows.reserve(train.size());
  labels.reserve(train.size());
  for (const auto& r : train.records) {
    rows.push_back(codec.from_record(train.schema, r));
    size_t y = target.domain_index(r.at(train.schema.target_index()).as_text());
    if (y >= target.domain.size()) fail("record label outside the target domain");
    labels.push_back(static_cast<int>(y));
  }
}

}  // namespace detail

inline TargetModel train_decision_tree(const Dataset& train, TreeParams params = {}) {
  if (train.size() == 0) fail("cannot train a decision tree on an empty dataset");
  TargetModel m;
  m.family = ModelFamily::decision_tree;
  m.class_labels = train.schema.target().domain;
  m.schema_doc = train.schema.to_json();
  m.codec = FeatureCodec::fit(train);
  std::vector<FeatureVector> rows;
  std::vector<int> labels;
  detail::dataset_to_rows(train, m.codec, rows, labels);
  m.tree = grow_decision_tree(rows, labels, m.codec.specs(),
                              static_cast<int>(m.class_labels.size()), params);
  return m;
}

inline TargetModel train_neural_net(const Dataset& train, NetParams params = {}) {
  if (train.size() == 0) fail("cannot train a neural net on an empty dataset");
  TargetModel m;
  m.family = ModelFamily::neural_net;
  m.class_labels = train.schema.target().domain;
  m.schema_doc = train.schema.to_json();
  m.codec = FeatureCodec::fit(train);
  std::vector<FeatureVector> rows;
  std::vector<int> labels;
  detail::dataset_to_rows(train, m.codec, rows, labels);
  std::vector<std::vector<double>> dense;
  dense.reserve(rows.size());
  for (const auto& r : rows) dense.push_back(m.codec.encode_dense(r));
  m.net = train_neural_net_dense(dense, labels, static_cast<int>(m.class_labels.size()),
                                 params);
  return m;
}

// m x m counts indexed [actual y][predicted y']. Row rates C[y, y'] are the
// per-true-class distribution over predicted labels.
struct ConfusionMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<int64_t>> counts;

  int64_t row_sum(size_t y) const {
    int64_t s = 0;
    for (int64_t c : counts[y]) s += c;
    return s;
  }
  int64_t total() const {
    int64_t s = 0;
    for (size_t y = 0; y < counts.size(); ++y) s += row_sum(y);
    return s;
  }
  // Pr[f(x) = y' | y], 0 when the true class never occurs.
  double rate(size_t y, size_t y_pred) const {
    int64_t rs = row_sum(y);
    return rs == 0 ? 0.0 : static_cast<double>(counts[y][y_pred]) / static_cast<double>(rs);
  }
  size_t label_index(const std::string& l) const {
    for (size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == l) return i;
    fail("label '", l, "' not in confusion matrix");
  }

  nlohmann::json to_json() const {
    return nlohmann::json{{"labels", labels}, {"counts", counts}};
  }
  static ConfusionMatrix from_json(const nlohmann::json& doc) {
    ConfusionMatrix c;
    c.labels = doc.at("labels").get<std::vector<std::string>>();
    c.counts = doc.at("counts").get<std::vector<std::vector<int64_t>>>();
    return c;
  }
};

inline ConfusionMatrix confusion_matrix(const TargetModel& model, const Dataset& eval) {
  if (eval.size() == 0) fail("confusion matrix needs a non-empty evaluation set");
  ConfusionMatrix cm;
  cm.labels = model.class_labels;
  cm.counts.assign(cm.labels.size(), std::vector<int64_t>(cm.labels.size(), 0));
  for (const auto& r : eval.records) {
    FeatureVector row = model.codec.from_record(eval.schema, r);
    PredictionResponse p = model.predict_row(row);
    size_t actual = cm.label_index(r.at(eval.schema.target_index()).as_text());
    size_t predicted = cm.label_index(p.label);
    ++cm.counts[actual][predicted];
  }
  return cm;
}

inline double training_accuracy(const TargetModel& model, const Dataset& data) {
  ConfusionMatrix cm = confusion_matrix(model, data);
  int64_t diag = 0;
  for (size_t i = 0; i < cm.labels.size(); ++i) diag += cm.counts[i][i];
  return static_cast<double>(diag) / static_cast<double>(cm.total());
}

}  // namespace miai
