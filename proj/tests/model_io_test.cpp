#include "miai/model.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include <gtest/gtest.h>

#include "miai/datagen.hpp"
#include "miai/dataset.hpp"

namespace miai {
namespace {

struct TempPath {
  std::string path;
  explicit TempPath(const char* tag) {
    path = std::string(::testing::TempDir()) + "miai_model_" + tag + ".json";
  }
  ~TempPath() { std::remove(path.c_str()); }
};

Dataset small_adult() {
  Dataset raw = generate_adult_like(AdultGenParams{}.scaled(0.02));
  return preprocess_adult(raw);
}

void expect_identical_predictions(const TargetModel& a, const TargetModel& b,
                                  const Dataset& d) {
  for (size_t i = 0; i < std::min<size_t>(d.size(), 200); ++i) {
    FeatureVector row_a = a.codec.from_record(d.schema, d.records[i]);
    FeatureVector row_b = b.codec.from_record(d.schema, d.records[i]);
    PredictionResponse ra = a.predict_row(row_a);
    PredictionResponse rb = b.predict_row(row_b);
    EXPECT_EQ(ra.label, rb.label) << "record " << i;
    EXPECT_DOUBLE_EQ(ra.confidence, rb.confidence) << "record " << i;
  }
}

TEST(ModelIoTest, TreeRoundTripsBitExactly) {
  Dataset d = small_adult();
  TargetModel m = train_decision_tree(d, {8, 5});
  TempPath file("tree");
  m.save(file.path);
  TargetModel back = TargetModel::load(file.path);
  EXPECT_EQ(back.to_json(), m.to_json());
  expect_identical_predictions(m, back, d);
}

TEST(ModelIoTest, NetRoundTripsBitExactly) {
  Dataset d = small_adult();
  NetParams params;
  params.hidden = {16, 8};
  params.epochs = 2;
  TargetModel m = train_neural_net(d, params);
  TempPath file("net");
  m.save(file.path);
  TargetModel back = TargetModel::load(file.path);
  EXPECT_EQ(back.to_json(), m.to_json());
  expect_identical_predictions(m, back, d);
}

TEST(ModelIoTest, UnsupportedVersionIsAnError) {
  nlohmann::json doc;
  doc["format_version"] = 99;
  EXPECT_THROW(TargetModel::from_json(doc), Error);
}

TEST(ConfusionMatrixTest, AlwaysPredictAGivesForcedCounts) {
  // model that always predicts class A: single-leaf tree
  TargetModel m;
  m.family = ModelFamily::decision_tree;
  m.class_labels = {"A", "B"};
  Attribute sens;
  sens.name = "s";
  sens.kind = AttrKind::categorical;
  sens.role = AttrRole::sensitive;
  sens.domain = {"x", "y"};
  Attribute y;
  y.name = "y";
  y.kind = AttrKind::categorical;
  y.role = AttrRole::target_label;
  y.domain = {"A", "B"};
  Dataset train;
  train.schema = Schema({sens, y});
  for (int i = 0; i < 4; ++i) {
    Record r;
    r.values = {Cell::text("x"), Cell::text("A")};
    train.records.push_back(r);
  }
  m = train_decision_tree(train);

  Dataset eval;
  eval.schema = train.schema;
  for (int i = 0; i < 5; ++i) {
    Record r;
    r.values = {Cell::text("x"), Cell::text(i < 3 ? "A" : "B")};
    eval.records.push_back(r);
  }
  ConfusionMatrix cm = confusion_matrix(m, eval);
  EXPECT_EQ(cm.counts[0][0], 3);
  EXPECT_EQ(cm.counts[0][1], 0);
  EXPECT_EQ(cm.counts[1][0], 2);
  EXPECT_EQ(cm.counts[1][1], 0);
  EXPECT_EQ(cm.total(), 5);
  EXPECT_DOUBLE_EQ(cm.rate(1, 0), 1.0);
}

TEST(ConfusionMatrixTest, PerfectModelIsDiagonal) {
  Dataset d = small_adult();
  TargetModel m = train_decision_tree(d, {10, 2});
  ConfusionMatrix cm = confusion_matrix(m, d);
  EXPECT_EQ(cm.total(), static_cast<int64_t>(d.size()));
  // row sums equal per-class actual counts
  std::map<std::string, int64_t> actual;
  for (size_t i = 0; i < d.size(); ++i) ++actual[d.label(i)];
  for (size_t y = 0; y < cm.labels.size(); ++y)
    EXPECT_EQ(cm.row_sum(y), actual[cm.labels[y]]);
  // row rates sum to 1 for non-empty rows
  for (size_t y = 0; y < cm.labels.size(); ++y) {
    if (cm.row_sum(y) == 0) continue;
    double sum = 0.0;
    for (size_t p = 0; p < cm.labels.size(); ++p) sum += cm.rate(y, p);
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(PredictTest, ArgmaxAndDeterminism) {
  Dataset d = small_adult();
  TargetModel m = train_decision_tree(d, {6, 5});
  FeatureVector row = m.codec.from_record(d.schema, d.records[0]);
  PredictionResponse r1 = m.predict_row(row);
  PredictionResponse r2 = m.predict_row(row);
  EXPECT_EQ(r1.label, r2.label);
  EXPECT_DOUBLE_EQ(r1.confidence, r2.confidence);
  auto& scores = *r1.scores;
  double mx = *std::max_element(scores.begin(), scores.end());
  EXPECT_DOUBLE_EQ(r1.confidence, mx);
}

}  // namespace
}  // namespace miai
