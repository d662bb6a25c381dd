#include "miai/metrics.hpp"

#include <cmath>

#include <gtest/gtest.h>

namespace miai {
namespace {

// Independent formula path used as the differential oracle: long-double
// arithmetic, sensitivity/specificity composition for G-mean, covariance
// form for MCC.
struct RefMetrics {
  long double precision, recall, accuracy, f1, g_mean, mcc;
};

RefMetrics reference(int64_t tp, int64_t tn, int64_t fp, int64_t fn) {
  auto div = [](long double a, long double b) { return b == 0.0L ? 0.0L : a / b; };
  RefMetrics r{};
  long double n = static_cast<long double>(tp + tn + fp + fn);
  r.precision = div(tp, tp + fp);
  r.recall = div(tp, tp + fn);
  r.accuracy = div(tp + tn, n);
  r.f1 = div(2.0L * r.precision * r.recall, r.precision + r.recall);
  long double sens = div(tp, tp + fn);
  long double spec = div(tn, tn + fp);
  r.g_mean = sqrtl(sens * spec);
  long double s = div(tp + fn, n);       // actual positive rate
  long double p = div(tp + fp, n);       // predicted positive rate
  long double denom = sqrtl(p * s * (1.0L - s) * (1.0L - p));
  r.mcc = (tp + fp) == 0 || (tp + fn) == 0 || (tn + fp) == 0 || (tn + fn) == 0
              ? 0.0L
              : div(div(tp, n) - s * p, denom);
  return r;
}

void expect_matches_reference(int64_t tp, int64_t tn, int64_t fp, int64_t fn) {
  EvaluationReport got = metrics_from_counts({tp, tn, fp, fn});
  RefMetrics want = reference(tp, tn, fp, fn);
  EXPECT_NEAR(got.precision, static_cast<double>(want.precision), 1e-12);
  EXPECT_NEAR(got.recall, static_cast<double>(want.recall), 1e-12);
  EXPECT_NEAR(got.accuracy, static_cast<double>(want.accuracy), 1e-12);
  EXPECT_NEAR(got.f1, static_cast<double>(want.f1), 1e-12);
  EXPECT_NEAR(got.g_mean, static_cast<double>(want.g_mean), 1e-12);
  EXPECT_NEAR(got.mcc, static_cast<double>(want.mcc), 1e-10)
      << "counts " << tp << "/" << tn << "/" << fp << "/" << fn;
}

// Published attack rows against the GSS decision tree; values frozen from
// an exact-rational evaluation of the two formulas.
TEST(MetricsGoldenTest, GssTreeFjrRow) {
  EvaluationReport r = metrics_from_counts({131, 11709, 509, 2886});
  EXPECT_NEAR(r.precision * 100, 20.468750, 1e-4);
  EXPECT_NEAR(r.recall * 100, 4.342062, 1e-4);
  EXPECT_NEAR(r.accuracy * 100, 77.715786, 1e-4);
  EXPECT_NEAR(r.f1 * 100, 7.164342, 1e-4);
  EXPECT_NEAR(r.g_mean * 100, 20.398951, 1e-4);
  EXPECT_NEAR(r.mcc * 100, 0.349783, 1e-4);
}

TEST(MetricsGoldenTest, AdultTreeCsmiaRow) {
  EvaluationReport r = metrics_from_counts({7664, 17085, 1244, 9229});
  EXPECT_NEAR(r.precision * 100, 86.035025, 1e-4);
  EXPECT_NEAR(r.recall * 100, 45.367904, 1e-4);
  EXPECT_NEAR(r.g_mean * 100, 65.029807, 1e-4);
  EXPECT_NEAR(r.mcc * 100, 44.341561, 1e-4);
}

TEST(MetricsGoldenTest, AdultTreeFjrRow) {
  EvaluationReport r = metrics_from_counts({3788, 17818, 511, 13105});
  EXPECT_NEAR(r.g_mean * 100, 46.688690, 1e-4);
  EXPECT_NEAR(r.mcc * 100, 29.966876, 1e-4);
}

TEST(MetricsTest, PerfectPredictorScoresOne) {
  EvaluationReport r = metrics_from_counts({40, 60, 0, 0});
  EXPECT_DOUBLE_EQ(r.precision, 1.0);
  EXPECT_DOUBLE_EQ(r.recall, 1.0);
  EXPECT_DOUBLE_EQ(r.accuracy, 1.0);
  EXPECT_DOUBLE_EQ(r.f1, 1.0);
  EXPECT_DOUBLE_EQ(r.g_mean, 1.0);
  EXPECT_DOUBLE_EQ(r.mcc, 1.0);
}

TEST(MetricsTest, AllNegativePredictorScoresZeroEverywhereButAccuracy) {
  EvaluationReport r = metrics_from_counts({0, 802, 0, 198});
  EXPECT_DOUBLE_EQ(r.precision, 0.0);
  EXPECT_DOUBLE_EQ(r.recall, 0.0);
  EXPECT_DOUBLE_EQ(r.f1, 0.0);
  EXPECT_DOUBLE_EQ(r.g_mean, 0.0);
  EXPECT_DOUBLE_EQ(r.mcc, 0.0);
  EXPECT_NEAR(r.accuracy, 0.802, 1e-12);
}

TEST(MetricsTest, DifferentialFuzzAgainstIndependentFormulaPath) {
  Rng rng(20240401);
  for (int i = 0; i < 1000; ++i) {
    int64_t tp = static_cast<int64_t>(rng.bounded(5000));
    int64_t tn = static_cast<int64_t>(rng.bounded(5000));
    int64_t fp = static_cast<int64_t>(rng.bounded(5000));
    int64_t fn = static_cast<int64_t>(rng.bounded(5000));
    if (tp + tn + fp + fn == 0) continue;
    expect_matches_reference(tp, tn, fp, fn);
  }
  // zero-denominator corners
  expect_matches_reference(0, 10, 0, 0);
  expect_matches_reference(10, 0, 0, 0);
  expect_matches_reference(0, 0, 10, 0);
  expect_matches_reference(0, 0, 0, 10);
}

TEST(MetricsTest, McjSignFlipsWhenPredictionsAreComplemented) {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    int64_t tp = static_cast<int64_t>(rng.bounded(1000)) + 1;
    int64_t tn = static_cast<int64_t>(rng.bounded(1000)) + 1;
    int64_t fp = static_cast<int64_t>(rng.bounded(1000)) + 1;
    int64_t fn = static_cast<int64_t>(rng.bounded(1000)) + 1;
    double m = metrics_from_counts({tp, tn, fp, fn}).mcc;
    // complementing every prediction swaps TP<->FN and TN<->FP
    double m_flipped = metrics_from_counts({fn, fp, tn, tp}).mcc;
    EXPECT_NEAR(m, -m_flipped, 1e-12);
  }
}

Dataset binary_truth(const std::vector<std::string>& sensitive,
                     const std::vector<std::string>& labels) {
  Attribute s;
  s.name = "secret";
  s.kind = AttrKind::categorical;
  s.role = AttrRole::sensitive;
  s.domain = {"yes", "no"};
  Attribute t;
  t.name = "label";
  t.kind = AttrKind::categorical;
  t.role = AttrRole::target_label;
  t.domain = {"a", "b"};
  Dataset d;
  d.schema = Schema({s, t});
  for (size_t i = 0; i < sensitive.size(); ++i) {
    Record r;
    r.values = {Cell::text(sensitive[i]), Cell::text(labels[i])};
    d.records.push_back(r);
  }
  return d;
}

std::vector<AttackPrediction> preds_of(const std::vector<std::string>& vals,
                                       const std::vector<int>& cases = {}) {
  std::vector<AttackPrediction> out(vals.size());
  for (size_t i = 0; i < vals.size(); ++i) {
    out[i].record_id = i;
    out[i].predicted = vals[i];
    out[i].case_tag = cases.empty() ? 0 : cases[i];
  }
  return out;
}

TEST(ScoreTest, CountsAndIdChecks) {
  Dataset d = binary_truth({"yes", "no", "yes", "no"}, {"a", "a", "b", "b"});
  auto preds = preds_of({"yes", "yes", "no", "no"});
  EvaluationReport r = score(preds, d, "yes");
  EXPECT_EQ(r.counts.tp, 1);
  EXPECT_EQ(r.counts.fp, 1);
  EXPECT_EQ(r.counts.fn, 1);
  EXPECT_EQ(r.counts.tn, 1);

  preds[3].record_id = 99;
  EXPECT_THROW(score(preds, d, "yes"), Error);
}

TEST(SliceTest, CaseAndClassSlicesSumToParent) {
  Dataset d = binary_truth({"yes", "no", "yes", "no", "yes", "no"},
                           {"a", "a", "b", "b", "a", "b"});
  auto preds = preds_of({"yes", "yes", "no", "no", "no", "yes"}, {1, 2, 3, 1, 2, 3});
  EvaluationReport parent = score(preds, d, "yes");
  int64_t tp = 0, tn = 0, fp = 0, fn = 0;
  for (auto& [name, rep] : per_case_breakdown(preds, d, "yes")) {
    tp += rep.counts.tp;
    tn += rep.counts.tn;
    fp += rep.counts.fp;
    fn += rep.counts.fn;
  }
  EXPECT_EQ(tp, parent.counts.tp);
  EXPECT_EQ(tn, parent.counts.tn);
  EXPECT_EQ(fp, parent.counts.fp);
  EXPECT_EQ(fn, parent.counts.fn);

  tp = tn = fp = fn = 0;
  for (auto& [name, rep] : per_class_breakdown(preds, d, "yes")) {
    tp += rep.counts.tp;
    tn += rep.counts.tn;
    fp += rep.counts.fp;
    fn += rep.counts.fn;
  }
  EXPECT_EQ(tp + tn + fp + fn, parent.counts.total());
}

TEST(SliceTest, EmptyClassPartitionHasZeroCounts) {
  Dataset d = binary_truth({"yes", "no"}, {"a", "a"});
  auto preds = preds_of({"yes", "no"});
  auto parts = per_class_breakdown(preds, d, "yes");
  ASSERT_TRUE(parts.count("class:b"));
  EXPECT_EQ(parts["class:b"].counts.total(), 0);
  EXPECT_DOUBLE_EQ(parts["class:b"].mcc, 0.0);
}

TEST(GroupAnalysisTest, SingleGroupEqualsWholeSetScore) {
  Dataset d = binary_truth({"yes", "no", "yes"}, {"a", "b", "a"});
  auto preds = preds_of({"yes", "no", "no"});
  EvaluationReport grouped =
      group_analysis(preds, d, "yes", [](const Dataset&, size_t) { return "all"; });
  EvaluationReport direct = score(preds, d, "yes");
  ASSERT_EQ(grouped.slices.size(), 1u);
  const auto& g = grouped.slices.at("group:all");
  EXPECT_EQ(g.counts.tp, direct.counts.tp);
  EXPECT_EQ(g.counts.tn, direct.counts.tn);
  EXPECT_DOUBLE_EQ(g.g_mean, direct.g_mean);
}

TEST(GroupAnalysisTest, RecordWithoutGroupIsAnError) {
  Dataset d = binary_truth({"yes"}, {"a"});
  auto preds = preds_of({"yes"});
  EXPECT_THROW(
      group_analysis(preds, d, "yes", [](const Dataset&, size_t) { return ""; }),
      Error);
}

TEST(FormatTest, TwoDecimalPercentages) {
  EXPECT_EQ(format_pct(0.204688), "20.47%");
  EXPECT_EQ(format_pct(0.0), "0.00%");
  EXPECT_EQ(format_pct(1.0), "100.00%");
}

}  // namespace
}  // namespace miai
