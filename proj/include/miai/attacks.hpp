#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "miai/common.hpp"
#include "miai/dataset.hpp"
#include "miai/decision_tree.hpp"
#include "miai/model.hpp"
#include "miai/oracle.hpp"

// The attribute-inference attack family. Every attack consumes per-record
// adversary knowledge (the record's non-sensitive attributes and its true
// label) plus whatever Table-1-style capabilities it assumes, queries a
// black-box oracle by varying the sensitive attribute over its k candidate
// values, and emits one AttackPrediction per target record.
//
// Tie-breaking is deterministic everywhere: the first candidate in
// sensitive-domain order wins, after the prior-based rule where priors are
// part of the attack's scoring.

namespace miai {

struct AttackPrediction {
  size_t record_id = 0;
  std::string predicted;
  int case_tag = 0;  // 1/2/3 for case-based attacks, 0 otherwise
  uint64_t queries = 0;
  std::vector<double> aux;  // per-candidate confidences or correct-counts
};

// Everything the adversary knows about one target record.
struct RecordKnowledge {
  size_t record_id = 0;
  AttributeMap known;  // all non-sensitive model inputs, minus any unknown subset
  std::vector<std::string> unknown;
  std::string true_label;
};

inline RecordKnowledge knowledge_for(const Dataset& d, size_t row,
                                     const std::vector<std::string>& unknown = {}) {
  RecordKnowledge k;
  k.record_id = row;
  k.unknown = unknown;
  k.true_label = d.label(row);
  const Schema& s = d.schema;
  for (size_t i : s.model_input_indices()) {
    if (i == s.sensitive_index()) continue;
    const std::string& name = s.at(i).name;
    bool is_unknown = false;
    for (const auto& u : unknown)
      if (u == name) is_unknown = true;
    if (!is_unknown) k.known[name] = d.records[row].at(i);
  }
  return k;
}

inline void validate_priors(const std::vector<double>& priors, size_t k) {
  if (priors.size() != k)
    fail("priors cover ", priors.size(), " values but the sensitive domain has ", k);
  double sum = 0.0;
  for (double p : priors) {
    if (p < 0.0) fail("priors must be non-negative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) fail("priors must sum to 1, got ", sum);
}

// ---------------------------------------------------------------------------
// Baselines (no oracle access)

// Constant prediction of the highest-prior sensitive value.
inline std::vector<AttackPrediction> naive_attack(const Dataset& targets,
                                                  const std::vector<double>& priors) {
  if (priors.empty()) fail("naive attack requires marginal priors");
  const Attribute& sens = targets.schema.sensitive();
  validate_priors(priors, sens.domain.size());
  size_t best = 0;
  for (size_t i = 1; i < priors.size(); ++i)
    if (priors[i] > priors[best]) best = i;
  std::vector<AttackPrediction> out(targets.size());
  for (size_t r = 0; r < targets.size(); ++r) {
    out[r].record_id = r;
    out[r].predicted = sens.domain[best];
    out[r].case_tag = 0;
    out[r].queries = 0;
  }
  return out;
}

// Seeded i.i.d. Bernoulli(p_positive) prediction of the positive class.
// Defined for binary sensitive attributes only.
inline std::vector<AttackPrediction> random_guessing_attack(const Dataset& targets,
                                                            double p_positive, uint64_t seed,
                                                            const std::string& positive_value) {
  const Attribute& sens = targets.schema.sensitive();
  if (sens.domain.size() != 2)
    fail("random guessing is defined for a binary sensitive attribute, got k=",
         sens.domain.size());
  if (p_positive < 0.0 || p_positive > 1.0)
    fail("positive-class probability must be in [0, 1], got ", p_positive);
  size_t pos = sens.domain_index(positive_value);
  if (pos >= sens.domain.size())
    fail("positive value '", positive_value, "' is not in the sensitive domain");
  const std::string& negative_value = sens.domain[1 - pos];
  Rng rng(seed);
  std::vector<AttackPrediction> out(targets.size());
  for (size_t r = 0; r < targets.size(); ++r) {
    out[r].record_id = r;
    out[r].predicted = rng.bernoulli(p_positive) ? positive_value : negative_value;
    out[r].case_tag = 0;
    out[r].queries = 0;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Shared query machinery

namespace detail {

// Query the oracle once per sensitive candidate, all other attributes fixed.
inline std::vector<PredictionResponse> query_candidates(const Schema& schema,
                                                        const RecordKnowledge& know,
                                                        PredictionOracle& oracle) {
  const Attribute& sens = schema.sensitive();
  AttributeMap attrs = know.known;
  std::vector<PredictionResponse> rs;
  rs.reserve(sens.domain.size());
  for (const auto& candidate : sens.domain) {
    attrs[sens.name] = Cell::text(candidate);
    rs.push_back(oracle.query(attrs));
  }
  return rs;
}

template <typename Kernel>
std::vector<AttackPrediction> per_record(const Dataset& targets, int workers, Kernel&& kernel) {
  std::vector<AttackPrediction> out(targets.size());
  parallel_for(targets.size(), workers, [&](size_t i) {
    out[i] = kernel(i);
    out[i].record_id = i;
  });
  return out;
}

}  // namespace detail

// The three-case rule shared by the confidence attacks: S is the candidate
// set whose prediction matches the true label. Exactly one match picks it;
// several matches pick the highest confidence among them; no match picks the
// lowest confidence overall.
struct CaseOutcome {
  int case_tag = 0;
  size_t choice = 0;
};

inline CaseOutcome csmia_decide(const std::vector<PredictionResponse>& responses,
                                const std::string& true_label) {
  std::vector<size_t> correct;
  for (size_t i = 0; i < responses.size(); ++i)
    if (responses[i].label == true_label) correct.push_back(i);
  CaseOutcome o;
  if (correct.size() == 1) {
    o.case_tag = 1;
    o.choice = correct[0];
  } else if (correct.size() >= 2) {
    o.case_tag = 2;
    o.choice = correct[0];
    for (size_t i : correct)
      if (responses[i].confidence > responses[o.choice].confidence) o.choice = i;
  } else {
    o.case_tag = 3;
    o.choice = 0;
    for (size_t i = 1; i < responses.size(); ++i)
      if (responses[i].confidence < responses[o.choice].confidence) o.choice = i;
  }
  return o;
}

// ---------------------------------------------------------------------------
// Fredrikson et al. attack: score each candidate by C[y, y'] * p_i.

inline AttackPrediction fjrmia_record(const Schema& schema, const RecordKnowledge& know,
                                      PredictionOracle& oracle,
                                      const std::vector<double>& priors,
                                      const ConfusionMatrix& confusion) {
  const Attribute& sens = schema.sensitive();
  std::vector<PredictionResponse> rs = detail::query_candidates(schema, know, oracle);
  size_t y = confusion.label_index(know.true_label);
  AttackPrediction p;
  p.queries = rs.size();
  p.aux.resize(rs.size());
  size_t best = 0;
  for (size_t i = 0; i < rs.size(); ++i) {
    p.aux[i] = confusion.rate(y, confusion.label_index(rs[i].label)) * priors[i];
    if (i == 0) continue;
    if (p.aux[i] > p.aux[best] || (p.aux[i] == p.aux[best] && priors[i] > priors[best]))
      best = i;
  }
  p.predicted = sens.domain[best];
  p.case_tag = 0;
  return p;
}

inline std::vector<AttackPrediction> fjrmia(const Dataset& targets, PredictionOracle& oracle,
                                            const std::vector<double>& priors,
                                            const ConfusionMatrix& confusion,
                                            int workers = 1) {
  validate_priors(priors, targets.schema.k());
  return detail::per_record(targets, workers, [&](size_t i) {
    return fjrmia_record(targets.schema, knowledge_for(targets, i), oracle, priors, confusion);
  });
}

// ---------------------------------------------------------------------------
// Confidence score-based attack (CSMIA): needs neither priors nor the
// confusion matrix, only labels and confidence scores.

inline AttackPrediction csmia_record(const Schema& schema, const RecordKnowledge& know,
                                     PredictionOracle& oracle) {
  std::vector<PredictionResponse> rs = detail::query_candidates(schema, know, oracle);
  CaseOutcome o = csmia_decide(rs, know.true_label);
  AttackPrediction p;
  p.predicted = schema.sensitive().domain[o.choice];
  p.case_tag = o.case_tag;
  p.queries = rs.size();
  p.aux.reserve(rs.size());
  for (const auto& r : rs) p.aux.push_back(r.confidence);
  return p;
}

inline std::vector<AttackPrediction> csmia(const Dataset& targets, PredictionOracle& oracle,
                                           int workers = 1) {
  return detail::per_record(targets, workers, [&](size_t i) {
    return csmia_record(targets.schema, knowledge_for(targets, i), oracle);
  });
}

// ---------------------------------------------------------------------------
// Confidence modeling-based attack (CMMIA): the adversary first queries the
// oracle with its own dataset DS_A, partitions the responses into the three
// cases and by true label, trains one attack model per (case, label) bucket,
// then routes each target record's responses to the matching model.

struct CmmiaTables {
  size_t k = 0;
  std::vector<std::string> sensitive_domain;
  std::vector<std::string> target_labels;

  struct Row {
    std::vector<int> pred;         // per candidate: predicted label index, -1 masked
    std::vector<double> conf;      // per candidate: confidence, -1 masked
    std::vector<uint8_t> present;  // per candidate: slot carries a real response
    int sensitive = 0;             // true x1 index; meaningful in collected rows only
  };

  // buckets[case-1][label index]
  std::array<std::vector<std::vector<Row>>, 3> buckets;
  size_t majority_sensitive = 0;

  size_t m() const { return target_labels.size(); }
};

namespace detail {

inline CmmiaTables::Row make_cmmia_row(int case_tag,
                                       const std::vector<PredictionResponse>& rs,
                                       const std::string& true_label,
                                       const std::vector<std::string>& target_labels) {
  CmmiaTables::Row row;
  size_t k = rs.size();
  row.pred.assign(k, -1);
  row.conf.assign(k, -1.0);
  row.present.assign(k, 0);
  for (size_t i = 0; i < k; ++i) {
    bool keep = case_tag != 2 || rs[i].label == true_label;
    if (!keep) continue;  // case-2 rows carry the correct predictions only
    row.present[i] = 1;
    size_t li = 0;
    for (; li < target_labels.size(); ++li)
      if (target_labels[li] == rs[i].label) break;
    row.pred[i] = li == target_labels.size() ? -1 : static_cast<int>(li);
    row.conf[i] = rs[i].confidence;
  }
  return row;
}

inline std::vector<FeatureSpec> cmmia_feature_specs(int case_tag, size_t k,
                                                    const std::vector<std::string>& labels) {
  std::vector<std::string> pred_domain = labels;
  pred_domain.push_back("__masked__");
  std::vector<FeatureSpec> specs;
  for (size_t i = 0; i < k; ++i) {
    FeatureSpec pred;
    pred.name = "pred_" + std::to_string(i);
    pred.kind = AttrKind::categorical;
    pred.domain = pred_domain;
    specs.push_back(std::move(pred));
    FeatureSpec conf;
    conf.name = "conf_" + std::to_string(i);
    conf.kind = AttrKind::numeric;
    conf.lo = -1.0;
    conf.hi = 1.0;
    specs.push_back(std::move(conf));
  }
  if (case_tag == 2) {
    for (size_t i = 0; i < k; ++i) {
      FeatureSpec present;
      present.name = "present_" + std::to_string(i);
      present.kind = AttrKind::categorical;
      present.domain = {"0", "1"};
      specs.push_back(std::move(present));
    }
  }
  return specs;
}

inline FeatureVector cmmia_feature_row(int case_tag, const CmmiaTables::Row& row, size_t m) {
  FeatureVector v;
  size_t k = row.pred.size();
  v.reserve(case_tag == 2 ? 3 * k : 2 * k);
  for (size_t i = 0; i < k; ++i) {
    v.push_back(row.pred[i] < 0 ? static_cast<double>(m) : static_cast<double>(row.pred[i]));
    v.push_back(row.conf[i]);
  }
  if (case_tag == 2)
    for (size_t i = 0; i < k; ++i) v.push_back(row.present[i] ? 1.0 : 0.0);
  return v;
}

}  // namespace detail

inline CmmiaTables cmmia_collect(const Dataset& ds_a, PredictionOracle& oracle,
                                 int workers = 1) {
  if (ds_a.size() == 0) fail("CMMIA collection needs a non-empty adversary dataset");
  CmmiaTables t;
  const Schema& s = ds_a.schema;
  t.k = s.k();
  t.sensitive_domain = s.sensitive().domain;
  t.target_labels = s.target().domain;
  for (auto& per_case : t.buckets) per_case.resize(t.target_labels.size());

  struct Routed {
    int case_tag = 0;
    size_t label_idx = 0;
    CmmiaTables::Row row;
  };
  std::vector<Routed> routed(ds_a.size());
  parallel_for(ds_a.size(), workers, [&](size_t i) {
    RecordKnowledge know = knowledge_for(ds_a, i);
    std::vector<PredictionResponse> rs = detail::query_candidates(s, know, oracle);
    CaseOutcome o = csmia_decide(rs, know.true_label);
    Routed r;
    r.case_tag = o.case_tag;
    r.label_idx = s.target().domain_index(know.true_label);
    r.row = detail::make_cmmia_row(o.case_tag, rs, know.true_label, t.target_labels);
    r.row.sensitive = static_cast<int>(
        s.sensitive().domain_index(ds_a.sensitive_value(i)));
    routed[i] = std::move(r);
  });
  std::vector<size_t> sensitive_counts(t.k, 0);
  for (auto& r : routed) {
    ++sensitive_counts[static_cast<size_t>(r.row.sensitive)];
    t.buckets[static_cast<size_t>(r.case_tag - 1)][r.label_idx].push_back(std::move(r.row));
  }
  size_t best = 0;
  for (size_t i = 1; i < sensitive_counts.size(); ++i)
    if (sensitive_counts[i] > sensitive_counts[best]) best = i;
  t.majority_sensitive = best;
  return t;
}

// 3*m attack models, one per (case, true-label) bucket. Degenerate buckets
// fall back to constant predictors: the bucket majority, or the DS_A
// majority when the bucket is empty.
struct CmmiaBank {
  size_t k = 0;
  std::vector<std::string> sensitive_domain;
  std::vector<std::string> target_labels;
  std::array<std::vector<FeatureSpec>, 3> case_specs;

  struct AttackModel {
    bool constant = false;
    size_t constant_value = 0;
    DecisionTree tree;
  };
  std::vector<AttackModel> models;  // index: (case-1)*m + label_idx

  size_t m() const { return target_labels.size(); }
  size_t size() const { return models.size(); }

  size_t predict(int case_tag, size_t label_idx, const CmmiaTables::Row& row) const {
    const AttackModel& am = models[static_cast<size_t>(case_tag - 1) * m() + label_idx];
    if (am.constant) return am.constant_value;
    FeatureVector v = detail::cmmia_feature_row(case_tag, row, m());
    const auto& specs = case_specs[static_cast<size_t>(case_tag - 1)];
    std::vector<double> scores = am.tree.scores(v, specs);
    size_t best = 0;
    for (size_t i = 1; i < scores.size(); ++i)
      if (scores[i] > scores[best]) best = i;
    return best;
  }
};

inline CmmiaBank cmmia_train(const CmmiaTables& tables, TreeParams params = {8, 5}) {
  CmmiaBank bank;
  bank.k = tables.k;
  bank.sensitive_domain = tables.sensitive_domain;
  bank.target_labels = tables.target_labels;
  for (int c = 1; c <= 3; ++c)
    bank.case_specs[static_cast<size_t>(c - 1)] =
        detail::cmmia_feature_specs(c, tables.k, tables.target_labels);

  for (int c = 1; c <= 3; ++c) {
    for (size_t l = 0; l < tables.m(); ++l) {
      const auto& bucket = tables.buckets[static_cast<size_t>(c - 1)][l];
      CmmiaBank::AttackModel am;
      if (bucket.empty()) {
        am.constant = true;
        am.constant_value = tables.majority_sensitive;
      } else {
        bool single_class = true;
        std::vector<size_t> counts(tables.sensitive_domain.size(), 0);
        for (const auto& row : bucket) ++counts[static_cast<size_t>(row.sensitive)];
        size_t majority = 0, nonzero = 0;
        for (size_t i = 0; i < counts.size(); ++i) {
          if (counts[i] > 0) ++nonzero;
          if (counts[i] > counts[majority]) majority = i;
        }
        single_class = nonzero <= 1;
        if (single_class) {
          am.constant = true;
          am.constant_value = majority;
        } else {
          std::vector<FeatureVector> rows;
          std::vector<int> labels;
          rows.reserve(bucket.size());
          for (const auto& row : bucket) {
            rows.push_back(detail::cmmia_feature_row(c, row, tables.m()));
            labels.push_back(row.sensitive);
          }
          am.tree = grow_decision_tree(rows, labels,
                                       bank.case_specs[static_cast<size_t>(c - 1)],
                                       static_cast<int>(tables.sensitive_domain.size()),
                                       params);
        }
      }
      bank.models.push_back(std::move(am));
    }
  }
  return bank;
}

inline AttackPrediction cmmia_record(const Schema& schema, const RecordKnowledge& know,
                                     PredictionOracle& oracle, const CmmiaBank& bank) {
  std::vector<PredictionResponse> rs = detail::query_candidates(schema, know, oracle);
  CaseOutcome o = csmia_decide(rs, know.true_label);
  CmmiaTables::Row row = detail::make_cmmia_row(o.case_tag, rs, know.true_label,
                                                bank.target_labels);
  size_t label_idx = schema.target().domain_index(know.true_label);
  size_t choice = bank.predict(o.case_tag, label_idx, row);
  AttackPrediction p;
  p.predicted = bank.sensitive_domain[choice];
  p.case_tag = o.case_tag;
  p.queries = rs.size();
  p.aux.reserve(rs.size());
  for (const auto& r : rs) p.aux.push_back(r.confidence);
  return p;
}

inline std::vector<AttackPrediction> cmmia_attack(const Dataset& targets,
                                                  const CmmiaBank& bank,
                                                  PredictionOracle& oracle, int workers = 1) {
  return detail::per_record(targets, workers, [&](size_t i) {
    return cmmia_record(targets.schema, knowledge_for(targets, i), oracle, bank);
  });
}

// ---------------------------------------------------------------------------
// Partial-knowledge CSMIA: one or two non-sensitive attributes are unknown;
// each candidate is queried over the full cross-product of their domains and
// judged by its number of correct predictions.

// Values an unknown attribute is swept over: the categorical domain, the
// schema's explicit numeric levels, or an evenly spaced fallback grid.
inline std::vector<Cell> attribute_sweep_values(const Attribute& a, int numeric_grid = 10) {
  std::vector<Cell> out;
  if (a.kind == AttrKind::categorical) {
    for (const auto& v : a.domain) out.push_back(Cell::text(v));
    return out;
  }
  if (!a.levels.empty()) {
    for (double v : a.levels) out.push_back(Cell::number(v));
    return out;
  }
  int n = std::max(2, numeric_grid);
  for (int i = 0; i < n; ++i)
    out.push_back(Cell::number(a.min + (a.max - a.min) * i / (n - 1)));
  return out;
}

inline AttackPrediction csmia_partial_record(const Schema& schema,
                                             const RecordKnowledge& know,
                                             PredictionOracle& oracle,
                                             int numeric_grid = 10) {
  if (know.unknown.size() > 2)
    fail("partial-knowledge attack supports at most 2 unknown attributes, got ",
         know.unknown.size());
  const Attribute& sens = schema.sensitive();
  std::vector<const Attribute*> unknown_attrs;
  for (const auto& name : know.unknown) {
    auto idx = schema.index_of(name);
    if (!idx) fail("unknown attribute '", name, "' is absent from the schema");
    const Attribute& a = schema.at(*idx);
    if (a.role == AttrRole::sensitive)
      fail("the sensitive attribute cannot be in the unknown set");
    if (a.role == AttrRole::target_label)
      fail("the target label cannot be in the unknown set");
    if (a.role == AttrRole::dropped)
      fail("dropped attribute '", name, "' is not a model input");
    unknown_attrs.push_back(&a);
  }
  std::vector<std::vector<Cell>> grids;
  for (const Attribute* a : unknown_attrs)
    grids.push_back(attribute_sweep_values(*a, numeric_grid));

  // Cross-product assignments of the unknown attributes (a single empty
  // assignment when nothing is unknown, collapsing to plain CSMIA).
  std::vector<std::vector<Cell>> combos{{}};
  for (const auto& grid : grids) {
    std::vector<std::vector<Cell>> next;
    for (const auto& combo : combos)
      for (const auto& cell : grid) {
        auto ext = combo;
        ext.push_back(cell);
        next.push_back(std::move(ext));
      }
    combos = std::move(next);
  }

  size_t k = sens.domain.size();
  std::vector<int64_t> correct(k, 0);
  std::vector<double> conf_correct(k, 0.0), conf_all(k, 0.0);
  uint64_t queries = 0;
  AttributeMap attrs = know.known;
  for (size_t i = 0; i < k; ++i) {
    attrs[sens.name] = Cell::text(sens.domain[i]);
    for (const auto& combo : combos) {
      for (size_t u = 0; u < combo.size(); ++u)
        attrs[unknown_attrs[u]->name] = combo[u];
      PredictionResponse r = oracle.query(attrs);
      ++queries;
      conf_all[i] += r.confidence;
      if (r.label == know.true_label) {
        ++correct[i];
        conf_correct[i] += r.confidence;
      }
    }
  }

  bool all_equal = true;
  for (size_t i = 1; i < k; ++i)
    if (correct[i] != correct[0]) all_equal = false;

  AttackPrediction p;
  p.queries = queries;
  p.aux.assign(correct.begin(), correct.end());
  size_t best = 0;
  if (!all_equal) {
    p.case_tag = 1;
    for (size_t i = 1; i < k; ++i)
      if (correct[i] > correct[best]) best = i;
  } else if (correct[0] > 0) {
    p.case_tag = 2;
    for (size_t i = 1; i < k; ++i)
      if (conf_correct[i] > conf_correct[best]) best = i;
  } else {
    p.case_tag = 3;
    for (size_t i = 1; i < k; ++i)
      if (conf_all[i] < conf_all[best]) best = i;
  }
  p.predicted = sens.domain[best];
  return p;
}

inline std::vector<AttackPrediction> csmia_partial(const Dataset& targets,
                                                   const std::vector<std::string>& unknown,
                                                   PredictionOracle& oracle, int workers = 1,
                                                   int numeric_grid = 10) {
  return detail::per_record(targets, workers, [&](size_t i) {
    return csmia_partial_record(targets.schema, knowledge_for(targets, i, unknown), oracle,
                                numeric_grid);
  });
}

}  // namespace miai
