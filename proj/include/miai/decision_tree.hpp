#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include <json.hpp>

#include "miai/common.hpp"
#include "miai/feature.hpp"

namespace miai {

struct TreeParams {
  int max_depth = 12;
  int min_leaf_count = 5;
};

// CART-style classification tree: Gini impurity, categorical splits by
// subset membership, numeric splits by threshold. Leaves keep raw class
// counts; scores are Laplace-smoothed leaf frequencies, so every class score
// is strictly inside (0, 1) and the vector sums to exactly 1.
class DecisionTree {
 public:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::vector<uint8_t> goes_left;  // categorical: per domain index
    int left = -1, right = -1;
    bool unknown_goes_left = true;  // routing for values unseen at this split
    std::vector<int64_t> class_counts;
  };

  std::vector<Node> nodes;  // nodes[0] is the root; empty means untrained
  int n_classes = 0;

  bool trained() const { return !nodes.empty(); }

  size_t leaf_for(const FeatureVector& row, const std::vector<FeatureSpec>& specs) const {
    size_t at = 0;
    for (;;) {
      const Node& n = nodes[at];
      if (n.feature < 0) return at;
      double v = row[static_cast<size_t>(n.feature)];
      bool left;
      if (specs[static_cast<size_t>(n.feature)].kind == AttrKind::numeric) {
        left = v <= n.threshold;
      } else if (v < 0.0 || static_cast<size_t>(v) >= n.goes_left.size()) {
        left = n.unknown_goes_left;
      } else {
        left = n.goes_left[static_cast<size_t>(v)] != 0;
      }
      at = static_cast<size_t>(left ? n.left : n.right);
    }
  }

  // Laplace-smoothed class scores of the leaf this row lands in.
  std::vector<double> scores(const FeatureVector& row,
                             const std::vector<FeatureSpec>& specs) const {
    const Node& leaf = nodes[leaf_for(row, specs)];
    int64_t total = 0;
    for (int64_t c : leaf.class_counts) total += c;
    std::vector<double> s(leaf.class_counts.size());
    for (size_t c = 0; c < s.size(); ++c)
      s[c] = static_cast<double>(leaf.class_counts[c] + 1) /
             static_cast<double>(total + static_cast<int64_t>(s.size()));
    return s;
  }

  nlohmann::json to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& n : nodes) {
      nlohmann::json j;
      j["feature"] = n.feature;
      if (n.feature >= 0) {
        j["left"] = n.left;
        j["right"] = n.right;
        j["unknown_goes_left"] = n.unknown_goes_left;
        if (!n.goes_left.empty()) j["goes_left"] = n.goes_left;
        else j["threshold"] = n.threshold;
      }
      j["class_counts"] = n.class_counts;
      arr.push_back(std::move(j));
    }
    return nlohmann::json{{"n_classes", n_classes}, {"nodes", arr}};
  }

  static DecisionTree from_json(const nlohmann::json& doc) {
    DecisionTree t;
    t.n_classes = doc.at("n_classes").get<int>();
    for (const auto& j : doc.at("nodes")) {
      Node n;
      n.feature = j.at("feature").get<int>();
      if (n.feature >= 0) {
        n.left = j.at("left").get<int>();
        n.right = j.at("right").get<int>();
        n.unknown_goes_left = j.at("unknown_goes_left").get<bool>();
        if (j.contains("goes_left")) n.goes_left = j["goes_left"].get<std::vector<uint8_t>>();
        else n.threshold = j.at("threshold").get<double>();
      }
      n.class_counts = j.at("class_counts").get<std::vector<int64_t>>();
      t.nodes.push_back(std::move(n));
    }
    return t;
  }
};

namespace detail {

inline double gini(const std::vector<int64_t>& counts, int64_t total) {
  if (total == 0) return 0.0;
  double g = 1.0;
  for (int64_t c : counts) {
    double p = static_cast<double>(c) / static_cast<double>(total);
    g -= p * p;
  }
  return g;
}

struct SplitChoice {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  std::vector<uint8_t> goes_left;
  bool unknown_goes_left = true;
  double weighted_impurity = std::numeric_limits<double>::infinity();
};

class TreeBuilder {
 public:
  TreeBuilder(const std::vector<FeatureVector>& rows, const std::vector<int>& labels,
              const std::vector<FeatureSpec>& specs, int n_classes, TreeParams params)
      : rows_(rows), labels_(labels), specs_(specs), n_classes_(n_classes), params_(params) {}

  DecisionTree build() {
    DecisionTree t;
    t.n_classes = n_classes_;
    std::vector<size_t> all(rows_.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = i;
    grow(t, all, 0);
    return t;
  }

 private:
  std::vector<int64_t> count(const std::vector<size_t>& idx) const {
    std::vector<int64_t> c(static_cast<size_t>(n_classes_), 0);
    for (size_t i : idx) ++c[static_cast<size_t>(labels_[i])];
    return c;
  }

  int grow(DecisionTree& t, const std::vector<size_t>& idx, int depth) {
    int node_id = static_cast<int>(t.nodes.size());
    t.nodes.emplace_back();
    t.nodes[static_cast<size_t>(node_id)].class_counts = count(idx);

    const auto& counts = t.nodes[static_cast<size_t>(node_id)].class_counts;
    int64_t total = static_cast<int64_t>(idx.size());
    bool pure = false;
    for (int64_t c : counts)
      if (c == total) pure = true;
    if (pure || depth >= params_.max_depth ||
        total < 2 * static_cast<int64_t>(params_.min_leaf_count))
      return node_id;

    // Split whenever a legal candidate exists; zero-gain splits are allowed
    // (an XOR-style node needs one before any impurity decrease shows up).
    SplitChoice best = best_split(idx);
    if (!best.found) return node_id;

    std::vector<size_t> left_idx, right_idx;
    for (size_t i : idx)
      (route_left(best, rows_[i][static_cast<size_t>(best.feature)]) ? left_idx : right_idx)
          .push_back(i);

    int left = grow(t, left_idx, depth + 1);
    int right = grow(t, right_idx, depth + 1);
    Node& n = t.nodes[static_cast<size_t>(node_id)];
    n.feature = best.feature;
    n.threshold = best.threshold;
    n.goes_left = std::move(best.goes_left);
    n.unknown_goes_left = left_idx.size() >= right_idx.size();
    n.left = left;
    n.right = right;
    return node_id;
  }

  using Node = DecisionTree::Node;

  bool route_left(const SplitChoice& s, double v) const {
    if (specs_[static_cast<size_t>(s.feature)].kind == AttrKind::numeric)
      return v <= s.threshold;
    if (v < 0.0 || static_cast<size_t>(v) >= s.goes_left.size()) return s.unknown_goes_left;
    return s.goes_left[static_cast<size_t>(v)] != 0;
  }

  SplitChoice best_split(const std::vector<size_t>& idx) const {
    SplitChoice best;
    for (size_t f = 0; f < specs_.size(); ++f) {
      if (specs_[f].kind == AttrKind::numeric)
        numeric_split(idx, f, best);
      else
        categorical_split(idx, f, best);
    }
    return best;
  }

  void numeric_split(const std::vector<size_t>& idx, size_t f, SplitChoice& best) const {
    std::vector<std::pair<double, int>> vals;
    vals.reserve(idx.size());
    for (size_t i : idx) vals.emplace_back(rows_[i][f], labels_[i]);
    std::sort(vals.begin(), vals.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::vector<int64_t> left(static_cast<size_t>(n_classes_), 0);
    std::vector<int64_t> right(static_cast<size_t>(n_classes_), 0);
    for (const auto& [v, y] : vals) ++right[static_cast<size_t>(y)];
    int64_t n = static_cast<int64_t>(vals.size());
    int64_t nl = 0;
    for (size_t i = 0; i + 1 < vals.size(); ++i) {
      ++left[static_cast<size_t>(vals[i].second)];
      --right[static_cast<size_t>(vals[i].second)];
      ++nl;
      if (vals[i].first == vals[i + 1].first) continue;
      int64_t nr = n - nl;
      if (nl < params_.min_leaf_count || nr < params_.min_leaf_count) continue;
      double w = static_cast<double>(nl) * gini(left, nl) +
                 static_cast<double>(nr) * gini(right, nr);
      if (w < best.weighted_impurity) {
        best.found = true;
        best.feature = static_cast<int>(f);
        best.threshold = vals[i].first + (vals[i + 1].first - vals[i].first) / 2.0;
        best.goes_left.clear();
        best.weighted_impurity = w;
      }
    }
  }

  void categorical_split(const std::vector<size_t>& idx, size_t f, SplitChoice& best) const {
    size_t domain = specs_[f].domain.size();
    if (domain < 2) return;
    // counts[cat][class], plus a bucket for unknown values
    std::vector<std::vector<int64_t>> counts(domain + 1,
                                             std::vector<int64_t>(static_cast<size_t>(n_classes_), 0));
    std::vector<int64_t> cat_total(domain + 1, 0);
    for (size_t i : idx) {
      double v = rows_[i][f];
      size_t cat = (v < 0.0 || static_cast<size_t>(v) >= domain) ? domain
                                                                 : static_cast<size_t>(v);
      ++counts[cat][static_cast<size_t>(labels_[i])];
      ++cat_total[cat];
    }
    std::vector<size_t> present;
    for (size_t c = 0; c < domain; ++c)
      if (cat_total[c] > 0) present.push_back(c);
    if (present.size() < 2) return;

    std::vector<int64_t> total = counts[domain];
    int64_t n = cat_total[domain];
    for (size_t c : present) {
      for (int y = 0; y < n_classes_; ++y) total[static_cast<size_t>(y)] += counts[c][static_cast<size_t>(y)];
      n += cat_total[c];
    }

    auto consider = [&](const std::vector<uint8_t>& member) {
      std::vector<int64_t> left(static_cast<size_t>(n_classes_), 0);
      int64_t nl = 0;
      for (size_t c : present) {
        if (!member[c]) continue;
        for (int y = 0; y < n_classes_; ++y) left[static_cast<size_t>(y)] += counts[c][static_cast<size_t>(y)];
        nl += cat_total[c];
      }
      int64_t nr = n - nl;
      if (nl < params_.min_leaf_count || nr < params_.min_leaf_count) return;
      std::vector<int64_t> right(static_cast<size_t>(n_classes_), 0);
      for (int y = 0; y < n_classes_; ++y)
        right[static_cast<size_t>(y)] = total[static_cast<size_t>(y)] - left[static_cast<size_t>(y)];
      double w = static_cast<double>(nl) * gini(left, nl) +
                 static_cast<double>(nr) * gini(right, nr);
      if (w < best.weighted_impurity) {
        best.found = true;
        best.feature = static_cast<int>(f);
        best.threshold = 0.0;
        best.goes_left = member;
        best.weighted_impurity = w;
      }
    };

    std::vector<uint8_t> member(domain, 0);
    if (n_classes_ == 2 || present.size() > 8) {
      // Order categories along a one-dimensional score and scan prefixes.
      // For two classes this finds the Gini-optimal subset; otherwise it is
      // the usual heuristic ordering by the node's majority class share.
      size_t ref = 0;
      int64_t ref_count = -1;
      for (size_t y = 0; y < static_cast<size_t>(n_classes_); ++y)
        if (total[y] > ref_count) ref_count = total[y], ref = y;
      if (n_classes_ == 2) ref = 1;
      std::vector<std::pair<double, size_t>> order;
      for (size_t c : present)
        order.emplace_back(static_cast<double>(counts[c][ref]) /
                               static_cast<double>(cat_total[c]),
                           c);
      std::sort(order.begin(), order.end());
      for (size_t p = 0; p + 1 < order.size(); ++p) {
        member[order[p].second] = 1;
        consider(member);
      }
    } else {
      // Exact subset enumeration; the first present category is pinned to
      // the left side to avoid mirrored duplicates.
      size_t bits = present.size() - 1;
      for (uint64_t mask = 0; mask < (1ULL << bits); ++mask) {
        std::fill(member.begin(), member.end(), 0);
        member[present[0]] = 1;
        for (size_t b = 0; b < bits; ++b)
          if (mask & (1ULL << b)) member[present[b + 1]] = 1;
        consider(member);
      }
    }
  }

  const std::vector<FeatureVector>& rows_;
  const std::vector<int>& labels_;
  const std::vector<FeatureSpec>& specs_;
  int n_classes_;
  TreeParams params_;
};

}  // namespace detail

inline DecisionTree grow_decision_tree(const std::vector<FeatureVector>& rows,
                                       const std::vector<int>& labels,
                                       const std::vector<FeatureSpec>& specs, int n_classes,
                                       TreeParams params = {}) {
  if (rows.empty()) fail("cannot train a decision tree on an empty dataset");
  if (rows.size() != labels.size()) fail("rows and labels disagree in size");
  return detail::TreeBuilder(rows, labels, specs, n_classes, params).build();
}

// Normalized total Gini-impurity decrease per feature; all zeros for a
// depth-0 tree.
inline std::vector<double> gini_importance(const DecisionTree& t, size_t n_features) {
  std::vector<double> imp(n_features, 0.0);
  if (t.nodes.empty()) return imp;
  auto total_of = [](const DecisionTree::Node& n) {
    int64_t s = 0;
    for (int64_t c : n.class_counts) s += c;
    return s;
  };
  double root_total = static_cast<double>(total_of(t.nodes[0]));
  for (const auto& n : t.nodes) {
    if (n.feature < 0) continue;
    const auto& l = t.nodes[static_cast<size_t>(n.left)];
    const auto& r = t.nodes[static_cast<size_t>(n.right)];
    int64_t nt = total_of(n), nl = total_of(l), nr = total_of(r);
    double decrease = static_cast<double>(nt) * detail::gini(n.class_counts, nt) -
                      static_cast<double>(nl) * detail::gini(l.class_counts, nl) -
                      static_cast<double>(nr) * detail::gini(r.class_counts, nr);
    imp[static_cast<size_t>(n.feature)] += decrease / root_total;
  }
  double sum = 0.0;
  for (double v : imp) sum += v;
  if (sum > 0.0)
    for (double& v : imp) v /= sum;
  return imp;
}

}  // namespace miai
