#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include <json.hpp>

#include "miai/common.hpp"
#include "miai/dataset.hpp"

namespace miai {

// Model-facing description of one input column.
struct FeatureSpec {
  std::string name;
  AttrKind kind = AttrKind::categorical;
  std::vector<std::string> domain;  // categorical
  double lo = 0.0, hi = 1.0;        // numeric min-max statistics from training

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["name"] = name;
    j["kind"] = to_string(kind);
    if (kind == AttrKind::categorical) j["domain"] = domain;
    else j["range"] = {lo, hi};
    return j;
  }
  static FeatureSpec from_json(const nlohmann::json& j) {
    FeatureSpec f;
    f.name = j.at("name").get<std::string>();
    f.kind = j.at("kind").get<std::string>() == "numeric" ? AttrKind::numeric
                                                          : AttrKind::categorical;
    if (f.kind == AttrKind::categorical) {
      f.domain = j.at("domain").get<std::vector<std::string>>();
    } else {
      auto r = j.at("range").get<std::vector<double>>();
      f.lo = r.at(0);
      f.hi = r.at(1);
    }
    return f;
  }
};

// Resolved row: one slot per feature. Categorical slots hold the domain
// index (kUnknownCategory when the value was never seen); numeric slots hold
// the raw value.
using FeatureVector = std::vector<double>;
constexpr double kUnknownCategory = -1.0;

// Frozen mapping between raw attribute maps and model input rows. Built at
// train time; applied unchanged to every future query.
class FeatureCodec {
 public:
  FeatureCodec() = default;

  // Derive specs from the schema's model inputs; numeric ranges from data.
  static FeatureCodec fit(const Dataset& train) {
    FeatureCodec c;
    const Schema& s = train.schema;
    for (size_t i : s.model_input_indices()) {
      const Attribute& a = s.at(i);
      FeatureSpec f;
      f.name = a.name;
      f.kind = a.kind;
      if (a.kind == AttrKind::categorical) {
        f.domain = a.domain;
      } else {
        f.lo = f.hi = 0.0;
        bool first = true;
        for (const auto& r : train.records) {
          double v = r.at(i).as_number();
          if (first || v < f.lo) f.lo = v;
          if (first || v > f.hi) f.hi = v;
          first = false;
        }
        if (f.hi <= f.lo) f.hi = f.lo + 1.0;
      }
      c.specs_.push_back(std::move(f));
    }
    return c;
  }

  const std::vector<FeatureSpec>& specs() const { return specs_; }
  size_t size() const { return specs_.size(); }

  // Errors name the first missing attribute; unknown categorical values map
  // to kUnknownCategory, never an error once a model is trained.
  FeatureVector from_map(const AttributeMap& attrs) const {
    FeatureVector row(specs_.size());
    for (size_t i = 0; i < specs_.size(); ++i) {
      const FeatureSpec& f = specs_[i];
      auto it = attrs.find(f.name);
      if (it == attrs.end() || it->second.is_missing())
        fail("missing attribute: ", f.name);
      const Cell& c = it->second;
      if (f.kind == AttrKind::numeric) {
        if (!c.is_number()) fail("attribute '", f.name, "' must be numeric");
        row[i] = c.as_number();
      } else {
        if (!c.is_text()) fail("attribute '", f.name, "' must be categorical");
        size_t idx = 0;
        for (; idx < f.domain.size(); ++idx)
          if (f.domain[idx] == c.as_text()) break;
        row[i] = idx == f.domain.size() ? kUnknownCategory : static_cast<double>(idx);
      }
    }
    return row;
  }

  // Bulk path for records that already conform to the training schema.
  FeatureVector from_record(const Schema& schema, const Record& r) const {
    FeatureVector row(specs_.size());
    for (size_t i = 0; i < specs_.size(); ++i) {
      const FeatureSpec& f = specs_[i];
      const Cell& c = r.at(schema.require_index(f.name));
      if (f.kind == AttrKind::numeric) {
        row[i] = c.as_number();
      } else {
        size_t idx = 0;
        for (; idx < f.domain.size(); ++idx)
          if (f.domain[idx] == c.as_text()) break;
        row[i] = idx == f.domain.size() ? kUnknownCategory : static_cast<double>(idx);
      }
    }
    return row;
  }

  // One-hot categorical blocks (all-zero for unknown values) followed by
  // min-max scaled numerics, the neural net's input layout.
  std::vector<double> encode_dense(const FeatureVector& row) const {
    std::vector<double> out;
    out.reserve(dense_width());
    for (size_t i = 0; i < specs_.size(); ++i) {
      const FeatureSpec& f = specs_[i];
      if (f.kind == AttrKind::categorical) {
        size_t base = out.size();
        out.resize(base + f.domain.size(), 0.0);
        if (row[i] >= 0.0) out[base + static_cast<size_t>(row[i])] = 1.0;
      } else {
        double v = (row[i] - f.lo) / (f.hi - f.lo);
        out.push_back(std::clamp(v, 0.0, 1.0));
      }
    }
    return out;
  }

  size_t dense_width() const {
    size_t w = 0;
    for (const auto& f : specs_)
      w += f.kind == AttrKind::categorical ? f.domain.size() : 1;
    return w;
  }

  nlohmann::json to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& f : specs_) arr.push_back(f.to_json());
    return arr;
  }
  static FeatureCodec from_json(const nlohmann::json& arr) {
    FeatureCodec c;
    for (const auto& j : arr) c.specs_.push_back(FeatureSpec::from_json(j));
    return c;
  }

 private:
  std::vector<FeatureSpec> specs_;
};

}  // namespace miai
