#pragma once

#include <algorithm>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "miai/common.hpp"

namespace miai {

enum class AttrKind { categorical, numeric };
enum class AttrRole { feature, sensitive, target_label, dropped };

inline std::string to_string(AttrKind k) {
  return k == AttrKind::categorical ? "categorical" : "numeric";
}
inline std::string to_string(AttrRole r) {
  switch (r) {
    case AttrRole::feature: return "feature";
    case AttrRole::sensitive: return "sensitive";
    case AttrRole::target_label: return "target-label";
    case AttrRole::dropped: return "dropped";
  }
  return "feature";
}

struct Attribute {
  std::string name;
  AttrKind kind = AttrKind::categorical;
  AttrRole role = AttrRole::feature;
  // Categorical domain, in a fixed order. Attack enumeration (k, u, v) and
  // tie-breaking depend on this order, so it is part of the schema document,
  // never inferred from data.
  std::vector<std::string> domain;
  // Numeric range, descriptive.
  double min = 0.0;
  double max = 0.0;
  // Optional explicit value grid for a numeric attribute, used when the
  // attribute is swept as an unknown in partial-knowledge attacks.
  std::vector<double> levels;

  size_t domain_index(const std::string& v) const {
    auto it = std::find(domain.begin(), domain.end(), v);
    return it == domain.end() ? domain.size() : static_cast<size_t>(it - domain.begin());
  }
};

// Typed description of one tabular dataset. Exactly one attribute is the
// sensitive attribute and exactly one is the target label.
class Schema {
 public:
  Schema() = default;

  explicit Schema(std::vector<Attribute> attrs,
                  std::vector<std::string> missing_values = {"", "?", "NA"})
      : attrs_(std::move(attrs)), missing_values_(std::move(missing_values)) {
    validate();
  }

  size_t size() const { return attrs_.size(); }
  const Attribute& at(size_t i) const { return attrs_.at(i); }
  const std::vector<Attribute>& attributes() const { return attrs_; }
  const std::vector<std::string>& missing_values() const { return missing_values_; }

  std::optional<size_t> index_of(const std::string& name) const {
    for (size_t i = 0; i < attrs_.size(); ++i)
      if (attrs_[i].name == name) return i;
    return std::nullopt;
  }

  size_t require_index(const std::string& name) const {
    auto i = index_of(name);
    if (!i) fail("schema has no attribute named '", name, "'");
    return *i;
  }

  size_t sensitive_index() const { return sensitive_; }
  size_t target_index() const { return target_; }
  const Attribute& sensitive() const { return attrs_[sensitive_]; }
  const Attribute& target() const { return attrs_[target_]; }

  // Number of candidate sensitive values.
  size_t k() const { return sensitive().domain.size(); }

  bool is_missing_token(const std::string& s) const {
    return std::find(missing_values_.begin(), missing_values_.end(), s) !=
           missing_values_.end();
  }

  // Attributes a trained model consumes, in schema order: features plus the
  // sensitive attribute, excluding the target label and dropped columns.
  std::vector<size_t> model_input_indices() const {
    std::vector<size_t> out;
    for (size_t i = 0; i < attrs_.size(); ++i)
      if (attrs_[i].role == AttrRole::feature || attrs_[i].role == AttrRole::sensitive)
        out.push_back(i);
    return out;
  }

  nlohmann::json to_json() const {
    nlohmann::json doc;
    doc["missing_values"] = missing_values_;
    doc["attributes"] = nlohmann::json::array();
    for (const auto& a : attrs_) {
      nlohmann::json j;
      j["name"] = a.name;
      j["kind"] = to_string(a.kind);
      j["role"] = to_string(a.role);
      if (a.kind == AttrKind::categorical) {
        j["domain"] = a.domain;
      } else {
        j["domain"] = {a.min, a.max};
        if (!a.levels.empty()) j["levels"] = a.levels;
      }
      doc["attributes"].push_back(std::move(j));
    }
    return doc;
  }

  static Schema from_json(const nlohmann::json& doc) {
    if (!doc.contains("attributes") || !doc["attributes"].is_array())
      fail("schema document lacks an 'attributes' array");
    std::vector<Attribute> attrs;
    for (const auto& j : doc["attributes"]) {
      Attribute a;
      a.name = j.at("name").get<std::string>();
      std::string kind = j.at("kind").get<std::string>();
      if (kind == "categorical") {
        a.kind = AttrKind::categorical;
        a.domain = j.at("domain").get<std::vector<std::string>>();
      } else if (kind == "numeric") {
        a.kind = AttrKind::numeric;
        auto range = j.at("domain").get<std::vector<double>>();
        if (range.size() != 2) fail("numeric domain of '", a.name, "' must be [min, max]");
        a.min = range[0];
        a.max = range[1];
        if (j.contains("levels")) a.levels = j["levels"].get<std::vector<double>>();
      } else {
        fail("attribute '", a.name, "' has unknown kind '", kind, "'");
      }
      std::string role = j.value("role", "feature");
      if (role == "feature") a.role = AttrRole::feature;
      else if (role == "sensitive") a.role = AttrRole::sensitive;
      else if (role == "target-label") a.role = AttrRole::target_label;
      else if (role == "dropped") a.role = AttrRole::dropped;
      else fail("attribute '", a.name, "' has unknown role '", role, "'");
      attrs.push_back(std::move(a));
    }
    std::vector<std::string> missing = {"", "?", "NA"};
    if (doc.contains("missing_values"))
      missing = doc["missing_values"].get<std::vector<std::string>>();
    return Schema(std::move(attrs), std::move(missing));
  }

  static Schema load(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open schema file '", path, "'");
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const std::exception& e) {
      fail("schema file '", path, "' is not valid JSON: ", e.what());
    }
    return from_json(doc);
  }

  void save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) fail("cannot write schema file '", path, "'");
    out << to_json().dump(2) << "\n";
  }

 private:
  void validate() {
    if (attrs_.empty()) fail("schema has no attributes");
    std::set<std::string> names;
    size_t n_sensitive = 0, n_target = 0;
    for (size_t i = 0; i < attrs_.size(); ++i) {
      const Attribute& a = attrs_[i];
      if (a.name.empty()) fail("schema attribute ", i, " has an empty name");
      if (!names.insert(a.name).second) fail("duplicate attribute name '", a.name, "'");
      if (a.kind == AttrKind::categorical) {
        if (a.domain.empty()) fail("categorical attribute '", a.name, "' has an empty domain");
        std::set<std::string> vals;
        for (const auto& v : a.domain) {
          if (v.empty()) fail("categorical attribute '", a.name, "' has an empty domain value");
          if (!vals.insert(v).second)
            fail("categorical attribute '", a.name, "' repeats domain value '", v, "'");
        }
      }
      if (a.role == AttrRole::sensitive) {
        ++n_sensitive;
        sensitive_ = i;
        if (a.kind != AttrKind::categorical)
          fail("sensitive attribute '", a.name, "' must be categorical");
        if (a.domain.size() < 2)
          fail("sensitive attribute '", a.name, "' needs at least 2 candidate values");
      }
      if (a.role == AttrRole::target_label) {
        ++n_target;
        target_ = i;
        if (a.kind != AttrKind::categorical)
          fail("target label '", a.name, "' must be categorical");
      }
    }
    if (n_sensitive != 1)
      fail("schema must designate exactly one sensitive attribute, found ", n_sensitive);
    if (n_target != 1)
      fail("schema must designate exactly one target label, found ", n_target);
  }

  std::vector<Attribute> attrs_;
  std::vector<std::string> missing_values_;
  size_t sensitive_ = 0;
  size_t target_ = 0;
};

}  // namespace miai
