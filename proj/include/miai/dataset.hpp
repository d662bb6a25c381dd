#pragma once

#include <cctype>
#include <charconv>
#include <fstream>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "miai/common.hpp"
#include "miai/schema.hpp"

namespace miai {

// One row, dense in schema order.
struct Record {
  std::vector<Cell> values;

  const Cell& at(size_t i) const { return values.at(i); }
};

enum class Provenance { raw, adversary, training };

inline std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::raw: return "raw";
    case Provenance::adversary: return "DS_A";
    case Provenance::training: return "DS_T";
  }
  return "raw";
}

// Immutable after construction; safe to share across readers.
struct Dataset {
  Schema schema;
  std::vector<Record> records;
  Provenance provenance = Provenance::raw;

  size_t size() const { return records.size(); }

  const std::string& sensitive_value(size_t row) const {
    return records[row].at(schema.sensitive_index()).as_text();
  }
  const std::string& label(size_t row) const {
    return records[row].at(schema.target_index()).as_text();
  }

  // Empirical distribution of the sensitive attribute, in domain order.
  std::vector<double> sensitive_priors() const {
    std::vector<double> p(schema.k(), 0.0);
    for (const auto& r : records) {
      size_t i = schema.sensitive().domain_index(r.at(schema.sensitive_index()).as_text());
      if (i < p.size()) p[i] += 1.0;
    }
    double n = static_cast<double>(records.size());
    if (n > 0)
      for (auto& v : p) v /= n;
    return p;
  }
};

namespace csv {

// Comma-separated with optional double-quote quoting; surrounding whitespace
// is trimmed (the canonical Adult export pads cells with a space).
inline std::vector<std::string> parse_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  for (auto& f : out) {
    size_t b = f.find_first_not_of(" \t");
    size_t e = f.find_last_not_of(" \t");
    f = (b == std::string::npos) ? "" : f.substr(b, e - b + 1);
  }
  return out;
}

inline std::string escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

}  // namespace csv

// Reads a header-first CSV against a schema. Header must list the schema's
// attribute names (any order); cells that violate the attribute typing are
// an error naming the row and column.
inline Dataset load_csv(const std::string& path, const Schema& schema) {
  std::ifstream in(path);
  if (!in) fail("cannot open CSV file '", path, "'");
  std::string line;
  if (!std::getline(in, line)) fail("CSV file '", path, "' is empty");
  auto header = csv::parse_line(line);
  if (header.size() != schema.size())
    fail("CSV header of '", path, "' has ", header.size(), " columns, schema expects ",
         schema.size());
  std::vector<size_t> col_to_attr(header.size());
  for (size_t c = 0; c < header.size(); ++c) {
    auto idx = schema.index_of(header[c]);
    if (!idx)
      fail("CSV header column '", header[c], "' does not match any schema attribute");
    col_to_attr[c] = *idx;
  }

  Dataset d;
  d.schema = schema;
  size_t row = 1;  // 1-based data row index, header excluded
  while (std::getline(in, line)) {
    if (line.empty() && in.eof()) break;
    auto fields = csv::parse_line(line);
    if (fields.size() != header.size())
      fail("row ", row, " of '", path, "' has ", fields.size(), " cells, expected ",
           header.size());
    Record r;
    r.values.resize(schema.size());
    for (size_t c = 0; c < fields.size(); ++c) {
      const Attribute& a = schema.at(col_to_attr[c]);
      const std::string& f = fields[c];
      Cell cell;
      if (schema.is_missing_token(f)) {
        cell = Cell::missing();
      } else if (a.kind == AttrKind::numeric) {
        double v = 0.0;
        auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
        if (ec != std::errc{} || p != f.data() + f.size() || !std::isfinite(v))
          fail("row ", row, ", column '", a.name, "': cannot parse '", f, "' as a number");
        cell = Cell::number(v);
      } else {
        if (a.domain_index(f) == a.domain.size())
          fail("row ", row, ", column '", a.name, "': value '", f,
               "' is not in the attribute domain");
        cell = Cell::text(f);
      }
      r.values[col_to_attr[c]] = std::move(cell);
    }
    d.records.push_back(std::move(r));
    ++row;
  }
  return d;
}

inline void save_csv(const Dataset& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail("cannot write CSV file '", path, "'");
  for (size_t i = 0; i < d.schema.size(); ++i)
    out << (i ? "," : "") << csv::escape(d.schema.at(i).name);
  out << "\n";
  for (const auto& r : d.records) {
    for (size_t i = 0; i < d.schema.size(); ++i) {
      if (i) out << ",";
      const Cell& c = r.values[i];
      out << (c.is_missing() ? "?" : csv::escape(c.to_string()));
    }
    out << "\n";
  }
}

namespace detail {

inline Attribute replace_domain(Attribute a, std::vector<std::string> domain) {
  a.domain = std::move(domain);
  return a;
}

}  // namespace detail

// GSS marital-happiness task. Drops records missing the sensitive answer or
// the target label, normalizes the sensitive attribute to {yes, no}, and maps
// remaining missing categorical cells to an explicit "NA" category. Rows with
// missing numeric cells are removed (no imputation).
inline Dataset preprocess_gss(const Dataset& raw) {
  const Schema& s = raw.schema;
  const Attribute& sens = s.sensitive();
  const Attribute& targ = s.target();
  if (sens.name != "xmovie")
    fail("GSS preprocessing expects the sensitive attribute 'xmovie', got '", sens.name, "'");
  if (targ.name != "hapmar")
    fail("GSS preprocessing expects the target attribute 'hapmar', got '", targ.name, "'");

  auto normalize_yes_no = [](std::string v) {
    for (auto& ch : v) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return v;
  };

  std::vector<Attribute> attrs = s.attributes();
  size_t sens_idx = s.sensitive_index();
  attrs[sens_idx].domain = {"yes", "no"};
  for (auto& a : attrs) {
    if (a.kind == AttrKind::categorical && a.role == AttrRole::feature &&
        a.domain_index("NA") == a.domain.size())
      a.domain.push_back("NA");
  }
  Schema out_schema(attrs, s.missing_values());

  Dataset out;
  out.schema = out_schema;
  out.provenance = Provenance::raw;
  for (const auto& r : raw.records) {
    if (r.at(sens_idx).is_missing() || r.at(s.target_index()).is_missing()) continue;
    Record nr = r;
    std::string v = normalize_yes_no(nr.values[sens_idx].as_text());
    if (v != "yes" && v != "no")
      fail("GSS sensitive value '", nr.values[sens_idx].as_text(), "' is not a yes/no answer");
    nr.values[sens_idx] = Cell::text(v);
    bool keep = true;
    for (size_t i = 0; i < attrs.size() && keep; ++i) {
      if (!nr.values[i].is_missing()) continue;
      if (attrs[i].role == AttrRole::dropped) continue;
      if (attrs[i].kind == AttrKind::categorical)
        nr.values[i] = Cell::text("NA");
      else
        keep = false;
    }
    if (keep) out.records.push_back(std::move(nr));
  }
  return out;
}

// Adult / Census-Income task. Merges the 7-level marital-status attribute
// into {Married, Single}, marks the relationship attribute as dropped, and
// removes every record that still has a missing value.
inline Dataset preprocess_adult(const Dataset& raw) {
  const Schema& s = raw.schema;
  const Attribute& sens = s.sensitive();
  if (sens.name != "marital-status")
    fail("Adult preprocessing expects the sensitive attribute 'marital-status', got '",
         sens.name, "'");
  if (s.target().name != "income")
    fail("Adult preprocessing expects the target attribute 'income', got '",
         s.target().name, "'");

  auto merge = [](const std::string& v) -> std::string {
    if (v == "Married-civ-spouse" || v == "Married-spouse-absent" ||
        v == "Married-AF-spouse" || v == "Married")
      return "Married";
    if (v == "Divorced" || v == "Never-married" || v == "Separated" || v == "Widowed" ||
        v == "Single")
      return "Single";
    fail("marital-status value '", v, "' is not in either cluster");
  };

  std::vector<Attribute> attrs = s.attributes();
  size_t sens_idx = s.sensitive_index();
  attrs[sens_idx].domain = {"Married", "Single"};
  for (auto& a : attrs)
    if (a.name == "relationship") a.role = AttrRole::dropped;
  Schema out_schema(attrs, s.missing_values());

  Dataset out;
  out.schema = out_schema;
  out.provenance = Provenance::raw;
  for (const auto& r : raw.records) {
    bool complete = true;
    for (size_t i = 0; i < attrs.size(); ++i) {
      if (attrs[i].role == AttrRole::dropped) continue;
      if (r.at(i).is_missing()) {
        complete = false;
        break;
      }
    }
    if (!complete) continue;
    Record nr = r;
    nr.values[sens_idx] = Cell::text(merge(nr.values[sens_idx].as_text()));
    out.records.push_back(std::move(nr));
  }
  return out;
}

// Seeded uniform disjoint split into (DS_A, DS_T). Record identity is the row
// index in the input, so DS_A and DS_T together are a permutation-free
// partition of the input rows (original order kept within each side).
inline std::pair<Dataset, Dataset> split(const Dataset& d, size_t n_adversary, uint64_t seed) {
  if (n_adversary == 0 || n_adversary >= d.size())
    fail("adversary split size ", n_adversary, " must be in (0, ", d.size(), ")");
  std::vector<size_t> idx(d.size());
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  rng.shuffle(idx);
  std::vector<bool> in_a(d.size(), false);
  for (size_t i = 0; i < n_adversary; ++i) in_a[idx[i]] = true;

  Dataset a, t;
  a.schema = d.schema;
  t.schema = d.schema;
  a.provenance = Provenance::adversary;
  t.provenance = Provenance::training;
  for (size_t i = 0; i < d.size(); ++i)
    (in_a[i] ? a : t).records.push_back(d.records[i]);
  return {std::move(a), std::move(t)};
}

}  // namespace miai
