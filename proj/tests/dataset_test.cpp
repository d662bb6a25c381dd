#include "miai/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#include <gtest/gtest.h>

#include "miai/datagen.hpp"

namespace miai {
namespace {

class TempFile {
 public:
  explicit TempFile(const std::string& content) {
    path_ = std::string(::testing::TempDir()) + "miai_csv_" +
            std::to_string(counter_++) + ".csv";
    std::ofstream out(path_);
    out << content;
  }
  ~TempFile() { std::remove(path_.c_str()); }
  const std::string& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  std::string path_;
};

Schema income_schema() {
  Attribute age;
  age.name = "age";
  age.kind = AttrKind::numeric;
  age.min = 0;
  age.max = 120;
  Attribute sens;
  sens.name = "member";
  sens.kind = AttrKind::categorical;
  sens.role = AttrRole::sensitive;
  sens.domain = {"yes", "no"};
  Attribute income;
  income.name = "income";
  income.kind = AttrKind::categorical;
  income.role = AttrRole::target_label;
  income.domain = {"<=50K", ">50K"};
  return Schema({age, sens, income});
}

TEST(LoadCsvTest, ParsesMatchingHeaderAndRows) {
  TempFile f("age,member,income\n31,yes,<=50K\n44,no,>50K\n52,no,<=50K\n");
  Dataset d = load_csv(f.path(), income_schema());
  ASSERT_EQ(d.size(), 3u);
  EXPECT_DOUBLE_EQ(d.records[0].at(0).as_number(), 31.0);
  EXPECT_EQ(d.records[1].at(1).as_text(), "no");
  EXPECT_EQ(d.label(2), "<=50K");
}

TEST(LoadCsvTest, ReportsRowAndColumnOnBadCell) {
  TempFile f("age,member,income\n31,yes,<=50K\n44,abc,>50K\n");
  try {
    load_csv(f.path(), income_schema());
    FAIL() << "expected an error";
  } catch (const Error& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("row 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("member"), std::string::npos) << msg;
  }
}

TEST(LoadCsvTest, ReportsNumericParseFailure) {
  TempFile f("age,member,income\nxx,yes,<=50K\n");
  EXPECT_THROW(load_csv(f.path(), income_schema()), Error);
}

TEST(LoadCsvTest, RejectsHeaderMismatch) {
  TempFile f("age,foo,income\n31,yes,<=50K\n");
  EXPECT_THROW(load_csv(f.path(), income_schema()), Error);
}

TEST(LoadCsvTest, MissingFileIsAnError) {
  EXPECT_THROW(load_csv("/nonexistent/nope.csv", income_schema()), Error);
}

TEST(LoadCsvTest, MissingTokensBecomeMissingCells) {
  TempFile f("age,member,income\n?,yes,<=50K\n31,,<=50K\n");
  Dataset d = load_csv(f.path(), income_schema());
  EXPECT_TRUE(d.records[0].at(0).is_missing());
  EXPECT_TRUE(d.records[1].at(1).is_missing());
}

TEST(SplitTest, DisjointExhaustiveAndSeeded) {
  Dataset d;
  d.schema = income_schema();
  for (int i = 0; i < 100; ++i) {
    Record r;
    r.values = {Cell::number(i), Cell::text(i % 3 ? "no" : "yes"),
                Cell::text(i % 2 ? ">50K" : "<=50K")};
    d.records.push_back(r);
  }
  auto [a1, t1] = split(d, 25, 7);
  EXPECT_EQ(a1.size(), 25u);
  EXPECT_EQ(t1.size(), 75u);
  EXPECT_EQ(a1.provenance, Provenance::adversary);
  EXPECT_EQ(t1.provenance, Provenance::training);

  std::multiset<double> all;
  for (const auto& r : a1.records) all.insert(r.at(0).as_number());
  for (const auto& r : t1.records) all.insert(r.at(0).as_number());
  EXPECT_EQ(all.size(), 100u);
  std::multiset<double> expected;
  for (const auto& r : d.records) expected.insert(r.at(0).as_number());
  EXPECT_EQ(all, expected);

  auto [a2, t2] = split(d, 25, 7);
  for (size_t i = 0; i < a1.size(); ++i)
    EXPECT_EQ(a1.records[i].at(0).as_number(), a2.records[i].at(0).as_number());

  auto [a3, t3] = split(d, 25, 8);
  bool differs = false;
  for (size_t i = 0; i < a1.size() && !differs; ++i)
    differs = a1.records[i].at(0).as_number() != a3.records[i].at(0).as_number();
  EXPECT_TRUE(differs);

  EXPECT_THROW(split(d, 0, 1), Error);
  EXPECT_THROW(split(d, 100, 1), Error);
}

TEST(PreprocessGssTest, DropsOnlyMissingSensitiveOrLabel) {
  Dataset raw;
  raw.schema = gss_schema();
  auto make = [&](Cell xmovie, Cell hapmar) {
    Record r;
    r.values.resize(raw.schema.size());
    for (size_t i = 0; i < raw.schema.size(); ++i) {
      const Attribute& a = raw.schema.at(i);
      r.values[i] = a.kind == AttrKind::numeric ? Cell::number(a.min)
                                                : Cell::text(a.domain[0]);
    }
    r.values[raw.schema.require_index("xmovie")] = std::move(xmovie);
    r.values[raw.schema.require_index("hapmar")] = std::move(hapmar);
    return r;
  };
  raw.records.push_back(make(Cell::text("yes"), Cell::text("very happy")));
  raw.records.push_back(make(Cell::missing(), Cell::text("very happy")));
  raw.records.push_back(make(Cell::text("no"), Cell::missing()));
  raw.records.push_back(make(Cell::missing(), Cell::missing()));
  raw.records.push_back(make(Cell::text("NO"), Cell::text("pretty happy")));

  Dataset clean = preprocess_gss(raw);
  ASSERT_EQ(clean.size(), 2u);
  EXPECT_EQ(clean.sensitive_value(0), "yes");
  EXPECT_EQ(clean.sensitive_value(1), "no");  // case-normalized
  EXPECT_EQ(clean.schema.sensitive().domain, (std::vector<std::string>{"yes", "no"}));
}

TEST(PreprocessGssTest, NoMissingValuesIsIdentity) {
  GssGenParams p = GssGenParams{}.scaled(0.01);
  Dataset raw = generate_gss_like(p);
  Dataset once = preprocess_gss(raw);
  Dataset twice = preprocess_gss(once);
  ASSERT_EQ(once.size(), twice.size());
  for (size_t i = 0; i < once.size(); ++i)
    for (size_t j = 0; j < once.schema.size(); ++j)
      EXPECT_TRUE(once.records[i].at(j) == twice.records[i].at(j));
}

TEST(PreprocessAdultTest, MergesClustersDropsRelationshipAndMissing) {
  Dataset raw;
  raw.schema = adult_schema();
  auto make = [&](const std::string& marital, bool punch_missing) {
    Record r;
    r.values.resize(raw.schema.size());
    for (size_t i = 0; i < raw.schema.size(); ++i) {
      const Attribute& a = raw.schema.at(i);
      r.values[i] = a.kind == AttrKind::numeric ? Cell::number(a.min)
                                                : Cell::text(a.domain[0]);
    }
    r.values[raw.schema.require_index("marital-status")] = Cell::text(marital);
    if (punch_missing)
      r.values[raw.schema.require_index("occupation")] = Cell::missing();
    return r;
  };
  raw.records.push_back(make("Married-AF-spouse", false));
  raw.records.push_back(make("Widowed", false));
  raw.records.push_back(make("Never-married", true));

  Dataset clean = preprocess_adult(raw);
  ASSERT_EQ(clean.size(), 2u);
  EXPECT_EQ(clean.sensitive_value(0), "Married");
  EXPECT_EQ(clean.sensitive_value(1), "Single");
  EXPECT_EQ(clean.schema.at(clean.schema.require_index("relationship")).role,
            AttrRole::dropped);
  EXPECT_EQ(clean.schema.sensitive().domain,
            (std::vector<std::string>{"Married", "Single"}));

  Dataset twice = preprocess_adult(clean);
  EXPECT_EQ(twice.size(), clean.size());
  EXPECT_EQ(twice.sensitive_value(0), "Married");
}

TEST(PreprocessTest, NoRemainingMissingValues) {
  Dataset raw = generate_adult_like(AdultGenParams{}.scaled(0.01));
  Dataset clean = preprocess_adult(raw);
  for (const auto& r : clean.records)
    for (size_t i = 0; i < clean.schema.size(); ++i)
      if (clean.schema.at(i).role != AttrRole::dropped)
        EXPECT_FALSE(r.at(i).is_missing());
}

TEST(CsvRoundTripTest, SaveThenLoadPreservesRecords) {
  Dataset d = generate_gss_like(GssGenParams{}.scaled(0.005));
  TempFile f("");
  save_csv(d, f.path());
  Dataset back = load_csv(f.path(), d.schema);
  ASSERT_EQ(back.size(), d.size());
  for (size_t i = 0; i < d.size(); ++i)
    for (size_t j = 0; j < d.schema.size(); ++j)
      EXPECT_TRUE(back.records[i].at(j) == d.records[i].at(j))
          << "record " << i << " attr " << j;
}

}  // namespace
}  // namespace miai
