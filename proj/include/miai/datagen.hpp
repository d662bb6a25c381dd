#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "miai/common.hpp"
#include "miai/dataset.hpp"
#include "miai/schema.hpp"

// Seeded synthetic stand-ins for the GSS and Adult extracts, shaped to the
// published record counts and marginals: raw sizes, post-preprocessing sizes,
// sensitive-value quotas (exact, by construction) and the Adult education-
// group married fractions. Feature correlations are plausible rather than
// survey-faithful; they exist so trained models carry real signal about the
// sensitive attribute.

namespace miai {

inline Schema adult_schema() {
  std::vector<Attribute> attrs;
  auto cat = [&](std::string name, std::vector<std::string> domain,
                 AttrRole role = AttrRole::feature) {
    Attribute a;
    a.name = std::move(name);
    a.kind = AttrKind::categorical;
    a.role = role;
    a.domain = std::move(domain);
    attrs.push_back(std::move(a));
  };
  auto num = [&](std::string name, double lo, double hi, std::vector<double> levels = {}) {
    Attribute a;
    a.name = std::move(name);
    a.kind = AttrKind::numeric;
    a.min = lo;
    a.max = hi;
    a.levels = std::move(levels);
    attrs.push_back(std::move(a));
  };
  num("age", 17, 90, {20, 26, 32, 38, 45, 52, 60, 72});
  cat("workclass", {"Private", "Self-emp-not-inc", "Self-emp-inc", "Federal-gov",
                    "Local-gov", "State-gov", "Without-pay", "Never-worked"});
  num("fnlwgt", 12285, 1484705, {60000, 120000, 180000, 240000, 320000, 450000});
  cat("education", {"Preschool", "1st-4th", "5th-6th", "7th-8th", "9th", "10th", "11th",
                    "12th", "HS-grad", "Some-college", "Assoc-voc", "Assoc-acdm",
                    "Bachelors", "Masters", "Prof-school", "Doctorate"});
  num("education-num", 1, 16, {2, 5, 8, 9, 10, 12, 13, 15});
  cat("marital-status", {"Married-civ-spouse", "Married-spouse-absent", "Married-AF-spouse",
                         "Divorced", "Never-married", "Separated", "Widowed",
                         // preprocessing merges to these two clusters
                         "Married", "Single"},
      AttrRole::sensitive);
  cat("occupation", {"Exec-managerial", "Prof-specialty", "Craft-repair", "Adm-clerical",
                     "Sales", "Other-service", "Machine-op-inspct", "Transport-moving",
                     "Handlers-cleaners", "Farming-fishing", "Tech-support",
                     "Protective-serv", "Priv-house-serv", "Armed-Forces"});
  cat("relationship", {"Husband", "Wife", "Not-in-family", "Own-child", "Unmarried",
                       "Other-relative"});
  cat("race", {"White", "Black", "Asian-Pac-Islander", "Amer-Indian-Eskimo", "Other"});
  cat("sex", {"Male", "Female"});
  num("capital-gain", 0, 99999, {0, 2000, 5000, 10000, 25000, 60000});
  num("capital-loss", 0, 4356, {0, 1000, 1500, 2000, 2500});
  num("hours-per-week", 1, 99, {15, 25, 35, 40, 45, 55, 65});
  cat("native-country",
      {"United-States", "Mexico", "Philippines", "Germany", "Canada", "Puerto-Rico",
       "El-Salvador", "India", "Cuba", "England", "China", "Jamaica", "South", "Italy",
       "Dominican-Republic", "Vietnam", "Guatemala", "Japan", "Poland", "Columbia",
       "Taiwan", "Haiti", "Iran", "Portugal", "Nicaragua", "Peru", "Greece", "France",
       "Ecuador", "Ireland", "Hong", "Cambodia", "Trinadad&Tobago", "Laos", "Thailand",
       "Yugoslavia", "Outlying-US(Guam-USVI-etc)", "Hungary", "Honduras", "Scotland",
       "Holand-Netherlands"});
  cat("income", {"<=50K", ">50K"}, AttrRole::target_label);
  return Schema(std::move(attrs));
}

inline Schema gss_schema() {
  std::vector<Attribute> attrs;
  auto cat = [&](std::string name, std::vector<std::string> domain,
                 AttrRole role = AttrRole::feature) {
    Attribute a;
    a.name = std::move(name);
    a.kind = AttrKind::categorical;
    a.role = role;
    a.domain = std::move(domain);
    attrs.push_back(std::move(a));
  };
  auto num = [&](std::string name, double lo, double hi, std::vector<double> levels = {}) {
    Attribute a;
    a.name = std::move(name);
    a.kind = AttrKind::numeric;
    a.min = lo;
    a.max = hi;
    a.levels = std::move(levels);
    attrs.push_back(std::move(a));
  };
  num("age", 18, 89, {22, 30, 38, 46, 54, 62, 74});
  cat("sex", {"male", "female"});
  cat("race", {"white", "black", "other"});
  num("educ", 0, 20, {6, 9, 12, 14, 16, 18});
  num("income-band", 1, 12, {2, 4, 6, 8, 10, 12});
  cat("wrkstat", {"working fulltime", "working parttime", "temporarily not working",
                  "unemployed", "retired", "in school", "keeping house", "other"});
  num("childs", 0, 8, {0, 1, 2, 3, 4, 6});
  num("attend", 0, 8, {0, 1, 2, 3, 4, 6, 8});
  num("tvhours", 0, 24, {0, 1, 2, 3, 4, 6, 10});
  cat("xmovie", {"yes", "no"}, AttrRole::sensitive);
  cat("hapmar", {"not too happy", "pretty happy", "very happy"}, AttrRole::target_label);
  return Schema(std::move(attrs));
}

struct AdultGenParams {
  uint64_t seed = 20210901;
  size_t n_raw = 48842;       // full export rows
  size_t n_missing = 3620;    // rows carrying a "?", removed by preprocessing
  // Post-preprocessing composition: education groups Edu1/Edu2/Edu3 with
  // exact married quotas per group (43.4% / 44.8% / 54.6%, 47.85% overall).
  std::array<size_t, 3> group_size = {5645, 24612, 14965};
  std::array<size_t, 3> group_married = {2449, 11027, 8163};

  // Shrink everything proportionally; handy for fast tests.
  AdultGenParams scaled(double f) const {
    AdultGenParams p = *this;
    auto s = [f](size_t v) { return static_cast<size_t>(std::llround(v * f)); };
    for (auto& v : p.group_size) v = s(v);
    for (auto& v : p.group_married) v = s(v);
    p.n_missing = s(n_missing);
    p.n_raw = p.group_size[0] + p.group_size[1] + p.group_size[2] + p.n_missing;
    return p;
  }
};

namespace detail {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline size_t pick_weighted(Rng& rng, const std::vector<double>& w) {
  double sum = 0.0;
  for (double v : w) sum += v;
  double r = rng.uniform() * sum;
  for (size_t i = 0; i < w.size(); ++i) {
    r -= w[i];
    if (r <= 0.0) return i;
  }
  return w.size() - 1;
}

inline double clamped_normal(Rng& rng, double mean, double sd, double lo, double hi) {
  return std::clamp(mean + sd * rng.normal(), lo, hi);
}

}  // namespace detail

// Raw (pre-preprocessing) Adult-like export. preprocess_adult() on the
// result yields exactly group_size records split per the quotas above.
inline Dataset generate_adult_like(const AdultGenParams& params = {}) {
  Schema schema = adult_schema();
  Rng rng(params.seed);

  struct Plan {
    int group = 0;       // 0..2, education cluster
    bool married = false;
    bool missing = false;
  };
  std::vector<Plan> plans;
  plans.reserve(params.n_raw);
  for (int g = 0; g < 3; ++g)
    for (size_t i = 0; i < params.group_size[static_cast<size_t>(g)]; ++i)
      plans.push_back({g, i < params.group_married[static_cast<size_t>(g)], false});
  size_t n_complete = plans.size();
  if (params.n_raw != n_complete + params.n_missing)
    fail("adult generator: n_raw must equal the group sizes plus the missing rows");
  for (size_t i = 0; i < params.n_missing; ++i) {
    Plan p;
    p.group = static_cast<int>(rng.bounded(3));
    p.married = rng.bernoulli(0.478);
    p.missing = true;
    plans.push_back(p);
  }
  rng.shuffle(plans);

  // education level distributions inside each cluster
  static const std::vector<std::vector<double>> kEduWeights = {
      {.013, .039, .079, .149, .118, .217, .283, .103},  // Preschool..12th
      {.59, .41},                                        // HS-grad, Some-college
      {.131, .102, .509, .168, .053, .038}};             // Assoc-voc..Doctorate
  static const std::array<int, 3> kEduBase = {0, 8, 10};

  static const std::vector<double> kWorkclass = {.695, .079, .035, .029, .064, .040, .004,
                                                 .004};
  static const std::vector<double> kRace = {.855, .096, .031, .010, .008};
  // occupation weights: lower- vs higher-education profiles
  static const std::vector<double> kOccLow = {.04, .03, .17, .12, .11, .14, .12, .09,
                                              .08, .05, .02, .02, .005, .005};
  static const std::vector<double> kOccHigh = {.22, .24, .07, .10, .11, .05, .03, .03,
                                               .02, .02, .06, .04, .005, .005};
  static const std::vector<double> kCountry = {.913, .020};  // rest spread uniformly

  Dataset d;
  d.schema = schema;
  d.provenance = Provenance::raw;
  d.records.reserve(plans.size());

  for (const Plan& plan : plans) {
    double age = plan.married ? detail::clamped_normal(rng, 44, 12, 17, 90)
                              : detail::clamped_normal(rng, 33, 13, 17, 90);
    age = std::floor(age);
    const auto& edu_w = kEduWeights[static_cast<size_t>(plan.group)];
    int edu_idx = kEduBase[static_cast<size_t>(plan.group)] +
                  static_cast<int>(detail::pick_weighted(rng, edu_w));
    int edu_num = edu_idx + 1;
    bool high_edu = plan.group == 2;
    bool male = rng.bernoulli(plan.married ? 0.75 : 0.61);
    double hours = detail::clamped_normal(
        rng, 40.0 + (high_edu ? 3.0 : 0.0) + (plan.married ? 2.0 : 0.0), 10.0, 1, 99);
    hours = std::floor(hours);
    bool cap_gain = rng.bernoulli(high_edu ? 0.10 : 0.05);
    double capital_gain = cap_gain ? std::floor(std::exp(rng.uniform(7.2, 10.5))) : 0.0;
    bool cap_loss = rng.bernoulli(0.047);
    double capital_loss = cap_loss ? std::floor(rng.uniform(1300, 2600)) : 0.0;
    size_t occupation =
        detail::pick_weighted(rng, high_edu ? kOccHigh : kOccLow);
    bool occ_high = occupation <= 1;  // Exec-managerial / Prof-specialty

    double w = -3.35 + 1.85 * (plan.married ? 1.0 : 0.0) + 0.16 * (edu_num - 9) +
               0.035 * (age - 38) + 0.025 * (hours - 40) + 1.6 * (cap_gain ? 1.0 : 0.0) +
               0.45 * (male ? 1.0 : 0.0) + 0.30 * (occ_high ? 1.0 : 0.0);
    bool high_income = rng.bernoulli(detail::sigmoid(w));

    std::string marital;
    if (plan.married) {
      double r = rng.uniform();
      marital = r < 0.955 ? "Married-civ-spouse"
                          : (r < 0.985 ? "Married-spouse-absent" : "Married-AF-spouse");
    } else {
      double r = rng.uniform();
      marital = r < 0.48 ? "Never-married"
                         : (r < 0.78 ? "Divorced" : (r < 0.885 ? "Widowed" : "Separated"));
    }
    std::string relationship;
    if (plan.married) {
      relationship = male ? "Husband" : "Wife";
    } else {
      double r = rng.uniform();
      relationship = r < 0.55 ? "Not-in-family"
                              : (r < 0.80 ? "Own-child"
                                          : (r < 0.95 ? "Unmarried" : "Other-relative"));
    }
    size_t country_pick = rng.bernoulli(kCountry[0])
                              ? 0
                              : (rng.bernoulli(kCountry[1] / (1.0 - kCountry[0]))
                                     ? 1
                                     : 2 + rng.bounded(39));

    Record r;
    r.values.resize(schema.size());
    auto set = [&](const char* name, Cell c) {
      r.values[schema.require_index(name)] = std::move(c);
    };
    set("age", Cell::number(age));
    set("workclass", Cell::text(schema.at(schema.require_index("workclass"))
                                    .domain[detail::pick_weighted(rng, kWorkclass)]));
    set("fnlwgt", Cell::number(std::floor(rng.uniform(12285, 1484705))));
    set("education",
        Cell::text(schema.at(schema.require_index("education")).domain[static_cast<size_t>(edu_idx)]));
    set("education-num", Cell::number(edu_num));
    set("marital-status", Cell::text(marital));
    set("occupation",
        Cell::text(schema.at(schema.require_index("occupation")).domain[occupation]));
    set("relationship", Cell::text(relationship));
    set("race", Cell::text(schema.at(schema.require_index("race"))
                               .domain[detail::pick_weighted(rng, kRace)]));
    set("sex", Cell::text(male ? "Male" : "Female"));
    set("capital-gain", Cell::number(std::min(capital_gain, 99999.0)));
    set("capital-loss", Cell::number(capital_loss));
    set("hours-per-week", Cell::number(hours));
    set("native-country", Cell::text(schema.at(schema.require_index("native-country"))
                                         .domain[country_pick]));
    set("income", Cell::text(high_income ? ">50K" : "<=50K"));

    if (plan.missing) {
      static const std::array<const char*, 3> kPunchable = {"workclass", "occupation",
                                                            "native-country"};
      r.values[schema.require_index(kPunchable[rng.bounded(3)])] = Cell::missing();
    }
    d.records.push_back(std::move(r));
  }
  return d;
}

struct GssGenParams {
  uint64_t seed = 19720401;
  size_t n_raw = 51020;
  size_t n_kept = 20314;  // rows with both the sensitive answer and the label
  size_t n_positive = 4002;

  GssGenParams scaled(double f) const {
    GssGenParams p = *this;
    auto s = [f](size_t v) { return static_cast<size_t>(std::llround(v * f)); };
    p.n_raw = s(n_raw);
    p.n_kept = s(n_kept);
    p.n_positive = s(n_positive);
    return p;
  }
};

// Raw GSS-like export; preprocess_gss() keeps exactly n_kept records of
// which exactly n_positive answered yes.
inline Dataset generate_gss_like(const GssGenParams& params = {}) {
  Schema schema = gss_schema();
  Rng rng(params.seed);
  if (params.n_kept > params.n_raw) fail("gss generator: n_kept exceeds n_raw");
  if (params.n_positive > params.n_kept) fail("gss generator: n_positive exceeds n_kept");

  struct Plan {
    bool kept = false;
    bool positive = false;
  };
  std::vector<Plan> plans(params.n_raw);
  for (size_t i = 0; i < params.n_kept; ++i) {
    plans[i].kept = true;
    plans[i].positive = i < params.n_positive;
  }
  rng.shuffle(plans);

  Dataset d;
  d.schema = schema;
  d.provenance = Provenance::raw;
  d.records.reserve(params.n_raw);

  for (const Plan& plan : plans) {
    bool yes = plan.positive;
    bool male = rng.bernoulli(yes ? 0.72 : 0.42);
    double age = detail::clamped_normal(rng, yes ? 38 : 47, 14, 18, 89);
    age = std::floor(age);
    double attend = std::floor(detail::clamped_normal(rng, yes ? 2.2 : 4.1, 2.2, 0, 8));
    double tvhours = std::floor(detail::clamped_normal(rng, yes ? 3.6 : 2.7, 2.0, 0, 24));
    double educ = std::floor(detail::clamped_normal(rng, 12.8, 3.0, 0, 20));
    double income_band = std::floor(detail::clamped_normal(rng, 1.0 + educ * 0.55, 2.2, 1, 12));
    double childs = std::floor(detail::clamped_normal(rng, 1.9, 1.6, 0, 8));
    static const std::vector<double> kWrkstat = {.50, .10, .02, .03, .14, .03, .15, .03};
    size_t wrkstat = detail::pick_weighted(rng, kWrkstat);
    static const std::vector<double> kRace = {.81, .13, .06};
    size_t race = detail::pick_weighted(rng, kRace);

    // marital happiness: x-rated viewers and low attenders lean away from
    // "very happy"
    double unhap = (yes ? 0.9 : 0.0) + 0.10 * (4.0 - attend) + 0.05 * (tvhours - 3.0) -
                   0.04 * (income_band - 6.0);
    std::vector<double> w = {0.0287 * std::exp(0.9 * unhap), 0.3276 * std::exp(0.35 * unhap),
                             0.6437 * std::exp(-0.25 * unhap)};
    size_t hap = detail::pick_weighted(rng, w);

    Record r;
    r.values.resize(schema.size());
    auto set = [&](const char* name, Cell c) {
      r.values[schema.require_index(name)] = std::move(c);
    };
    set("age", Cell::number(age));
    set("sex", Cell::text(male ? "male" : "female"));
    set("race", Cell::text(schema.at(schema.require_index("race")).domain[race]));
    set("educ", Cell::number(educ));
    set("income-band", Cell::number(income_band));
    set("wrkstat", Cell::text(schema.at(schema.require_index("wrkstat")).domain[wrkstat]));
    set("childs", Cell::number(childs));
    set("attend", Cell::number(attend));
    set("tvhours", Cell::number(tvhours));
    if (plan.kept) {
      set("xmovie", Cell::text(yes ? "yes" : "no"));
      set("hapmar", Cell::text(schema.at(schema.require_index("hapmar")).domain[hap]));
    } else {
      // drop reason: no answer for the sensitive question, the label, or both
      double which = rng.uniform();
      if (which < 0.45) {
        set("xmovie", Cell::missing());
        set("hapmar", Cell::text(schema.at(schema.require_index("hapmar")).domain[hap]));
      } else if (which < 0.9) {
        set("xmovie", Cell::text(rng.bernoulli(0.2) ? "yes" : "no"));
        set("hapmar", Cell::missing());
      } else {
        set("xmovie", Cell::missing());
        set("hapmar", Cell::missing());
      }
    }
    d.records.push_back(std::move(r));
  }
  return d;
}

}  // namespace miai
