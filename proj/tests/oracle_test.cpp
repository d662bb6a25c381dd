#include "miai/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <gtest/gtest.h>

#include "miai/datagen.hpp"
#include "miai/dataset.hpp"
#include "miai/http_oracle.hpp"
#include "miai/model.hpp"

namespace miai {
namespace {

struct Fixture {
  Dataset data;
  TargetModel model;

  Fixture() {
    Dataset raw = generate_adult_like(AdultGenParams{}.scaled(0.01));
    data = preprocess_adult(raw);
    model = train_decision_tree(data, {8, 3});
  }

  AttributeMap query_of(size_t row) const {
    AttributeMap attrs;
    for (size_t i : data.schema.model_input_indices())
      attrs[data.schema.at(i).name] = data.records[row].at(i);
    return attrs;
  }
};

TEST(LocalOracleTest, LedgerCountsEveryQuery) {
  Fixture fx;
  LocalOracle oracle(fx.model);
  for (int i = 0; i < 5; ++i) oracle.query(fx.query_of(0));
  EXPECT_EQ(oracle.ledger().total(), 5u);
  EXPECT_EQ(oracle.ledger().cache_hits(), 0u);
}

TEST(LocalOracleTest, CacheHitsDoNotCountAsQueries) {
  Fixture fx;
  LocalOracle oracle(fx.model, /*caching=*/true);
  PredictionResponse r1 = oracle.query(fx.query_of(0));
  PredictionResponse r2 = oracle.query(fx.query_of(0));
  EXPECT_EQ(oracle.ledger().total(), 1u);
  EXPECT_EQ(oracle.ledger().cache_hits(), 1u);
  EXPECT_EQ(r1.label, r2.label);
  EXPECT_DOUBLE_EQ(r1.confidence, r2.confidence);
}

TEST(LocalOracleTest, PerRunCountsSumToTotal) {
  Fixture fx;
  LocalOracle oracle(fx.model);
  oracle.ledger().begin_run("first");
  oracle.query(fx.query_of(0));
  oracle.query(fx.query_of(1));
  oracle.ledger().begin_run("second");
  oracle.query(fx.query_of(2));
  auto per_run = oracle.ledger().per_run();
  uint64_t sum = 0;
  for (const auto& [name, n] : per_run) sum += n;
  EXPECT_EQ(sum, oracle.ledger().total());
  EXPECT_EQ(per_run["first"], 2u);
  EXPECT_EQ(per_run["second"], 1u);
}

TEST(LocalOracleTest, ScoresHiddenUnlessExposed) {
  Fixture fx;
  LocalOracle hidden(fx.model, false, false);
  EXPECT_FALSE(hidden.query(fx.query_of(0)).scores.has_value());
  LocalOracle exposed(fx.model, false, true);
  EXPECT_TRUE(exposed.query(fx.query_of(0)).scores.has_value());
}

TEST(LocalOracleTest, ConcurrentQueriesKeepExactAccounting) {
  Fixture fx;
  LocalOracle oracle(fx.model);
  parallel_for(200, 4, [&](size_t i) { oracle.query(fx.query_of(i % fx.data.size())); });
  EXPECT_EQ(oracle.ledger().total(), 200u);
}

TEST(HttpOracleTest, PredictSchemaAndValidation) {
  Fixture fx;
  OracleServer server(fx.model, fx.data.schema.to_json(), /*expose_scores=*/true);
  int port = server.start();
  HttpOracle client("127.0.0.1", port);

  PredictionResponse r = client.query(fx.query_of(0));
  EXPECT_FALSE(r.label.empty());
  ASSERT_TRUE(r.scores.has_value());
  double sum = 0.0;
  for (double v : *r.scores) sum += v;
  EXPECT_NEAR(sum, 1.0, 1e-5);

  nlohmann::json schema_doc = client.fetch_schema();
  Schema fetched = Schema::from_json(schema_doc);
  EXPECT_EQ(fetched.sensitive().name, "marital-status");
  EXPECT_EQ(fetched.sensitive().domain,
            (std::vector<std::string>{"Married", "Single"}));

  // missing attribute -> HTTP 400 naming it
  AttributeMap bad = fx.query_of(0);
  bad.erase("age");
  try {
    client.query(bad);
    FAIL() << "expected rejection";
  } catch (const Error& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("400"), std::string::npos) << msg;
    EXPECT_NE(msg.find("age"), std::string::npos) << msg;
  }
  server.stop();
}

TEST(HttpOracleTest, TransportFailureIsDistinct) {
  HttpOracle client("127.0.0.1", 9);  // discard port, nothing listens
  Fixture fx;
  EXPECT_THROW(client.query(fx.query_of(0)), TransportError);
}

TEST(HttpOracleTest, TransportTransparencyOnRandomizedQueries) {
  Fixture fx;
  OracleServer server(fx.model, fx.data.schema.to_json());
  int port = server.start();
  HttpOracle remote("127.0.0.1", port);
  LocalOracle local(fx.model);

  Rng rng(99);
  const auto& schema = fx.data.schema;
  for (int i = 0; i < 1000; ++i) {
    AttributeMap attrs;
    for (size_t idx : schema.model_input_indices()) {
      const Attribute& a = schema.at(idx);
      if (a.kind == AttrKind::categorical)
        attrs[a.name] = Cell::text(a.domain[rng.bounded(a.domain.size())]);
      else
        attrs[a.name] = Cell::number(std::floor(rng.uniform(a.min, a.max)));
    }
    PredictionResponse lr = local.query(attrs);
    PredictionResponse rr = remote.query(attrs);
    ASSERT_EQ(lr.label, rr.label) << "query " << i;
    ASSERT_NEAR(lr.confidence, rr.confidence, 1e-6) << "query " << i;
  }
  EXPECT_EQ(remote.ledger().total(), 1000u);
  server.stop();
}

TEST(HttpOracleTest, ServerStatelessAcrossRequestOrder) {
  Fixture fx;
  OracleServer server(fx.model, fx.data.schema.to_json());
  int port = server.start();
  HttpOracle client("127.0.0.1", port);

  std::vector<AttributeMap> queries;
  for (size_t i = 0; i < 20; ++i) queries.push_back(fx.query_of(i % fx.data.size()));
  std::vector<std::pair<std::string, double>> forward, backward;
  for (const auto& q : queries) {
    PredictionResponse r = client.query(q);
    forward.emplace_back(r.label, r.confidence);
  }
  for (auto it = queries.rbegin(); it != queries.rend(); ++it) {
    PredictionResponse r = client.query(*it);
    backward.emplace_back(r.label, r.confidence);
  }
  std::reverse(backward.begin(), backward.end());
  EXPECT_EQ(forward, backward);
  server.stop();
}

}  // namespace
}  // namespace miai
