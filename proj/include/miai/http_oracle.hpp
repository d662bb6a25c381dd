#pragma once

#include <cstdio>
#include <memory>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "miai/common.hpp"
#include "miai/oracle.hpp"
#include "miai/schema.hpp"

namespace miai {

namespace wire {

// Confidence and scores travel as decimals with 6 fractional digits so the
// transport is bit-stable across backends.
inline double round6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return std::stod(buf);
}

inline nlohmann::json response_to_json(const PredictionResponse& r,
                                       const std::vector<std::string>& class_labels) {
  nlohmann::json j;
  j["label"] = r.label;
  j["confidence"] = round6(r.confidence);
  if (r.scores) {
    nlohmann::json s = nlohmann::json::object();
    for (size_t i = 0; i < class_labels.size() && i < r.scores->size(); ++i)
      s[class_labels[i]] = round6((*r.scores)[i]);
    j["scores"] = std::move(s);
  }
  return j;
}

inline AttributeMap attributes_from_json(const nlohmann::json& doc) {
  if (!doc.contains("attributes") || !doc["attributes"].is_object())
    fail("request body must carry an 'attributes' object");
  AttributeMap attrs;
  for (const auto& [name, v] : doc["attributes"].items()) {
    if (v.is_string()) attrs[name] = Cell::text(v.get<std::string>());
    else if (v.is_number()) attrs[name] = Cell::number(v.get<double>());
    else fail("attribute '", name, "' must be a string or a number");
  }
  return attrs;
}

}  // namespace wire

// Publishes one model as a stateless prediction API:
//   POST /predict  {"attributes": {...}} -> {"label", "confidence"[, "scores"]}
//   GET  /schema   -> the dataset schema document
class OracleServer {
 public:
  OracleServer(const TargetModel& model, nlohmann::json schema_doc,
               bool expose_scores = false)
      : model_(&model), schema_doc_(std::move(schema_doc)), expose_scores_(expose_scores) {
    srv_.Post("/predict", [this](const httplib::Request& req, httplib::Response& res) {
      handle_predict(req, res);
    });
    srv_.Get("/schema", [this](const httplib::Request&, httplib::Response& res) {
      res.set_content(schema_doc_.dump(), "application/json");
    });
  }

  // Bind an ephemeral port and serve from a background thread. Returns the
  // bound port.
  int start(const std::string& host = "127.0.0.1") {
    int port = srv_.bind_to_any_port(host);
    if (port <= 0) fail("cannot bind oracle server on ", host);
    thread_ = std::thread([this] { srv_.listen_after_bind(); });
    srv_.wait_until_ready();
    return port;
  }

  // Blocking serve on a fixed address, for the CLI.
  void listen(const std::string& host, int port) {
    if (!srv_.listen(host, port)) fail("cannot bind oracle server on ", host, ":", port);
  }

  void stop() {
    srv_.stop();
    if (thread_.joinable()) thread_.join();
  }

  ~OracleServer() { stop(); }

 private:
  void handle_predict(const httplib::Request& req, httplib::Response& res) {
    nlohmann::json body;
    try {
      body = nlohmann::json::parse(req.body);
    } catch (const std::exception&) {
      res.status = 400;
      res.set_content(nlohmann::json{{"error", "request body is not valid JSON"}}.dump(),
                      "application/json");
      return;
    }
    try {
      AttributeMap attrs = wire::attributes_from_json(body);
      PredictionResponse r = model_->predict(attrs);
      if (!expose_scores_) r.scores.reset();
      res.set_content(wire::response_to_json(r, model_->class_labels).dump(),
                      "application/json");
    } catch (const Error& e) {
      res.status = 400;
      res.set_content(nlohmann::json{{"error", e.what()}}.dump(), "application/json");
    } catch (const std::exception& e) {
      res.status = 500;
      res.set_content(nlohmann::json{{"error", e.what()}}.dump(), "application/json");
    }
  }

  const TargetModel* model_;
  nlohmann::json schema_doc_;
  bool expose_scores_;
  httplib::Server srv_;
  std::thread thread_;
};

// Client backend speaking the protocol above. Queries are accounted on the
// adversary's side, exactly like the local backend.
class HttpOracle : public PredictionOracle {
 public:
  HttpOracle(const std::string& host, int port) : host_(host), port_(port) {}

  explicit HttpOracle(const std::string& endpoint) {
    // endpoint form: http://host:port
    std::string rest = endpoint;
    const std::string scheme = "http://";
    if (rest.rfind(scheme, 0) == 0) rest = rest.substr(scheme.size());
    auto colon = rest.rfind(':');
    if (colon == std::string::npos)
      fail("oracle endpoint '", endpoint, "' must be http://host:port");
    host_ = rest.substr(0, colon);
    port_ = std::stoi(rest.substr(colon + 1));
  }

  PredictionResponse query(const AttributeMap& attrs) override {
    nlohmann::json body;
    body["attributes"] = nlohmann::json::object();
    for (const auto& [k, v] : attrs) {
      if (v.is_number()) body["attributes"][k] = v.as_number();
      else body["attributes"][k] = v.to_string();
    }
    httplib::Result res = [&] {
      std::lock_guard<std::mutex> lk(mu_);
      if (!client_) {
        client_ = std::make_unique<httplib::Client>(host_, port_);
        client_->set_keep_alive(true);
      }
      return client_->Post("/predict", body.dump(), "application/json");
    }();
    if (!res)
      throw TransportError(detail::concat("oracle transport failure: ",
                                          httplib::to_string(res.error())));
    if (res->status != 200) {
      std::string msg = res->body;
      try {
        msg = nlohmann::json::parse(res->body).value("error", res->body);
      } catch (const std::exception&) {
      }
      fail("oracle rejected query (HTTP ", res->status, "): ", msg);
    }
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(res->body);
    } catch (const std::exception& e) {
      throw TransportError(detail::concat("malformed oracle response: ", e.what()));
    }
    PredictionResponse r;
    r.label = doc.at("label").get<std::string>();
    r.confidence = doc.at("confidence").get<double>();
    if (doc.contains("scores")) {
      // Wire scores are keyed by label; restore the model's class order via
      // the published schema's target domain.
      std::vector<std::string> order = class_order();
      std::vector<double> s;
      s.reserve(order.size());
      for (const auto& label : order) s.push_back(doc["scores"].value(label, 0.0));
      r.scores = std::move(s);
    }
    ledger_.record_query();
    return r;
  }

  nlohmann::json fetch_schema() {
    std::lock_guard<std::mutex> lk(mu_);
    if (!client_) {
      client_ = std::make_unique<httplib::Client>(host_, port_);
      client_->set_keep_alive(true);
    }
    auto res = client_->Get("/schema");
    if (!res)
      throw TransportError(detail::concat("oracle transport failure: ",
                                          httplib::to_string(res.error())));
    if (res->status != 200) fail("schema fetch failed with HTTP ", res->status);
    return nlohmann::json::parse(res->body);
  }

  QueryLedger& ledger() override { return ledger_; }

 private:
  std::vector<std::string> class_order() {
    std::lock_guard<std::mutex> lk(order_mu_);
    if (class_order_.empty())
      class_order_ = Schema::from_json(fetch_schema()).target().domain;
    return class_order_;
  }

  std::string host_;
  int port_ = 0;
  std::mutex mu_;
  std::mutex order_mu_;
  std::unique_ptr<httplib::Client> client_;
  std::vector<std::string> class_order_;
  QueryLedger ledger_;
};

}  // namespace miai
