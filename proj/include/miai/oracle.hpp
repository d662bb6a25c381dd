#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <unordered_map>

#include "miai/common.hpp"
#include "miai/model.hpp"

namespace miai {

// Exact query accounting. Totals only ever grow; per-run counts sum to the
// total. Cache hits are tracked separately and do not count as queries.
class QueryLedger {
 public:
  void begin_run(const std::string& name) {
    std::lock_guard<std::mutex> lk(mu_);
    run_ = name;
    per_run_.emplace(name, 0);
  }

  void record_query() {
    total_.fetch_add(1, std::memory_order_relaxed);
    std::lock_guard<std::mutex> lk(mu_);
    ++per_run_[run_];
  }

  void record_cache_hit() { cache_hits_.fetch_add(1, std::memory_order_relaxed); }

  uint64_t total() const { return total_.load(); }
  uint64_t cache_hits() const { return cache_hits_.load(); }

  std::map<std::string, uint64_t> per_run() const {
    std::lock_guard<std::mutex> lk(mu_);
    return per_run_;
  }

 private:
  std::atomic<uint64_t> total_{0};
  std::atomic<uint64_t> cache_hits_{0};
  mutable std::mutex mu_;
  std::map<std::string, uint64_t> per_run_{{"", 0}};
  std::string run_;
};

// Black-box access to a prediction model. Implementations must be safe for
// concurrent queries.
class PredictionOracle {
 public:
  virtual ~PredictionOracle() = default;
  virtual PredictionResponse query(const AttributeMap& attrs) = 0;
  virtual QueryLedger& ledger() = 0;
};

namespace detail {
inline std::string cache_key(const AttributeMap& attrs) {
  std::ostringstream os;
  for (const auto& [k, v] : attrs) os << k << '\x1f' << v.to_string() << '\x1e';
  return os.str();
}
}  // namespace detail

// In-process backend over a trained model. Caching is off by default so that
// ledger totals match each attack's documented query complexity.
class LocalOracle : public PredictionOracle {
 public:
  explicit LocalOracle(const TargetModel& model, bool caching = false,
                       bool expose_scores = false)
      : model_(&model), caching_(caching), expose_scores_(expose_scores) {}

  PredictionResponse query(const AttributeMap& attrs) override {
    if (caching_) {
      std::string key = detail::cache_key(attrs);
      {
        std::lock_guard<std::mutex> lk(cache_mu_);
        auto it = cache_.find(key);
        if (it != cache_.end()) {
          ledger_.record_cache_hit();
          return it->second;
        }
      }
      PredictionResponse r = evaluate(attrs);
      ledger_.record_query();
      std::lock_guard<std::mutex> lk(cache_mu_);
      cache_.emplace(std::move(key), r);
      return r;
    }
    PredictionResponse r = evaluate(attrs);
    ledger_.record_query();
    return r;
  }

  QueryLedger& ledger() override { return ledger_; }

 private:
  PredictionResponse evaluate(const AttributeMap& attrs) const {
    PredictionResponse r = model_->predict(attrs);
    if (!expose_scores_) r.scores.reset();
    return r;
  }

  const TargetModel* model_;
  bool caching_;
  bool expose_scores_;
  QueryLedger ledger_;
  std::mutex cache_mu_;
  std::unordered_map<std::string, PredictionResponse> cache_;
};

}  // namespace miai
