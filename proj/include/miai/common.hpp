#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace miai {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Transport-level failure of a remote oracle, kept distinct from model or
// validation errors so attacks can report partial query counts.
class TransportError : public Error {
 public:
  explicit TransportError(const std::string& what) : Error(what) {}
};

namespace detail {
template <typename... Ts>
std::string concat(const Ts&... parts) {
  std::ostringstream os;
  (os << ... << parts);
  return os.str();
}
}  // namespace detail

template <typename... Ts>
[[noreturn]] void fail(const Ts&... parts) {
  throw Error(detail::concat(parts...));
}

// One tabular cell: absent, a categorical string, or a finite number.
class Cell {
 public:
  Cell() = default;
  static Cell missing() { return Cell(); }
  static Cell text(std::string v) {
    Cell c;
    c.v_ = std::move(v);
    return c;
  }
  static Cell number(double v) {
    Cell c;
    c.v_ = v;
    return c;
  }

  bool is_missing() const { return std::holds_alternative<std::monostate>(v_); }
  bool is_text() const { return std::holds_alternative<std::string>(v_); }
  bool is_number() const { return std::holds_alternative<double>(v_); }

  const std::string& as_text() const {
    if (!is_text()) fail("cell is not categorical");
    return std::get<std::string>(v_);
  }
  double as_number() const {
    if (!is_number()) fail("cell is not numeric");
    return std::get<double>(v_);
  }

  // Canonical text form, used for CSV output and oracle cache keys.
  std::string to_string() const {
    if (is_missing()) return "";
    if (is_text()) return std::get<std::string>(v_);
    double d = std::get<double>(v_);
    if (d == static_cast<int64_t>(d) && std::abs(d) < 1e15)
      return std::to_string(static_cast<int64_t>(d));
    std::ostringstream os;
    os.precision(17);
    os << d;
    return os.str();
  }

  bool operator==(const Cell& o) const { return v_ == o.v_; }

 private:
  std::variant<std::monostate, std::string, double> v_;
};

// Feature assignment sent to an oracle: attribute name -> value.
// Ordered map so serialized forms are canonical.
using AttributeMap = std::map<std::string, Cell>;

// Deterministic RNG with fully specified derived draws (the standard library
// distributions are implementation-defined, which would break seed contracts).
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  uint64_t next() {
    // xorshift64*
    uint64_t x = state_;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state_ = x;
    return x * 0x2545F4914F6CDD1DULL;
  }

  // Uniform in [0, n), unbiased by rejection.
  uint64_t bounded(uint64_t n) {
    if (n == 0) fail("bounded(0)");
    uint64_t threshold = (~n + 1) % n;  // 2^64 mod n
    for (;;) {
      uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  bool bernoulli(double p) { return uniform() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(bounded(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t state_;
};

// Fan a per-index job across a small worker pool. Callers index into
// pre-sized result vectors so output order is independent of scheduling.
template <typename Fn>
void parallel_for(size_t n, int workers, Fn&& fn) {
  if (n == 0) return;
  int nw = workers;
  if (nw <= 0) nw = static_cast<int>(std::thread::hardware_concurrency());
  if (nw <= 1 || n == 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  nw = static_cast<int>(std::min<size_t>(static_cast<size_t>(nw), n));
  std::atomic<size_t> cursor{0};
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  std::string first_error;
  std::mutex err_mu;
  for (int w = 0; w < nw; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        size_t i = cursor.fetch_add(1);
        if (i >= n || failed.load()) return;
        try {
          fn(i);
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lk(err_mu);
          if (!failed.exchange(true)) first_error = e.what();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failed.load()) throw Error(first_error);
}

}  // namespace miai
