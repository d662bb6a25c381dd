#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "miai/common.hpp"

namespace miai {

struct NetParams {
  std::vector<int> hidden = {64, 32};
  int epochs = 30;
  int batch = 64;
  double learning_rate = 0.01;
  double momentum = 0.9;
  uint64_t seed = 1;
};

// Feed-forward classifier: rectifier hidden layers, softmax output,
// cross-entropy loss, mini-batch gradient descent with momentum. Training is
// single-threaded and fully determined by the seed.
class NeuralNet {
 public:
  // weights[l] is row-major (out x in); layer 0 consumes the dense input.
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;
  std::vector<int> layout;  // [in, hidden..., out]

  bool trained() const { return !weights.empty(); }
  int inputs() const { return layout.front(); }
  int outputs() const { return layout.back(); }

  std::vector<double> forward(const std::vector<double>& x) const {
    std::vector<double> a = x;
    for (size_t l = 0; l < weights.size(); ++l) {
      int in = layout[l], out = layout[l + 1];
      std::vector<double> z(static_cast<size_t>(out));
      for (int o = 0; o < out; ++o) {
        double s = biases[l][static_cast<size_t>(o)];
        const double* w = &weights[l][static_cast<size_t>(o) * static_cast<size_t>(in)];
        for (int i = 0; i < in; ++i) s += w[i] * a[static_cast<size_t>(i)];
        z[static_cast<size_t>(o)] = s;
      }
      if (l + 1 < weights.size()) {
        for (double& v : z) v = v > 0.0 ? v : 0.0;
      } else {
        softmax_inplace(z);
      }
      a = std::move(z);
    }
    return a;
  }

  static void softmax_inplace(std::vector<double>& z) {
    double mx = z[0];
    for (double v : z) mx = std::max(mx, v);
    double sum = 0.0;
    for (double& v : z) {
      v = std::exp(v - mx);
      sum += v;
    }
    for (double& v : z) v /= sum;
  }

  nlohmann::json to_json() const {
    return nlohmann::json{{"layout", layout}, {"weights", weights}, {"biases", biases}};
  }
  static NeuralNet from_json(const nlohmann::json& doc) {
    NeuralNet n;
    n.layout = doc.at("layout").get<std::vector<int>>();
    n.weights = doc.at("weights").get<std::vector<std::vector<double>>>();
    n.biases = doc.at("biases").get<std::vector<std::vector<double>>>();
    return n;
  }
};

inline NeuralNet train_neural_net_dense(const std::vector<std::vector<double>>& inputs,
                                        const std::vector<int>& labels, int n_classes,
                                        const NetParams& params) {
  if (inputs.empty()) fail("cannot train a neural net on an empty dataset");
  NeuralNet net;
  net.layout.push_back(static_cast<int>(inputs[0].size()));
  for (int h : params.hidden) net.layout.push_back(h);
  net.layout.push_back(n_classes);

  Rng rng(params.seed);
  size_t n_layers = net.layout.size() - 1;
  net.weights.resize(n_layers);
  net.biases.resize(n_layers);
  std::vector<std::vector<double>> vel_w(n_layers), vel_b(n_layers);
  for (size_t l = 0; l < n_layers; ++l) {
    int in = net.layout[l], out = net.layout[l + 1];
    double scale = std::sqrt(2.0 / static_cast<double>(in));
    net.weights[l].resize(static_cast<size_t>(in) * static_cast<size_t>(out));
    for (double& w : net.weights[l]) w = rng.normal() * scale;
    net.biases[l].assign(static_cast<size_t>(out), 0.0);
    vel_w[l].assign(net.weights[l].size(), 0.0);
    vel_b[l].assign(net.biases[l].size(), 0.0);
  }

  size_t n = inputs.size();
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;

  // per-layer activations for one sample
  std::vector<std::vector<double>> act(n_layers + 1);
  std::vector<std::vector<double>> delta(n_layers);
  std::vector<std::vector<double>> grad_w(n_layers), grad_b(n_layers);
  for (size_t l = 0; l < n_layers; ++l) {
    grad_w[l].resize(net.weights[l].size());
    grad_b[l].resize(net.biases[l].size());
    delta[l].resize(static_cast<size_t>(net.layout[l + 1]));
  }

  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    rng.shuffle(order);
    double loss = 0.0;
    for (size_t start = 0; start < n; start += static_cast<size_t>(params.batch)) {
      size_t stop = std::min(n, start + static_cast<size_t>(params.batch));
      for (size_t l = 0; l < n_layers; ++l) {
        std::fill(grad_w[l].begin(), grad_w[l].end(), 0.0);
        std::fill(grad_b[l].begin(), grad_b[l].end(), 0.0);
      }
      for (size_t s = start; s < stop; ++s) {
        size_t i = order[s];
        act[0] = inputs[i];
        for (size_t l = 0; l < n_layers; ++l) {
          int in = net.layout[l], out = net.layout[l + 1];
          act[l + 1].assign(static_cast<size_t>(out), 0.0);
          for (int o = 0; o < out; ++o) {
            double z = net.biases[l][static_cast<size_t>(o)];
            const double* w = &net.weights[l][static_cast<size_t>(o) * static_cast<size_t>(in)];
            for (int q = 0; q < in; ++q) z += w[q] * act[l][static_cast<size_t>(q)];
            act[l + 1][static_cast<size_t>(o)] = z;
          }
          if (l + 1 < n_layers)
            for (double& v : act[l + 1]) v = v > 0.0 ? v : 0.0;
          else
            NeuralNet::softmax_inplace(act[l + 1]);
        }
        int y = labels[i];
        loss -= std::log(std::max(act[n_layers][static_cast<size_t>(y)], 1e-300));

        // output delta: softmax + cross-entropy
        for (int o = 0; o < net.layout[n_layers]; ++o)
          delta[n_layers - 1][static_cast<size_t>(o)] =
              act[n_layers][static_cast<size_t>(o)] - (o == y ? 1.0 : 0.0);
        for (size_t l = n_layers; l-- > 0;) {
          int in = net.layout[l], out = net.layout[l + 1];
          for (int o = 0; o < out; ++o) {
            double d = delta[l][static_cast<size_t>(o)];
            grad_b[l][static_cast<size_t>(o)] += d;
            double* gw = &grad_w[l][static_cast<size_t>(o) * static_cast<size_t>(in)];
            for (int q = 0; q < in; ++q) gw[q] += d * act[l][static_cast<size_t>(q)];
          }
          if (l == 0) break;
          for (int q = 0; q < in; ++q) {
            double s = 0.0;
            for (int o = 0; o < out; ++o)
              s += net.weights[l][static_cast<size_t>(o) * static_cast<size_t>(in) +
                                  static_cast<size_t>(q)] *
                   delta[l][static_cast<size_t>(o)];
            delta[l - 1][static_cast<size_t>(q)] =
                act[l][static_cast<size_t>(q)] > 0.0 ? s : 0.0;
          }
        }
      }
      double inv = 1.0 / static_cast<double>(stop - start);
      for (size_t l = 0; l < n_layers; ++l) {
        for (size_t w = 0; w < net.weights[l].size(); ++w) {
          vel_w[l][w] = params.momentum * vel_w[l][w] -
                        params.learning_rate * grad_w[l][w] * inv;
          net.weights[l][w] += vel_w[l][w];
        }
        for (size_t b = 0; b < net.biases[l].size(); ++b) {
          vel_b[l][b] = params.momentum * vel_b[l][b] -
                        params.learning_rate * grad_b[l][b] * inv;
          net.biases[l][b] += vel_b[l][b];
        }
      }
    }
    if (!std::isfinite(loss))
      fail("neural net training diverged: non-finite loss at epoch ", epoch);
  }
  return net;
}

}  // namespace miai
