#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ppc/random.hpp"

namespace ppc {

using FeatureVector = std::vector<double>;

// A labelled example; labels are +1 / -1.
struct Example {
  FeatureVector features;
  int label = 1;
};

struct LinearModel {
  std::vector<double> weights;  // one per feature, then the bias

  double score(const FeatureVector& x) const {
    double s = weights.back();
    for (std::size_t i = 0; i < x.size(); ++i) s += weights[i] * x[i];
    return s;
  }
  int predict(const FeatureVector& x) const { return score(x) > 0.0 ? 1 : -1; }
};

// Original features followed by x_i * x_j for every i < j in lexicographic
// order: the strictly upper-triangular part of the outer product. Diagonal
// terms are dropped (x_i^2 = x_i for binary features).
inline FeatureVector quad_transform(const FeatureVector& x) {
  if (x.size() < 2) throw std::invalid_argument("quad_transform needs at least two features");
  FeatureVector out(x);
  out.reserve(x.size() + x.size() * (x.size() - 1) / 2);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) out.push_back(x[i] * x[j]);
  }
  return out;
}

inline std::vector<Example> quad_transform(const std::vector<Example>& data) {
  std::vector<Example> out;
  out.reserve(data.size());
  for (const auto& e : data) out.push_back({quad_transform(e.features), e.label});
  return out;
}

struct PerceptronResult {
  LinearModel model;
  bool converged = false;  // some epoch made no mistakes
  std::size_t epochs_used = 0;
};

// Classic perceptron (w += y x on every mistake) with the presentation order
// reshuffled each epoch.
inline PerceptronResult train_perceptron(const std::vector<Example>& data, std::size_t max_epochs, std::uint64_t seed) {
  if (data.empty()) throw std::invalid_argument("train_perceptron needs at least one example");
  if (max_epochs < 1) throw std::invalid_argument("max_epochs must be >= 1");
  const std::size_t d = data.front().features.size();
  for (const auto& e : data) {
    if (e.features.size() != d) throw std::invalid_argument("examples differ in feature count");
    if (e.label != 1 && e.label != -1) throw std::invalid_argument("labels must be +1 or -1");
  }

  PerceptronResult r;
  r.model.weights.assign(d + 1, 0.0);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng = substream(seed, 0);

  for (std::size_t epoch = 1; epoch <= max_epochs; ++epoch) {
    // Fisher-Yates with our own index draw keeps the order platform-stable.
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[static_cast<std::size_t>(uniform_index(rng, i))]);
    }
    std::size_t mistakes = 0;
    for (auto idx : order) {
      const auto& e = data[idx];
      if (e.label * r.model.score(e.features) <= 0.0) {
        ++mistakes;
        for (std::size_t i = 0; i < d; ++i) r.model.weights[i] += e.label * e.features[i];
        r.model.weights[d] += e.label;
      }
    }
    r.epochs_used = epoch;
    if (mistakes == 0) {
      r.converged = true;
      break;
    }
  }
  return r;
}

// Uniform K-bit feature vectors labelled by the parity of `support`
// (+1 for odd), each label flipped independently with noise_flip_prob.
inline std::vector<Example> parity_dataset(std::size_t k, const std::vector<std::size_t>& support, double noise_flip_prob,
                                           std::size_t n_samples, std::uint64_t seed) {
  if (support.empty()) throw std::invalid_argument("parity support must be non-empty");
  if (k < 1 || k > 64) throw std::invalid_argument("K must lie in [1, 64]");
  for (auto i : support) {
    if (i >= k) throw std::invalid_argument("parity support index out of range");
  }
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  if (!(noise_flip_prob >= 0.0 && noise_flip_prob <= 1.0)) throw std::invalid_argument("noise must lie in [0, 1]");

  Rng rng = substream(seed, 0);
  std::vector<Example> data;
  data.reserve(n_samples);
  for (std::size_t s = 0; s < n_samples; ++s) {
    const std::uint64_t bits = rng();
    Example e;
    e.features.resize(k);
    for (std::size_t i = 0; i < k; ++i) e.features[i] = static_cast<double>((bits >> i) & 1U);
    bool parity = false;
    for (auto i : support) parity ^= ((bits >> i) & 1U) != 0;
    if (noise_flip_prob > 0.0 && bernoulli(rng, noise_flip_prob)) parity = !parity;
    e.label = parity ? 1 : -1;
    data.push_back(std::move(e));
  }
  return data;
}

}  // namespace ppc
