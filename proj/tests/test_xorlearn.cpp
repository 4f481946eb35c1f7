#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "ppc/xorlearn.hpp"

using namespace ppc;

namespace {

// Every K-bit vector, labelled by the parity of `support`.
std::vector<Example> parity_truth_table(std::size_t k, const std::vector<std::size_t>& support) {
  std::vector<Example> data;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << k); ++v) {
    Example e;
    bool parity = false;
    for (std::size_t i = 0; i < k; ++i) e.features.push_back(static_cast<double>((v >> i) & 1U));
    for (auto i : support) parity ^= ((v >> i) & 1U) != 0;
    e.label = parity ? 1 : -1;
    data.push_back(e);
  }
  return data;
}

bool separates(const LinearModel& model, const std::vector<Example>& data) {
  for (const auto& e : data) {
    if (model.predict(e.features) != e.label) return false;
  }
  return true;
}

}  // namespace

TEST(QuadTransform, Examples) {
  EXPECT_EQ(quad_transform(FeatureVector{1, 2, 3}), (FeatureVector{1, 2, 3, 2, 3, 6}));
  EXPECT_EQ(quad_transform(FeatureVector(5, 0.0)), FeatureVector(15, 0.0));
  EXPECT_THROW(quad_transform(FeatureVector{1}), std::invalid_argument);
  for (std::size_t d = 2; d <= 12; ++d) EXPECT_EQ(quad_transform(FeatureVector(d, 1.0)).size(), d + d * (d - 1) / 2);
}

TEST(QuadTransform, XorIsLinearInTransformedFeatures) {
  for (double a : {0.0, 1.0}) {
    for (double b : {0.0, 1.0}) {
      const auto z = quad_transform(FeatureVector{a, b});
      EXPECT_EQ(z[0] + z[1] - 2 * z[2], a != b ? 1.0 : 0.0);
    }
  }
}

TEST(Perceptron, XorAndAnd) {
  const auto xor_data = parity_truth_table(2, {0, 1});
  const auto raw = train_perceptron(xor_data, 1000, 1);
  EXPECT_FALSE(raw.converged);
  EXPECT_EQ(raw.epochs_used, 1000u);
  const auto lifted = train_perceptron(quad_transform(xor_data), 1000, 1);
  EXPECT_TRUE(lifted.converged);
  EXPECT_TRUE(separates(lifted.model, quad_transform(xor_data)));

  std::vector<Example> and_data;
  for (double a : {0.0, 1.0}) {
    for (double b : {0.0, 1.0}) and_data.push_back({{a, b}, a == 1.0 && b == 1.0 ? 1 : -1});
  }
  const auto and_fit = train_perceptron(and_data, 1000, 1);
  EXPECT_TRUE(and_fit.converged);
  EXPECT_TRUE(separates(and_fit.model, and_data));
}

TEST(Perceptron, Errors) {
  EXPECT_THROW(train_perceptron({}, 10, 1), std::invalid_argument);
  EXPECT_THROW(train_perceptron({{{1.0}, 1}}, 0, 1), std::invalid_argument);
  EXPECT_THROW(train_perceptron({{{1.0}, 1}, {{1.0, 2.0}, -1}}, 10, 1), std::invalid_argument);
  EXPECT_THROW(train_perceptron({{{1.0}, 0}}, 10, 1), std::invalid_argument);
}

TEST(Perceptron, DeterministicForFixedSeed) {
  const auto data = quad_transform(parity_dataset(5, {1, 3}, 0.0, 200, 4));
  const auto a = train_perceptron(data, 500, 9);
  const auto b = train_perceptron(data, 500, 9);
  EXPECT_EQ(a.model.weights, b.model.weights);
  EXPECT_EQ(a.epochs_used, b.epochs_used);
}

TEST(Perceptron, PairParitiesSeparableOnlyAfterTransform) {
  for (std::size_t k = 2; k <= 6; ++k) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        const auto data = parity_truth_table(k, {i, j});
        const auto lifted = train_perceptron(quad_transform(data), 1000, 3);
        EXPECT_TRUE(lifted.converged) << "k=" << k << " {" << i << "," << j << "}";
        EXPECT_FALSE(train_perceptron(data, 300, 3).converged) << "k=" << k << " {" << i << "," << j << "}";
      }
    }
  }
  // Wider supports stay inseparable on raw features.
  EXPECT_FALSE(train_perceptron(parity_truth_table(4, {0, 1, 2}), 300, 3).converged);
}

TEST(ParityDataset, NoiselessLabelsFollowSupport) {
  const auto xor_data = parity_dataset(2, {0, 1}, 0.0, 400, 1);
  std::set<std::pair<double, double>> seen;
  for (const auto& e : xor_data) {
    seen.insert({e.features[0], e.features[1]});
    EXPECT_EQ(e.label, e.features[0] != e.features[1] ? 1 : -1);
  }
  EXPECT_EQ(seen.size(), 4u);

  for (const auto& e : parity_dataset(4, {1, 3}, 0.0, 1000, 2)) {
    ASSERT_EQ(e.features.size(), 4u);
    EXPECT_EQ(e.label, e.features[1] != e.features[3] ? 1 : -1);
  }
}

TEST(ParityDataset, HalfNoiseDecorrelatesLabels) {
  const std::size_t n = 20000;
  double correlation = 0.0;
  for (const auto& e : parity_dataset(6, {0, 2, 5}, 0.5, n, 3)) {
    const bool parity = (e.features[0] != e.features[2]) != (e.features[5] != 0.0);
    correlation += e.label * (parity ? 1.0 : -1.0);
  }
  EXPECT_LT(std::abs(correlation / n), 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST(ParityDataset, DeterministicAndValidated) {
  const auto a = parity_dataset(5, {0, 4}, 0.1, 50, 7);
  const auto b = parity_dataset(5, {0, 4}, 0.1, 50, 7);
  for (std::size_t s = 0; s < a.size(); ++s) {
    EXPECT_EQ(a[s].features, b[s].features);
    EXPECT_EQ(a[s].label, b[s].label);
  }
  EXPECT_THROW(parity_dataset(3, {}, 0.0, 10, 1), std::invalid_argument);
  EXPECT_THROW(parity_dataset(3, {3}, 0.0, 10, 1), std::invalid_argument);
  EXPECT_THROW(parity_dataset(3, {0}, 1.5, 10, 1), std::invalid_argument);
}
