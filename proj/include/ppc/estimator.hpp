#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ppc/random.hpp"

namespace ppc {

namespace detail {

// Neumaier-compensated running sum.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) noexcept {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  double value() const noexcept { return sum + carry; }
};

}  // namespace detail

// c_{p,n}(x) = P(Binomial(n, p) >= x).
//
// Terms are generated relative to the mode with the ratio recurrence
// pmf(k+1)/pmf(k) = (n-k)/(k+1) * p/(1-p), so no factorials or lgamma are
// needed and nothing overflows; the tail is then normalised by the total.
// Walking stops once terms drop below 1e-300 of the mode term.
inline double binomial_tail(double p, std::int64_t n, std::int64_t x) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binomial_tail: p must lie in [0, 1]");
  if (n < 0) throw std::invalid_argument("binomial_tail: n must be >= 0");
  if (x <= 0) return 1.0;
  if (x > n) return 0.0;
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;

  const double odds = p / (1.0 - p);
  const auto mode = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(static_cast<double>(n + 1) * p)), 0, n);
  constexpr double kNegligible = 1e-300;

  detail::CompensatedSum tail;
  detail::CompensatedSum total;
  auto add = [&](std::int64_t k, double w) {
    total.add(w);
    if (k >= x) tail.add(w);
  };

  add(mode, 1.0);
  double w = 1.0;
  for (std::int64_t k = mode; k < n; ++k) {
    w *= static_cast<double>(n - k) / static_cast<double>(k + 1) * odds;
    if (w < kNegligible) break;
    add(k + 1, w);
  }
  w = 1.0;
  for (std::int64_t k = mode; k > 0; --k) {
    w *= static_cast<double>(k) / (static_cast<double>(n - k + 1) * odds);
    if (w < kNegligible) break;
    add(k - 1, w);
  }
  return std::clamp(tail.value() / total.value(), 0.0, 1.0);
}

// (alpha, N, M, eps1, eps2) of a fraction-accurate estimator.
struct EstimatorParams {
  double alpha = 0.5;          // accuracy threshold
  std::int64_t n_categories = 100;  // N, categories sampled
  std::int64_t m_instances = 20;    // M, instances per category
  double eps1 = 0.0;           // accuracy deviation threshold
  double eps2 = 0.1;           // fraction deviation threshold

  void validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    if (!(eps1 >= 0.0) || !std::isfinite(eps1)) throw std::invalid_argument("eps1 must be finite and >= 0");
    if (!(eps2 > 0.0 && eps2 < 1.0)) throw std::invalid_argument("eps2 must lie in (0, 1)");
    if (n_categories < 1) throw std::invalid_argument("N must be >= 1");
    if (m_instances < 1) throw std::invalid_argument("M must be >= 1");
  }
};

// Correct classifications (out of M) a sampled category needs to be declared
// classifiable: ceil((alpha + eps1) * M), evaluated in double precision. The
// estimator and the confidence bound share this one threshold.
inline std::int64_t accept_threshold(const EstimatorParams& params) {
  const double t = std::ceil((params.alpha + params.eps1) * static_cast<double>(params.m_instances));
  return t > static_cast<double>(params.m_instances) ? params.m_instances + 1 : static_cast<std::int64_t>(t);
}

// Worst-case probability that a category with accuracy below alpha is
// declared classifiable; attained by a category with accuracy exactly alpha.
inline double false_accept_prob(const EstimatorParams& params) {
  params.validate();
  return binomial_tail(params.alpha, params.m_instances, accept_threshold(params));
}

struct ThetaSweep {
  double grid_step = 1e-4;
  double minimizing_theta = 0.5;
  bool refined = false;  // halving grid_step moved the bound by < 1e-6
};

struct ConfidenceBound {
  double confidence = 0.0;
  ThetaSweep sweep;
};

namespace detail {

struct BoundPoint {
  double value;
  double theta;
};

// 1 - c_{pf, N - floor_count}(ceil(eps2/2 N)) - c_{theta, N}(ceil_count)
inline double bound_terms(const EstimatorParams& params, double false_accept, double theta, std::int64_t floor_count,
                          std::int64_t ceil_count) {
  const std::int64_t n = params.n_categories;
  const auto slack = static_cast<std::int64_t>(std::ceil(params.eps2 / 2.0 * static_cast<double>(n)));
  const std::int64_t inaccurate = n - floor_count;
  const double term_b = inaccurate > 0 ? binomial_tail(false_accept, inaccurate, slack) : 0.0;
  const double term_a = binomial_tail(theta, n, ceil_count);
  return 1.0 - term_b - term_a;
}

inline BoundPoint minimize_bound(const EstimatorParams& params, double false_accept, double step) {
  const auto n = static_cast<double>(params.n_categories);
  const double half = params.eps2 / 2.0;
  BoundPoint best{std::numeric_limits<double>::infinity(), 0.5};
  auto consider = [&](double value, double theta) {
    if (value < best.value) best = {value, theta};
  };

  for (std::int64_t i = 1;; ++i) {
    const double theta = static_cast<double>(i) * step;
    if (theta >= 1.0) break;
    const double scaled = (theta + half) * n;
    consider(bound_terms(params, false_accept, theta, static_cast<std::int64_t>(std::floor(scaled)),
                         static_cast<std::int64_t>(std::ceil(scaled))),
             theta);
  }

  // On each open theta interval where (theta + eps2/2) N lies strictly
  // between j-1 and j, the term counts are constant and the second tail grows
  // with theta, so the interval's infimum is the limit at its right end.
  for (std::int64_t j = 0; j <= params.n_categories + 1; ++j) {
    const double lo = static_cast<double>(j - 1) / n - half;
    const double hi = static_cast<double>(j) / n - half;
    if (hi <= 0.0 || lo >= 1.0) continue;
    const double edge = std::min(hi, 1.0);
    consider(bound_terms(params, false_accept, edge, j - 1, j), edge < 1.0 ? edge : std::nextafter(1.0, 0.0));
  }
  return best;
}

}  // namespace detail

// Lower bound on the probability that the claim "at least q_hat - eps2 of
// the categories are alpha-accurate" holds, minimised over the unknown
// accurate fraction theta in (0, 1).
inline ConfidenceBound confidence_bound(const EstimatorParams& params, double grid_step = 1e-4) {
  params.validate();
  if (!(grid_step > 0.0 && grid_step <= 0.01)) throw std::invalid_argument("grid_step must lie in (0, 0.01]");
  const double false_accept = false_accept_prob(params);

  constexpr double kStable = 1e-6;
  constexpr int kMaxHalvings = 8;
  double step = grid_step;
  auto current = detail::minimize_bound(params, false_accept, step);
  bool refined = false;
  for (int h = 0; h < kMaxHalvings; ++h) {
    const auto finer = detail::minimize_bound(params, false_accept, step / 2.0);
    const bool stable = std::abs(finer.value - current.value) < kStable;
    current = finer;
    step /= 2.0;
    if (stable) {
      refined = true;
      break;
    }
  }
  ConfidenceBound out;
  out.confidence = std::clamp(current.value, 0.0, 1.0);
  out.sweep = {step, current.theta, refined};
  return out;
}

// Source of labelled test instances: draws a category, then reports whether
// the classifier got a fresh instance of that category right.
class CategoryOracle {
 public:
  virtual ~CategoryOracle() = default;
  virtual std::size_t sample_category(Rng& rng) const = 0;
  virtual bool trial(std::size_t category, Rng& rng) const = 0;
};

// Finite category set with known per-category accuracies and draw
// probabilities (uniform when none are given).
class TableOracle final : public CategoryOracle {
 public:
  explicit TableOracle(std::vector<double> accuracies, std::vector<double> probabilities = {})
      : accuracies_(std::move(accuracies)), probabilities_(std::move(probabilities)) {
    if (accuracies_.empty()) throw std::invalid_argument("oracle needs at least one category");
    for (double a : accuracies_) {
      if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("category accuracies must lie in [0, 1]");
    }
    if (probabilities_.empty()) probabilities_.assign(accuracies_.size(), 1.0 / static_cast<double>(accuracies_.size()));
    if (probabilities_.size() != accuracies_.size()) {
      throw std::invalid_argument("oracle needs one probability per category");
    }
    double total = 0.0;
    for (double w : probabilities_) {
      if (!(w >= 0.0)) throw std::invalid_argument("category probabilities must be non-negative");
      total += w;
      cumulative_.push_back(total);
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("category probabilities must sum to 1");
  }

  std::size_t sample_category(Rng& rng) const override {
    const double u = uniform01(rng) * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return static_cast<std::size_t>(it - cumulative_.begin());
  }

  bool trial(std::size_t category, Rng& rng) const override { return bernoulli(rng, accuracies_.at(category)); }

  const std::vector<double>& accuracies() const noexcept { return accuracies_; }
  const std::vector<double>& probabilities() const noexcept { return probabilities_; }

  // Probability mass of the alpha-accurate categories (the true theta).
  double accurate_fraction(double alpha) const {
    double theta = 0.0;
    for (std::size_t c = 0; c < accuracies_.size(); ++c) {
      if (accuracies_[c] >= alpha) theta += probabilities_[c];
    }
    return theta;
  }

 private:
  std::vector<double> accuracies_;
  std::vector<double> probabilities_;
  std::vector<double> cumulative_;
};

struct EstimatorResult {
  std::vector<double> empirical_accuracies;  // one per sampled category
  double q_hat = 0.0;
  double lower_bound = 0.0;  // q_hat - eps2, not clamped
  double confidence = 0.0;
  double minimizing_theta = 0.0;
};

// One draw of the random experiment: N categories with replacement, M
// instances each. Leaves the confidence fields empty.
inline EstimatorResult sample_estimate(const CategoryOracle& oracle, const EstimatorParams& params, Rng& rng) {
  const std::int64_t threshold = accept_threshold(params);
  EstimatorResult r;
  r.empirical_accuracies.reserve(static_cast<std::size_t>(params.n_categories));
  std::int64_t classifiable = 0;
  for (std::int64_t i = 0; i < params.n_categories; ++i) {
    const std::size_t category = oracle.sample_category(rng);
    std::int64_t correct = 0;
    for (std::int64_t t = 0; t < params.m_instances; ++t) correct += oracle.trial(category, rng) ? 1 : 0;
    r.empirical_accuracies.push_back(static_cast<double>(correct) / static_cast<double>(params.m_instances));
    if (correct >= threshold) ++classifiable;
  }
  r.q_hat = static_cast<double>(classifiable) / static_cast<double>(params.n_categories);
  r.lower_bound = r.q_hat - params.eps2;
  return r;
}

inline EstimatorResult run_estimation(const CategoryOracle& oracle, const EstimatorParams& params, std::uint64_t seed) {
  params.validate();
  Rng rng = substream(seed, 0);
  auto r = sample_estimate(oracle, params, rng);
  const auto bound = confidence_bound(params);
  r.confidence = bound.confidence;
  r.minimizing_theta = bound.sweep.minimizing_theta;
  return r;
}

struct BoundValidation {
  double true_theta = 0.0;
  std::uint64_t runs = 0;
  std::uint64_t errors = 0;          // runs whose lower bound exceeded true_theta
  double empirical_error_rate = 0.0;
  double bound_error_rate = 0.0;     // 1 - confidence
  double sigma = 0.0;                // binomial std. dev. of the rate at bound_error_rate

  bool sound(double sigmas = 3.0) const { return empirical_error_rate <= bound_error_rate + sigmas * sigma; }
};

// Repeats the estimator n_runs times against a known oracle and counts how
// often its claim excludes the true accurate fraction.
inline BoundValidation validate_bound(const std::vector<double>& true_accuracies,
                                      const std::vector<double>& category_distribution, const EstimatorParams& params,
                                      std::uint64_t n_runs, std::uint64_t seed, unsigned threads = 0) {
  params.validate();
  if (n_runs < 1) throw std::invalid_argument("validate_bound needs n_runs >= 1");
  const TableOracle oracle(true_accuracies, category_distribution);

  BoundValidation v;
  v.true_theta = oracle.accurate_fraction(params.alpha);
  v.runs = n_runs;
  v.bound_error_rate = 1.0 - confidence_bound(params).confidence;

  auto block = [&](Rng&, std::uint64_t first, std::uint64_t count) {
    std::uint64_t errors = 0;
    for (std::uint64_t r = first; r < first + count; ++r) {
      Rng rng = substream(seed, r);
      if (sample_estimate(oracle, params, rng).lower_bound > v.true_theta) ++errors;
    }
    return errors;
  };
  for (auto e : run_blocks<std::uint64_t>(n_runs, seed, block, threads)) v.errors += e;

  v.empirical_error_rate = static_cast<double>(v.errors) / static_cast<double>(n_runs);
  v.sigma = std::sqrt(v.bound_error_rate * (1.0 - v.bound_error_rate) / static_cast<double>(n_runs));
  return v;
}

}  // namespace ppc
