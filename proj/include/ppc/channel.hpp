#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ppc/bits.hpp"
#include "ppc/codes.hpp"
#include "ppc/decoder.hpp"
#include "ppc/errors.hpp"
#include "ppc/random.hpp"

namespace ppc {

// A trained binary classifier viewed as a channel: input 0 comes out as 0
// with probability p, input 1 comes out as 1 with probability q.
class BinaryAsymmetricChannel {
 public:
  BinaryAsymmetricChannel(double p, double q) : p_(p), q_(q) {
    if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0)) {
      throw std::invalid_argument("channel probabilities must lie in [0, 1]");
    }
  }

  // Binary symmetric channel with crossover probability epsilon.
  static BinaryAsymmetricChannel symmetric(double epsilon) { return {1.0 - epsilon, 1.0 - epsilon}; }

  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }
  bool is_symmetric() const noexcept { return p_ == q_; }

  // Probability that `input` is reproduced unchanged.
  double correct_probability(bool input) const noexcept { return input ? q_ : p_; }

  bool transmit(bool input, Rng& rng) const { return bernoulli(rng, correct_probability(input)) ? input : !input; }

  friend bool operator==(const BinaryAsymmetricChannel&, const BinaryAsymmetricChannel&) = default;

 private:
  double p_;
  double q_;
};

// One channel per output classifier; bits pass through independently.
class ChannelEnsemble {
 public:
  explicit ChannelEnsemble(std::vector<BinaryAsymmetricChannel> channels) : channels_(std::move(channels)) {}

  static ChannelEnsemble uniform(std::size_t n, const BinaryAsymmetricChannel& channel) {
    return ChannelEnsemble(std::vector<BinaryAsymmetricChannel>(n, channel));
  }

  std::size_t size() const noexcept { return channels_.size(); }
  const BinaryAsymmetricChannel& operator[](std::size_t i) const { return channels_[i]; }
  const std::vector<BinaryAsymmetricChannel>& channels() const noexcept { return channels_; }

 private:
  std::vector<BinaryAsymmetricChannel> channels_;
};

inline OutputString transmit(const ChannelEnsemble& ensemble, const OutputString& codeword, Rng& rng) {
  if (codeword.size() != ensemble.size()) throw std::invalid_argument("codeword length does not match ensemble size");
  OutputString out(codeword.size());
  for (std::size_t i = 0; i < codeword.size(); ++i) out.set(i, ensemble[i].transmit(codeword.get(i), rng));
  return out;
}

// Message source: independent fair attributes (uniform over 2^K) unless an
// explicit list of (message, probability) pairs is given.
class MessageDistribution {
 public:
  MessageDistribution() = default;

  explicit MessageDistribution(std::vector<std::pair<AttributeString, double>> weighted)
      : weighted_(std::move(weighted)) {
    if (weighted_.empty()) throw std::invalid_argument("explicit message distribution is empty");
    double total = 0.0;
    for (const auto& [m, w] : weighted_) {
      if (!(w >= 0.0)) throw std::invalid_argument("message probabilities must be non-negative");
      if (m.size() != weighted_.front().first.size()) throw std::invalid_argument("messages differ in length");
      total += w;
      cumulative_.push_back(total);
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("message probabilities must sum to 1");
  }

  bool is_uniform() const noexcept { return weighted_.empty(); }
  const std::vector<std::pair<AttributeString, double>>& weighted() const noexcept { return weighted_; }

  void check_length(std::size_t k) const {
    if (!is_uniform() && weighted_.front().first.size() != k) {
      throw std::invalid_argument("message distribution length does not match code K");
    }
  }

  // Message as a big-endian value.
  std::uint64_t sample_value(std::size_t k, Rng& rng) const {
    if (is_uniform()) return uniform_index(rng, std::uint64_t{1} << k);
    const double u = uniform01(rng) * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return weighted_[static_cast<std::size_t>(it - cumulative_.begin())].first.to_value();
  }

 private:
  std::vector<std::pair<AttributeString, double>> weighted_;
  std::vector<double> cumulative_;
};

struct SimConfig {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  MessageDistribution messages;
  // Probability that a trial draws one shared uniform for every output bit
  // (comonotone errors) instead of independent ones. 0 = independent.
  double shared_flip_probability = 0.0;
  unsigned threads = 0;  // 0 = hardware concurrency

  void validate() const {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (!(shared_flip_probability >= 0.0 && shared_flip_probability <= 1.0)) {
      throw std::invalid_argument("shared flip probability must lie in [0, 1]");
    }
  }
};

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

// Raw counters from a Monte Carlo run of encode -> channels -> decode.
struct SimulationStats {
  std::uint64_t trials = 0;
  std::uint64_t block_errors = 0;
  std::uint64_t ties = 0;
  std::uint64_t attribute_errors = 0;  // summed Hamming distance decoded vs. true message
  std::vector<std::uint64_t> bit_errors;  // per attribute

  MonteCarloEstimate block_error() const {
    const double p = static_cast<double>(block_errors) / static_cast<double>(trials);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials))};
  }

  double mean_hamming_distance() const {
    return static_cast<double>(attribute_errors) / static_cast<double>(trials);
  }

  std::vector<double> bit_accuracy() const {
    std::vector<double> acc;
    for (auto e : bit_errors) acc.push_back(1.0 - static_cast<double>(e) / static_cast<double>(trials));
    return acc;
  }
};

inline SimulationStats simulate(const OutputCode& code, const ChannelEnsemble& ensemble, const SimConfig& config) {
  config.validate();
  config.messages.check_length(code.k());
  if (ensemble.size() != code.n()) throw std::invalid_argument("ensemble size does not match code N");

  const std::size_t k = code.k();
  const std::size_t n = code.n();
  const CodeDecoder decoder(code);
  std::vector<std::uint64_t> rows = code.generator_rows();

  auto block = [&](Rng& rng, std::uint64_t, std::uint64_t count) {
    SimulationStats s;
    s.trials = count;
    s.bit_errors.assign(k, 0);
    OutputString received(n);
    for (std::uint64_t t = 0; t < count; ++t) {
      const std::uint64_t value = config.messages.sample_value(k, rng);
      const std::uint64_t mask = gf2::reverse_bits(value, static_cast<unsigned>(k));
      const bool shared = config.shared_flip_probability > 0.0 && bernoulli(rng, config.shared_flip_probability);
      const double shared_u = shared ? uniform01(rng) : 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const bool bit = gf2::parity(rows[j] & mask);
        const double u = shared ? shared_u : uniform01(rng);
        received.set(j, u < ensemble[j].correct_probability(bit) ? bit : !bit);
      }
      const auto decoded = decoder.decode_raw(received);
      const std::uint64_t diff = decoded.value ^ value;
      if (diff != 0) ++s.block_errors;
      if (decoded.tie) ++s.ties;
      s.attribute_errors += static_cast<std::uint64_t>(std::popcount(diff));
      for (std::size_t i = 0; i < k; ++i) s.bit_errors[i] += (diff >> (k - 1 - i)) & 1U;
    }
    return s;
  };

  SimulationStats total;
  total.bit_errors.assign(k, 0);
  for (const auto& s : run_blocks<SimulationStats>(config.trials, config.seed, block, config.threads)) {
    total.trials += s.trials;
    total.block_errors += s.block_errors;
    total.ties += s.ties;
    total.attribute_errors += s.attribute_errors;
    for (std::size_t i = 0; i < k; ++i) total.bit_errors[i] += s.bit_errors[i];
  }
  return total;
}

inline MonteCarloEstimate block_error_monte_carlo(const OutputCode& code, const ChannelEnsemble& ensemble,
                                                  const SimConfig& config) {
  return simulate(code, ensemble, config).block_error();
}

// Decoded ("corrected") accuracy of each primitive attribute.
inline std::vector<double> per_bit_accuracy(const OutputCode& code, const ChannelEnsemble& ensemble,
                                            const SimConfig& config) {
  return simulate(code, ensemble, config).bit_accuracy();
}

inline constexpr std::size_t kExactMaxLength = 20;
inline constexpr std::size_t kExactMaxAttributes = 12;

// Exact P(decoded message != sent message): sums the probability of every
// one of the 2^N received words under each message, using the same
// smallest-message tie-break as decode_nearest.
inline double block_error_exact(const OutputCode& code, const ChannelEnsemble& ensemble,
                                const MessageDistribution& messages = {}) {
  if (code.n() > kExactMaxLength || code.k() > kExactMaxAttributes) {
    throw capacity_error("exact block error enumerates 2^N outputs; needs N <= 20 and K <= 12 (use Monte Carlo)");
  }
  if (ensemble.size() != code.n()) throw std::invalid_argument("ensemble size does not match code N");
  messages.check_length(code.k());

  const std::size_t k = code.k();
  const std::size_t n = code.n();
  const std::uint64_t outputs = std::uint64_t{1} << n;

  // decoded[y] = decoded message value for received word y (bit j = output j)
  const SyndromeDecoder decoder(code);
  std::vector<std::uint32_t> decoded(static_cast<std::size_t>(outputs));
  OutputString y(n);
  for (std::uint64_t w = 0; w < outputs; ++w) {
    y.words()[0] = w;
    decoded[static_cast<std::size_t>(w)] = static_cast<std::uint32_t>(decoder.decode(y).message.to_value());
  }

  const auto rows = code.generator_rows();
  std::vector<double> likelihood(static_cast<std::size_t>(outputs));
  auto error_given = [&](std::uint64_t value) {
    const std::uint64_t mask = gf2::reverse_bits(value, static_cast<unsigned>(k));
    // likelihood[y] = P(y | codeword), built one output position at a time.
    likelihood[0] = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      const bool bit = gf2::parity(rows[j] & mask);
      const double keep = ensemble[j].correct_probability(bit);
      const double p0 = bit ? 1.0 - keep : keep;
      const double p1 = 1.0 - p0;
      const std::size_t half = std::size_t{1} << j;
      for (std::size_t e = 0; e < half; ++e) {
        likelihood[e | half] = likelihood[e] * p1;
        likelihood[e] *= p0;
      }
    }
    double err = 0.0;
    for (std::uint64_t w = 0; w < outputs; ++w) {
      if (decoded[static_cast<std::size_t>(w)] != value) err += likelihood[static_cast<std::size_t>(w)];
    }
    return err;
  };

  if (messages.is_uniform()) {
    const std::uint64_t total = std::uint64_t{1} << k;
    double err = 0.0;
    for (std::uint64_t v = 0; v < total; ++v) err += error_given(v);
    return err / static_cast<double>(total);
  }
  double err = 0.0;
  for (const auto& [m, w] : messages.weighted()) {
    if (w > 0.0) err += w * error_given(m.to_value());
  }
  return err;
}

struct DecayFit {
  double slope = 0.0;  // d log(block error) / d n_r
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<double> block_errors;  // one per n_r, in input order
};

// Ordinary least squares fit of y on x with coefficient of determination.
inline DecayFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  DecayFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

// Fits log(block error) against n_r for repetition codes over a uniform
// ensemble. Uses exact enumeration where it fits, Monte Carlo otherwise.
inline DecayFit repetition_decay_fit(std::size_t k, const BinaryAsymmetricChannel& channel,
                                     const std::vector<std::size_t>& copies_range, const SimConfig& config) {
  if (copies_range.size() < 2) throw std::invalid_argument("decay fit needs at least two n_r values");
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> errors;
  for (auto copies : copies_range) {
    if (copies % 2 == 0) throw std::invalid_argument("decay fit needs odd n_r (even counts tie)");
    const auto code = make_repetition_code(k, copies);
    const auto ensemble = ChannelEnsemble::uniform(code.n(), channel);
    const double err = (code.n() <= kExactMaxLength && k <= kExactMaxAttributes)
                           ? block_error_exact(code, ensemble, config.messages)
                           : block_error_monte_carlo(code, ensemble, config).estimate;
    if (!(err > 0.0)) {
      throw insufficient_samples_error("block error estimate is 0 at n_r = " + std::to_string(copies) +
                                       "; cannot fit a log-linear decay");
    }
    xs.push_back(static_cast<double>(copies));
    ys.push_back(std::log(err));
    errors.push_back(err);
  }
  auto fit = fit_line(xs, ys);
  fit.block_errors = std::move(errors);
  return fit;
}

}  // namespace ppc
