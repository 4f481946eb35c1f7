// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "ppc/ppc.hpp"

using namespace ppc;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_seconds, const std::function<Verdict()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v{false, ""};
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = seconds < budget_seconds;
  const bool pass = v.pass && in_time;
  if (!pass) ++failures;
  std::printf("[%s] %d %s: %s (%.2f s, budget %.0f s%s)\n", pass ? "PASS" : "FAIL", id, title, v.detail.c_str(),
              seconds, budget_seconds, in_time ? "" : ", over budget");
  std::fflush(stdout);
}

std::string fmt(const char* pattern, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
  return buf;
}

Verdict confidence_case(const EstimatorParams& params, double target) {
  const auto b = confidence_bound(params);
  const bool pass = std::abs(b.confidence - target) <= 0.01;
  // Interpretation in force: threshold ceil((alpha+eps1)M) in double
  // precision, tail count N - floor((theta+eps2/2)N), theta grid plus the
  // exact left limits at its breakpoints, refined to 1e-6.
  return {pass, fmt("confidence %.10f vs %.3f, delta %+.6f, theta* %.6f", b.confidence, target, b.confidence - target,
                    b.sweep.minimizing_theta) +
                    (b.sweep.refined ? ", grid-stable" : ", NOT grid-stable")};
}

// Exhaustive nearest-codeword search over an explicit codebook.
DecodeResult exhaustive(const OutputCode& code, const OutputString& y) {
  DecodeResult best{AttributeString(code.k()), code.n() + 1, false};
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << code.k()); ++v) {
    const auto m = AttributeString::from_value(v, code.k());
    const auto d = hamming_distance(encode(code, m), y);
    if (d < best.distance) {
      best = {m, d, false};
    } else if (d == best.distance) {
      best.tie = true;
    }
  }
  return best;
}

OutputCode random_code(std::mt19937_64& rng, std::size_t k, std::size_t n) {
  for (;;) {
    std::vector<ParityCheck> checks;
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<std::size_t> support;
      while (support.empty()) {
        for (std::size_t i = 0; i < k; ++i) {
          if (rng() & 1U) support.push_back(i);
        }
      }
      checks.emplace_back(std::move(support));
    }
    try {
      return OutputCode("random", k, std::move(checks));
    } catch (const std::invalid_argument&) {
    }
  }
}

}  // namespace

int main() {
  const EstimatorParams multi_mnist{0.5, 100, 20, 0.19, 0.19};
  const EstimatorParams celeb_a{0.1, 100, 10, 0.2, 0.2};

  criterion(1, "confidence, alpha=0.5 eps1=eps2=0.19 N=100 M=20", 1.0,
            [&] { return confidence_case(multi_mnist, 0.963); });

  criterion(2, "confidence, alpha=0.1 eps1=eps2=0.2 N=100 M=10", 1.0, [&] { return confidence_case(celeb_a, 0.971); });

  criterion(3, "bound soundness, 5 oracles x 2 parameter sets x 1e4 runs", 120.0, [&] {
    bool pass = true;
    std::string detail;
    for (const auto* params : {&multi_mnist, &celeb_a}) {
      // Inaccurate categories sit just below alpha (most likely to be
      // falsely accepted); accurate ones are perfect.
      const double below = std::nextafter(params->alpha, 0.0);
      for (double theta : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const auto v = validate_bound({below, 1.0}, {1.0 - theta, theta}, *params, 10000,
                                      static_cast<std::uint64_t>(1000 * theta) + 17);
        const double limit = v.bound_error_rate + 3 * v.sigma;
        pass = pass && v.empirical_error_rate <= limit;
        if (!detail.empty()) detail += ", ";
        detail += fmt("theta %.2f %.4f<=%.4f", theta, v.empirical_error_rate, limit);
      }
      if (params == &multi_mnist) detail += " |";
    }
    return Verdict{pass, "empirical<=bound+3sigma: " + detail};
  });

  criterion(4, "Hamming(7,4) single-error correction", 1.0, [] {
    const auto code = make_hamming_7_4();
    const NearestDecoder decoder(code);
    int corrected = 0;
    for (std::uint64_t v = 0; v < 16; ++v) {
      const auto m = AttributeString::from_value(v, 4);
      for (std::size_t j = 0; j < 7; ++j) {
        auto y = encode(code, m);
        y.flip(j);
        if (decoder.decode(y).message == m) ++corrected;
      }
    }
    const auto d = min_distance(code);
    return Verdict{corrected == 112 && d == 3, fmt("%.0f/112 corrected, min distance %.0f", corrected, d)};
  });

  criterion(5, "coding gain, K=10 BSC 0.05, parity N=55 vs repetition N=50, 1e6 trials", 300.0, [] {
    const auto bsc = BinaryAsymmetricChannel::symmetric(0.05);
    const auto parity = make_pairwise_parity_code(10);
    const auto rep = make_repetition_code(10, 5);
    SimConfig config;
    config.trials = 1000000;
    config.seed = 2024;
    const auto p = block_error_monte_carlo(parity, ChannelEnsemble::uniform(parity.n(), bsc), config);
    const auto r = block_error_monte_carlo(rep, ChannelEnsemble::uniform(rep.n(), bsc), config);
    const double combined = std::sqrt(p.std_error * p.std_error + r.std_error * r.std_error);
    const double gap = r.estimate - p.estimate;
    return Verdict{gap > 4 * combined, fmt("parity %.6f, repetition %.6f, gap %.1f combined std errors", p.estimate,
                                           r.estimate, gap / combined)};
  });

  criterion(6, "repetition decay, K=1 eps=0.2, n_r=1..9 odd, exact", 1.0, [] {
    const auto fit = repetition_decay_fit(1, BinaryAsymmetricChannel::symmetric(0.2), {1, 3, 5, 7, 9}, SimConfig{});
    return Verdict{fit.r_squared >= 0.98 && fit.slope < 0,
                   fmt("slope %.4f per copy, r^2 %.5f", fit.slope, fit.r_squared)};
  });

  criterion(7, "XOR separability after quadratic transform", 10.0, [] {
    std::vector<Example> xor_data;
    for (double a : {0.0, 1.0}) {
      for (double b : {0.0, 1.0}) xor_data.push_back({{a, b}, a != b ? 1 : -1});
    }
    const bool raw = train_perceptron(xor_data, 1000, 1).converged;
    const bool lifted = train_perceptron(quad_transform(xor_data), 1000, 1).converged;
    int pairs = 0;
    int separable = 0;
    for (std::size_t k = 2; k <= 6; ++k) {
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
          const auto data = parity_dataset(k, {i, j}, 0.0, 400, 31 * k + i + j);
          ++pairs;
          if (train_perceptron(quad_transform(data), 1000, 5).converged) ++separable;
        }
      }
    }
    return Verdict{!raw && lifted && separable == pairs,
                   fmt("raw XOR converged=%.0f, transformed=%.0f, K<=6 pair parities separable %.0f/%.0f", raw, lifted,
                       separable, pairs)};
  });

  criterion(8, "decoders agree with exhaustive search, 1e4 words", 30.0, [] {
    std::mt19937_64 rng(8);
    int words = 0;
    int agree = 0;
    while (words < 10000) {
      const std::size_t k = 1 + rng() % 8;
      const bool repetition = rng() % 3 == 0;
      OutputCode code = repetition ? make_repetition_code(k, 1 + rng() % (16 / k)) : random_code(rng, k, k + rng() % (17 - k));
      const CodeDecoder fast(code);
      const SyndromeDecoder syndrome(code);
      const double flip = 0.05 + 0.4 * static_cast<double>(rng() % 100) / 100.0;
      for (int t = 0; t < 100; ++t, ++words) {
        auto y = encode(code, AttributeString::from_value(rng() & ((1U << k) - 1), k));
        for (std::size_t j = 0; j < code.n(); ++j) {
          if (uniform01(rng) < flip) y.flip(j);
        }
        const auto truth = exhaustive(code, y);
        if (fast.decode(y) == truth && syndrome.decode(y) == truth) ++agree;
      }
    }
    return Verdict{agree == words, fmt("%.0f/%.0f words identical (message, distance, tie)", agree, words)};
  });

  criterion(9, "Hamming(7,4) exact vs Monte Carlo, 100 seeds x 1e5 trials", 60.0, [] {
    const auto code = make_hamming_7_4();
    bool pass = true;
    std::string detail;
    for (double eps : {0.01, 0.05, 0.1}) {
      const auto ensemble = ChannelEnsemble::uniform(7, BinaryAsymmetricChannel::symmetric(eps));
      const double exact = block_error_exact(code, ensemble);
      int within = 0;
      for (std::uint64_t seed = 0; seed < 100; ++seed) {
        SimConfig config;
        config.trials = 100000;
        config.seed = seed;
        const auto mc = block_error_monte_carlo(code, ensemble, config);
        if (std::abs(mc.estimate - exact) <= 4 * mc.std_error) ++within;
      }
      pass = pass && within >= 99;
      if (!detail.empty()) detail += "; ";
      detail += fmt("eps %.2f: exact %.6f, %.0f/100 within 4se", eps, exact, within);
    }
    return Verdict{pass, detail};
  });

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
