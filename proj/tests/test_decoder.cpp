#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "ppc/codes.hpp"
#include "ppc/decoder.hpp"

using namespace ppc;

namespace {

OutputString out(const char* s) { return OutputString::from_string(s); }

// Reference: encode every message and keep the first (smallest) minimiser.
DecodeResult brute_force_decode(const OutputCode& code, const OutputString& observed) {
  DecodeResult best{AttributeString(code.k()), code.n() + 1, false};
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << code.k()); ++v) {
    const auto m = AttributeString::from_value(v, code.k());
    const auto d = hamming_distance(encode(code, m), observed);
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
      // rank deficient, draw again
    }
  }
}

}  // namespace

TEST(HammingDistance, Examples) {
  EXPECT_EQ(hamming_distance(out("000"), out("000")), 0u);
  EXPECT_EQ(hamming_distance(out("101"), out("011")), 2u);
  const auto x = out("1100101");
  EXPECT_EQ(hamming_distance(x, x.complement()), 7u);
  EXPECT_THROW(hamming_distance(out("10"), out("101")), std::invalid_argument);
}

TEST(DecodeNearest, PairwiseParityExample) {
  const auto r = decode_nearest(make_pairwise_parity_code(2), out("110"));
  EXPECT_EQ(r.message.to_string(), "11");
  EXPECT_EQ(r.distance, 0u);
  EXPECT_FALSE(r.tie);
}

TEST(DecodeNearest, TieGoesToSmallestMessage) {
  // 100 is at distance 1 from 000, 101 and 110.
  const auto r = decode_nearest(make_pairwise_parity_code(2), out("100"));
  EXPECT_EQ(r.message.to_string(), "00");
  EXPECT_EQ(r.distance, 1u);
  EXPECT_TRUE(r.tie);
}

TEST(DecodeNearest, HammingCorrectsEverySingleError) {
  const auto code = make_hamming_7_4();
  for (std::uint64_t v = 0; v < 16; ++v) {
    const auto m = AttributeString::from_value(v, 4);
    for (std::size_t flip = 0; flip < 7; ++flip) {
      auto y = encode(code, m);
      y.flip(flip);
      const auto r = decode_nearest(code, y);
      EXPECT_EQ(r.message, m);
      EXPECT_EQ(r.distance, 1u);
      EXPECT_FALSE(r.tie);
    }
  }
}

TEST(DecodeNearest, RoundTripForAllFamilies) {
  for (std::size_t k = 1; k <= 10; ++k) {
    std::vector<OutputCode> codes{make_identity_code(k), make_repetition_code(k, 2)};
    if (k >= 2) codes.push_back(make_pairwise_parity_code(k));
    for (const auto& code : codes) {
      const NearestDecoder decoder(code);
      for (std::uint64_t v = 0; v < (std::uint64_t{1} << k); ++v) {
        const auto m = AttributeString::from_value(v, k);
        const auto r = decoder.decode(encode(code, m));
        ASSERT_EQ(r.message, m) << code.name();
        ASSERT_EQ(r.distance, 0u);
        ASSERT_FALSE(r.tie);
      }
    }
  }
}

TEST(DecodeNearest, MatchesBruteForceOnRandomWords) {
  std::mt19937_64 rng(3);
  for (int c = 0; c < 40; ++c) {
    const std::size_t k = 1 + rng() % 8;
    const std::size_t n = k + rng() % 10;
    const auto code = random_code(rng, k, n);
    const NearestDecoder decoder(code);
    for (int t = 0; t < 50; ++t) {
      OutputString y(n);
      for (std::size_t j = 0; j < n; ++j) y.set(j, rng() & 1U);
      const auto r = decoder.decode(y);
      EXPECT_EQ(r, brute_force_decode(code, y));
      EXPECT_EQ(r.distance, hamming_distance(encode(code, r.message), y));
    }
  }
}

TEST(DecodeNearest, StreamingPathMatchesBruteForce) {
  // K = 17 is above the codebook cache limit.
  auto checks = make_pairwise_parity_code(17).prefix(30).checks();
  const OutputCode code("wide", 17, checks);
  const NearestDecoder decoder(code);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 3; ++t) {
    OutputString y(code.n());
    for (std::size_t j = 0; j < code.n(); ++j) y.set(j, rng() & 1U);
    EXPECT_EQ(decoder.decode(y), brute_force_decode(code, y));
  }
}

TEST(DecodeNearest, BoundedDistanceCorrection) {
  std::mt19937_64 rng(9);
  for (std::size_t k = 3; k <= 8; ++k) {
    const auto code = make_pairwise_parity_code(k);
    const std::size_t t = (min_distance(code) - 1) / 2;
    const NearestDecoder decoder(code);
    for (int trial = 0; trial < 200; ++trial) {
      const auto m = AttributeString::from_value(rng() % (1U << k), k);
      auto y = encode(code, m);
      std::vector<std::size_t> positions(code.n());
      std::iota(positions.begin(), positions.end(), std::size_t{0});
      std::shuffle(positions.begin(), positions.end(), rng);
      const std::size_t weight = rng() % (t + 1);
      for (std::size_t i = 0; i < weight; ++i) y.flip(positions[i]);
      const auto r = decoder.decode(y);
      ASSERT_EQ(r.message, m) << "k=" << k << " weight=" << weight;
      ASSERT_EQ(r.distance, weight);
    }
  }
}

TEST(DecodeNearest, Errors) {
  EXPECT_THROW(decode_nearest(make_hamming_7_4(), out("000000")), std::invalid_argument);
}

TEST(DecodeRepetitionMajority, Examples) {
  const auto r = decode_repetition_majority(1, 3, out("101"));
  EXPECT_EQ(r.message.to_string(), "1");
  EXPECT_EQ(r.distance, 1u);
  const auto code = make_repetition_code(2, 3);
  const auto clean = decode_repetition_majority(2, 3, encode(code, AttributeString::from_string("10")));
  EXPECT_EQ(clean.message.to_string(), "10");
  EXPECT_EQ(clean.distance, 0u);
  const auto split = decode_repetition_majority(1, 2, out("10"));
  EXPECT_EQ(split.message.to_string(), "0");
  EXPECT_TRUE(split.tie);
  EXPECT_THROW(decode_repetition_majority(2, 3, out("10101")), std::invalid_argument);
}

TEST(DecodeRepetitionMajority, AgreesWithNearestSearch) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t k = 1 + rng() % 8;
    const std::size_t copies = 1 + rng() % 5;  // odd and even
    const auto code = make_repetition_code(k, copies);
    OutputString y(code.n());
    for (std::size_t j = 0; j < code.n(); ++j) y.set(j, rng() & 1U);
    ASSERT_EQ(decode_repetition_majority(k, copies, y), decode_nearest(code, y)) << "k=" << k << " n_r=" << copies;
  }
}

TEST(SyndromeDecoder, AgreesWithNearestSearch) {
  std::mt19937_64 rng(17);
  for (int c = 0; c < 30; ++c) {
    const std::size_t k = 1 + rng() % 8;
    const std::size_t n = k + rng() % (17 - k);
    const auto code = random_code(rng, k, n);
    const SyndromeDecoder syndrome(code);
    const NearestDecoder nearest(code);
    for (int t = 0; t < 100; ++t) {
      OutputString y(n);
      for (std::size_t j = 0; j < n; ++j) y.set(j, rng() & 1U);
      ASSERT_EQ(syndrome.decode(y), nearest.decode(y));
    }
  }
}

TEST(SyndromeDecoder, RejectsLongCodes) {
  EXPECT_THROW(SyndromeDecoder(make_repetition_code(7, 3)), capacity_error);
}

TEST(CodeDecoder, DispatchesAndAgrees) {
  const auto rep = make_repetition_code(3, 4);
  const CodeDecoder fast(rep);
  const NearestDecoder slow(rep);
  std::mt19937_64 rng(19);
  for (int t = 0; t < 200; ++t) {
    OutputString y(rep.n());
    for (std::size_t j = 0; j < rep.n(); ++j) y.set(j, rng() & 1U);
    EXPECT_EQ(fast.decode(y), slow.decode(y));
    EXPECT_EQ(fast.decode_raw(y).value, slow.decode(y).message.to_value());
  }
}
