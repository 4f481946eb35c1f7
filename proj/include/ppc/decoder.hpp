#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ppc/bits.hpp"
#include "ppc/codes.hpp"
#include "ppc/errors.hpp"
#include "ppc/gf2.hpp"

namespace ppc {

struct DecodeResult {
  AttributeString message;
  std::size_t distance = 0;
  bool tie = false;  // at least two codewords achieved `distance`

  friend bool operator==(const DecodeResult&, const DecodeResult&) = default;
};

inline std::size_t hamming_distance(const OutputString& a, const OutputString& b) {
  if (a.size() != b.size()) throw std::invalid_argument("hamming_distance needs equal lengths");
  std::size_t d = 0;
  const auto wa = a.words();
  const auto wb = b.words();
  for (std::size_t w = 0; w < wa.size(); ++w) d += static_cast<std::size_t>(std::popcount(wa[w] ^ wb[w]));
  return d;
}

namespace detail {

// Decode outcome with the message as a big-endian integer value.
struct RawDecode {
  std::uint64_t value = 0;
  std::size_t distance = 0;
  bool tie = false;
};

inline DecodeResult to_result(const RawDecode& raw, std::size_t k) {
  return {AttributeString::from_value(raw.value, k), raw.distance, raw.tie};
}

}  // namespace detail

// Exhaustive nearest-codeword decoder. Ties go to the numerically smallest
// message (attribute 0 is the most significant bit). For K <= 16 the whole
// codebook is cached; larger K streams the 2^K codewords per call.
class NearestDecoder {
 public:
  static constexpr std::size_t kCachedMaxK = 16;

  explicit NearestDecoder(const OutputCode& code) : k_(code.k()), n_(code.n()), words_per_((code.n() + 63) / 64) {
    if (k_ > kMaxAttributes) throw capacity_error("nearest-codeword decoding enumerates 2^K codewords; K must be <= 24");
    // Column for value bit t (LSB = 0) is attribute K-1-t.
    for (std::size_t t = 0; t < k_; ++t) {
      const auto col = code.column(k_ - 1 - t);
      columns_.insert(columns_.end(), col.words().begin(), col.words().end());
    }
    if (k_ <= kCachedMaxK) {
      const std::uint64_t total = std::uint64_t{1} << k_;
      codebook_.assign(static_cast<std::size_t>(total) * words_per_, 0);
      std::vector<std::uint64_t> word(words_per_, 0);
      for (std::uint64_t step = 1; step < total; ++step) {
        apply_column(word, static_cast<std::size_t>(std::countr_zero(step)));
        const std::uint64_t value = step ^ (step >> 1);
        std::copy(word.begin(), word.end(), codebook_.begin() + static_cast<std::ptrdiff_t>(value * words_per_));
      }
    }
  }

  std::size_t k() const noexcept { return k_; }
  std::size_t n() const noexcept { return n_; }

  DecodeResult decode(const OutputString& observed) const {
    if (observed.size() != n_) throw std::invalid_argument("observed string length does not match code N");
    return detail::to_result(decode_raw(observed.words()), k_);
  }

  detail::RawDecode decode_raw(std::span<const std::uint64_t> observed) const {
    return codebook_.empty() ? decode_streaming(observed) : decode_cached(observed);
  }

 private:
  void apply_column(std::vector<std::uint64_t>& word, std::size_t value_bit) const {
    const auto* col = columns_.data() + value_bit * words_per_;
    for (std::size_t w = 0; w < words_per_; ++w) word[w] ^= col[w];
  }

  detail::RawDecode decode_cached(std::span<const std::uint64_t> observed) const {
    const std::uint64_t total = std::uint64_t{1} << k_;
    detail::RawDecode best{0, std::numeric_limits<std::size_t>::max(), false};
    std::size_t count = 0;
    if (words_per_ == 1) {
      const std::uint64_t y = observed[0];
      for (std::uint64_t v = 0; v < total; ++v) {
        const auto d = static_cast<std::size_t>(std::popcount(codebook_[v] ^ y));
        if (d < best.distance) {
          best.distance = d;
          best.value = v;
          count = 1;
        } else if (d == best.distance) {
          ++count;
        }
      }
    } else {
      for (std::uint64_t v = 0; v < total; ++v) {
        const auto* cw = codebook_.data() + v * words_per_;
        std::size_t d = 0;
        for (std::size_t w = 0; w < words_per_; ++w) d += static_cast<std::size_t>(std::popcount(cw[w] ^ observed[w]));
        if (d < best.distance) {
          best.distance = d;
          best.value = v;
          count = 1;
        } else if (d == best.distance) {
          ++count;
        }
      }
    }
    best.tie = count > 1;
    return best;
  }

  detail::RawDecode decode_streaming(std::span<const std::uint64_t> observed) const {
    std::vector<std::uint64_t> word(words_per_, 0);
    auto distance = [&] {
      std::size_t d = 0;
      for (std::size_t w = 0; w < words_per_; ++w) d += static_cast<std::size_t>(std::popcount(word[w] ^ observed[w]));
      return d;
    };
    detail::RawDecode best{0, distance(), false};
    std::size_t count = 1;
    const std::uint64_t total = std::uint64_t{1} << k_;
    for (std::uint64_t step = 1; step < total; ++step) {
      apply_column(word, static_cast<std::size_t>(std::countr_zero(step)));
      const std::uint64_t value = step ^ (step >> 1);
      const auto d = distance();
      if (d < best.distance) {
        best = {value, d, false};
        count = 1;
      } else if (d == best.distance) {
        ++count;
        best.value = std::min(best.value, value);
      }
    }
    best.tie = count > 1;
    return best;
  }

  std::size_t k_;
  std::size_t n_;
  std::size_t words_per_;
  std::vector<std::uint64_t> columns_;
  std::vector<std::uint64_t> codebook_;
};

inline DecodeResult decode_nearest(const OutputCode& code, const OutputString& observed) {
  if (observed.size() != code.n()) throw std::invalid_argument("observed string length does not match code N");
  return NearestDecoder(code).decode(observed);
}

// Per-attribute majority vote over the n_r block copies. A split vote (even
// n_r) decodes to 0 and raises the tie flag, which is exactly the
// smallest-message tie-break of decode_nearest on the same code.
inline DecodeResult decode_repetition_majority(std::size_t k, std::size_t copies, const OutputString& observed) {
  if (k < 1 || copies < 1) throw std::invalid_argument("repetition decoding needs K >= 1 and n_r >= 1");
  if (observed.size() != k * copies) throw std::invalid_argument("observed length must be K * n_r");
  DecodeResult out{AttributeString(k), 0, false};
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t ones = 0;
    for (std::size_t r = 0; r < copies; ++r) ones += observed.get(r * k + i) ? 1 : 0;
    const std::size_t zeros = copies - ones;
    if (ones > zeros) {
      out.message.set(i, true);
      out.distance += zeros;
    } else {
      out.distance += ones;
      if (ones == zeros) out.tie = true;
    }
  }
  return out;
}

// Coset-leader decoder for short codes (N <= 20). Every received word is
// reduced to a canonical coset representative through an information set;
// the table keeps all minimum-weight patterns of each coset so ties and the
// smallest-message rule match the exhaustive decoder.
class SyndromeDecoder {
 public:
  static constexpr std::size_t kMaxLength = 20;

  explicit SyndromeDecoder(const OutputCode& code) : k_(code.k()), n_(code.n()), rows_(code.generator_rows()) {
    if (n_ > kMaxLength) throw capacity_error("syndrome table enumerates 2^N patterns; N must be <= 20");
    auto info = gf2::InformationSet::build(rows_, static_cast<unsigned>(k_));
    if (!info) throw std::invalid_argument("code generator does not have rank K");
    info_ = std::move(*info);
    std::uint64_t info_mask = 0;
    for (auto p : info_.positions()) info_mask |= std::uint64_t{1} << p;
    for (std::size_t j = 0; j < n_; ++j) {
      if (!((info_mask >> j) & 1U)) free_positions_.push_back(j);
    }

    const std::size_t cosets = std::size_t{1} << free_positions_.size();
    min_weight_.assign(cosets, std::numeric_limits<std::uint32_t>::max());
    // Two passes: find each coset's minimum weight, then collect its leaders.
    const std::uint64_t patterns = std::uint64_t{1} << n_;
    for (std::uint64_t e = 0; e < patterns; ++e) {
      auto& w = min_weight_[syndrome(e)];
      w = std::min<std::uint32_t>(w, static_cast<std::uint32_t>(std::popcount(e)));
    }
    leader_offsets_.assign(cosets + 1, 0);
    for (std::uint64_t e = 0; e < patterns; ++e) {
      const auto s = syndrome(e);
      if (static_cast<std::uint32_t>(std::popcount(e)) == min_weight_[s]) ++leader_offsets_[s + 1];
    }
    for (std::size_t s = 0; s < cosets; ++s) leader_offsets_[s + 1] += leader_offsets_[s];
    leaders_.resize(leader_offsets_.back());
    std::vector<std::size_t> fill(leader_offsets_.begin(), leader_offsets_.end() - 1);
    for (std::uint64_t e = 0; e < patterns; ++e) {
      const auto s = syndrome(e);
      if (static_cast<std::uint32_t>(std::popcount(e)) == min_weight_[s]) {
        leaders_[fill[s]++] = static_cast<std::uint32_t>(e);
      }
    }
  }

  DecodeResult decode(const OutputString& observed) const {
    if (observed.size() != n_) throw std::invalid_argument("observed string length does not match code N");
    const std::uint64_t y = observed.words()[0];
    const auto s = syndrome(y);
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    for (std::size_t i = leader_offsets_[s]; i < leader_offsets_[s + 1]; ++i) {
      const std::uint64_t value = gf2::reverse_bits(message_mask(y ^ leaders_[i]), static_cast<unsigned>(k_));
      best = std::min(best, value);
    }
    return {AttributeString::from_value(best, k_), min_weight_[s], leader_offsets_[s + 1] - leader_offsets_[s] > 1};
  }

 private:
  std::uint64_t message_mask(std::uint64_t word) const {
    std::uint64_t info_bits = 0;
    const auto pos = info_.positions();
    for (std::size_t i = 0; i < pos.size(); ++i) info_bits |= ((word >> pos[i]) & 1U) << i;
    return info_.solve(info_bits);
  }

  std::uint64_t codeword_mask(std::uint64_t message) const {
    std::uint64_t cw = 0;
    for (std::size_t j = 0; j < n_; ++j) {
      if (gf2::parity(rows_[j] & message)) cw |= std::uint64_t{1} << j;
    }
    return cw;
  }

  // Residual after removing the codeword that agrees on the information set;
  // it is zero on the information set, so the free positions identify the coset.
  std::size_t syndrome(std::uint64_t word) const {
    const std::uint64_t residual = word ^ codeword_mask(message_mask(word));
    std::size_t s = 0;
    for (std::size_t i = 0; i < free_positions_.size(); ++i) s |= ((residual >> free_positions_[i]) & 1U) << i;
    return s;
  }

  std::size_t k_;
  std::size_t n_;
  std::vector<std::uint64_t> rows_;
  gf2::InformationSet info_;
  std::vector<std::size_t> free_positions_;
  std::vector<std::uint32_t> min_weight_;
  std::vector<std::size_t> leader_offsets_;
  std::vector<std::uint32_t> leaders_;
};

// Decoder used by the simulators: majority vote for repetition codes,
// exhaustive nearest-codeword search otherwise. Both agree on every input.
class CodeDecoder {
 public:
  explicit CodeDecoder(const OutputCode& code)
      : k_(code.k()), copies_(code.family() == CodeFamily::repetition ? code.repetitions() : 0) {
    if (copies_ == 0) nearest_.emplace(code);
  }

  detail::RawDecode decode_raw(const OutputString& observed) const {
    if (copies_ == 0) return nearest_->decode_raw(observed.words());
    const auto r = decode_repetition_majority(k_, copies_, observed);
    return {r.message.to_value(), r.distance, r.tie};
  }

  DecodeResult decode(const OutputString& observed) const {
    if (copies_ == 0) return nearest_->decode(observed);
    return decode_repetition_majority(k_, copies_, observed);
  }

 private:
  std::size_t k_;
  std::size_t copies_;
  std::optional<NearestDecoder> nearest_;  // unset on the repetition path
};

}  // namespace ppc
