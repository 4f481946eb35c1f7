#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "ppc/bits.hpp"
#include "ppc/errors.hpp"
#include "ppc/gf2.hpp"

namespace ppc {

inline constexpr std::size_t kMaxAttributes = 24;

// One encoding function: the mod-2 sum of the attributes in `support`.
// A singleton support is a primitive attribute, anything larger a derived
// (parity) attribute.
class ParityCheck {
 public:
  ParityCheck(std::initializer_list<std::size_t> support) : ParityCheck(std::vector<std::size_t>(support)) {}

  explicit ParityCheck(std::vector<std::size_t> support) {
    if (support.empty()) throw std::invalid_argument("parity check support must be non-empty");
    std::sort(support.begin(), support.end());
    if (std::adjacent_find(support.begin(), support.end()) != support.end()) {
      throw std::invalid_argument("parity check support has duplicate indices");
    }
    if (support.back() >= kMaxAttributes) {
      throw std::invalid_argument("parity check index exceeds the attribute limit");
    }
    for (auto i : support) mask_ |= std::uint32_t{1} << i;
  }

  // Bit i set iff attribute i is in the support.
  std::uint32_t mask() const noexcept { return mask_; }

  std::vector<std::size_t> support() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < kMaxAttributes; ++i) {
      if (mask_ & (std::uint32_t{1} << i)) out.push_back(i);
    }
    return out;
  }

  std::size_t weight() const noexcept { return static_cast<std::size_t>(std::popcount(mask_)); }
  bool is_primitive() const noexcept { return weight() == 1; }

  bool evaluate(const AttributeString& x) const noexcept { return gf2::parity(mask_ & x.words()[0]); }

  friend bool operator==(const ParityCheck&, const ParityCheck&) = default;

 private:
  std::uint32_t mask_ = 0;
};

enum class CodeFamily { identity, repetition, pairwise_parity, hamming_7_4, custom };

// Binary linear error-correcting output code: an ordered list of N parity
// checks over K attributes. The generator must have rank K so that encoding
// is injective and nearest-codeword decoding is well posed.
class OutputCode {
 public:
  OutputCode(std::string name, std::size_t k, std::vector<ParityCheck> checks,
             CodeFamily family = CodeFamily::custom, std::size_t repetitions = 0)
      : name_(std::move(name)), k_(k), checks_(std::move(checks)), family_(family), repetitions_(repetitions) {
    if (k_ < 1 || k_ > kMaxAttributes) throw std::invalid_argument("K must be in [1, 24]");
    if (checks_.empty()) throw std::invalid_argument("a code needs at least one parity check");
    std::vector<std::uint64_t> rows;
    rows.reserve(checks_.size());
    for (const auto& c : checks_) {
      if (c.mask() >> k_) throw std::invalid_argument("parity check index out of range for K");
      rows.push_back(c.mask());
    }
    if (gf2::rank(rows) != k_) throw std::invalid_argument("generator matrix does not have rank K");
    if (family_ == CodeFamily::repetition && repetitions_ * k_ != checks_.size()) {
      throw std::invalid_argument("repetition count inconsistent with code length");
    }
  }

  const std::string& name() const noexcept { return name_; }
  std::size_t k() const noexcept { return k_; }
  std::size_t n() const noexcept { return checks_.size(); }
  const std::vector<ParityCheck>& checks() const noexcept { return checks_; }
  CodeFamily family() const noexcept { return family_; }
  // Number of primitive-block copies for repetition codes, 0 otherwise.
  std::size_t repetitions() const noexcept { return repetitions_; }

  double rate() const noexcept { return static_cast<double>(k_) / static_cast<double>(checks_.size()); }

  // Row masks of the N x K generator (row j = support of check j).
  std::vector<std::uint64_t> generator_rows() const {
    std::vector<std::uint64_t> rows;
    rows.reserve(checks_.size());
    for (const auto& c : checks_) rows.push_back(c.mask());
    return rows;
  }

  // Column i of the generator as an output string: the codeword of the unit
  // message e_i.
  OutputString column(std::size_t attribute) const {
    OutputString col(n());
    for (std::size_t j = 0; j < n(); ++j) col.set(j, (checks_[j].mask() >> attribute) & 1U);
    return col;
  }

  // The first `length` checks as a code in its own right. Repetition prefixes
  // that cover whole copies stay repetition codes.
  OutputCode prefix(std::size_t length) const {
    if (length < 1 || length > n()) throw std::invalid_argument("prefix length out of range");
    std::vector<ParityCheck> head(checks_.begin(), checks_.begin() + static_cast<std::ptrdiff_t>(length));
    if (length == n()) return *this;
    if (family_ == CodeFamily::repetition && length % k_ == 0) {
      return OutputCode(name_ + "[:" + std::to_string(length) + "]", k_, std::move(head), CodeFamily::repetition,
                        length / k_);
    }
    return OutputCode(name_ + "[:" + std::to_string(length) + "]", k_, std::move(head));
  }

  friend bool operator==(const OutputCode& a, const OutputCode& b) {
    return a.name_ == b.name_ && a.k_ == b.k_ && a.checks_ == b.checks_;
  }

 private:
  std::string name_;
  std::size_t k_;
  std::vector<ParityCheck> checks_;
  CodeFamily family_;
  std::size_t repetitions_;
};

inline OutputString encode(const OutputCode& code, const AttributeString& x) {
  if (x.size() != code.k()) throw std::invalid_argument("attribute string length does not match code K");
  OutputString y(code.n());
  const auto& checks = code.checks();
  for (std::size_t j = 0; j < checks.size(); ++j) y.set(j, checks[j].evaluate(x));
  return y;
}

inline OutputCode make_identity_code(std::size_t k) {
  if (k < 1) throw std::invalid_argument("identity code needs K >= 1");
  std::vector<ParityCheck> checks;
  for (std::size_t i = 0; i < k; ++i) checks.push_back(ParityCheck{i});
  return OutputCode("identity_k" + std::to_string(k), k, std::move(checks), CodeFamily::identity);
}

// n_r back-to-back copies of the primitive block: check j covers attribute j % K.
inline OutputCode make_repetition_code(std::size_t k, std::size_t copies) {
  if (k < 1 || copies < 1) throw std::invalid_argument("repetition code needs K >= 1 and n_r >= 1");
  std::vector<ParityCheck> checks;
  for (std::size_t r = 0; r < copies; ++r) {
    for (std::size_t i = 0; i < k; ++i) checks.push_back(ParityCheck{i});
  }
  return OutputCode("repetition_k" + std::to_string(k) + "_r" + std::to_string(copies), k, std::move(checks),
                    CodeFamily::repetition, copies);
}

// Primitives first, then every pair {i, j}, i < j, in lexicographic order.
inline OutputCode make_pairwise_parity_code(std::size_t k) {
  if (k < 2) throw std::invalid_argument("pairwise-parity code needs K >= 2");
  std::vector<ParityCheck> checks;
  for (std::size_t i = 0; i < k; ++i) checks.push_back(ParityCheck{i});
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) checks.push_back(ParityCheck{i, j});
  }
  return OutputCode("pairwise_parity_k" + std::to_string(k), k, std::move(checks), CodeFamily::pairwise_parity);
}

// Systematic (7,4) Hamming code; the last parity is x2+x3+x4 in 1-based terms.
inline OutputCode make_hamming_7_4() {
  return OutputCode("hamming_7_4", 4,
                    {ParityCheck{0}, ParityCheck{1}, ParityCheck{2}, ParityCheck{3}, ParityCheck{0, 1, 3},
                     ParityCheck{0, 2, 3}, ParityCheck{1, 2, 3}},
                    CodeFamily::hamming_7_4);
}

// Position of check {i, j} (i < j) among the pair checks of a pairwise-parity code.
inline std::size_t pair_index(std::size_t k, std::size_t i, std::size_t j) noexcept {
  return i * k - i * (i + 1) / 2 + (j - i - 1);
}

// Minimum Hamming weight over nonzero codewords (the minimum distance, by
// linearity). Walks all 2^K - 1 messages in Gray-code order so each step is
// a single column xor.
inline std::size_t min_distance(const OutputCode& code) {
  if (code.k() > kMaxAttributes) throw capacity_error("min_distance enumerates 2^K messages; K must be <= 24");
  std::vector<OutputString> columns;
  for (std::size_t i = 0; i < code.k(); ++i) columns.push_back(code.column(i));
  OutputString word(code.n());
  std::size_t best = std::numeric_limits<std::size_t>::max();
  const std::uint64_t total = std::uint64_t{1} << code.k();
  for (std::uint64_t step = 1; step < total; ++step) {
    word ^= columns[static_cast<std::size_t>(std::countr_zero(step))];
    best = std::min(best, word.popcount());
  }
  return best;
}

}  // namespace ppc
