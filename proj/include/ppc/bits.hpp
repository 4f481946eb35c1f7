#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ppc {

// Packed bit string. Bit i lives in word i/64 at position i%64; unused high
// bits of the last word are always zero. The tag keeps attribute strings and
// output strings from being mixed up.
template <class Tag>
class BitString {
 public:
  BitString() = default;

  explicit BitString(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  // Parses "0101..." (whitespace and '|' are ignored so "101|101" is accepted).
  static BitString from_string(std::string_view text) {
    std::vector<bool> bits;
    for (char c : text) {
      if (c == '0' || c == '1') {
        bits.push_back(c == '1');
      } else if (c != ' ' && c != '|' && c != '_') {
        throw std::invalid_argument("bit string may only contain '0' and '1'");
      }
    }
    BitString out(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) out.set(i, bits[i]);
    return out;
  }

  // Big-endian: bit 0 is the most significant bit of `value`.
  static BitString from_value(std::uint64_t value, std::size_t size) {
    if (size > 64) throw std::invalid_argument("from_value supports at most 64 bits");
    BitString out(size);
    for (std::size_t i = 0; i < size; ++i) out.set(i, (value >> (size - 1 - i)) & 1U);
    return out;
  }

  std::uint64_t to_value() const {
    if (size_ > 64) throw std::invalid_argument("to_value supports at most 64 bits");
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < size_; ++i) v = (v << 1) | static_cast<std::uint64_t>(get(i));
    return v;
  }

  std::size_t size() const noexcept { return size_; }

  bool get(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  bool operator[](std::size_t i) const { return get(i); }

  void set(std::size_t i, bool b) {
    const std::uint64_t mask = std::uint64_t{1} << (i % 64);
    if (b) {
      words_[i / 64] |= mask;
    } else {
      words_[i / 64] &= ~mask;
    }
  }

  void flip(std::size_t i) { words_[i / 64] ^= std::uint64_t{1} << (i % 64); }

  std::size_t popcount() const noexcept {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  BitString& operator^=(const BitString& other) {
    if (other.size_ != size_) throw std::invalid_argument("xor of bit strings with different lengths");
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
    return *this;
  }

  friend BitString operator^(BitString a, const BitString& b) { return a ^= b; }

  BitString complement() const {
    BitString out(size_);
    for (std::size_t i = 0; i < size_; ++i) out.set(i, !get(i));
    return out;
  }

  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::span<std::uint64_t> words() noexcept { return words_; }

  std::string to_string() const {
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i) {
      if (get(i)) s[i] = '1';
    }
    return s;
  }

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

struct AttributeTag {};
struct OutputTag {};

// K-bit primitive attribute string (the message).
using AttributeString = BitString<AttributeTag>;
// N-bit classifier-ensemble output string (codeword or noisy observation).
using OutputString = BitString<OutputTag>;

}  // namespace ppc
