#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

// Small GF(2) linear algebra over rows packed into 64-bit masks.
namespace ppc::gf2 {

inline bool parity(std::uint64_t x) noexcept { return (std::popcount(x) & 1) != 0; }

// Rank of the matrix whose rows are the given masks.
inline std::size_t rank(std::span<const std::uint64_t> rows) {
  std::vector<std::uint64_t> basis;  // basis[k] has a unique leading bit
  for (std::uint64_t r : rows) {
    for (std::uint64_t b : basis) {
      if ((r ^ b) < r) r ^= b;  // clears b's leading bit from r when set
    }
    if (r != 0) {
      basis.push_back(r);
      std::sort(basis.begin(), basis.end(), std::greater<>());
    }
  }
  return basis.size();
}

// Reverses the low `width` bits of x.
inline std::uint64_t reverse_bits(std::uint64_t x, unsigned width) noexcept {
  std::uint64_t out = 0;
  for (unsigned i = 0; i < width; ++i) {
    out = (out << 1) | (x & 1U);
    x >>= 1;
  }
  return out;
}

// Information-set solver for a full-rank N x K generator given as N row masks
// (row j = the attribute mask of output j). Picks K linearly independent rows
// and inverts them, so a codeword restricted to those rows yields its message.
class InformationSet {
 public:
  static std::optional<InformationSet> build(std::span<const std::uint64_t> rows, unsigned k) {
    InformationSet s;
    // Each candidate row carries a combination mask over the chosen rows so
    // the inverse falls out of the elimination.
    std::vector<std::uint64_t> reduced;
    std::vector<std::uint64_t> combo;
    for (std::size_t j = 0; j < rows.size() && s.positions_.size() < k; ++j) {
      std::uint64_t r = rows[j];
      std::uint64_t c = std::uint64_t{1} << s.positions_.size();
      for (std::size_t b = 0; b < reduced.size(); ++b) {
        const std::uint64_t lead = std::uint64_t{1} << (63 - std::countl_zero(reduced[b]));
        if (r & lead) {
          r ^= reduced[b];
          c ^= combo[b];
        }
      }
      if (r == 0) continue;
      // Keep the basis fully reduced on leading bits.
      const std::uint64_t lead = std::uint64_t{1} << (63 - std::countl_zero(r));
      for (std::size_t b = 0; b < reduced.size(); ++b) {
        if (reduced[b] & lead) {
          reduced[b] ^= r;
          combo[b] ^= c;
        }
      }
      reduced.push_back(r);
      combo.push_back(c);
      s.positions_.push_back(j);
    }
    if (s.positions_.size() < k) return std::nullopt;
    // reduced[b] has a single leading bit after full reduction and, being in
    // the row space of a K-column matrix with K independent rows, reduces to
    // a unit vector e_t. combo[b] expresses e_t in terms of the chosen rows.
    s.solve_.assign(k, 0);
    for (std::size_t b = 0; b < reduced.size(); ++b) {
      const unsigned t = static_cast<unsigned>(63 - std::countl_zero(reduced[b]));
      s.solve_[t] = combo[b];
    }
    return s;
  }

  // Output positions forming the information set, in increasing order.
  std::span<const std::size_t> positions() const noexcept { return positions_; }

  // Message mask (bit t = attribute t) from the info-set bits (bit i = output
  // positions()[i]).
  std::uint64_t solve(std::uint64_t info_bits) const noexcept {
    std::uint64_t m = 0;
    for (std::size_t t = 0; t < solve_.size(); ++t) {
      if (parity(solve_[t] & info_bits)) m |= std::uint64_t{1} << t;
    }
    return m;
  }

 private:
  std::vector<std::size_t> positions_;
  std::vector<std::uint64_t> solve_;
};

}  // namespace ppc::gf2
