#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "structsparse/core/signal.hpp"

namespace structsparse {

/// Fixed-width bitset used by the dynamic programs to carry a selected set
/// alongside its value, so ties can be resolved without backtracking.
class IndexBitset {
 public:
  IndexBitset() = default;
  explicit IndexBitset(Index n) : words_(static_cast<std::size_t>((n + 63) / 64), 0) {}

  void set(Index i) { words_[static_cast<std::size_t>(i / 64)] |= std::uint64_t{1} << (i % 64); }
  bool test(Index i) const { return (words_[static_cast<std::size_t>(i / 64)] >> (i % 64)) & 1u; }

  IndexBitset& operator|=(const IndexBitset& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= o.words_[w];
    return *this;
  }
  friend IndexBitset operator|(IndexBitset a, const IndexBitset& b) { return a |= b; }

  /// Lexicographic order of the sorted member lists for equal-size sets:
  /// the set containing the smallest differing index comes first.
  bool lex_less(const IndexBitset& o) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      const std::uint64_t diff = words_[w] ^ o.words_[w];
      if (diff) {
        const int bit = std::countr_zero(diff);
        return (words_[w] >> bit) & 1u;
      }
    }
    return false;
  }

  std::vector<Index> members() const {
    std::vector<Index> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t word = words_[w];
      while (word) {
        const int bit = std::countr_zero(word);
        out.push_back(static_cast<Index>(w * 64 + static_cast<std::size_t>(bit)));
        word &= word - 1;
      }
    }
    return out;
  }

  friend bool operator==(const IndexBitset&, const IndexBitset&) = default;

 private:
  std::vector<std::uint64_t> words_;
};

}  // namespace structsparse
