#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace seqlab {

/// Symbols used by Alphabet::first(k): the first k characters of this string.
inline constexpr std::string_view kDefaultSymbols =
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";

/// An ordered set of distinct single-byte symbols. The index of a symbol is
/// its position in the construction string and never changes.
class Alphabet {
 public:
  /// Throws ConfigError on an empty or duplicate-containing symbol list.
  explicit Alphabet(std::string symbols);

  /// The default alphabet of k symbols, k <= kDefaultSymbols.size().
  static Alphabet first(std::size_t k);

  std::size_t size() const noexcept { return symbols_.size(); }
  const std::string& symbols() const noexcept { return symbols_; }
  char symbol(std::size_t index) const { return symbols_.at(index); }

  std::optional<std::size_t> find(char c) const noexcept {
    const auto i = index_[static_cast<unsigned char>(c)];
    if (i < 0) return std::nullopt;
    return static_cast<std::size_t>(i);
  }
  bool contains(char c) const noexcept { return find(c).has_value(); }

  /// Throws AlphabetMismatch when c is not a member.
  std::size_t index_of(char c) const;

  /// Maps every character of s to its index; throws AlphabetMismatch.
  std::vector<std::uint8_t> encode(std::string_view s) const;

  friend bool operator==(const Alphabet& a, const Alphabet& b) noexcept {
    return a.symbols_ == b.symbols_;
  }

 private:
  std::string symbols_;
  std::array<std::int16_t, 256> index_{};
};

struct LzwEncoding {
  std::vector<std::uint32_t> codes;
  /// Dictionary size after the last code: p initial entries plus one per
  /// emitted code except the trailing flush.
  std::uint32_t dict_size_final = 0;
};

/// Greedy longest-match LZW. The dictionary starts with the alphabet's
/// symbols at indices 1..p and grows without bound; the pending match is
/// flushed as the final code.
LzwEncoding lzw_encode(std::string_view s, const Alphabet& alphabet);

/// Inverse of lzw_encode, including the code-equals-next-entry case.
/// Throws CorruptStream on an out-of-range code.
std::string lzw_decode(const LzwEncoding& encoding, const Alphabet& alphabet);

/// Number of codes lzw_encode produces for s.
std::size_t lzw_complexity(std::string_view s, const Alphabet& alphabet);

/// Incremental LZW complexity: feed symbols one at a time and read the
/// complexity of the prefix seen so far in O(1). Each push changes the
/// complexity by 0 or +1.
class LzwCounter {
 public:
  explicit LzwCounter(std::size_t alphabet_size);

  void push(std::size_t symbol);

  /// True when appending `symbol` would extend the pending match instead of
  /// emitting a code (so the complexity would stay the same).
  bool extends(std::size_t symbol) const;

  std::size_t complexity() const noexcept { return emitted_ + (current_ >= 0 ? 1 : 0); }
  std::size_t length() const noexcept { return length_; }
  std::size_t alphabet_size() const noexcept { return p_; }

 private:
  std::int32_t child(std::int32_t node, std::size_t symbol) const {
    return children_[static_cast<std::size_t>(node) * p_ + symbol];
  }
  std::int32_t add_node();

  std::size_t p_;
  std::vector<std::int32_t> children_;  // node * p + symbol -> node or -1
  std::int32_t current_ = -1;           // trie node of the pending match
  std::size_t emitted_ = 0;
  std::size_t length_ = 0;
};

}  // namespace seqlab
