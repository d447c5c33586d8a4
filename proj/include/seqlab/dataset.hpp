#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seqlab/error.hpp"
#include "seqlab/lzw.hpp"
#include "seqlab/seedgen.hpp"

namespace seqlab {

struct DatasetSpec {
  std::size_t min_length = 1100;
  std::size_t window = 100;
  double test_fraction = 0.05;

  void validate() const;
};

/// Shortest concatenation of whole copies of `seed` that is at least
/// `min_length` long.
std::string repeat_to_length(std::string_view seed, std::size_t min_length);

/// `count` characters of the infinite repetition of `seed`, starting at
/// `position`. Used as ground truth for forecasts longer than the held-out
/// tail.
std::string continuation(std::string_view seed, std::size_t position, std::size_t count);

std::vector<std::uint8_t> one_hot(char symbol, const Alphabet& alphabet);

/// Index of the largest entry; ties go to the lowest index.
template <typename T>
std::size_t argmax_lowest(std::span<const T> values) {
  if (values.empty()) throw ShapeError("argmax of an empty vector");
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

template <typename T>
char decode_one_hot(std::span<const T> probabilities, const Alphabet& alphabet) {
  if (probabilities.size() != alphabet.size()) {
    throw ShapeError("probability vector has " + std::to_string(probabilities.size()) +
                     " entries, alphabet has " + std::to_string(alphabet.size()));
  }
  return alphabet.symbol(argmax_lowest(probabilities));
}

/// Dense {0,1} tensor in row-major order; rank 2 uses `steps == 1`.
struct OneHotTensor {
  std::size_t rows = 0, steps = 0, depth = 0;
  std::vector<std::uint8_t> data;

  std::uint8_t at(std::size_t row, std::size_t step, std::size_t k) const {
    return data[(row * steps + step) * depth + k];
  }
};

enum class Split { Train, Test };

/// Sliding-window next-symbol dataset over a repeated seed string `s`.
///
/// Window i covers s[i, i+n) and its target is s[i+n], for i in [0, m) with
/// m = |s| - 2n, so windows only read the leading |s| - n characters. The
/// validation string v is the trailing n characters of s. Windows are held as
/// start offsets into the encoded sequence; the explicit one-hot tensors are
/// available on demand.
class EncodedDataset {
 public:
  EncodedDataset(Alphabet alphabet, std::string sequence, std::size_t window,
                 std::vector<std::size_t> train_starts, std::vector<std::size_t> test_starts);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t window() const noexcept { return window_; }
  std::size_t m() const noexcept { return sequence_.size() - 2 * window_; }
  const std::string& sequence() const noexcept { return sequence_; }
  std::string_view validation() const noexcept {
    return std::string_view(sequence_).substr(sequence_.size() - window_);
  }
  /// Last n characters before v; forecasting from it predicts v.
  std::string_view forecast_seed_window() const noexcept {
    return std::string_view(sequence_).substr(sequence_.size() - 2 * window_, window_);
  }

  std::span<const std::size_t> starts(Split split) const noexcept {
    return split == Split::Train ? train_starts_ : test_starts_;
  }
  /// Symbol indices of the window starting at `start`.
  std::span<const std::uint8_t> window_at(std::size_t start) const {
    return std::span<const std::uint8_t>(encoded_).subspan(start, window_);
  }
  std::uint8_t target_at(std::size_t start) const { return encoded_[start + window_]; }
  std::span<const std::uint8_t> encoded() const noexcept { return encoded_; }

  /// X for a split, shape (rows, n, p).
  OneHotTensor inputs(Split split) const;
  /// y for a split, shape (rows, 1, p).
  OneHotTensor targets(Split split) const;

 private:
  Alphabet alphabet_;
  std::string sequence_;
  std::vector<std::uint8_t> encoded_;
  std::size_t window_;
  std::vector<std::size_t> train_starts_;
  std::vector<std::size_t> test_starts_;
};

/// Builds the dataset for `seed` repeated to spec.min_length. The test split
/// is round(test_fraction * m) windows sampled uniformly (seeded); both splits
/// keep positional order. Throws ShapeError when |s| <= 2n.
EncodedDataset build_dataset(const SeedString& seed, const DatasetSpec& spec, std::uint64_t rng_seed);
EncodedDataset build_dataset(std::string_view seed_text, const Alphabet& alphabet,
                             const DatasetSpec& spec, std::uint64_t rng_seed);

}  // namespace seqlab
