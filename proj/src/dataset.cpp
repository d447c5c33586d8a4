#include "seqlab/dataset.hpp"

#include <cmath>
#include <numeric>
#include <random>

namespace seqlab {

void DatasetSpec::validate() const {
  if (window == 0) throw ConfigError("window length must be positive");
  if (min_length <= 2 * window) {
    throw ShapeError("min_length " + std::to_string(min_length) + " must exceed twice the window (" +
                      std::to_string(2 * window) + ")");
  }
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError("test_fraction must lie in (0, 1)");
  }
}

std::string repeat_to_length(std::string_view seed, std::size_t min_length) {
  if (seed.empty()) throw EmptyInput("cannot repeat an empty seed string");
  const std::size_t copies = std::max<std::size_t>(1, (min_length + seed.size() - 1) / seed.size());
  std::string out;
  out.reserve(copies * seed.size());
  for (std::size_t i = 0; i < copies; ++i) out.append(seed);
  return out;
}

std::string continuation(std::string_view seed, std::size_t position, std::size_t count) {
  if (seed.empty()) throw EmptyInput("cannot continue an empty seed string");
  std::string out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out += seed[(position + i) % seed.size()];
  return out;
}

std::vector<std::uint8_t> one_hot(char symbol, const Alphabet& alphabet) {
  std::vector<std::uint8_t> v(alphabet.size(), 0);
  v[alphabet.index_of(symbol)] = 1;
  return v;
}

EncodedDataset::EncodedDataset(Alphabet alphabet, std::string sequence, std::size_t window,
                               std::vector<std::size_t> train_starts,
                               std::vector<std::size_t> test_starts)
    : alphabet_(std::move(alphabet)),
      sequence_(std::move(sequence)),
      window_(window),
      train_starts_(std::move(train_starts)),
      test_starts_(std::move(test_starts)) {
  if (window_ == 0 || sequence_.size() <= 2 * window_) {
    throw ShapeError("sequence of length " + std::to_string(sequence_.size()) +
                     " is too short for windows of " + std::to_string(window_));
  }
  encoded_ = alphabet_.encode(sequence_);
  for (auto* split : {&train_starts_, &test_starts_})
    for (std::size_t s : *split)
      if (s >= m()) throw ShapeError("window start " + std::to_string(s) + " out of range");
}

OneHotTensor EncodedDataset::inputs(Split split) const {
  const auto rows = starts(split);
  const std::size_t p = alphabet_.size();
  OneHotTensor t{rows.size(), window_, p, std::vector<std::uint8_t>(rows.size() * window_ * p, 0)};
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto w = window_at(rows[r]);
    for (std::size_t step = 0; step < window_; ++step) t.data[(r * window_ + step) * p + w[step]] = 1;
  }
  return t;
}

OneHotTensor EncodedDataset::targets(Split split) const {
  const auto rows = starts(split);
  const std::size_t p = alphabet_.size();
  OneHotTensor t{rows.size(), 1, p, std::vector<std::uint8_t>(rows.size() * p, 0)};
  for (std::size_t r = 0; r < rows.size(); ++r) t.data[r * p + target_at(rows[r])] = 1;
  return t;
}

EncodedDataset build_dataset(std::string_view seed_text, const Alphabet& alphabet,
                             const DatasetSpec& spec, std::uint64_t rng_seed) {
  spec.validate();
  std::string s = repeat_to_length(seed_text, spec.min_length);
  if (s.size() <= 2 * spec.window) {
    throw ShapeError("repeated string of length " + std::to_string(s.size()) +
                     " is too short for windows of " + std::to_string(spec.window));
  }
  const std::size_t m = s.size() - 2 * spec.window;
  const auto n_test = static_cast<std::size_t>(std::llround(spec.test_fraction * static_cast<double>(m)));

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(rng_seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> test(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
  std::vector<std::size_t> train(order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end());
  std::sort(test.begin(), test.end());
  std::sort(train.begin(), train.end());

  return EncodedDataset(alphabet, std::move(s), spec.window, std::move(train), std::move(test));
}

EncodedDataset build_dataset(const SeedString& seed, const DatasetSpec& spec, std::uint64_t rng_seed) {
  return build_dataset(seed.text, seed.alphabet, spec, rng_seed);
}

}  // namespace seqlab
