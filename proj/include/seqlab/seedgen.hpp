#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "seqlab/error.hpp"
#include "seqlab/lzw.hpp"

namespace seqlab {

struct SeedSpec {
  std::size_t alphabet_size = 2;
  std::size_t target_complexity = 2;
  std::size_t max_length = 2400;
  std::uint64_t rng_seed = 0;

  /// Throws ConfigError unless target >= alphabet_size, max_length >= target
  /// and the default alphabet has enough symbols.
  void validate() const;
};

struct SeedString {
  std::string text;
  Alphabet alphabet;
  std::size_t complexity = 0;
};

/// Largest LZW complexity any string of `length` symbols over a k-symbol
/// alphabet can have. A code for a j-symbol phrase creates a distinct
/// (j+1)-symbol dictionary entry, so at most k^(j+1) such codes exist (plus
/// the final flush); filling the shortest phrases first gives the bound.
std::size_t max_complexity_bound(std::size_t k, std::size_t length);

/// Generates a string over Alphabet::first(k) that uses all k symbols and has
/// LZW complexity exactly spec.target_complexity.
///
/// Starts from a random permutation of the alphabet and appends random
/// symbols until the complexity (which grows by 0 or 1 per symbol) reaches
/// the target. Attempts that hit max_length restart on a fresh substream; the
/// first attempt draws uniformly, later ones increasingly prefer symbols that
/// end the pending LZW match. Small targets (k <= 6, c <= 12) fall back to a
/// bounded depth-first search. Deterministic in spec.rng_seed.
///
/// Throws GenerationFailure (carrying the closest complexity reached) once
/// the retry budget is spent.
SeedString generate_seed(const SeedSpec& spec);

/// Per-spec failures from batch_generate, keyed by input position.
class BatchGenerationError : public Error {
 public:
  explicit BatchGenerationError(std::vector<std::pair<std::size_t, std::string>> failures);
  const std::vector<std::pair<std::size_t, std::string>>& failures() const noexcept {
    return failures_;
  }

 private:
  std::vector<std::pair<std::size_t, std::string>> failures_;
};

std::vector<SeedString> batch_generate(std::span<const SeedSpec> specs);

}  // namespace seqlab
