#pragma once

#include <cstddef>
#include <string_view>

namespace seqlab {

struct SimilarityScore {
  double dl = 0.0;
  double jw = 0.0;
};

/// Restricted Damerau-Levenshtein (optimal string alignment) distance:
/// insertions, deletions, substitutions and adjacent transpositions, with no
/// substring edited twice.
std::size_t osa_distance(std::string_view a, std::string_view b);

/// 1 - osa_distance / max(|a|, |b|); 1.0 for two empty strings.
double dl_similarity(std::string_view a, std::string_view b);

/// Jaro similarity: match window floor(max(|a|,|b|)/2) - 1, half-counted
/// transpositions. 0 when either string is empty (1 when both are equal).
double jaro_similarity(std::string_view a, std::string_view b);

struct JaroWinklerOptions {
  double prefix_scale = 0.1;
  std::size_t max_prefix = 4;
  /// The prefix bonus applies only when the Jaro score exceeds this value and
  /// both strings are longer than `min_boost_length - 1`. Set the threshold
  /// below 0 and min_boost_length to 0 for the unconditional Winkler boost.
  double boost_threshold = 0.7;
  std::size_t min_boost_length = 4;
};

double jw_similarity(std::string_view a, std::string_view b, const JaroWinklerOptions& options = {});

inline SimilarityScore similarity(std::string_view a, std::string_view b) {
  return {dl_similarity(a, b), jw_similarity(a, b)};
}

}  // namespace seqlab
