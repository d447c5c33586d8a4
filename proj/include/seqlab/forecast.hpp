#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "seqlab/lzw.hpp"
#include "seqlab/rnn/model.hpp"
#include "seqlab/textmetrics.hpp"

namespace seqlab {

inline constexpr std::size_t kDefaultHorizon = 100;

struct ForecastResult {
  std::string predicted;
  SimilarityScore scores;
  std::size_t horizon = 0;
};

/// Greedy autoregressive forecast: predict the argmax symbol (lowest index on
/// ties) for the current window, append it, slide the window by one, repeat
/// `horizon` times. Returns only the appended characters.
///
/// Throws AlphabetMismatch when the model's input size differs from the
/// alphabet or the window holds foreign symbols.
template <typename T>
std::string forecast(const rnn::Model<T>& model, std::string_view seed_window, std::size_t horizon,
                     const Alphabet& alphabet);

SimilarityScore score_forecast(std::string_view predicted, std::string_view validation);

/// Forecasts |validation| characters from `seed_window` and scores them.
template <typename T>
ForecastResult forecast_and_score(const rnn::Model<T>& model, std::string_view seed_window,
                                  std::string_view validation, const Alphabet& alphabet) {
  ForecastResult r;
  r.horizon = validation.size();
  r.predicted = forecast(model, seed_window, r.horizon, alphabet);
  r.scores = score_forecast(r.predicted, validation);
  return r;
}

}  // namespace seqlab
