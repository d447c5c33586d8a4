#include "seqlab/forecast.hpp"

#include <vector>

#include "seqlab/dataset.hpp"
#include "seqlab/error.hpp"

namespace seqlab {

template <typename T>
std::string forecast(const rnn::Model<T>& model, std::string_view seed_window, std::size_t horizon,
                     const Alphabet& alphabet) {
  model.check_shapes();
  if (model.inputs() != alphabet.size() || model.outputs() != alphabet.size()) {
    throw AlphabetMismatch("model expects " + std::to_string(model.inputs()) + " symbols, alphabet has " +
                           std::to_string(alphabet.size()));
  }
  if (seed_window.empty()) throw EmptyInput("forecast needs a non-empty seed window");
  std::vector<std::uint8_t> window = alphabet.encode(seed_window);

  std::string out;
  out.reserve(horizon);
  rnn::Unroller<T> unroller;
  for (std::size_t step = 0; step < horizon; ++step) {
    const auto& probs = unroller.forward(model, rnn::SymbolBatch::single(window));
    const auto next = argmax_lowest(std::span<const T>(probs.data(), static_cast<std::size_t>(probs.rows())));
    out.push_back(alphabet.symbol(next));
    window.erase(window.begin());
    window.push_back(static_cast<std::uint8_t>(next));
  }
  return out;
}

SimilarityScore score_forecast(std::string_view predicted, std::string_view validation) {
  return similarity(predicted, validation);
}

template std::string forecast(const rnn::Model<float>&, std::string_view, std::size_t, const Alphabet&);
template std::string forecast(const rnn::Model<double>&, std::string_view, std::size_t, const Alphabet&);

}  // namespace seqlab
