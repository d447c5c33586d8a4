#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "seqlab/dataset.hpp"
#include "seqlab/rnn/cell.hpp"

namespace seqlab::rnn {

/// A stack of recurrent layers of equal width followed by a softmax readout.
/// Layer 0 consumes one-hot symbols; layer k consumes layer k-1's h.
template <typename T>
struct Model {
  CellKind kind = CellKind::Lstm;
  std::vector<CellParams<T>> layers;
  ReadoutParams<T> readout;

  static Model zeros(CellKind kind, std::size_t inputs, std::size_t units, std::size_t depth);

  std::size_t inputs() const noexcept { return layers.empty() ? 0 : layers.front().inputs(); }
  std::size_t units() const noexcept { return layers.empty() ? 0 : layers.front().units(); }
  std::size_t depth() const noexcept { return layers.size(); }
  std::size_t outputs() const noexcept { return static_cast<std::size_t>(readout.b.size()); }
  std::size_t parameter_count() const noexcept;

  /// Throws ShapeError on any inconsistency between layers and readout.
  void check_shapes() const;

  /// Flat views of every tensor in a fixed order (layer0.W, layer0.R,
  /// layer0.b, ..., readout.W, readout.b). Eigen storage is column-major.
  std::vector<std::span<T>> tensors();
  std::vector<std::span<const T>> tensors() const;
  static std::vector<std::string> tensor_names(std::size_t depth);

  template <typename U>
  Model<U> cast() const {
    Model<U> out;
    out.kind = kind;
    for (const auto& l : layers) {
      out.layers.push_back({l.kind, l.W.template cast<U>(), l.R.template cast<U>(), l.b.template cast<U>()});
    }
    out.readout = {readout.W.template cast<U>(), readout.b.template cast<U>()};
    return out;
  }
};

/// Glorot-uniform input, recurrent and readout matrices, zero biases. Drawn
/// in double so that float and double models from one seed agree.
Model<double> glorot_model(CellKind kind, std::size_t inputs, std::size_t units, std::size_t depth,
                           std::uint64_t seed);

/// Windows of equal length stored time-major: symbols[t * size + b].
struct SymbolBatch {
  std::size_t steps = 0;
  std::size_t size = 0;
  std::vector<std::uint8_t> symbols;
  std::vector<std::uint8_t> targets;

  static SymbolBatch gather(const EncodedDataset& data, std::span<const std::size_t> starts);
  static SymbolBatch single(std::span<const std::uint8_t> window, std::uint8_t target = 0);
};

struct LossAccuracy {
  double loss = 0.0;
  double accuracy = 0.0;
};

/// Mean clamped cross-entropy and argmax accuracy (lowest-index tie-break)
/// of column-wise probabilities against target indices.
template <typename T>
LossAccuracy loss_and_accuracy(const Matrix<T>& probabilities, std::span<const std::uint8_t> targets);

/// Probabilities are clamped to [kProbabilityFloor, 1] inside the log.
inline constexpr double kProbabilityFloor = 1e-12;

/// Unrolled forward pass and full backpropagation through time over a batch
/// of windows. Holds the activations of the last forward() so backward() can
/// reuse them; buffers are recycled between batches of the same shape.
template <typename T>
class Unroller {
 public:
  /// Returns the (outputs x batch) probability matrix.
  const Matrix<T>& forward(const Model<T>& model, const SymbolBatch& batch);

  /// Gradient of the mean loss over the batch for every parameter, written
  /// into `grads` (resized as needed). Must follow forward() on the same
  /// model and batch. Returns the mean loss. Throws NumericOverflow on a
  /// non-finite gradient.
  double backward(const Model<T>& model, const SymbolBatch& batch, Model<T>& grads);

 private:
  struct LayerCache {
    Matrix<T> gates;   // activated gates, (G*u) x (n*B)
    Matrix<T> cell;    // LSTM C_t
    Matrix<T> cell_tanh;
    Matrix<T> hidden;  // h_t
    Matrix<T> gated;   // GRU r_t * h_{t-1}
  };

  void forward_layer(const CellParams<T>& p, std::size_t index, const SymbolBatch& batch);
  void backward_layer(const CellParams<T>& p, std::size_t index, const SymbolBatch& batch,
                      CellParams<T>& grad);

  std::vector<LayerCache> caches_;
  Matrix<T> probs_;
  Matrix<T> d_pre_;      // gate pre-activation gradients, (G*u) x (n*B)
  Matrix<T> d_hidden_;   // external dL/dh_t for the layer being processed
  Matrix<T> d_below_;    // dL/dx_t handed to the layer below
  Matrix<T> dh_, dc_, tmp_;
};

/// Probability vector for a single window (zero initial state).
template <typename T>
Vector<T> forward_sequence(const Model<T>& model, std::span<const std::uint8_t> window);

template <typename T>
struct SequenceGradient {
  double loss = 0.0;
  Model<T> grads;
};

/// Exact BPTT gradient of the cross-entropy of one (window, target) pair.
template <typename T>
SequenceGradient<T> backward_sequence(const Model<T>& model, std::span<const std::uint8_t> window,
                                      std::uint8_t target);

/// Loss and accuracy of the model over one split of a dataset.
template <typename T>
LossAccuracy evaluate(const Model<T>& model, const EncodedDataset& data, Split split,
                      std::size_t chunk = 256);

extern template struct Model<float>;
extern template struct Model<double>;
extern template class Unroller<float>;
extern template class Unroller<double>;

}  // namespace seqlab::rnn
