#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <string_view>

namespace seqlab::rnn {

template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

enum class CellKind { Lstm, Gru };

std::string_view to_string(CellKind kind) noexcept;
/// Accepts "lstm" / "gru" (any case); throws ConfigError otherwise.
CellKind parse_cell_kind(std::string_view text);

constexpr std::size_t gate_count(CellKind kind) noexcept { return kind == CellKind::Lstm ? 4 : 3; }

// Row-block order of the stacked gate matrices.
enum class LstmGate : std::size_t { Input = 0, Forget = 1, Output = 2, Candidate = 3 };
enum class GruGate : std::size_t { Update = 0, Reset = 1, Candidate = 2 };

/// Trainable parameters of one recurrent layer. The per-gate matrices
/// (W_i, R_i, b_i, ...) are stacked row-block-wise in gate order:
///   LSTM: [input; forget; output; candidate]
///   GRU:  [update; reset; candidate]
template <typename T>
struct CellParams {
  CellKind kind = CellKind::Lstm;
  Matrix<T> W;  // (gates * units) x inputs
  Matrix<T> R;  // (gates * units) x units
  Vector<T> b;  // gates * units

  static CellParams zeros(CellKind kind, std::size_t inputs, std::size_t units);

  std::size_t units() const noexcept { return static_cast<std::size_t>(R.cols()); }
  std::size_t inputs() const noexcept { return static_cast<std::size_t>(W.cols()); }
  std::size_t parameter_count() const noexcept {
    return static_cast<std::size_t>(W.size() + R.size() + b.size());
  }

  template <typename Gate>
  auto input_weights(Gate g) { return W.middleRows(offset(g), rows()); }
  template <typename Gate>
  auto input_weights(Gate g) const { return W.middleRows(offset(g), rows()); }
  template <typename Gate>
  auto recurrent_weights(Gate g) { return R.middleRows(offset(g), rows()); }
  template <typename Gate>
  auto recurrent_weights(Gate g) const { return R.middleRows(offset(g), rows()); }
  template <typename Gate>
  auto bias(Gate g) { return b.segment(offset(g), rows()); }
  template <typename Gate>
  auto bias(Gate g) const { return b.segment(offset(g), rows()); }

  /// Throws ShapeError when the stacked shapes disagree.
  void check_shapes() const;

 private:
  Eigen::Index rows() const noexcept { return R.cols(); }
  template <typename Gate>
  Eigen::Index offset(Gate g) const noexcept {
    return static_cast<Eigen::Index>(static_cast<std::size_t>(g)) * R.cols();
  }
};

/// Dense softmax readout: probabilities = softmax(W h + b).
template <typename T>
struct ReadoutParams {
  Matrix<T> W;  // outputs x units
  Vector<T> b;  // outputs
};

template <typename T>
struct CellState {
  Vector<T> h;
  Vector<T> c;  // LSTM only; empty for GRU

  static CellState zeros(CellKind kind, std::size_t units);
};

template <typename T>
T sigmoid(T x) noexcept;

/// One LSTM step on a dense input vector. The returned state's h is h_t.
/// Throws ShapeError on mismatched shapes and NumericOverflow on non-finite
/// output.
template <typename T>
CellState<T> lstm_step(const Vector<T>& x, const CellState<T>& state, const CellParams<T>& params);

/// One GRU step; the candidate applies R_h to the reset-gated hidden vector.
template <typename T>
CellState<T> gru_step(const Vector<T>& x, const CellState<T>& state, const CellParams<T>& params);

template <typename T>
CellState<T> cell_step(const Vector<T>& x, const CellState<T>& state, const CellParams<T>& params) {
  return params.kind == CellKind::Lstm ? lstm_step(x, state, params) : gru_step(x, state, params);
}

template <typename T>
Vector<T> softmax(const Vector<T>& logits);

extern template struct CellParams<float>;
extern template struct CellParams<double>;
extern template struct CellState<float>;
extern template struct CellState<double>;

}  // namespace seqlab::rnn
