#include "seqlab/rnn/cell.hpp"

#include <cctype>
#include <cmath>
#include <string>

#include "seqlab/error.hpp"

namespace seqlab::rnn {

std::string_view to_string(CellKind kind) noexcept {
  return kind == CellKind::Lstm ? "lstm" : "gru";
}

CellKind parse_cell_kind(std::string_view text) {
  std::string lower(text);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "lstm") return CellKind::Lstm;
  if (lower == "gru") return CellKind::Gru;
  throw ConfigError("unknown cell kind '" + std::string(text) + "' (expected lstm or gru)");
}

template <typename T>
CellParams<T> CellParams<T>::zeros(CellKind kind, std::size_t inputs, std::size_t units) {
  const auto g = static_cast<Eigen::Index>(gate_count(kind) * units);
  const auto u = static_cast<Eigen::Index>(units);
  CellParams p;
  p.kind = kind;
  p.W = Matrix<T>::Zero(g, static_cast<Eigen::Index>(inputs));
  p.R = Matrix<T>::Zero(g, u);
  p.b = Vector<T>::Zero(g);
  return p;
}

template <typename T>
void CellParams<T>::check_shapes() const {
  const auto g = static_cast<Eigen::Index>(gate_count(kind)) * R.cols();
  if (R.rows() != g || W.rows() != g || b.size() != g || R.cols() == 0) {
    throw ShapeError("cell parameter shapes are inconsistent: W " + std::to_string(W.rows()) + "x" +
                     std::to_string(W.cols()) + ", R " + std::to_string(R.rows()) + "x" +
                     std::to_string(R.cols()) + ", b " + std::to_string(b.size()));
  }
}

template <typename T>
CellState<T> CellState<T>::zeros(CellKind kind, std::size_t units) {
  const auto u = static_cast<Eigen::Index>(units);
  CellState s;
  s.h = Vector<T>::Zero(u);
  if (kind == CellKind::Lstm) s.c = Vector<T>::Zero(u);
  return s;
}

template <typename T>
T sigmoid(T x) noexcept {
  return T(1) / (T(1) + std::exp(-x));
}

namespace {

template <typename T>
void check_step_shapes(const Vector<T>& x, const CellState<T>& state, const CellParams<T>& params) {
  params.check_shapes();
  const auto u = static_cast<Eigen::Index>(params.units());
  if (x.size() != params.W.cols()) {
    throw ShapeError("input of size " + std::to_string(x.size()) + " for a cell expecting " +
                     std::to_string(params.W.cols()));
  }
  if (state.h.size() != u || (params.kind == CellKind::Lstm && state.c.size() != u)) {
    throw ShapeError("state does not match a cell of " + std::to_string(u) + " units");
  }
}

template <typename T>
void check_finite(const CellState<T>& s) {
  if (!s.h.allFinite() || (s.c.size() > 0 && !s.c.allFinite())) {
    throw NumericOverflow("recurrent cell produced a non-finite state");
  }
}

template <typename T>
Vector<T> logistic(const Vector<T>& z) {
  return (T(1) + (-z.array()).exp()).inverse().matrix();
}

}  // namespace

template <typename T>
CellState<T> lstm_step(const Vector<T>& x, const CellState<T>& state, const CellParams<T>& params) {
  check_step_shapes(x, state, params);
  auto pre = [&](LstmGate g) -> Vector<T> {
    return params.input_weights(g) * x + params.recurrent_weights(g) * state.h + params.bias(g);
  };
  const Vector<T> i = logistic<T>(pre(LstmGate::Input));
  const Vector<T> f = logistic<T>(pre(LstmGate::Forget));
  const Vector<T> o = logistic<T>(pre(LstmGate::Output));
  const Vector<T> candidate = pre(LstmGate::Candidate).array().tanh().matrix();

  CellState<T> next;
  next.c = (f.array() * state.c.array() + i.array() * candidate.array()).matrix();
  next.h = (o.array() * next.c.array().tanh()).matrix();
  check_finite(next);
  return next;
}

template <typename T>
CellState<T> gru_step(const Vector<T>& x, const CellState<T>& state, const CellParams<T>& params) {
  check_step_shapes(x, state, params);
  const auto& h = state.h;
  const Vector<T> update = logistic<T>(params.input_weights(GruGate::Update) * x +
                                       params.recurrent_weights(GruGate::Update) * h +
                                       params.bias(GruGate::Update));
  const Vector<T> reset = logistic<T>(params.input_weights(GruGate::Reset) * x +
                                      params.recurrent_weights(GruGate::Reset) * h +
                                      params.bias(GruGate::Reset));
  const Vector<T> gated = (reset.array() * h.array()).matrix();
  const Vector<T> candidate = (params.input_weights(GruGate::Candidate) * x +
                               params.recurrent_weights(GruGate::Candidate) * gated +
                               params.bias(GruGate::Candidate))
                                  .array()
                                  .tanh()
                                  .matrix();
  CellState<T> next;
  next.h = ((T(1) - update.array()) * h.array() + update.array() * candidate.array()).matrix();
  check_finite(next);
  return next;
}

template <typename T>
Vector<T> softmax(const Vector<T>& logits) {
  const T top = logits.maxCoeff();
  Vector<T> e = (logits.array() - top).exp().matrix();
  return e / e.sum();
}

template struct CellParams<float>;
template struct CellParams<double>;
template struct CellState<float>;
template struct CellState<double>;
template float sigmoid<float>(float) noexcept;
template double sigmoid<double>(double) noexcept;
template CellState<float> lstm_step(const Vector<float>&, const CellState<float>&, const CellParams<float>&);
template CellState<double> lstm_step(const Vector<double>&, const CellState<double>&, const CellParams<double>&);
template CellState<float> gru_step(const Vector<float>&, const CellState<float>&, const CellParams<float>&);
template CellState<double> gru_step(const Vector<double>&, const CellState<double>&, const CellParams<double>&);
template Vector<float> softmax(const Vector<float>&);
template Vector<double> softmax(const Vector<double>&);

}  // namespace seqlab::rnn
