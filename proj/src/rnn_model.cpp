#include "seqlab/rnn/model.hpp"

#include <cmath>
#include <random>

#include "seqlab/error.hpp"

namespace seqlab::rnn {
namespace {

template <typename Block>
void logistic_inplace(Block&& z) {
  using T = typename std::decay_t<Block>::Scalar;
  z = (T(1) + (-z.array()).exp()).inverse().matrix();
}

template <typename T>
bool same_shape(const Model<T>& a, const Model<T>& b) {
  if (a.kind != b.kind || a.depth() != b.depth()) return false;
  for (std::size_t l = 0; l < a.depth(); ++l) {
    if (a.layers[l].W.rows() != b.layers[l].W.rows() || a.layers[l].W.cols() != b.layers[l].W.cols() ||
        a.layers[l].R.cols() != b.layers[l].R.cols()) {
      return false;
    }
  }
  return a.readout.W.rows() == b.readout.W.rows() && a.readout.W.cols() == b.readout.W.cols();
}

void check_batch(const SymbolBatch& batch, std::size_t inputs) {
  if (batch.steps == 0 || batch.size == 0) throw ShapeError("empty batch");
  if (batch.symbols.size() != batch.steps * batch.size) {
    throw ShapeError("batch holds " + std::to_string(batch.symbols.size()) + " symbols, expected " +
                     std::to_string(batch.steps * batch.size));
  }
  for (auto s : batch.symbols)
    if (s >= inputs) throw AlphabetMismatch("symbol index " + std::to_string(s) + " exceeds model input size");
}

}  // namespace

template <typename T>
Model<T> Model<T>::zeros(CellKind kind, std::size_t inputs, std::size_t units, std::size_t depth) {
  if (inputs == 0 || units == 0 || depth == 0) throw ConfigError("model dimensions must be positive");
  Model m;
  m.kind = kind;
  for (std::size_t l = 0; l < depth; ++l)
    m.layers.push_back(CellParams<T>::zeros(kind, l == 0 ? inputs : units, units));
  m.readout.W = Matrix<T>::Zero(static_cast<Eigen::Index>(inputs), static_cast<Eigen::Index>(units));
  m.readout.b = Vector<T>::Zero(static_cast<Eigen::Index>(inputs));
  return m;
}

template <typename T>
std::size_t Model<T>::parameter_count() const noexcept {
  std::size_t n = static_cast<std::size_t>(readout.W.size() + readout.b.size());
  for (const auto& l : layers) n += l.parameter_count();
  return n;
}

template <typename T>
void Model<T>::check_shapes() const {
  if (layers.empty()) throw ShapeError("model has no layers");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& layer = layers[l];
    if (layer.kind != kind) throw ShapeError("layer " + std::to_string(l) + " has a different cell kind");
    layer.check_shapes();
    if (layer.units() != units()) throw ShapeError("layers must share one width");
    if (l > 0 && layer.inputs() != units()) {
      throw ShapeError("layer " + std::to_string(l) + " input size does not match the layer below");
    }
  }
  if (readout.W.cols() != static_cast<Eigen::Index>(units()) || readout.b.size() != readout.W.rows() ||
      readout.W.rows() == 0) {
    throw ShapeError("readout shape does not match the recurrent stack");
  }
}

template <typename T>
std::vector<std::span<T>> Model<T>::tensors() {
  std::vector<std::span<T>> out;
  auto add = [&](auto& m) { out.emplace_back(m.data(), static_cast<std::size_t>(m.size())); };
  for (auto& l : layers) {
    add(l.W);
    add(l.R);
    add(l.b);
  }
  add(readout.W);
  add(readout.b);
  return out;
}

template <typename T>
std::vector<std::span<const T>> Model<T>::tensors() const {
  std::vector<std::span<const T>> out;
  auto add = [&](const auto& m) { out.emplace_back(m.data(), static_cast<std::size_t>(m.size())); };
  for (const auto& l : layers) {
    add(l.W);
    add(l.R);
    add(l.b);
  }
  add(readout.W);
  add(readout.b);
  return out;
}

template <typename T>
std::vector<std::string> Model<T>::tensor_names(std::size_t depth) {
  std::vector<std::string> names;
  for (std::size_t l = 0; l < depth; ++l) {
    const auto prefix = "layer" + std::to_string(l) + ".";
    names.push_back(prefix + "W");
    names.push_back(prefix + "R");
    names.push_back(prefix + "b");
  }
  names.emplace_back("readout.W");
  names.emplace_back("readout.b");
  return names;
}

Model<double> glorot_model(CellKind kind, std::size_t inputs, std::size_t units, std::size_t depth,
                           std::uint64_t seed) {
  auto m = Model<double>::zeros(kind, inputs, units, depth);
  std::mt19937_64 rng(seed);
  auto fill = [&](Matrix<double>& w) {
    const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Eigen::Index j = 0; j < w.cols(); ++j)
      for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = dist(rng);
  };
  for (auto& l : m.layers) {
    fill(l.W);
    fill(l.R);
  }
  fill(m.readout.W);
  return m;
}

SymbolBatch SymbolBatch::gather(const EncodedDataset& data, std::span<const std::size_t> starts) {
  SymbolBatch b;
  b.steps = data.window();
  b.size = starts.size();
  b.symbols.resize(b.steps * b.size);
  b.targets.resize(b.size);
  for (std::size_t j = 0; j < b.size; ++j) {
    const auto w = data.window_at(starts[j]);
    for (std::size_t t = 0; t < b.steps; ++t) b.symbols[t * b.size + j] = w[t];
    b.targets[j] = data.target_at(starts[j]);
  }
  return b;
}

SymbolBatch SymbolBatch::single(std::span<const std::uint8_t> window, std::uint8_t target) {
  SymbolBatch b;
  b.steps = window.size();
  b.size = 1;
  b.symbols.assign(window.begin(), window.end());
  b.targets.assign(1, target);
  return b;
}

template <typename T>
LossAccuracy loss_and_accuracy(const Matrix<T>& probabilities, std::span<const std::uint8_t> targets) {
  if (static_cast<std::size_t>(probabilities.cols()) != targets.size() || targets.empty()) {
    throw ShapeError("need one target per probability column");
  }
  double loss = 0.0;
  std::size_t correct = 0;
  for (Eigen::Index b = 0; b < probabilities.cols(); ++b) {
    const auto target = static_cast<Eigen::Index>(targets[static_cast<std::size_t>(b)]);
    if (target >= probabilities.rows()) throw ShapeError("target index exceeds the output size");
    const double pt = std::max(static_cast<double>(probabilities(target, b)), kProbabilityFloor);
    loss -= std::log(std::min(pt, 1.0));
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < probabilities.rows(); ++k)
      if (probabilities(k, b) > probabilities(best, b)) best = k;
    if (best == target) ++correct;
  }
  const auto n = static_cast<double>(targets.size());
  return {loss / n, static_cast<double>(correct) / n};
}

template <typename T>
void Unroller<T>::forward_layer(const CellParams<T>& p, std::size_t index, const SymbolBatch& batch) {
  const auto u = static_cast<Eigen::Index>(p.units());
  const auto B = static_cast<Eigen::Index>(batch.size);
  const auto n = static_cast<Eigen::Index>(batch.steps);
  const auto g = static_cast<Eigen::Index>(gate_count(p.kind)) * u;
  auto& c = caches_[index];

  c.gates.resize(g, n * B);
  if (index == 0) {
    for (Eigen::Index j = 0; j < n * B; ++j) c.gates.col(j) = p.W.col(batch.symbols[static_cast<std::size_t>(j)]) + p.b;
  } else {
    c.gates.noalias() = p.W * caches_[index - 1].hidden;
    c.gates.colwise() += p.b;
  }
  c.hidden.resize(u, n * B);

  if (p.kind == CellKind::Lstm) {
    c.cell.resize(u, n * B);
    c.cell_tanh.resize(u, n * B);
    for (Eigen::Index t = 0; t < n; ++t) {
      auto z = c.gates.middleCols(t * B, B);
      if (t > 0) z.noalias() += p.R * c.hidden.middleCols((t - 1) * B, B);
      logistic_inplace(z.topRows(3 * u));
      z.bottomRows(u) = z.bottomRows(u).array().tanh().matrix();
      const auto i = z.topRows(u).array();
      const auto f = z.middleRows(u, u).array();
      const auto o = z.middleRows(2 * u, u).array();
      const auto cand = z.bottomRows(u).array();
      auto cell = c.cell.middleCols(t * B, B);
      if (t > 0) {
        cell = (f * c.cell.middleCols((t - 1) * B, B).array() + i * cand).matrix();
      } else {
        cell = (i * cand).matrix();
      }
      auto ct = c.cell_tanh.middleCols(t * B, B);
      ct = cell.array().tanh().matrix();
      c.hidden.middleCols(t * B, B) = (o * ct.array()).matrix();
    }
    return;
  }

  c.gated.resize(u, n * B);
  for (Eigen::Index t = 0; t < n; ++t) {
    auto z = c.gates.middleCols(t * B, B);
    auto gated = c.gated.middleCols(t * B, B);
    if (t > 0) {
      const auto hprev = c.hidden.middleCols((t - 1) * B, B);
      z.topRows(2 * u).noalias() += p.R.topRows(2 * u) * hprev;
      logistic_inplace(z.topRows(2 * u));
      gated = (z.middleRows(u, u).array() * hprev.array()).matrix();
      z.bottomRows(u).noalias() += p.R.bottomRows(u) * gated;
      z.bottomRows(u) = z.bottomRows(u).array().tanh().matrix();
      c.hidden.middleCols(t * B, B) =
          (hprev.array() + z.topRows(u).array() * (z.bottomRows(u).array() - hprev.array())).matrix();
    } else {
      logistic_inplace(z.topRows(2 * u));
      gated.setZero();
      z.bottomRows(u) = z.bottomRows(u).array().tanh().matrix();
      c.hidden.middleCols(0, B) = (z.topRows(u).array() * z.bottomRows(u).array()).matrix();
    }
  }
}

template <typename T>
const Matrix<T>& Unroller<T>::forward(const Model<T>& model, const SymbolBatch& batch) {
  model.check_shapes();
  check_batch(batch, model.inputs());
  caches_.resize(model.depth());
  for (std::size_t l = 0; l < model.depth(); ++l) forward_layer(model.layers[l], l, batch);

  const auto B = static_cast<Eigen::Index>(batch.size);
  probs_.noalias() = model.readout.W * caches_.back().hidden.rightCols(B);
  probs_.colwise() += model.readout.b;
  const Eigen::Matrix<T, 1, Eigen::Dynamic> top = probs_.colwise().maxCoeff();
  probs_ = (probs_.rowwise() - top).array().exp().matrix();
  const Eigen::Array<T, 1, Eigen::Dynamic> norm = probs_.colwise().sum().array();
  probs_.array().rowwise() /= norm;
  if (!probs_.allFinite()) throw NumericOverflow("forward pass produced non-finite probabilities");
  return probs_;
}

template <typename T>
void Unroller<T>::backward_layer(const CellParams<T>& p, std::size_t index, const SymbolBatch& batch,
                                 CellParams<T>& grad) {
  const auto u = static_cast<Eigen::Index>(p.units());
  const auto B = static_cast<Eigen::Index>(batch.size);
  const auto n = static_cast<Eigen::Index>(batch.steps);
  const auto g = static_cast<Eigen::Index>(gate_count(p.kind)) * u;
  const auto& c = caches_[index];

  d_pre_.resize(g, n * B);
  dh_.resize(u, B);

  if (p.kind == CellKind::Lstm) {
    dc_.setZero(u, B);
    for (Eigen::Index t = n - 1; t >= 0; --t) {
      dh_ = d_hidden_.middleCols(t * B, B);
      if (t < n - 1) dh_.noalias() += p.R.transpose() * d_pre_.middleCols((t + 1) * B, B);
      const auto z = c.gates.middleCols(t * B, B);
      const auto i = z.topRows(u).array();
      const auto f = z.middleRows(u, u).array();
      const auto o = z.middleRows(2 * u, u).array();
      const auto cand = z.bottomRows(u).array();
      const auto ct = c.cell_tanh.middleCols(t * B, B).array();
      auto d = d_pre_.middleCols(t * B, B);

      dc_.array() += dh_.array() * o * (T(1) - ct.square());
      d.middleRows(2 * u, u) = (dh_.array() * ct * o * (T(1) - o)).matrix();
      d.topRows(u) = (dc_.array() * cand * i * (T(1) - i)).matrix();
      d.bottomRows(u) = (dc_.array() * i * (T(1) - cand.square())).matrix();
      if (t > 0) {
        d.middleRows(u, u) = (dc_.array() * c.cell.middleCols((t - 1) * B, B).array() * f * (T(1) - f)).matrix();
      } else {
        d.middleRows(u, u).setZero();
      }
      dc_.array() *= f;
    }
    if (n > 1) {
      grad.R.noalias() = d_pre_.rightCols((n - 1) * B) * c.hidden.leftCols((n - 1) * B).transpose();
    } else {
      grad.R.setZero();
    }
  } else {
    tmp_.resize(u, B);
    Matrix<T> carry = Matrix<T>::Zero(u, B);
    for (Eigen::Index t = n - 1; t >= 0; --t) {
      dh_ = d_hidden_.middleCols(t * B, B) + carry;
      const auto z = c.gates.middleCols(t * B, B);
      const auto upd = z.topRows(u).array();
      const auto rst = z.middleRows(u, u).array();
      const auto cand = z.bottomRows(u).array();
      auto d = d_pre_.middleCols(t * B, B);

      d.bottomRows(u) = (dh_.array() * upd * (T(1) - cand.square())).matrix();
      if (t > 0) {
        const auto hprev = c.hidden.middleCols((t - 1) * B, B).array();
        d.topRows(u) = (dh_.array() * (cand - hprev) * upd * (T(1) - upd)).matrix();
        tmp_.noalias() = p.R.bottomRows(u).transpose() * d.bottomRows(u);
        d.middleRows(u, u) = (tmp_.array() * hprev * rst * (T(1) - rst)).matrix();
        carry = (dh_.array() * (T(1) - upd) + tmp_.array() * rst).matrix();
        carry.noalias() += p.R.topRows(2 * u).transpose() * d.topRows(2 * u);
      } else {
        d.topRows(u) = (dh_.array() * cand * upd * (T(1) - upd)).matrix();
        d.middleRows(u, u).setZero();
      }
    }
    if (n > 1) {
      const auto span = (n - 1) * B;
      grad.R.topRows(2 * u).noalias() =
          d_pre_.topRows(2 * u).rightCols(span) * c.hidden.leftCols(span).transpose();
      grad.R.bottomRows(u).noalias() =
          d_pre_.bottomRows(u).rightCols(span) * c.gated.rightCols(span).transpose();
    } else {
      grad.R.setZero();
    }
  }

  grad.b = d_pre_.rowwise().sum();
  if (index == 0) {
    grad.W.setZero();
    for (Eigen::Index j = 0; j < n * B; ++j) grad.W.col(batch.symbols[static_cast<std::size_t>(j)]) += d_pre_.col(j);
  } else {
    grad.W.noalias() = d_pre_ * caches_[index - 1].hidden.transpose();
    d_below_.noalias() = p.W.transpose() * d_pre_;
  }
}

template <typename T>
double Unroller<T>::backward(const Model<T>& model, const SymbolBatch& batch, Model<T>& grads) {
  if (caches_.size() != model.depth() || probs_.cols() != static_cast<Eigen::Index>(batch.size)) {
    throw ShapeError("backward() must follow forward() on the same model and batch");
  }
  if (batch.targets.size() != batch.size) throw ShapeError("batch is missing targets");
  if (!same_shape(grads, model)) grads = Model<T>::zeros(model.kind, model.inputs(), model.units(), model.depth());

  const auto loss = loss_and_accuracy(probs_, batch.targets).loss;
  const auto B = static_cast<Eigen::Index>(batch.size);
  Matrix<T> dlogits = probs_;
  for (Eigen::Index b = 0; b < B; ++b) dlogits(batch.targets[static_cast<std::size_t>(b)], b) -= T(1);
  dlogits /= static_cast<T>(B);

  const auto top = caches_.back().hidden.rightCols(B);
  grads.readout.W.noalias() = dlogits * top.transpose();
  grads.readout.b = dlogits.rowwise().sum();

  const auto u = static_cast<Eigen::Index>(model.units());
  const auto nb = static_cast<Eigen::Index>(batch.steps) * B;
  d_hidden_.setZero(u, nb);
  d_hidden_.rightCols(B).noalias() = model.readout.W.transpose() * dlogits;

  for (std::size_t l = model.depth(); l-- > 0;) {
    backward_layer(model.layers[l], l, batch, grads.layers[l]);
    if (l > 0) std::swap(d_hidden_, d_below_);
  }
  for (auto t : std::as_const(grads).tensors())
    for (T v : t)
      if (!std::isfinite(v)) throw NumericOverflow("backpropagation produced a non-finite gradient");
  return loss;
}

template <typename T>
Vector<T> forward_sequence(const Model<T>& model, std::span<const std::uint8_t> window) {
  Unroller<T> u;
  return u.forward(model, SymbolBatch::single(window)).col(0);
}

template <typename T>
SequenceGradient<T> backward_sequence(const Model<T>& model, std::span<const std::uint8_t> window,
                                      std::uint8_t target) {
  Unroller<T> u;
  const auto batch = SymbolBatch::single(window, target);
  u.forward(model, batch);
  SequenceGradient<T> out;
  out.loss = u.backward(model, batch, out.grads);
  return out;
}

template <typename T>
LossAccuracy evaluate(const Model<T>& model, const EncodedDataset& data, Split split, std::size_t chunk) {
  const auto starts = data.starts(split);
  if (starts.empty()) throw ShapeError("cannot evaluate on an empty split");
  Unroller<T> unroller;
  double loss = 0.0, accuracy = 0.0;
  for (std::size_t first = 0; first < starts.size(); first += chunk) {
    const auto part = starts.subspan(first, std::min(chunk, starts.size() - first));
    const auto batch = SymbolBatch::gather(data, part);
    const auto la = loss_and_accuracy(unroller.forward(model, batch), batch.targets);
    loss += la.loss * static_cast<double>(part.size());
    accuracy += la.accuracy * static_cast<double>(part.size());
  }
  const auto n = static_cast<double>(starts.size());
  return {loss / n, accuracy / n};
}

template struct Model<float>;
template struct Model<double>;
template class Unroller<float>;
template class Unroller<double>;
template LossAccuracy loss_and_accuracy(const Matrix<float>&, std::span<const std::uint8_t>);
template LossAccuracy loss_and_accuracy(const Matrix<double>&, std::span<const std::uint8_t>);
template Vector<float> forward_sequence(const Model<float>&, std::span<const std::uint8_t>);
template Vector<double> forward_sequence(const Model<double>&, std::span<const std::uint8_t>);
template SequenceGradient<float> backward_sequence(const Model<float>&, std::span<const std::uint8_t>, std::uint8_t);
template SequenceGradient<double> backward_sequence(const Model<double>&, std::span<const std::uint8_t>, std::uint8_t);
template LossAccuracy evaluate(const Model<float>&, const EncodedDataset&, Split, std::size_t);
template LossAccuracy evaluate(const Model<double>&, const EncodedDataset&, Split, std::size_t);

}  // namespace seqlab::rnn
