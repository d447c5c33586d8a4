#include "seqlab/rnn/adam.hpp"

#include <cmath>

#include "seqlab/error.hpp"

namespace seqlab::rnn {

template <typename T>
void adam_update(std::span<T> params, std::span<const T> grads, std::span<T> first, std::span<T> second,
                 std::size_t t, double learning_rate, const AdamConfig& config) {
  if (t == 0) throw ConfigError("Adam step index starts at 1");
  if (grads.size() != params.size() || first.size() != params.size() || second.size() != params.size()) {
    throw ShapeError("Adam buffers do not match the parameter block");
  }
  const T b1 = static_cast<T>(config.beta1);
  const T b2 = static_cast<T>(config.beta2);
  const T eps = static_cast<T>(config.epsilon);
  const auto step = static_cast<double>(t);
  const T correct1 = static_cast<T>(1.0 - std::pow(config.beta1, step));
  const T correct2 = static_cast<T>(1.0 - std::pow(config.beta2, step));
  const T lr = static_cast<T>(learning_rate);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const T g = grads[i];
    first[i] = b1 * first[i] + (T(1) - b1) * g;
    second[i] = b2 * second[i] + (T(1) - b2) * g * g;
    const T m_hat = first[i] / correct1;
    const T v_hat = second[i] / correct2;
    params[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
  }
}

template <typename T>
AdamMoments<T> AdamMoments<T>::like(const Model<T>& model) {
  return {Model<T>::zeros(model.kind, model.inputs(), model.units(), model.depth()),
          Model<T>::zeros(model.kind, model.inputs(), model.units(), model.depth())};
}

template <typename T>
void adam_step(Model<T>& params, const Model<T>& grads, AdamMoments<T>& moments, std::size_t t,
               double learning_rate, const AdamConfig& config) {
  auto p = params.tensors();
  const auto g = grads.tensors();
  auto m = moments.first.tensors();
  auto v = moments.second.tensors();
  if (g.size() != p.size() || m.size() != p.size() || v.size() != p.size()) {
    throw ShapeError("Adam moments do not match the model");
  }
  for (std::size_t k = 0; k < p.size(); ++k) adam_update(p[k], g[k], m[k], v[k], t, learning_rate, config);
}

template void adam_update(std::span<float>, std::span<const float>, std::span<float>, std::span<float>,
                          std::size_t, double, const AdamConfig&);
template void adam_update(std::span<double>, std::span<const double>, std::span<double>, std::span<double>,
                          std::size_t, double, const AdamConfig&);
template struct AdamMoments<float>;
template struct AdamMoments<double>;
template void adam_step(Model<float>&, const Model<float>&, AdamMoments<float>&, std::size_t, double,
                        const AdamConfig&);
template void adam_step(Model<double>&, const Model<double>&, AdamMoments<double>&, std::size_t, double,
                        const AdamConfig&);

}  // namespace seqlab::rnn
