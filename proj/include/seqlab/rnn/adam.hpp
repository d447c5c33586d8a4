#pragma once

#include <cstddef>
#include <span>

#include "seqlab/rnn/model.hpp"

namespace seqlab::rnn {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// One bias-corrected Adam update of a flat parameter block, step t >= 1.
template <typename T>
void adam_update(std::span<T> params, std::span<const T> grads, std::span<T> first, std::span<T> second,
                 std::size_t t, double learning_rate, const AdamConfig& config);

/// First and second moment buffers shaped like a model.
template <typename T>
struct AdamMoments {
  Model<T> first;
  Model<T> second;

  static AdamMoments like(const Model<T>& model);
};

template <typename T>
void adam_step(Model<T>& params, const Model<T>& grads, AdamMoments<T>& moments, std::size_t t,
               double learning_rate, const AdamConfig& config);

/// Adam with its own step counter.
template <typename T>
class Adam {
 public:
  Adam(const Model<T>& model, double learning_rate, AdamConfig config = {})
      : moments_(AdamMoments<T>::like(model)), learning_rate_(learning_rate), config_(config) {}

  void step(Model<T>& params, const Model<T>& grads) {
    adam_step(params, grads, moments_, ++t_, learning_rate_, config_);
  }
  std::size_t steps() const noexcept { return t_; }

 private:
  AdamMoments<T> moments_;
  double learning_rate_;
  AdamConfig config_;
  std::size_t t_ = 0;
};

}  // namespace seqlab::rnn
