#include "seqlab/rnn/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "seqlab/rng.hpp"

namespace seqlab::rnn {

std::string_view to_string(StopRule rule) noexcept { return rule == StopRule::Accuracy ? "accuracy" : "loss"; }

std::string_view to_string(StopReason reason) noexcept {
  switch (reason) {
    case StopReason::CriterionMet: return "criterion-met";
    case StopReason::EpochCap: return "epoch-cap";
    case StopReason::NumericOverflow: return "numeric-overflow";
  }
  return "unknown";
}

std::string_view to_string(Precision precision) noexcept {
  return precision == Precision::Float32 ? "float32" : "float64";
}

StopRule parse_stop_rule(std::string_view text) {
  if (text == "accuracy") return StopRule::Accuracy;
  if (text == "loss") return StopRule::Loss;
  throw ConfigError("unknown stop rule '" + std::string(text) + "' (expected accuracy or loss)");
}

StopReason parse_stop_reason(std::string_view text) {
  for (auto r : {StopReason::CriterionMet, StopReason::EpochCap, StopReason::NumericOverflow})
    if (text == to_string(r)) return r;
  throw ConfigError("unknown stop reason '" + std::string(text) + "'");
}

Precision parse_precision(std::string_view text) {
  if (text == "float32") return Precision::Float32;
  if (text == "float64") return Precision::Float64;
  throw ConfigError("unknown precision '" + std::string(text) + "' (expected float32 or float64)");
}

void TrainConfig::validate() const {
  if (layers == 0) throw ConfigError("layers must be at least 1");
  if (units == 0) throw ConfigError("units must be at least 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw ConfigError("learning_rate must be positive");
  if (max_epochs == 0) throw ConfigError("max_epochs must be at least 1");
  if (batch_size == 0) throw ConfigError("batch_size must be at least 1");
  if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0) || !(adam.beta2 >= 0.0 && adam.beta2 < 1.0) ||
      !(adam.epsilon > 0.0)) {
    throw ConfigError("Adam needs beta1, beta2 in [0, 1) and epsilon > 0");
  }
  if (clip_norm < 0.0) throw ConfigError("clip_norm must be non-negative");
}

std::size_t units_for_total(std::size_t total, std::size_t layers) {
  if (layers == 0 || total == 0) throw ConfigError("total units and layers must be positive");
  const std::size_t lo = std::max<std::size_t>(1, total / layers);
  const std::size_t hi = lo + 1;
  const auto err = [&](std::size_t u) {
    const auto v = u * layers;
    return v > total ? v - total : total - v;
  };
  return err(hi) < err(lo) ? hi : lo;
}

namespace {

template <typename T>
void clip_gradients(Model<T>& grads, double max_norm) {
  double sq = 0.0;
  for (auto t : std::as_const(grads).tensors())
    for (T v : t) sq += static_cast<double>(v) * static_cast<double>(v);
  const double norm = std::sqrt(sq);
  if (norm <= max_norm || norm == 0.0) return;
  const auto scale = static_cast<T>(max_norm / norm);
  for (auto t : grads.tensors())
    for (T& v : t) v *= scale;
}

template <typename T>
TrainResult run(const EncodedDataset& data, const TrainConfig& config, Model<T> model) {
  using clock = std::chrono::steady_clock;
  const auto started = clock::now();

  TrainReport report;
  auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - started).count(); };

  std::vector<std::size_t> order(data.starts(Split::Train).begin(), data.starts(Split::Train).end());
  std::mt19937_64 shuffler(derive_seed(config.init_seed, {0x5u}));
  Adam<T> adam(model, config.learning_rate, config.adam);
  Unroller<T> unroller;
  Model<T> grads = Model<T>::zeros(model.kind, model.inputs(), model.units(), model.depth());

  for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffler);
    try {
      for (std::size_t first = 0; first < order.size(); first += config.batch_size) {
        const auto part = std::span<const std::size_t>(order).subspan(
            first, std::min(config.batch_size, order.size() - first));
        const auto batch = SymbolBatch::gather(data, part);
        unroller.forward(model, batch);
        unroller.backward(model, batch, grads);
        if (config.clip_norm > 0.0) clip_gradients(grads, config.clip_norm);
        adam.step(model, grads);
      }
    } catch (const NumericOverflow& e) {
      report.stop_reason = StopReason::NumericOverflow;
      report.wall_seconds = elapsed();
      throw TrainingDiverged(std::string("training diverged in epoch ") + std::to_string(epoch + 1) + ": " +
                                 e.what(),
                             report);
    }

    LossAccuracy la;
    try {
      la = evaluate(model, data, config.stop_split);
    } catch (const NumericOverflow& e) {
      report.stop_reason = StopReason::NumericOverflow;
      report.wall_seconds = elapsed();
      throw TrainingDiverged(std::string("evaluation diverged: ") + e.what(), report);
    }
    report.loss_curve.push_back(la.loss);
    report.accuracy_curve.push_back(la.accuracy);
    report.epochs_run = epoch + 1;
    report.final_loss = la.loss;
    report.final_accuracy = la.accuracy;

    const bool met = config.stop_rule == StopRule::Loss ? la.loss <= config.loss_target
                                                        : la.accuracy >= config.accuracy_target;
    if (met) {
      report.stop_reason = StopReason::CriterionMet;
      break;
    }
    report.stop_reason = StopReason::EpochCap;
  }
  report.wall_seconds = elapsed();
  if constexpr (std::is_same_v<T, double>) {
    return {std::move(model), std::move(report)};
  } else {
    return {model.template cast<double>(), std::move(report)};
  }
}

}  // namespace

TrainResult train(const EncodedDataset& data, const TrainConfig& config, const Model<double>& initial) {
  config.validate();
  initial.check_shapes();
  if (initial.inputs() != data.alphabet().size() || initial.outputs() != data.alphabet().size()) {
    throw AlphabetMismatch("model input/output size does not match the dataset alphabet");
  }
  if (data.starts(Split::Train).empty()) throw ConfigError("training split is empty");
  if (data.starts(config.stop_split).empty()) throw ConfigError("stopping split is empty");
  if (config.precision == Precision::Float64) return run<double>(data, config, initial);
  return run<float>(data, config, initial.cast<float>());
}

TrainResult train(const EncodedDataset& data, const TrainConfig& config) {
  config.validate();
  return train(data, config,
               glorot_model(config.cell, data.alphabet().size(), config.units, config.layers, config.init_seed));
}

}  // namespace seqlab::rnn
