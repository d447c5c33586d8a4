#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "seqlab/dataset.hpp"
#include "seqlab/error.hpp"
#include "seqlab/rnn/adam.hpp"
#include "seqlab/rnn/model.hpp"

namespace seqlab::rnn {

enum class StopRule { Accuracy, Loss };
enum class StopReason { CriterionMet, EpochCap, NumericOverflow };
enum class Precision { Float32, Float64 };

std::string_view to_string(StopRule rule) noexcept;
std::string_view to_string(StopReason reason) noexcept;
std::string_view to_string(Precision precision) noexcept;
StopRule parse_stop_rule(std::string_view text);
StopReason parse_stop_reason(std::string_view text);
Precision parse_precision(std::string_view text);

inline constexpr double kAccuracyTarget = 0.99;
inline constexpr double kLossTarget = 0.1;

struct TrainConfig {
  CellKind cell = CellKind::Lstm;
  std::size_t layers = 1;
  std::size_t units = 100;
  double learning_rate = 0.01;
  std::size_t max_epochs = 999;
  StopRule stop_rule = StopRule::Loss;
  double accuracy_target = kAccuracyTarget;
  double loss_target = kLossTarget;
  std::size_t batch_size = 32;
  AdamConfig adam;
  std::uint64_t init_seed = 0;
  /// Split the stopping criterion is evaluated on at each epoch end.
  Split stop_split = Split::Test;
  /// Arithmetic used for training; the returned model is always double.
  Precision precision = Precision::Float32;
  /// Global gradient-norm clip; 0 disables clipping.
  double clip_norm = 0.0;

  void validate() const;
};

struct TrainReport {
  std::size_t epochs_run = 0;
  StopReason stop_reason = StopReason::EpochCap;
  double final_loss = 0.0;
  double final_accuracy = 0.0;
  double wall_seconds = 0.0;
  std::vector<double> loss_curve;
  std::vector<double> accuracy_curve;
};

struct TrainResult {
  Model<double> model;
  TrainReport report;
};

/// Training aborted because loss or gradients stopped being finite. The
/// report describes the epochs completed before the failure.
class TrainingDiverged : public NumericOverflow {
 public:
  TrainingDiverged(const std::string& what, TrainReport report)
      : NumericOverflow(what), report_(std::move(report)) {}
  const TrainReport& report() const noexcept { return report_; }

 private:
  TrainReport report_;
};

/// Mini-batch Adam over the training split, reshuffled every epoch. At each
/// epoch end the stop split is evaluated; training stops as soon as the
/// configured rule holds (accuracy >= target or loss <= target) or after
/// max_epochs. Deterministic in (dataset, config).
TrainResult train(const EncodedDataset& data, const TrainConfig& config);

/// Same, starting from explicit parameters instead of a Glorot draw.
TrainResult train(const EncodedDataset& data, const TrainConfig& config, const Model<double>& initial);

/// Units per layer such that layers * units is closest to `total`
/// (ties go to the smaller width).
std::size_t units_for_total(std::size_t total, std::size_t layers);

}  // namespace seqlab::rnn
