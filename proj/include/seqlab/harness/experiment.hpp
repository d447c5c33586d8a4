#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "seqlab/dataset.hpp"
#include "seqlab/rnn/train.hpp"
#include "seqlab/seedgen.hpp"

namespace seqlab::harness {

/// A full Cartesian experiment grid. Units come either from `unit_list`
/// directly or from `total_unit_targets` (per-layer width chosen so that
/// layers * units is closest to each total); exactly one must be non-empty.
struct ExperimentConfig {
  std::string name;
  std::vector<SeedSpec> seeds;
  std::vector<std::size_t> min_lengths;
  std::vector<rnn::CellKind> cell_kinds;
  std::vector<std::size_t> layer_counts{1};
  std::vector<std::size_t> total_unit_targets;
  std::vector<std::size_t> unit_list;
  std::vector<double> learning_rates;
  /// Replaces `learning_rates` for the listed cell kinds.
  std::map<rnn::CellKind, std::vector<double>> cell_learning_rates;
  std::vector<rnn::StopRule> stop_rules{rnn::StopRule::Loss};
  std::size_t repeats = 5;
  std::uint64_t rng_base_seed = 0;

  std::size_t window = 100;
  double test_fraction = 0.05;
  std::size_t max_epochs = 999;
  std::size_t batch_size = 32;
  rnn::Precision precision = rnn::Precision::Float32;

  /// Throws ConfigError on empty lists or out-of-range values.
  void validate() const;
  const std::vector<double>& rates_for(rnn::CellKind kind) const;
  /// Number of trials run_experiment will produce.
  std::size_t trial_count() const;
};

/// One trial of the grid; the field set mirrors the records.csv columns.
struct TrialRecord {
  std::string name;
  std::size_t seed_k = 0;
  std::size_t seed_complexity = 0;
  std::size_t min_length = 0;
  rnn::CellKind cell = rnn::CellKind::Lstm;
  std::size_t layers = 0;
  std::size_t units = 0;
  double lr = 0.0;
  rnn::StopRule stop_rule = rnn::StopRule::Loss;
  std::size_t repeat = 0;
  std::size_t epochs = 0;
  /// A rnn::StopReason name, or "error" when the trial never trained.
  std::string stop_reason;
  double wall_seconds = 0.0;
  double loss = 0.0;
  double accuracy = 0.0;
  double dl = 0.0;
  double jw = 0.0;
  bool failed = false;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

inline constexpr const char* kErrorStopReason = "error";

struct RunOptions {
  /// Worker threads; 0 means std::thread::hardware_concurrency().
  std::size_t workers = 0;
  /// Called once per finished trial, serialized, in completion order.
  std::function<void(const TrialRecord&, std::size_t done, std::size_t total)> on_record;
};

/// Executes every grid point `repeats` times: generate seed, build dataset,
/// train, forecast the validation string, score. Records come back in grid
/// order (seed, min_length, cell, layers, units, lr, stop_rule, repeat with
/// repeats innermost) whatever the worker count. Failed trials are kept with
/// failed = true. Seeds for data splits and initialization are derived from
/// rng_base_seed and the trial coordinates, so reruns are reproducible up to
/// wall_seconds.
std::vector<TrialRecord> run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Seed strings for the config (index-aligned with config.seeds); entries
/// that failed to generate hold the GenerationFailure message instead.
struct GeneratedSeeds {
  std::vector<std::optional<SeedString>> seeds;
  std::vector<std::string> errors;
};
GeneratedSeeds generate_seeds(const ExperimentConfig& config);

struct SaturationPoint {
  std::size_t complexity = 0;
  rnn::CellKind cell = rnn::CellKind::Lstm;
  std::size_t count = 0;
  double mean_dl = 0.0;
  double mean_jw = 0.0;
};

/// Mean similarity per (cell, complexity) over successful trials, ordered by
/// cell then increasing complexity.
std::vector<SaturationPoint> saturation_means(const std::vector<TrialRecord>& records);

/// run_experiment restricted to seeds of a single alphabet size. Throws
/// ConfigError when the seeds mix alphabet sizes.
std::vector<TrialRecord> saturation_study(const ExperimentConfig& config, const RunOptions& options = {});

}  // namespace seqlab::harness
