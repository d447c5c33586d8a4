#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <vector>

#include "seqlab/dataset.hpp"
#include "seqlab/harness/experiment.hpp"
#include "seqlab/rnn/train.hpp"
#include "seqlab/seedgen.hpp"

namespace seqlab {

// JSON encodings of the configuration types. Readers start from the type's
// defaults, so any key may be omitted; unknown keys and ill-typed values
// raise ConfigError.

nlohmann::json to_json(const SeedSpec& spec);
nlohmann::json to_json(const DatasetSpec& spec);
nlohmann::json to_json(const rnn::TrainConfig& config);
nlohmann::json to_json(const rnn::TrainReport& report);
nlohmann::json to_json(const harness::ExperimentConfig& config);

SeedSpec seed_spec_from_json(const nlohmann::json& doc);
DatasetSpec dataset_spec_from_json(const nlohmann::json& doc);
rnn::TrainConfig train_config_from_json(const nlohmann::json& doc);
harness::ExperimentConfig experiment_config_from_json(const nlohmann::json& doc);

/// Seed grid for `gen --grid`: either {"seeds": [SeedSpec...]} or
/// {"symbols": [k...], "complexities": [c...], "max_length", "rng_seed"},
/// the latter expanded as a Cartesian product with per-entry seeds derived
/// from rng_seed.
std::vector<SeedSpec> seed_grid_from_json(const nlohmann::json& doc);

/// Parses a JSON file, wrapping I/O and syntax failures in ConfigError.
nlohmann::json read_json_file(const std::filesystem::path& path);

/// One manifest line: {"text", "k", "c", "rng_seed", "max_length"}.
struct ManifestEntry {
  SeedSpec spec;
  std::string text;
};

nlohmann::json to_json(const ManifestEntry& entry);
ManifestEntry manifest_entry_from_json(const nlohmann::json& doc);
void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries);
/// Blank lines are skipped. Throws ConfigError naming the offending line.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);
/// Rebuilds the seed string over the default alphabet; throws ConfigError
/// when the stored text does not match k or c.
SeedString to_seed_string(const ManifestEntry& entry);

}  // namespace seqlab
