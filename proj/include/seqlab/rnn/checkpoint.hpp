#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>

#include "seqlab/rnn/model.hpp"

namespace seqlab::rnn {

/// A trained model plus free-form metadata (alphabet, config echo, ...).
struct Checkpoint {
  Model<double> model;
  nlohmann::json meta = nlohmann::json::object();
};

/// JSON document: format tag, cell kind, dimensions, metadata and every
/// tensor as {name, shape, row-major values}. Doubles round-trip exactly.
nlohmann::json checkpoint_to_json(const Checkpoint& checkpoint);
Checkpoint checkpoint_from_json(const nlohmann::json& doc);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace seqlab::rnn
