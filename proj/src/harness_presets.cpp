#include "seqlab/harness/presets.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "seqlab/error.hpp"
#include "seqlab/rng.hpp"
#include "seqlab/seedgen.hpp"

namespace seqlab::harness {
namespace {

using rnn::CellKind;
using rnn::StopRule;

SeedSpec seed(std::size_t k, std::size_t c, std::uint64_t base) {
  SeedSpec s;
  s.alphabet_size = k;
  s.target_complexity = c;
  s.rng_seed = derive_seed(base, {k, c});
  return s;
}

bool reachable(const SeedSpec& s) {
  if (s.target_complexity < s.alphabet_size || s.target_complexity > max_complexity_bound(s.alphabet_size, s.max_length))
    return false;
  try {
    generate_seed(s);
    return true;
  } catch (const GenerationFailure&) {
    return false;
  }
}

ExperimentConfig initial(bool small, std::uint64_t base) {
  ExperimentConfig c;
  c.name = small ? "initial-small" : "initial";
  if (small) {
    for (auto [k, cx] : {std::pair<std::size_t, std::size_t>{2, 20}, {5, 20}, {5, 35}, {10, 35}, {10, 50}, {20, 50}})
      c.seeds.push_back(seed(k, cx, base));
    c.layer_counts = {1, 2};
    c.total_unit_targets = {100};
    c.learning_rates = {0.01};
    c.repeats = 2;
    c.max_epochs = 200;
  } else {
    for (std::size_t k : {2, 5, 10, 20})
      for (std::size_t cx : {20, 35, 50}) c.seeds.push_back(seed(k, cx, base));
    c.layer_counts = {1, 2, 3};
    c.total_unit_targets = {50, 100, 200};
    c.learning_rates = {0.001, 0.01, 0.1};
  }
  c.min_lengths = {500};
  c.cell_kinds = {CellKind::Lstm, CellKind::Gru};
  c.stop_rules = {StopRule::Accuracy, StopRule::Loss};
  return c;
}

ExperimentConfig low(bool small, std::uint64_t base) {
  ExperimentConfig c;
  c.name = small ? "low-small" : "low";
  if (small) {
    for (auto [k, cx] : {std::pair<std::size_t, std::size_t>{2, 4}, {2, 8}, {3, 6}, {4, 10}, {5, 12}, {6, 9}})
      c.seeds.push_back(seed(k, cx, base));
    c.unit_list = {25, 50};
    c.repeats = 3;
    c.max_epochs = 150;
  } else {
    for (std::size_t k = 2; k <= 6; ++k)
      for (std::size_t cx = 2; cx <= 12; ++cx)
        if (auto s = seed(k, cx, base); reachable(s)) c.seeds.push_back(s);
    c.unit_list = geometric_units(25, 250, 10);
  }
  c.min_lengths = {1100};
  c.cell_kinds = {CellKind::Lstm, CellKind::Gru};
  c.learning_rates = {0.001, 0.01};
  c.stop_rules = {StopRule::Loss};
  return c;
}

ExperimentConfig high(bool small, std::uint64_t base) {
  ExperimentConfig c;
  c.name = small ? "high-small" : "high";
  if (small) {
    for (auto [k, cx] :
         {std::pair<std::size_t, std::size_t>{10, 1000}, {10, 1100}, {33, 1400}, {33, 1700}, {52, 1500}, {52, 1850}})
      c.seeds.push_back(seed(k, cx, base));
    c.min_lengths = {5000};
    c.repeats = 1;
    c.max_epochs = 10;
  } else {
    std::vector<SeedSpec> candidates;
    for (auto cx : linear_complexities(1000, 1850, 168))
      for (std::size_t k : {10, 33, 52})
        if (auto s = seed(k, cx, base); reachable(s)) candidates.push_back(s);
    const std::size_t want = std::min<std::size_t>(300, candidates.size());
    for (std::size_t j = 0; j < want; ++j) c.seeds.push_back(candidates[j * candidates.size() / want]);
    c.min_lengths = {5000, 7500, 10000};
  }
  c.cell_kinds = {CellKind::Lstm, CellKind::Gru};
  c.cell_learning_rates = {{CellKind::Lstm, {0.01}}, {CellKind::Gru, {0.0035}}};
  c.unit_list = {100};
  c.stop_rules = {StopRule::Loss};
  return c;
}

ExperimentConfig saturation(bool small, std::uint64_t base) {
  ExperimentConfig c;
  c.name = small ? "saturation-small" : "saturation";
  std::vector<std::size_t> complexities;
  if (small) {
    complexities = {60, 300, 1500};
    c.min_lengths = {1100};
    c.repeats = 2;
    c.max_epochs = 25;
  } else {
    // Geometric spacing so the low end, where similarity starts to drop, is
    // sampled as densely as the high end.
    for (std::size_t i = 0; i < 12; ++i)
      complexities.push_back(
          static_cast<std::size_t>(std::llround(60.0 * std::pow(1850.0 / 60.0, static_cast<double>(i) / 11.0))));
    c.min_lengths = {5000};
  }
  for (auto cx : complexities) c.seeds.push_back(seed(52, cx, base));
  c.cell_kinds = {CellKind::Lstm, CellKind::Gru};
  c.cell_learning_rates = {{CellKind::Lstm, {0.01}}, {CellKind::Gru, {0.0035}}};
  c.unit_list = {100};
  c.stop_rules = {StopRule::Loss};
  return c;
}

}  // namespace

std::vector<std::size_t> geometric_units(std::size_t lo, std::size_t hi, std::size_t steps) {
  if (steps < 2 || lo == 0 || hi < lo) throw ConfigError("geometric_units needs 0 < lo <= hi and steps >= 2");
  std::vector<std::size_t> out;
  const double ratio = static_cast<double>(hi) / static_cast<double>(lo);
  for (std::size_t i = 0; i < steps; ++i)
    out.push_back(static_cast<std::size_t>(
        std::llround(static_cast<double>(lo) * std::pow(ratio, static_cast<double>(i) / static_cast<double>(steps - 1)))));
  return out;
}

std::vector<std::size_t> linear_complexities(std::size_t lo, std::size_t hi, std::size_t steps) {
  if (steps < 2 || hi < lo) throw ConfigError("linear_complexities needs lo <= hi and steps >= 2");
  std::vector<std::size_t> out;
  const double span = static_cast<double>(hi - lo);
  for (std::size_t i = 0; i < steps; ++i)
    out.push_back(lo + static_cast<std::size_t>(
                           std::llround(span * static_cast<double>(i) / static_cast<double>(steps - 1))));
  return out;
}

ExperimentConfig make_preset(std::string_view name, bool small, std::uint64_t base_seed) {
  ExperimentConfig c;
  if (name == "initial") c = initial(small, base_seed);
  else if (name == "low") c = low(small, base_seed);
  else if (name == "high") c = high(small, base_seed);
  else if (name == "saturation") c = saturation(small, base_seed);
  else throw ConfigError("unknown preset '" + std::string(name) + "'");
  c.rng_base_seed = base_seed;
  return c;
}

std::vector<Summary> standard_summaries(const ExperimentConfig& config, std::span<const TrialRecord> records) {
  if (records.empty()) return {};
  std::set<std::size_t> complexities;
  for (const auto& r : records) complexities.insert(r.seed_complexity);
  const bool binned = complexities.size() > 8;
  std::vector<std::string> labels;
  if (binned) labels = bin_complexities(records, 8);
  const std::string complexity = binned ? "complexity_bin" : "seed_complexity";

  // Coordinates that actually vary across the grid.
  std::vector<std::string> keys{"cell"};
  if (config.min_lengths.size() > 1) keys.push_back("min_length");
  if (config.layer_counts.size() > 1) keys.push_back("layers");
  if (config.stop_rules.size() > 1) keys.push_back("stop_rule");
  bool several_rates = config.learning_rates.size() > 1;
  for (const auto& [kind, rates] : config.cell_learning_rates) several_rates |= rates.size() > 1;
  if (several_rates) keys.push_back("lr");

  std::vector<Summary> out;
  for (const char* value : {"wall_seconds", "dl", "jw"}) {
    out.push_back(summarize(records, keys, value, labels));
    auto by_complexity = keys;
    by_complexity.push_back(complexity);
    out.push_back(summarize(records, by_complexity, value, labels));
    if (config.unit_list.size() > 1 || config.total_unit_targets.size() > 1) {
      auto by_units = keys;
      by_units.push_back("units");
      out.push_back(summarize(records, by_units, value, labels));
    }
  }
  return out;
}

}  // namespace seqlab::harness
