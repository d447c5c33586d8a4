#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seqlab/harness/experiment.hpp"
#include "seqlab/harness/summary.hpp"

namespace seqlab::harness {

inline constexpr std::string_view kPresetNames[] = {"initial", "low", "high", "saturation"};

/// Built-in experiment grids. `small` selects the desk-scale variant of the
/// same structure (fewer seeds, widths and repeats, a lower epoch cap).
/// Seed specs get rng seeds derived from (base_seed, k, c); (k, c) pairs the
/// generator cannot reach within the length budget are left out, so the seed
/// count of "low" and "high" depends on feasibility. Throws ConfigError for
/// an unknown name.
ExperimentConfig make_preset(std::string_view name, bool small, std::uint64_t base_seed);

/// 25..250 units in ten geometric steps, rounded.
std::vector<std::size_t> geometric_units(std::size_t lo, std::size_t hi, std::size_t steps);
/// `steps` integer complexities spaced linearly over [lo, hi].
std::vector<std::size_t> linear_complexities(std::size_t lo, std::size_t hi, std::size_t steps);

/// Summary tables written to summary.csv for an experiment: training time
/// and both similarities against the coordinates that vary in the grid.
/// Complexity bins (8) are used instead of raw complexities when there are
/// more than 8 distinct complexities.
std::vector<Summary> standard_summaries(const ExperimentConfig& config, std::span<const TrialRecord> records);

}  // namespace seqlab::harness
