#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seqlab/harness/experiment.hpp"

namespace seqlab::harness {

/// Linear-interpolation quantile between closest ranks (the "type 7"
/// definition) of an ascending-sorted sample; q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

/// Tukey box-plot statistics for one group.
struct SummaryStats {
  std::vector<std::string> key;  // values of the group-by columns
  std::size_t count = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double whisker_low = 0.0;   // smallest sample >= q1 - 1.5 IQR
  double whisker_high = 0.0;  // largest sample <= q3 + 1.5 IQR
  std::vector<double> outliers;  // ascending
};

SummaryStats box_stats(std::vector<double> values);

struct Summary {
  std::vector<std::string> group_by;
  std::string value;
  std::vector<SummaryStats> groups;  // in order of first appearance
  /// One message per group left empty (every trial failed); such groups are
  /// omitted from `groups`.
  std::vector<std::string> warnings;
};

/// Column names accepted by record_field(); "complexity_bin" additionally
/// needs bin labels passed to summarize().
std::string record_field(const TrialRecord& record, std::string_view column);
double record_value(const TrialRecord& record, std::string_view column);

/// Groups records by the listed records.csv columns and summarizes the
/// numeric `value` column. Failed records are skipped. When `bin_labels` is
/// given (index-aligned with records) the pseudo-column "complexity_bin" is
/// available as a group key. Throws ConfigError on an unknown column or an
/// empty record list.
Summary summarize(std::span<const TrialRecord> records, const std::vector<std::string>& group_by,
                  std::string_view value, std::span<const std::string> bin_labels = {});

/// Equal-width bins over [lo, hi]; the last bin is closed on the right.
struct ComplexityBins {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 1;

  double width() const noexcept { return (hi - lo) / static_cast<double>(count); }
  double edge(std::size_t i) const noexcept { return lo + width() * static_cast<double>(i); }
  std::size_t bin_of(double x) const noexcept;
  std::string label(std::size_t bin) const;
};

ComplexityBins make_bins(double lo, double hi, std::size_t n_bins);

/// Bins records by seed_complexity over [min, max] of the records and returns
/// one label per record.
std::vector<std::string> bin_complexities(std::span<const TrialRecord> records, std::size_t n_bins);

}  // namespace seqlab::harness
