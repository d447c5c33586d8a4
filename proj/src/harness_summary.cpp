#include "seqlab/harness/summary.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include "seqlab/error.hpp"

namespace seqlab::harness {
namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw ConfigError("quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

SummaryStats box_stats(std::vector<double> values) {
  if (values.empty()) throw ConfigError("box statistics of an empty group");
  std::sort(values.begin(), values.end());
  SummaryStats s;
  s.count = values.size();
  s.q1 = quantile_sorted(values, 0.25);
  s.median = quantile_sorted(values, 0.5);
  s.q3 = quantile_sorted(values, 0.75);
  const double iqr = s.q3 - s.q1;
  const double low_fence = s.q1 - 1.5 * iqr;
  const double high_fence = s.q3 + 1.5 * iqr;
  s.whisker_low = s.q1;
  s.whisker_high = s.q3;
  bool low_set = false;
  for (double v : values) {
    if (v < low_fence || v > high_fence) {
      s.outliers.push_back(v);
      continue;
    }
    if (!low_set) {
      s.whisker_low = v;
      low_set = true;
    }
    s.whisker_high = v;
  }
  return s;
}

std::string record_field(const TrialRecord& r, std::string_view column) {
  if (column == "name") return r.name;
  if (column == "seed_k") return std::to_string(r.seed_k);
  if (column == "seed_complexity") return std::to_string(r.seed_complexity);
  if (column == "min_length") return std::to_string(r.min_length);
  if (column == "cell") return std::string(rnn::to_string(r.cell));
  if (column == "layers") return std::to_string(r.layers);
  if (column == "units") return std::to_string(r.units);
  if (column == "lr") return format_double(r.lr);
  if (column == "stop_rule") return std::string(rnn::to_string(r.stop_rule));
  if (column == "repeat") return std::to_string(r.repeat);
  if (column == "epochs") return std::to_string(r.epochs);
  if (column == "stop_reason") return r.stop_reason;
  if (column == "wall_seconds") return format_double(r.wall_seconds);
  if (column == "loss") return format_double(r.loss);
  if (column == "accuracy") return format_double(r.accuracy);
  if (column == "dl") return format_double(r.dl);
  if (column == "jw") return format_double(r.jw);
  if (column == "failed") return r.failed ? "1" : "0";
  throw ConfigError("unknown record column '" + std::string(column) + "'");
}

double record_value(const TrialRecord& r, std::string_view column) {
  if (column == "seed_k") return static_cast<double>(r.seed_k);
  if (column == "seed_complexity") return static_cast<double>(r.seed_complexity);
  if (column == "min_length") return static_cast<double>(r.min_length);
  if (column == "layers") return static_cast<double>(r.layers);
  if (column == "units") return static_cast<double>(r.units);
  if (column == "lr") return r.lr;
  if (column == "repeat") return static_cast<double>(r.repeat);
  if (column == "epochs") return static_cast<double>(r.epochs);
  if (column == "wall_seconds") return r.wall_seconds;
  if (column == "loss") return r.loss;
  if (column == "accuracy") return r.accuracy;
  if (column == "dl") return r.dl;
  if (column == "jw") return r.jw;
  throw ConfigError("column '" + std::string(column) + "' is not numeric");
}

Summary summarize(std::span<const TrialRecord> records, const std::vector<std::string>& group_by,
                  std::string_view value, std::span<const std::string> bin_labels) {
  if (records.empty()) throw ConfigError("cannot summarize an empty record list");
  if (!bin_labels.empty() && bin_labels.size() != records.size()) {
    throw ConfigError("bin labels must align with the records");
  }
  // Resolve columns up front so a typo fails even when nothing would use it.
  record_value(records.front(), value);
  for (const auto& col : group_by) {
    if (col == "complexity_bin") {
      if (bin_labels.empty()) throw ConfigError("grouping by complexity_bin needs bin labels");
    } else {
      record_field(records.front(), col);
    }
  }

  Summary out{group_by, std::string(value), {}, {}};
  std::vector<std::vector<std::string>> order;
  std::map<std::vector<std::string>, std::vector<double>> groups;
  for (std::size_t i = 0; i < records.size(); ++i) {
    std::vector<std::string> key;
    for (const auto& col : group_by)
      key.push_back(col == "complexity_bin" ? bin_labels[i] : record_field(records[i], col));
    auto [it, fresh] = groups.try_emplace(key);
    if (fresh) order.push_back(key);
    if (!records[i].failed) it->second.push_back(record_value(records[i], value));
  }
  for (const auto& key : order) {
    auto& values = groups[key];
    if (values.empty()) {
      std::string label;
      for (std::size_t c = 0; c < key.size(); ++c) label += (c ? ", " : "") + group_by[c] + "=" + key[c];
      out.warnings.push_back("group {" + label + "} has no successful trials; omitted");
      continue;
    }
    SummaryStats s = box_stats(std::move(values));
    s.key = key;
    out.groups.push_back(std::move(s));
  }
  return out;
}

std::size_t ComplexityBins::bin_of(double x) const noexcept {
  if (!(hi > lo)) return 0;
  const double pos = std::floor((x - lo) / width());
  if (pos <= 0.0) return 0;
  return std::min(count - 1, static_cast<std::size_t>(pos));
}

std::string ComplexityBins::label(std::size_t bin) const {
  const bool last = bin + 1 == count;
  return "[" + format_double(edge(bin)) + ", " + format_double(last ? hi : edge(bin + 1)) + (last ? "]" : ")");
}

ComplexityBins make_bins(double lo, double hi, std::size_t n_bins) {
  if (n_bins == 0) throw ConfigError("need at least one bin");
  if (hi < lo) throw ConfigError("bin range is reversed");
  return {lo, hi, n_bins};
}

std::vector<std::string> bin_complexities(std::span<const TrialRecord> records, std::size_t n_bins) {
  if (records.empty()) return {};
  auto [lo, hi] = std::minmax_element(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return a.seed_complexity < b.seed_complexity;
  });
  const auto bins = make_bins(static_cast<double>(lo->seed_complexity), static_cast<double>(hi->seed_complexity),
                              n_bins);
  std::vector<std::string> labels;
  labels.reserve(records.size());
  for (const auto& r : records) labels.push_back(bins.label(bins.bin_of(static_cast<double>(r.seed_complexity))));
  return labels;
}

}  // namespace seqlab::harness
