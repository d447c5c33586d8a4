#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "seqlab/harness/experiment.hpp"
#include "seqlab/harness/summary.hpp"

namespace seqlab::harness {

/// Exact records.csv header; column order is part of the file format.
inline constexpr const char* kRecordsHeader =
    "name,seed_k,seed_complexity,min_length,cell,layers,units,lr,stop_rule,repeat,epochs,stop_reason,"
    "wall_seconds,loss,accuracy,dl,jw,failed";

/// Writes the header plus one line per record. Reals use the shortest
/// representation that parses back to the same double; NaN is "nan".
void write_records(std::ostream& out, std::span<const TrialRecord> records);
void write_records(const std::filesystem::path& path, std::span<const TrialRecord> records);

/// Inverse of write_records. Throws ConfigError on a wrong header or a
/// malformed line.
std::vector<TrialRecord> read_records(std::istream& in);
std::vector<TrialRecord> read_records(const std::filesystem::path& path);

/// Exact summary.csv header. One row per group of every summary: `group_by`
/// is the '+'-joined key column list, `group` the matching "col=value"
/// pairs joined by ';', and outliers are ';'-separated.
inline constexpr const char* kSummaryHeader =
    "group_by,group,value,count,median,q1,q3,whisker_low,whisker_high,outliers";

void write_summary(std::ostream& out, std::span<const Summary> summaries);
void write_summary(const std::filesystem::path& path, std::span<const Summary> summaries);

}  // namespace seqlab::harness
