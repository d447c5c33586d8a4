#include "seqlab/harness/records.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "seqlab/error.hpp"

namespace seqlab::harness {
namespace {

std::string real(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Names written here never contain commas or quotes; anything else is
// quoted defensively.
std::string text(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        fields.back() += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.emplace_back();
    } else {
      fields.back() += ch;
    }
  }
  return fields;
}

double parse_real(const std::string& s) {
  if (s == "nan") return std::nan("");
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw ConfigError("bad real '" + s + "'");
  return v;
}

std::size_t parse_count(const std::string& s) {
  std::size_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw ConfigError("bad integer '" + s + "'");
  return v;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

void write_records(std::ostream& out, std::span<const TrialRecord> records) {
  out << kRecordsHeader << '\n';
  for (const auto& r : records) {
    out << text(r.name) << ',' << r.seed_k << ',' << r.seed_complexity << ',' << r.min_length << ','
        << rnn::to_string(r.cell) << ',' << r.layers << ',' << r.units << ',' << real(r.lr) << ','
        << rnn::to_string(r.stop_rule) << ',' << r.repeat << ',' << r.epochs << ',' << text(r.stop_reason) << ','
        << real(r.wall_seconds) << ',' << real(r.loss) << ',' << real(r.accuracy) << ',' << real(r.dl) << ','
        << real(r.jw) << ',' << (r.failed ? 1 : 0) << '\n';
  }
}

void write_records(const std::filesystem::path& path, std::span<const TrialRecord> records) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  write_records(out, records);
}

std::vector<TrialRecord> read_records(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("records file is empty");
  strip_cr(line);
  if (line != kRecordsHeader) throw ConfigError("unexpected records header '" + line + "'");
  std::vector<TrialRecord> out;
  for (std::size_t lineno = 2; std::getline(in, line); ++lineno) {
    strip_cr(line);
    if (line.empty()) continue;
    const auto f = split_line(line);
    try {
      if (f.size() != 18) throw ConfigError("expected 18 fields, got " + std::to_string(f.size()));
      TrialRecord r;
      r.name = f[0];
      r.seed_k = parse_count(f[1]);
      r.seed_complexity = parse_count(f[2]);
      r.min_length = parse_count(f[3]);
      r.cell = rnn::parse_cell_kind(f[4]);
      r.layers = parse_count(f[5]);
      r.units = parse_count(f[6]);
      r.lr = parse_real(f[7]);
      r.stop_rule = rnn::parse_stop_rule(f[8]);
      r.repeat = parse_count(f[9]);
      r.epochs = parse_count(f[10]);
      r.stop_reason = f[11];
      r.wall_seconds = parse_real(f[12]);
      r.loss = parse_real(f[13]);
      r.accuracy = parse_real(f[14]);
      r.dl = parse_real(f[15]);
      r.jw = parse_real(f[16]);
      if (f[17] != "0" && f[17] != "1") throw ConfigError("failed flag must be 0 or 1");
      r.failed = f[17] == "1";
      out.push_back(std::move(r));
    } catch (const ConfigError& e) {
      throw ConfigError("records line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<TrialRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  return read_records(in);
}

void write_summary(std::ostream& out, std::span<const Summary> summaries) {
  out << kSummaryHeader << '\n';
  for (const auto& s : summaries) {
    std::string cols;
    for (std::size_t c = 0; c < s.group_by.size(); ++c) cols += (c ? "+" : "") + s.group_by[c];
    for (const auto& g : s.groups) {
      std::string key;
      for (std::size_t c = 0; c < g.key.size(); ++c) key += (c ? ";" : "") + s.group_by[c] + "=" + g.key[c];
      out << text(cols) << ',' << text(key) << ',' << s.value << ',' << g.count << ',' << real(g.median) << ','
          << real(g.q1) << ',' << real(g.q3) << ',' << real(g.whisker_low) << ',' << real(g.whisker_high) << ',';
      for (std::size_t i = 0; i < g.outliers.size(); ++i) out << (i ? ";" : "") << real(g.outliers[i]);
      out << '\n';
    }
  }
}

void write_summary(const std::filesystem::path& path, std::span<const Summary> summaries) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  write_summary(out, summaries);
}

}  // namespace seqlab::harness
