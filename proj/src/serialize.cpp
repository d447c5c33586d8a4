#include "seqlab/serialize.hpp"

#include <fstream>
#include <set>
#include <string>

#include "seqlab/error.hpp"
#include "seqlab/rng.hpp"

namespace seqlab {
namespace {

using nlohmann::json;

// Reads keys of one JSON object into an existing value, rejecting keys that
// were never asked for.
class Reader {
 public:
  Reader(const json& doc, std::string what) : doc_(doc), what_(std::move(what)) {
    if (!doc_.is_object()) throw ConfigError(what_ + ": expected a JSON object");
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    auto it = doc_.find(key);
    if (it == doc_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception&) {
      throw ConfigError(what_ + ": bad value for '" + key + "'");
    }
  }

  template <class T, class Parse>
  void get_parsed(const char* key, T& out, Parse parse) {
    std::string text;
    bool present = doc_.contains(key);
    get(key, text);
    if (present) out = parse(text);
  }

  template <class T, class Parse>
  void get_parsed_list(const char* key, std::vector<T>& out, Parse parse) {
    std::vector<std::string> texts;
    bool present = doc_.contains(key);
    get(key, texts);
    if (!present) return;
    out.clear();
    for (const auto& t : texts) out.push_back(parse(t));
  }

  const json* sub(const char* key) {
    seen_.insert(key);
    auto it = doc_.find(key);
    return it == doc_.end() ? nullptr : &*it;
  }

  void finish() const {
    for (auto it = doc_.begin(); it != doc_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(what_ + ": unknown key '" + it.key() + "'");
  }

 private:
  const json& doc_;
  std::string what_;
  std::set<std::string> seen_;
};

template <class E>
std::vector<std::string> names(const std::vector<E>& values) {
  std::vector<std::string> out;
  for (auto v : values) out.emplace_back(rnn::to_string(v));
  return out;
}

}  // namespace

json to_json(const SeedSpec& s) {
  return {{"k", s.alphabet_size}, {"c", s.target_complexity}, {"max_length", s.max_length}, {"rng_seed", s.rng_seed}};
}

json to_json(const DatasetSpec& s) {
  return {{"min_length", s.min_length}, {"window", s.window}, {"test_fraction", s.test_fraction}};
}

json to_json(const rnn::TrainConfig& c) {
  return {{"cell", rnn::to_string(c.cell)},
          {"layers", c.layers},
          {"units", c.units},
          {"learning_rate", c.learning_rate},
          {"max_epochs", c.max_epochs},
          {"stop_rule", rnn::to_string(c.stop_rule)},
          {"accuracy_target", c.accuracy_target},
          {"loss_target", c.loss_target},
          {"batch_size", c.batch_size},
          {"adam", {{"beta1", c.adam.beta1}, {"beta2", c.adam.beta2}, {"epsilon", c.adam.epsilon}}},
          {"init_seed", c.init_seed},
          {"stop_split", c.stop_split == Split::Test ? "test" : "train"},
          {"precision", rnn::to_string(c.precision)},
          {"clip_norm", c.clip_norm}};
}

json to_json(const rnn::TrainReport& r) {
  return {{"epochs_run", r.epochs_run},
          {"stop_reason", rnn::to_string(r.stop_reason)},
          {"final_loss", r.final_loss},
          {"final_accuracy", r.final_accuracy},
          {"wall_seconds", r.wall_seconds},
          {"loss_curve", r.loss_curve},
          {"accuracy_curve", r.accuracy_curve}};
}

json to_json(const harness::ExperimentConfig& c) {
  json seeds = json::array();
  for (const auto& s : c.seeds) seeds.push_back(to_json(s));
  json per_cell = json::object();
  for (const auto& [kind, rates] : c.cell_learning_rates) per_cell[std::string(rnn::to_string(kind))] = rates;
  return {{"name", c.name},
          {"seeds", seeds},
          {"min_lengths", c.min_lengths},
          {"cell_kinds", names(c.cell_kinds)},
          {"layer_counts", c.layer_counts},
          {"total_unit_targets", c.total_unit_targets},
          {"unit_list", c.unit_list},
          {"learning_rates", c.learning_rates},
          {"cell_learning_rates", per_cell},
          {"stop_rules", names(c.stop_rules)},
          {"repeats", c.repeats},
          {"rng_base_seed", c.rng_base_seed},
          {"window", c.window},
          {"test_fraction", c.test_fraction},
          {"max_epochs", c.max_epochs},
          {"batch_size", c.batch_size},
          {"precision", rnn::to_string(c.precision)}};
}

SeedSpec seed_spec_from_json(const json& doc) {
  SeedSpec s;
  Reader r(doc, "seed spec");
  r.get("k", s.alphabet_size);
  r.get("c", s.target_complexity);
  r.get("max_length", s.max_length);
  r.get("rng_seed", s.rng_seed);
  r.finish();
  return s;
}

DatasetSpec dataset_spec_from_json(const json& doc) {
  DatasetSpec s;
  Reader r(doc, "dataset spec");
  r.get("min_length", s.min_length);
  r.get("window", s.window);
  r.get("test_fraction", s.test_fraction);
  r.finish();
  return s;
}

rnn::TrainConfig train_config_from_json(const json& doc) {
  rnn::TrainConfig c;
  Reader r(doc, "train config");
  r.get_parsed("cell", c.cell, rnn::parse_cell_kind);
  r.get("layers", c.layers);
  r.get("units", c.units);
  r.get("learning_rate", c.learning_rate);
  r.get("max_epochs", c.max_epochs);
  r.get_parsed("stop_rule", c.stop_rule, rnn::parse_stop_rule);
  r.get("accuracy_target", c.accuracy_target);
  r.get("loss_target", c.loss_target);
  r.get("batch_size", c.batch_size);
  if (const json* adam = r.sub("adam")) {
    Reader a(*adam, "train config adam");
    a.get("beta1", c.adam.beta1);
    a.get("beta2", c.adam.beta2);
    a.get("epsilon", c.adam.epsilon);
    a.finish();
  }
  r.get("init_seed", c.init_seed);
  r.get_parsed("stop_split", c.stop_split, [](const std::string& t) {
    if (t == "test") return Split::Test;
    if (t == "train") return Split::Train;
    throw ConfigError("stop_split must be 'test' or 'train'");
  });
  r.get_parsed("precision", c.precision, rnn::parse_precision);
  r.get("clip_norm", c.clip_norm);
  r.finish();
  return c;
}

harness::ExperimentConfig experiment_config_from_json(const json& doc) {
  harness::ExperimentConfig c;
  Reader r(doc, "experiment config");
  r.get("name", c.name);
  if (const json* seeds = r.sub("seeds")) {
    if (!seeds->is_array()) throw ConfigError("experiment config: 'seeds' must be an array");
    for (const auto& s : *seeds) c.seeds.push_back(seed_spec_from_json(s));
  }
  r.get("min_lengths", c.min_lengths);
  r.get_parsed_list("cell_kinds", c.cell_kinds, rnn::parse_cell_kind);
  r.get("layer_counts", c.layer_counts);
  r.get("total_unit_targets", c.total_unit_targets);
  r.get("unit_list", c.unit_list);
  r.get("learning_rates", c.learning_rates);
  if (const json* per_cell = r.sub("cell_learning_rates")) {
    if (!per_cell->is_object()) throw ConfigError("experiment config: 'cell_learning_rates' must be an object");
    for (auto it = per_cell->begin(); it != per_cell->end(); ++it) {
      try {
        c.cell_learning_rates[rnn::parse_cell_kind(it.key())] = it->get<std::vector<double>>();
      } catch (const json::exception&) {
        throw ConfigError("experiment config: bad learning rates for '" + it.key() + "'");
      }
    }
  }
  r.get_parsed_list("stop_rules", c.stop_rules, rnn::parse_stop_rule);
  r.get("repeats", c.repeats);
  r.get("rng_base_seed", c.rng_base_seed);
  r.get("window", c.window);
  r.get("test_fraction", c.test_fraction);
  r.get("max_epochs", c.max_epochs);
  r.get("batch_size", c.batch_size);
  r.get_parsed("precision", c.precision, rnn::parse_precision);
  r.finish();
  return c;
}

std::vector<SeedSpec> seed_grid_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("seed grid: expected a JSON object");
  std::vector<SeedSpec> out;
  if (doc.contains("seeds")) {
    Reader r(doc, "seed grid");
    const json* seeds = r.sub("seeds");
    r.finish();
    if (!seeds->is_array()) throw ConfigError("seed grid: 'seeds' must be an array");
    for (const auto& s : *seeds) out.push_back(seed_spec_from_json(s));
  } else {
    std::vector<std::size_t> symbols, complexities;
    SeedSpec base;
    Reader r(doc, "seed grid");
    r.get("symbols", symbols);
    r.get("complexities", complexities);
    r.get("max_length", base.max_length);
    r.get("rng_seed", base.rng_seed);
    r.finish();
    for (auto k : symbols)
      for (auto c : complexities) {
        SeedSpec s = base;
        s.alphabet_size = k;
        s.target_complexity = c;
        s.rng_seed = derive_seed(base.rng_seed, {k, c});
        out.push_back(s);
      }
  }
  if (out.empty()) throw ConfigError("seed grid is empty");
  for (const auto& s : out) s.validate();
  return out;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

json to_json(const ManifestEntry& e) {
  return {{"text", e.text},
          {"k", e.spec.alphabet_size},
          {"c", e.spec.target_complexity},
          {"rng_seed", e.spec.rng_seed},
          {"max_length", e.spec.max_length}};
}

ManifestEntry manifest_entry_from_json(const json& doc) {
  ManifestEntry e;
  Reader r(doc, "manifest entry");
  r.get("text", e.text);
  r.get("k", e.spec.alphabet_size);
  r.get("c", e.spec.target_complexity);
  r.get("rng_seed", e.spec.rng_seed);
  r.get("max_length", e.spec.max_length);
  r.finish();
  return e;
}

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  for (const auto& e : entries) out << to_json(e).dump() << '\n';
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::vector<ManifestEntry> out;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(manifest_entry_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    } catch (const ConfigError& e) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

SeedString to_seed_string(const ManifestEntry& e) {
  Alphabet alphabet = Alphabet::first(e.spec.alphabet_size);
  const auto c = lzw_complexity(e.text, alphabet);
  if (c != e.spec.target_complexity)
    throw ConfigError("manifest text has complexity " + std::to_string(c) + ", expected " +
                      std::to_string(e.spec.target_complexity));
  return {e.text, std::move(alphabet), c};
}

}  // namespace seqlab
