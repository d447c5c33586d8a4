// Command-line front end: complexity, gen, train, forecast, similarity and
// experiment subcommands.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>

#include "seqlab/dataset.hpp"
#include "seqlab/error.hpp"
#include "seqlab/forecast.hpp"
#include "seqlab/harness/experiment.hpp"
#include "seqlab/harness/presets.hpp"
#include "seqlab/harness/records.hpp"
#include "seqlab/lzw.hpp"
#include "seqlab/rnn/checkpoint.hpp"
#include "seqlab/rnn/train.hpp"
#include "seqlab/rng.hpp"
#include "seqlab/seedgen.hpp"
#include "seqlab/serialize.hpp"
#include "seqlab/textmetrics.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitError = 2;
constexpr int kExitTrialsFailed = 1;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void print_scores(const seqlab::SimilarityScore& s) {
  std::cout << "dl " << fmt(s.dl) << "\njw " << fmt(s.jw) << '\n';
}

// Train-command config file: {"train": TrainConfig, "dataset": DatasetSpec,
// "data_seed": u64}, every key optional.
struct TrainJob {
  seqlab::rnn::TrainConfig train;
  seqlab::DatasetSpec dataset;
  std::uint64_t data_seed = 0;
};

TrainJob read_train_job(const fs::path& path) {
  const json doc = seqlab::read_json_file(path);
  if (!doc.is_object()) throw seqlab::ConfigError("train config must be a JSON object");
  TrainJob job;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (it.key() == "train") job.train = seqlab::train_config_from_json(*it);
    else if (it.key() == "dataset") job.dataset = seqlab::dataset_spec_from_json(*it);
    else if (it.key() == "data_seed" && it->is_number_unsigned()) job.data_seed = it->get<std::uint64_t>();
    else throw seqlab::ConfigError("train config: unexpected key '" + it.key() + "'");
  }
  job.train.validate();
  job.dataset.validate();
  return job;
}

// The first k default symbols when they cover `text`; otherwise the symbols
// of `text` in ascending order, padded with unused default symbols to k.
// Complexity does not depend on which extra symbols fill the alphabet.
seqlab::Alphabet alphabet_for(const std::string& text, std::size_t k) {
  auto standard = seqlab::Alphabet::first(k);
  if (std::all_of(text.begin(), text.end(), [&](char ch) { return standard.contains(ch); })) return standard;
  std::string symbols(text);
  std::sort(symbols.begin(), symbols.end());
  symbols.erase(std::unique(symbols.begin(), symbols.end()), symbols.end());
  if (symbols.size() > k)
    throw seqlab::AlphabetMismatch("string uses " + std::to_string(symbols.size()) + " distinct symbols, more than " +
                                   std::to_string(k));
  for (char ch : std::string_view(seqlab::kDefaultSymbols)) {
    if (symbols.size() == k) break;
    if (symbols.find(ch) == std::string::npos) symbols += ch;
  }
  return seqlab::Alphabet(symbols);
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw seqlab::ConfigError("cannot write '" + path.string() + "'");
  out << content;
}

int run_gen(std::size_t k, std::size_t c, std::uint64_t seed, std::size_t max_length, const std::string& grid,
            const std::string& out_path) {
  if (grid.empty()) {
    std::cout << seqlab::generate_seed({k, c, max_length, seed}).text << '\n';
    return 0;
  }
  const auto specs = seqlab::seed_grid_from_json(seqlab::read_json_file(grid));
  const auto seeds = seqlab::batch_generate(specs);
  std::vector<seqlab::ManifestEntry> entries;
  for (std::size_t i = 0; i < specs.size(); ++i) entries.push_back({specs[i], seeds[i].text});
  if (out_path.empty()) {
    for (const auto& e : entries) std::cout << seqlab::to_json(e).dump() << '\n';
  } else {
    seqlab::write_manifest(out_path, entries);
  }
  return 0;
}

int run_train(const std::string& manifest_path, const std::string& config_path, const std::string& out_dir) {
  const auto entries = seqlab::read_manifest(manifest_path);
  const TrainJob job = read_train_job(config_path);
  fs::create_directories(out_dir);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto seed = seqlab::to_seed_string(entries[i]);
    const auto data_seed = seqlab::derive_seed(job.data_seed, {i});
    const auto data = seqlab::build_dataset(seed, job.dataset, data_seed);
    const auto result = seqlab::rnn::train(data, job.train);

    seqlab::rnn::Checkpoint ckpt{result.model, json::object()};
    ckpt.meta["manifest_index"] = i;
    ckpt.meta["symbols"] = seed.alphabet.symbols();
    ckpt.meta["dataset"] = seqlab::to_json(job.dataset);
    ckpt.meta["data_seed"] = data_seed;
    ckpt.meta["train"] = seqlab::to_json(job.train);
    ckpt.meta["report"] = seqlab::to_json(result.report);
    char name[32];
    std::snprintf(name, sizeof name, "model_%03zu.json", i);
    seqlab::rnn::save_checkpoint(fs::path(out_dir) / name, ckpt);
    std::cout << name << " epochs " << result.report.epochs_run << ' '
              << seqlab::rnn::to_string(result.report.stop_reason) << " loss " << fmt(result.report.final_loss)
              << " accuracy " << fmt(result.report.final_accuracy) << '\n';
  }
  return 0;
}

int run_forecast(const std::string& checkpoint_path, const std::string& manifest_path, std::size_t horizon) {
  const auto ckpt = seqlab::rnn::load_checkpoint(checkpoint_path);
  const auto entries = seqlab::read_manifest(manifest_path);
  const auto& meta = ckpt.meta;
  if (!meta.contains("manifest_index") || !meta.contains("dataset") || !meta.contains("data_seed"))
    throw seqlab::ConfigError("checkpoint lacks the dataset provenance written by 'train'");
  const auto index = meta["manifest_index"].get<std::size_t>();
  if (index >= entries.size()) throw seqlab::ConfigError("checkpoint refers to a missing manifest entry");

  const auto seed = seqlab::to_seed_string(entries[index]);
  const auto spec = seqlab::dataset_spec_from_json(meta["dataset"]);
  const auto data = seqlab::build_dataset(seed, spec, meta["data_seed"].get<std::uint64_t>());
  const std::size_t start = data.sequence().size() - spec.window;
  const std::string truth = seqlab::continuation(seed.text, start, horizon);
  const std::string predicted = seqlab::forecast(ckpt.model, data.forecast_seed_window(), horizon, seed.alphabet);
  std::cout << predicted << '\n';
  print_scores(seqlab::score_forecast(predicted, truth));
  return 0;
}

int run_experiment_cmd(const std::string& preset, bool small, const std::string& config_path,
                       const std::string& out_dir, std::size_t workers, std::uint64_t base_seed, bool quiet) {
  namespace h = seqlab::harness;
  h::ExperimentConfig config = config_path.empty()
                                   ? h::make_preset(preset, small, base_seed)
                                   : seqlab::experiment_config_from_json(seqlab::read_json_file(config_path));
  config.validate();
  fs::create_directories(out_dir);
  const fs::path out(out_dir);
  write_text(out / "config.json", seqlab::to_json(config).dump(2) + "\n");

  const auto seeds = h::generate_seeds(config);
  std::vector<seqlab::ManifestEntry> entries;
  for (std::size_t i = 0; i < config.seeds.size(); ++i) {
    if (seeds.seeds[i]) entries.push_back({config.seeds[i], seeds.seeds[i]->text});
    else std::cerr << "warning: seed " << i << ": " << seeds.errors[i] << '\n';
  }
  seqlab::write_manifest(out / "manifest.jsonl", entries);

  h::RunOptions options;
  options.workers = workers;
  if (!quiet) {
    options.on_record = [](const h::TrialRecord& r, std::size_t done, std::size_t total) {
      std::cerr << '[' << done << '/' << total << "] " << seqlab::rnn::to_string(r.cell) << " k=" << r.seed_k
                << " c=" << r.seed_complexity << " units=" << r.units << " lr=" << r.lr << " repeat=" << r.repeat
                << " -> " << r.stop_reason << " epochs=" << r.epochs << " dl=" << fmt(r.dl) << '\n';
    };
  }
  const auto records = h::run_experiment(config, options);
  h::write_records(out / "records.csv", records);
  const auto summaries = h::standard_summaries(config, records);
  h::write_summary(out / "summary.csv", summaries);
  if (!summaries.empty())
    for (const auto& w : summaries.front().warnings) std::cerr << "warning: " << w << '\n';

  std::size_t failed = 0;
  for (const auto& r : records) failed += r.failed ? 1 : 0;
  std::cerr << records.size() << " trials, " << failed << " failed; results in " << out_dir << '\n';
  return failed ? kExitTrialsFailed : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LZW-complexity string generation and RNN memorization experiments"};
  app.require_subcommand(1);

  auto* complexity = app.add_subcommand("complexity", "Print the LZW complexity of a string");
  std::string text;
  std::size_t symbols = 0;
  complexity->add_option("string", text, "Input string")->required();
  complexity->add_option("--symbols", symbols, "Alphabet size (first k default symbols)")->required();

  auto* gen = app.add_subcommand("gen", "Generate seed strings of exact LZW complexity");
  std::size_t target = 0, max_length = seqlab::SeedSpec{}.max_length;
  std::uint64_t seed = 0;
  std::string grid, gen_out;
  auto* gen_k = gen->add_option("--symbols", symbols, "Alphabet size");
  auto* gen_c = gen->add_option("--complexity", target, "Target complexity");
  gen->add_option("--seed", seed, "RNG seed");
  gen->add_option("--max-length", max_length, "Length budget");
  auto* gen_grid = gen->add_option("--grid", grid, "Seed grid JSON; writes a manifest");
  gen->add_option("--out", gen_out, "Manifest output path (default stdout)")->needs(gen_grid);
  gen_grid->excludes(gen_k)->excludes(gen_c);

  auto* train = app.add_subcommand("train", "Train one network per manifest entry");
  std::string manifest, config, out_dir;
  train->add_option("--manifest", manifest, "Seed manifest (JSON lines)")->required()->check(CLI::ExistingFile);
  train->add_option("--config", config, "Training config JSON")->required()->check(CLI::ExistingFile);
  train->add_option("--out", out_dir, "Checkpoint directory")->required();

  auto* fc = app.add_subcommand("forecast", "Forecast from a checkpoint and score it");
  std::string checkpoint;
  std::size_t horizon = seqlab::kDefaultHorizon;
  fc->add_option("--checkpoint", checkpoint, "Checkpoint written by train")->required()->check(CLI::ExistingFile);
  fc->add_option("--manifest", manifest, "Manifest used for training")->required()->check(CLI::ExistingFile);
  fc->add_option("--horizon", horizon, "Characters to forecast");

  auto* sim = app.add_subcommand("similarity", "Print DL and JW similarity of two strings");
  std::string a, b;
  sim->add_option("a", a)->required();
  sim->add_option("b", b)->required();

  auto* exp = app.add_subcommand("experiment", "Run an experiment grid");
  std::string preset;
  bool small = false, quiet = false;
  std::size_t workers = 0;
  std::uint64_t base_seed = 0;
  auto* exp_preset = exp->add_option("--preset", preset, "Built-in grid")
                         ->check(CLI::IsMember({"initial", "low", "high", "saturation"}));
  exp->add_flag("--small", small, "Desk-scale variant of the preset")->needs(exp_preset);
  auto* exp_config = exp->add_option("--config", config, "Experiment config JSON instead of a preset")
                         ->check(CLI::ExistingFile)
                         ->excludes(exp_preset);
  exp->add_option("--out", out_dir, "Output directory")->required();
  exp->add_option("--workers", workers, "Worker threads (default: hardware concurrency)");
  exp->add_option("--base-seed", base_seed, "Base RNG seed");
  exp->add_flag("--quiet", quiet, "No per-trial progress");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*complexity) {
      std::cout << seqlab::lzw_complexity(text, alphabet_for(text, symbols)) << '\n';
    } else if (*gen) {
      if (grid.empty() && (gen_k->count() == 0 || gen_c->count() == 0))
        throw seqlab::ConfigError("gen needs --symbols and --complexity, or --grid");
      return run_gen(symbols, target, seed, max_length, grid, gen_out);
    } else if (*train) {
      return run_train(manifest, config, out_dir);
    } else if (*fc) {
      return run_forecast(checkpoint, manifest, horizon);
    } else if (*sim) {
      print_scores(seqlab::similarity(a, b));
    } else if (*exp) {
      if (preset.empty() && exp_config->count() == 0) throw seqlab::ConfigError("experiment needs --preset or --config");
      return run_experiment_cmd(preset, small, config, out_dir, workers, base_seed, quiet);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return 0;
}
