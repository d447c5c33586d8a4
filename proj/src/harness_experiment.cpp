#include "seqlab/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <mutex>
#include <thread>

#include "seqlab/forecast.hpp"
#include "seqlab/rng.hpp"

namespace seqlab::harness {
namespace {

constexpr std::uint64_t kDataStream = 0xda7a;
constexpr std::uint64_t kInitStream = 0x1417;

struct Trial {
  std::size_t seed;
  std::size_t min_length;
  rnn::CellKind cell;
  std::size_t layers;
  std::size_t units;
  double lr;
  rnn::StopRule stop_rule;
  std::size_t repeat;
};

std::vector<Trial> enumerate(const ExperimentConfig& c) {
  std::vector<Trial> out;
  out.reserve(c.trial_count());
  for (std::size_t s = 0; s < c.seeds.size(); ++s)
    for (auto len : c.min_lengths)
      for (auto cell : c.cell_kinds)
        for (auto layers : c.layer_counts) {
          std::vector<std::size_t> widths;
          if (!c.unit_list.empty()) {
            widths = c.unit_list;
          } else {
            for (auto total : c.total_unit_targets) widths.push_back(rnn::units_for_total(total, layers));
          }
          for (auto units : widths)
            for (auto lr : c.rates_for(cell))
              for (auto rule : c.stop_rules)
                for (std::size_t r = 0; r < c.repeats; ++r) out.push_back({s, len, cell, layers, units, lr, rule, r});
        }
  return out;
}

TrialRecord skeleton(const ExperimentConfig& c, const Trial& t) {
  TrialRecord rec;
  rec.name = c.name;
  rec.seed_k = c.seeds[t.seed].alphabet_size;
  rec.seed_complexity = c.seeds[t.seed].target_complexity;
  rec.min_length = t.min_length;
  rec.cell = t.cell;
  rec.layers = t.layers;
  rec.units = t.units;
  rec.lr = t.lr;
  rec.stop_rule = t.stop_rule;
  rec.repeat = t.repeat;
  return rec;
}

void mark_failed(TrialRecord& rec, std::string reason) {
  rec.failed = true;
  rec.stop_reason = std::move(reason);
  rec.loss = rec.accuracy = rec.dl = rec.jw = std::nan("");
}

TrialRecord run_trial(const ExperimentConfig& c, const Trial& t, const GeneratedSeeds& seeds) {
  TrialRecord rec = skeleton(c, t);
  const auto& seed = seeds.seeds[t.seed];
  if (!seed) {
    mark_failed(rec, kErrorStopReason);
    return rec;
  }
  try {
    const auto data_seed = derive_seed(c.rng_base_seed, {t.seed, t.min_length, t.repeat, kDataStream});
    const auto data = build_dataset(*seed, DatasetSpec{t.min_length, c.window, c.test_fraction}, data_seed);

    rnn::TrainConfig tc;
    tc.cell = t.cell;
    tc.layers = t.layers;
    tc.units = t.units;
    tc.learning_rate = t.lr;
    tc.max_epochs = c.max_epochs;
    tc.stop_rule = t.stop_rule;
    tc.batch_size = c.batch_size;
    tc.precision = c.precision;
    tc.init_seed = derive_seed(c.rng_base_seed,
                               {t.seed, t.min_length, static_cast<std::uint64_t>(t.cell), t.layers, t.units,
                                std::bit_cast<std::uint64_t>(t.lr), static_cast<std::uint64_t>(t.stop_rule),
                                t.repeat, kInitStream});
    const auto result = rnn::train(data, tc);
    rec.epochs = result.report.epochs_run;
    rec.stop_reason = std::string(rnn::to_string(result.report.stop_reason));
    rec.wall_seconds = result.report.wall_seconds;
    rec.loss = result.report.final_loss;
    rec.accuracy = result.report.final_accuracy;

    const auto f = forecast_and_score(result.model, data.forecast_seed_window(), data.validation(), data.alphabet());
    rec.dl = f.scores.dl;
    rec.jw = f.scores.jw;
  } catch (const rnn::TrainingDiverged& e) {
    rec.epochs = e.report().epochs_run;
    rec.wall_seconds = e.report().wall_seconds;
    mark_failed(rec, std::string(rnn::to_string(rnn::StopReason::NumericOverflow)));
  } catch (const Error&) {
    mark_failed(rec, kErrorStopReason);
  }
  return rec;
}

}  // namespace

void ExperimentConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("experiment config: ") + what);
  };
  require(!name.empty(), "name must be set");
  require(!seeds.empty(), "seeds must not be empty");
  require(!min_lengths.empty(), "min_lengths must not be empty");
  require(!cell_kinds.empty(), "cell_kinds must not be empty");
  require(!layer_counts.empty(), "layer_counts must not be empty");
  require(unit_list.empty() != total_unit_targets.empty(),
          "exactly one of unit_list and total_unit_targets must be given");
  require(!stop_rules.empty(), "stop_rules must not be empty");
  require(repeats >= 1, "repeats must be at least 1");
  require(test_fraction > 0.0 && test_fraction < 1.0, "test_fraction must lie in (0, 1)");
  require(max_epochs >= 1 && batch_size >= 1, "max_epochs and batch_size must be positive");
  for (const auto& s : seeds) s.validate();
  for (auto len : min_lengths)
    DatasetSpec{len, window, test_fraction}.validate();
  for (auto l : layer_counts) require(l >= 1, "layer counts must be positive");
  for (auto u : unit_list) require(u >= 1, "unit counts must be positive");
  for (auto u : total_unit_targets) require(u >= 1, "unit totals must be positive");
  for (auto cell : cell_kinds) {
    const auto& rates = rates_for(cell);
    require(!rates.empty(), "every cell kind needs at least one learning rate");
    for (double lr : rates) require(lr > 0.0 && std::isfinite(lr), "learning rates must be positive");
  }
}

const std::vector<double>& ExperimentConfig::rates_for(rnn::CellKind kind) const {
  if (auto it = cell_learning_rates.find(kind); it != cell_learning_rates.end()) return it->second;
  return learning_rates;
}

std::size_t ExperimentConfig::trial_count() const {
  std::size_t per_cell_layer = (unit_list.empty() ? total_unit_targets.size() : unit_list.size()) *
                               stop_rules.size() * repeats;
  std::size_t n = 0;
  for (auto cell : cell_kinds) n += layer_counts.size() * rates_for(cell).size() * per_cell_layer;
  return n * seeds.size() * min_lengths.size();
}

GeneratedSeeds generate_seeds(const ExperimentConfig& config) {
  GeneratedSeeds out;
  out.seeds.resize(config.seeds.size());
  out.errors.resize(config.seeds.size());
  for (std::size_t i = 0; i < config.seeds.size(); ++i) {
    try {
      out.seeds[i] = generate_seed(config.seeds[i]);
    } catch (const Error& e) {
      out.errors[i] = e.what();
    }
  }
  return out;
}

std::vector<TrialRecord> run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  const auto trials = enumerate(config);
  const auto seeds = generate_seeds(config);

  std::vector<TrialRecord> records(trials.size());
  std::atomic<std::size_t> next{0};
  std::mutex sink;
  std::size_t done = 0;

  auto worker = [&] {
    for (std::size_t i = next++; i < trials.size(); i = next++) {
      TrialRecord rec = run_trial(config, trials[i], seeds);
      std::lock_guard lock(sink);
      records[i] = std::move(rec);
      ++done;
      if (options.on_record) options.on_record(records[i], done, trials.size());
    }
  };

  std::size_t workers = options.workers ? options.workers : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(1, trials.size()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  return records;
}

std::vector<SaturationPoint> saturation_means(const std::vector<TrialRecord>& records) {
  std::map<std::pair<rnn::CellKind, std::size_t>, SaturationPoint> acc;
  for (const auto& r : records) {
    if (r.failed) continue;
    auto& p = acc[{r.cell, r.seed_complexity}];
    p.cell = r.cell;
    p.complexity = r.seed_complexity;
    ++p.count;
    p.mean_dl += r.dl;
    p.mean_jw += r.jw;
  }
  std::vector<SaturationPoint> out;
  for (auto& [key, p] : acc) {
    p.mean_dl /= static_cast<double>(p.count);
    p.mean_jw /= static_cast<double>(p.count);
    out.push_back(p);
  }
  return out;
}

std::vector<TrialRecord> saturation_study(const ExperimentConfig& config, const RunOptions& options) {
  if (config.seeds.empty()) throw ConfigError("saturation study needs at least one seed");
  const auto k = config.seeds.front().alphabet_size;
  for (const auto& s : config.seeds)
    if (s.alphabet_size != k) throw ConfigError("saturation study seeds must share one alphabet size");
  return run_experiment(config, options);
}

}  // namespace seqlab::harness
