#include "seqlab/seedgen.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <random>

#include "seqlab/rng.hpp"

namespace seqlab {
namespace {

constexpr std::size_t kMaxRestarts = 100;
constexpr std::size_t kExhaustiveMaxSymbols = 6;
constexpr std::size_t kExhaustiveMaxTarget = 12;
constexpr std::size_t kExhaustiveExtraLength = 4;
constexpr std::size_t kExhaustiveNodeBudget = 2'000'000;

// Probability of forcing a match-ending symbol on restart r.
double break_bias(std::size_t restart) {
  return std::min(1.0, static_cast<double>(restart) / 4.0);
}

struct Attempt {
  std::vector<std::uint8_t> symbols;
  std::size_t complexity = 0;
};

Attempt random_extension(const SeedSpec& spec, std::uint64_t stream_seed, double bias) {
  const std::size_t k = spec.alphabet_size;
  std::mt19937_64 rng(stream_seed);
  Attempt out;
  out.symbols.resize(k);
  std::iota(out.symbols.begin(), out.symbols.end(), std::uint8_t{0});
  std::shuffle(out.symbols.begin(), out.symbols.end(), rng);

  LzwCounter counter(k);
  for (auto s : out.symbols) counter.push(s);

  std::uniform_int_distribution<std::size_t> any(0, k - 1);
  std::bernoulli_distribution forced(bias);
  std::vector<std::uint8_t> breakers;
  breakers.reserve(k);
  while (counter.complexity() < spec.target_complexity && counter.length() < spec.max_length) {
    std::size_t next = any(rng);
    if (bias > 0.0 && forced(rng)) {
      breakers.clear();
      for (std::size_t s = 0; s < k; ++s)
        if (!counter.extends(s)) breakers.push_back(static_cast<std::uint8_t>(s));
      if (!breakers.empty()) {
        next = breakers[std::uniform_int_distribution<std::size_t>(0, breakers.size() - 1)(rng)];
      }
    }
    counter.push(next);
    out.symbols.push_back(static_cast<std::uint8_t>(next));
  }
  out.complexity = counter.complexity();
  return out;
}

// Depth-first search for a string of exactly `length` symbols with the
// target complexity and full symbol coverage. Child order is shuffled per
// node so the result still depends on the seed.
class ExhaustiveSearch {
 public:
  ExhaustiveSearch(const SeedSpec& spec, std::uint64_t seed) : spec_(spec), rng_(seed) {}

  std::optional<std::vector<std::uint8_t>> run() {
    const std::size_t cap = std::min(spec_.max_length,
                                     spec_.target_complexity + kExhaustiveExtraLength);
    for (std::size_t length = spec_.target_complexity; length <= cap; ++length) {
      std::vector<std::uint8_t> prefix;
      std::vector<std::size_t> seen(spec_.alphabet_size, 0);
      if (descend(prefix, seen, 0, LzwCounter(spec_.alphabet_size), length)) return prefix;
      if (nodes_ > kExhaustiveNodeBudget) break;
    }
    return std::nullopt;
  }

 private:
  bool descend(std::vector<std::uint8_t>& prefix, std::vector<std::size_t>& seen,
               std::size_t distinct, const LzwCounter& counter, std::size_t length) {
    if (++nodes_ > kExhaustiveNodeBudget) return false;
    if (prefix.size() == length) {
      return distinct == spec_.alphabet_size && counter.complexity() == spec_.target_complexity;
    }
    if (length - prefix.size() < spec_.alphabet_size - distinct) return false;

    std::vector<std::uint8_t> order(spec_.alphabet_size);
    std::iota(order.begin(), order.end(), std::uint8_t{0});
    std::shuffle(order.begin(), order.end(), rng_);
    for (auto s : order) {
      LzwCounter next = counter;
      next.push(s);
      if (next.complexity() > spec_.target_complexity) continue;
      prefix.push_back(s);
      const bool fresh = seen[s]++ == 0;
      if (descend(prefix, seen, distinct + (fresh ? 1 : 0), next, length)) return true;
      --seen[s];
      prefix.pop_back();
    }
    return false;
  }

  const SeedSpec& spec_;
  std::mt19937_64 rng_;
  std::size_t nodes_ = 0;
};

SeedString finish(std::vector<std::uint8_t> symbols, std::size_t k) {
  Alphabet alphabet = Alphabet::first(k);
  std::string text;
  text.reserve(symbols.size());
  for (auto s : symbols) text.push_back(alphabet.symbol(s));
  const std::size_t complexity = lzw_complexity(text, alphabet);
  return SeedString{std::move(text), std::move(alphabet), complexity};
}

}  // namespace

void SeedSpec::validate() const {
  if (alphabet_size == 0 || alphabet_size > kDefaultSymbols.size()) {
    throw ConfigError("alphabet size must be in [1, " + std::to_string(kDefaultSymbols.size()) +
                      "], got " + std::to_string(alphabet_size));
  }
  if (target_complexity < alphabet_size) {
    throw ConfigError("target complexity " + std::to_string(target_complexity) +
                      " is below the alphabet size " + std::to_string(alphabet_size));
  }
  if (max_length < target_complexity) {
    throw ConfigError("max_length " + std::to_string(max_length) +
                      " is below the target complexity " + std::to_string(target_complexity));
  }
}

std::size_t max_complexity_bound(std::size_t k, std::size_t length) {
  if (length == 0) return 0;
  // The final flush may be any phrase, so reserve one symbol for it.
  std::size_t remaining = length - 1;
  std::size_t codes = 1;
  std::size_t cap = k;  // k^(j+1) for phrase length j, saturating
  for (std::size_t j = 1; remaining >= j; ++j) {
    cap = (cap > remaining / k + 1) ? remaining + 1 : cap * k;
    const std::size_t take = std::min(cap, remaining / j);
    codes += take;
    remaining -= take * j;
    if (take < cap) break;
  }
  return codes;
}

SeedString generate_seed(const SeedSpec& spec) {
  spec.validate();
  const std::size_t k = spec.alphabet_size;
  std::size_t closest = 0;
  for (std::size_t restart = 0; restart <= kMaxRestarts; ++restart) {
    Attempt a = random_extension(spec, derive_seed(spec.rng_seed, {restart}), break_bias(restart));
    if (a.complexity == spec.target_complexity) return finish(std::move(a.symbols), k);
    closest = std::max(closest, a.complexity);
    if (restart == 0 && k <= kExhaustiveMaxSymbols && spec.target_complexity <= kExhaustiveMaxTarget) {
      ExhaustiveSearch search(spec, derive_seed(spec.rng_seed, {~std::uint64_t{0}}));
      if (auto found = search.run()) return finish(std::move(*found), k);
    }
  }
  throw GenerationFailure("could not reach LZW complexity " + std::to_string(spec.target_complexity) +
                              " with " + std::to_string(k) + " symbols within " +
                              std::to_string(spec.max_length) + " characters (closest " +
                              std::to_string(closest) + ")",
                          closest);
}

BatchGenerationError::BatchGenerationError(std::vector<std::pair<std::size_t, std::string>> failures)
    : Error([&] {
        std::string msg = std::to_string(failures.size()) + " seed spec(s) failed:";
        for (const auto& [i, why] : failures) msg += "\n  [" + std::to_string(i) + "] " + why;
        return msg;
      }()),
      failures_(std::move(failures)) {}

std::vector<SeedString> batch_generate(std::span<const SeedSpec> specs) {
  std::vector<SeedString> out;
  out.reserve(specs.size());
  std::vector<std::pair<std::size_t, std::string>> failures;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    try {
      out.push_back(generate_seed(specs[i]));
    } catch (const Error& e) {
      failures.emplace_back(i, e.what());
    }
  }
  if (!failures.empty()) throw BatchGenerationError(std::move(failures));
  return out;
}

}  // namespace seqlab
