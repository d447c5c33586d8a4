#include <gtest/gtest.h>

#include <set>

#include "seqlab/error.hpp"
#include "seqlab/lzw.hpp"
#include "seqlab/seedgen.hpp"

namespace seqlab {
namespace {

void expect_valid(const SeedString& s, const SeedSpec& spec) {
  EXPECT_EQ(lzw_complexity(s.text, s.alphabet), spec.target_complexity);
  EXPECT_EQ(s.complexity, spec.target_complexity);
  EXPECT_LE(s.text.size(), spec.max_length);
  EXPECT_EQ(s.alphabet, Alphabet::first(spec.alphabet_size));
  const std::set<char> used(s.text.begin(), s.text.end());
  EXPECT_EQ(used.size(), spec.alphabet_size) << s.text;
}

TEST(Seedgen, HitsTargetExactly) {
  for (auto [k, c] : {std::pair<std::size_t, std::size_t>{2, 5}, {5, 20}, {10, 50}, {33, 1000}, {52, 1850}}) {
    const SeedSpec spec{k, c, 2400, 1234};
    expect_valid(generate_seed(spec), spec);
  }
}

TEST(Seedgen, Deterministic) {
  const SeedSpec spec{5, 35, 2400, 99};
  EXPECT_EQ(generate_seed(spec).text, generate_seed(spec).text);
  SeedSpec other = spec;
  other.rng_seed = 100;
  EXPECT_NE(generate_seed(spec).text, generate_seed(other).text);
}

TEST(Seedgen, MinimalTargetIsAPermutation) {
  const SeedSpec spec{6, 6, 2400, 3};
  const auto s = generate_seed(spec);
  EXPECT_EQ(s.text.size(), 6u);
  expect_valid(s, spec);
}

TEST(Seedgen, WholeLowComplexityGrid) {
  for (std::size_t k = 2; k <= 6; ++k)
    for (std::size_t c = k; c <= 12; ++c) {
      const SeedSpec spec{k, c, 2400, k * 100 + c};
      expect_valid(generate_seed(spec), spec);
    }
}

TEST(Seedgen, RejectsInfeasibleSpecs) {
  EXPECT_THROW(generate_seed({5, 4, 2400, 0}), ConfigError);   // c < k
  EXPECT_THROW(generate_seed({2, 50, 40, 0}), ConfigError);    // c > max_length
  EXPECT_THROW(generate_seed({63, 100, 2400, 0}), ConfigError);  // alphabet too large
}

TEST(Seedgen, UnreachableTargetReportsClosest) {
  // Two symbols cannot reach complexity 10 within 12 characters.
  ASSERT_LT(max_complexity_bound(2, 12), 10u);
  try {
    generate_seed({2, 10, 12, 0});
    FAIL() << "expected GenerationFailure";
  } catch (const GenerationFailure& e) {
    EXPECT_GT(e.closest_complexity(), 0u);
    EXPECT_LT(e.closest_complexity(), 10u);
  }
}

TEST(Seedgen, BoundIsTightForSmallCases) {
  // Brute force: the largest complexity over all strings of a given length.
  for (std::size_t k = 1; k <= 3; ++k)
    for (std::size_t len = 1; len <= 9; ++len) {
      const auto alphabet = Alphabet::first(k);
      std::size_t best = 0;
      std::string s(len, 'a');
      std::size_t total = 1;
      for (std::size_t i = 0; i < len; ++i) total *= k;
      for (std::size_t code = 0; code < total; ++code) {
        std::size_t x = code;
        for (std::size_t i = 0; i < len; ++i, x /= k) s[i] = alphabet.symbol(x % k);
        best = std::max(best, lzw_complexity(s, alphabet));
      }
      EXPECT_GE(max_complexity_bound(k, len), best) << "k=" << k << " len=" << len;
    }
}

TEST(Seedgen, BatchCoversLowGridAndReportsFailures) {
  std::vector<SeedSpec> specs;
  for (std::size_t k : {2, 5, 10, 20})
    for (std::size_t c : {20, 35, 50}) specs.push_back({k, c, 2400, k * c});
  const auto seeds = batch_generate(specs);
  ASSERT_EQ(seeds.size(), 12u);
  for (std::size_t i = 0; i < specs.size(); ++i) expect_valid(seeds[i], specs[i]);

  specs.push_back({2, 10, 12, 0});
  try {
    batch_generate(specs);
    FAIL() << "expected BatchGenerationError";
  } catch (const BatchGenerationError& e) {
    ASSERT_EQ(e.failures().size(), 1u);
    EXPECT_EQ(e.failures()[0].first, 12u);
  }
}

}  // namespace
}  // namespace seqlab
