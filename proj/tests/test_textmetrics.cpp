#include <gtest/gtest.h>

#include <random>

#include "reference.hpp"
#include "reference_data.hpp"
#include "seqlab/textmetrics.hpp"

namespace seqlab {
namespace {

TEST(DlSimilarity, Examples) {
  EXPECT_DOUBLE_EQ(dl_similarity("abc", "abc"), 1.0);
  EXPECT_NEAR(dl_similarity("abc", "abd"), 2.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(dl_similarity("ab", "ba"), 0.5);
  EXPECT_DOUBLE_EQ(dl_similarity("abc", "xyz"), 0.0);
  EXPECT_DOUBLE_EQ(dl_similarity("", ""), 1.0);
  EXPECT_DOUBLE_EQ(dl_similarity("abc", ""), 0.0);
  EXPECT_EQ(osa_distance("ca", "abc"), 3u);  // restricted variant; unrestricted gives 2
  std::string v(100, 'a'), w = v;
  w[37] = 'b';
  EXPECT_NEAR(dl_similarity(v, w), 0.99, 1e-15);
}

TEST(JwSimilarity, Examples) {
  EXPECT_NEAR(jw_similarity("MARTHA", "MARHTA"), 0.9611111111111111, 1e-15);
  EXPECT_DOUBLE_EQ(jw_similarity("abc", "abc"), 1.0);
  EXPECT_DOUBLE_EQ(jw_similarity("abc", "xyz"), 0.0);
  EXPECT_DOUBLE_EQ(jw_similarity("", ""), 1.0);
  EXPECT_DOUBLE_EQ(jw_similarity("a", ""), 0.0);
  EXPECT_NEAR(jaro_similarity("MARTHA", "MARHTA"), 17.0 / 18.0, 1e-15);
}

TEST(JwSimilarity, BoostOptions) {
  // Jaro("abcx", "abyz") = 2/3: below the default threshold, so no boost.
  EXPECT_NEAR(jw_similarity("abcx", "abyz"), 2.0 / 3.0, 1e-15);
  JaroWinklerOptions always;
  always.boost_threshold = -1.0;
  always.min_boost_length = 0;
  EXPECT_NEAR(jw_similarity("abcx", "abyz", always), 2.0 / 3.0 + 2 * 0.1 * (1.0 / 3.0), 1e-15);
}

TEST(TextMetrics, AgreeWithTextdistanceReference) {
  const auto pairs = testing::load_textdistance_reference();
  ASSERT_EQ(pairs.size(), 1000u);
  for (const auto& p : pairs) {
    ASSERT_NEAR(dl_similarity(p.a, p.b), p.dl, 1e-9) << p.a << " | " << p.b;
    ASSERT_NEAR(jw_similarity(p.a, p.b), p.jw, 1e-9) << p.a << " | " << p.b;
  }
}

TEST(TextMetrics, SymmetricAndBounded) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 2000; ++trial) {
    auto draw = [&] {
      std::string s(rng() % 15, 'a');
      for (auto& c : s) c = static_cast<char>('a' + rng() % 4);
      return s;
    };
    const auto a = draw(), b = draw();
    const auto ab = similarity(a, b), ba = similarity(b, a);
    ASSERT_DOUBLE_EQ(ab.dl, ba.dl);
    ASSERT_DOUBLE_EQ(ab.jw, ba.jw);
    ASSERT_GE(ab.dl, 0.0);
    ASSERT_LE(ab.dl, 1.0);
    ASSERT_GE(ab.jw, 0.0);
    ASSERT_LE(ab.jw, 1.0);
    if (a == b) {
      ASSERT_EQ(ab.dl, 1.0);
    }
  }
}

TEST(OsaDistance, MetricPropertiesByBruteForce) {
  std::vector<std::string> all;
  for (std::size_t len = 0; len <= 4; ++len)
    for (auto& s : testing::all_strings("ab", len)) all.push_back(s);
  // OSA is not a metric in general, but on these short binary strings the
  // triangle inequality holds; checking it pins the recurrence.
  for (const auto& a : all)
    for (const auto& b : all) {
      const auto d = osa_distance(a, b);
      ASSERT_EQ(d, osa_distance(b, a));
      ASSERT_EQ(d == 0, a == b);
      ASSERT_LE(d, std::max(a.size(), b.size()));
      for (const auto& c : all) ASSERT_LE(d, osa_distance(a, c) + osa_distance(c, b)) << a << ' ' << b << ' ' << c;
    }
}

}  // namespace
}  // namespace seqlab
