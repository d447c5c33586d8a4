#include "seqlab/textmetrics.hpp"

#include <algorithm>
#include <vector>

namespace seqlab {

std::size_t osa_distance(std::string_view a, std::string_view b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  if (n == 0) return m;
  if (m == 0) return n;
  // Three rolling rows: i-2, i-1, i.
  std::vector<std::size_t> two(m + 1), one(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) one[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      std::size_t d = std::min({one[j] + 1, cur[j - 1] + 1, one[j - 1] + cost});
      if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1]) d = std::min(d, two[j - 2] + cost);
      cur[j] = d;
    }
    std::swap(two, one);
    std::swap(one, cur);
  }
  return one[m];
}

double dl_similarity(std::string_view a, std::string_view b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(osa_distance(a, b)) / static_cast<double>(longest);
}

double jaro_similarity(std::string_view a, std::string_view b) {
  if (a == b) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  const std::size_t longest = std::max(a.size(), b.size());
  const std::size_t range = longest / 2 > 0 ? longest / 2 - 1 : 0;

  std::vector<char> a_matched(a.size(), 0), b_matched(b.size(), 0);
  std::size_t matches = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::size_t lo = i > range ? i - range : 0;
    const std::size_t hi = std::min(i + range, b.size() - 1);
    for (std::size_t j = lo; j <= hi && j < b.size(); ++j) {
      if (!b_matched[j] && b[j] == a[i]) {
        a_matched[i] = b_matched[j] = 1;
        ++matches;
        break;
      }
    }
  }
  if (matches == 0) return 0.0;

  std::size_t half_transpositions = 0;
  for (std::size_t i = 0, k = 0; i < a.size(); ++i) {
    if (!a_matched[i]) continue;
    while (!b_matched[k]) ++k;
    if (a[i] != b[k]) ++half_transpositions;
    ++k;
  }
  const auto mt = static_cast<double>(matches);
  const auto t = static_cast<double>(half_transpositions / 2);
  return (mt / static_cast<double>(a.size()) + mt / static_cast<double>(b.size()) + (mt - t) / mt) / 3.0;
}

double jw_similarity(std::string_view a, std::string_view b, const JaroWinklerOptions& options) {
  const double jaro = jaro_similarity(a, b);
  if (a == b || jaro <= options.boost_threshold) return jaro;
  if (a.size() < options.min_boost_length || b.size() < options.min_boost_length) return jaro;
  const std::size_t cap = std::min({options.max_prefix, a.size(), b.size()});
  std::size_t prefix = 0;
  while (prefix < cap && a[prefix] == b[prefix]) ++prefix;
  return jaro + static_cast<double>(prefix) * options.prefix_scale * (1.0 - jaro);
}

}  // namespace seqlab
