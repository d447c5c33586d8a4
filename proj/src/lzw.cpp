#include "seqlab/lzw.hpp"

#include <string>
#include <unordered_map>

#include "seqlab/error.hpp"

namespace seqlab {

Alphabet::Alphabet(std::string symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw ConfigError("alphabet must contain at least one symbol");
  index_.fill(-1);
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    auto& slot = index_[static_cast<unsigned char>(symbols_[i])];
    if (slot >= 0) throw ConfigError(std::string("duplicate alphabet symbol '") + symbols_[i] + "'");
    slot = static_cast<std::int16_t>(i);
  }
}

Alphabet Alphabet::first(std::size_t k) {
  if (k == 0 || k > kDefaultSymbols.size()) {
    throw ConfigError("default alphabet size must be in [1, " +
                      std::to_string(kDefaultSymbols.size()) + "], got " + std::to_string(k));
  }
  return Alphabet(std::string(kDefaultSymbols.substr(0, k)));
}

std::size_t Alphabet::index_of(char c) const {
  if (auto i = find(c)) return *i;
  throw AlphabetMismatch(std::string("symbol '") + c + "' is not in alphabet \"" + symbols_ + "\"");
}

std::vector<std::uint8_t> Alphabet::encode(std::string_view s) const {
  std::vector<std::uint8_t> out;
  out.reserve(s.size());
  for (char c : s) out.push_back(static_cast<std::uint8_t>(index_of(c)));
  return out;
}

LzwEncoding lzw_encode(std::string_view s, const Alphabet& alphabet) {
  if (s.empty()) throw EmptyInput("cannot LZW-encode an empty string");
  const std::size_t p = alphabet.size();

  // Trie over dictionary entries; node ids coincide with dictionary codes
  // minus one, so code = node + 1.
  std::unordered_map<std::uint64_t, std::uint32_t> edges;
  auto key = [p](std::uint32_t node, std::size_t sym) {
    return static_cast<std::uint64_t>(node) * p + sym;
  };
  auto next_code = static_cast<std::uint32_t>(p);  // nodes 0..p-1 are the symbols

  LzwEncoding out;
  out.codes.reserve(s.size() / 2 + 1);
  std::uint32_t current = static_cast<std::uint32_t>(alphabet.index_of(s[0]));
  for (std::size_t i = 1; i < s.size(); ++i) {
    const std::size_t sym = alphabet.index_of(s[i]);
    if (auto it = edges.find(key(current, sym)); it != edges.end()) {
      current = it->second;
      continue;
    }
    out.codes.push_back(current + 1);
    edges.emplace(key(current, sym), next_code++);
    current = static_cast<std::uint32_t>(sym);
  }
  out.codes.push_back(current + 1);
  out.dict_size_final = next_code;
  return out;
}

std::string lzw_decode(const LzwEncoding& encoding, const Alphabet& alphabet) {
  const auto& codes = encoding.codes;
  if (codes.empty()) return {};
  const std::size_t p = alphabet.size();

  // entries[i] is dictionary code i + 1.
  std::vector<std::string> entries;
  entries.reserve(p + codes.size());
  for (char c : alphabet.symbols()) entries.emplace_back(1, c);

  auto corrupt = [](std::size_t pos, std::uint32_t code, std::size_t limit) {
    return CorruptStream("LZW code " + std::to_string(code) + " at position " +
                         std::to_string(pos) + " is outside [1, " + std::to_string(limit) + "]");
  };

  if (codes[0] < 1 || codes[0] > p) throw corrupt(0, codes[0], p);
  std::string out = entries[codes[0] - 1];
  std::string previous = out;
  for (std::size_t j = 1; j < codes.size(); ++j) {
    const std::uint32_t code = codes[j];
    const std::size_t known = entries.size();
    std::string phrase;
    if (code >= 1 && code <= known) {
      phrase = entries[code - 1];
    } else if (code == known + 1) {
      // Entry being defined by this very step: previous + previous[0].
      phrase = previous + previous[0];
    } else {
      throw corrupt(j, code, known + 1);
    }
    entries.push_back(previous + phrase[0]);
    out += phrase;
    previous = std::move(phrase);
  }
  return out;
}

std::size_t lzw_complexity(std::string_view s, const Alphabet& alphabet) {
  if (s.empty()) throw EmptyInput("cannot measure LZW complexity of an empty string");
  LzwCounter counter(alphabet.size());
  for (char c : s) counter.push(alphabet.index_of(c));
  return counter.complexity();
}

LzwCounter::LzwCounter(std::size_t alphabet_size) : p_(alphabet_size) {
  if (p_ == 0) throw ConfigError("LzwCounter needs a non-empty alphabet");
  for (std::size_t i = 0; i < p_; ++i) add_node();
}

std::int32_t LzwCounter::add_node() {
  const auto id = static_cast<std::int32_t>(children_.size() / p_);
  children_.resize(children_.size() + p_, -1);
  return id;
}

bool LzwCounter::extends(std::size_t symbol) const {
  return current_ >= 0 && child(current_, symbol) >= 0;
}

void LzwCounter::push(std::size_t symbol) {
  if (symbol >= p_) throw AlphabetMismatch("symbol index " + std::to_string(symbol) + " out of range");
  ++length_;
  if (current_ < 0) {
    current_ = static_cast<std::int32_t>(symbol);
    return;
  }
  if (const auto next = child(current_, symbol); next >= 0) {
    current_ = next;
    return;
  }
  const auto fresh = add_node();
  children_[static_cast<std::size_t>(current_) * p_ + symbol] = fresh;
  ++emitted_;
  current_ = static_cast<std::int32_t>(symbol);
}

}  // namespace seqlab
