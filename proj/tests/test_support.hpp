#pragma once

#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gec/m2corpus.hpp"
#include "gec/text.hpp"
#include "oracles.hpp"

namespace testing {

inline std::string fixture(const std::string& name) {
  std::ifstream in(std::string(GEC_FIXTURE_DIR) + "/" + name, std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline gec::Tokens toks(const std::string& text) { return gec::split_tokens(text); }

inline const gec::Tokens& small_alphabet() {
  static const gec::Tokens alphabet{"a", "b", "c"};
  return alphabet;
}

/// Random non-overlapping gold edits; corrections hold 0 to 2 tokens.
inline std::vector<gec::m2::Edit> random_gold(std::mt19937& rng, const gec::Tokens& source) {
  using gec::m2::ActionKind;
  std::vector<gec::m2::Edit> gold;
  auto phrase = [&](std::size_t lo) { return gec::join_tokens(oracle::random_tokens(rng, 2, small_alphabet(), lo)); };
  std::size_t k = 0;
  while (k <= source.size()) {
    const unsigned roll = rng() % 6;
    if (roll == 0) gold.push_back({k, k, ActionKind::AddBefore, phrase(1), 0});
    if (k == source.size()) break;
    if (roll == 1) {
      gold.push_back({k, k + 1, ActionKind::Other, phrase(0), 0});
      ++k;
    } else if (roll == 2 && k + 2 <= source.size()) {
      gold.push_back({k, k + 2, ActionKind::Other, phrase(0), 0});
      k += 2;
    } else {
      ++k;
    }
  }
  return gold;
}

/// Gold edits as the brute-force search sees them: no-ops dropped, duplicates merged.
inline std::set<oracle::PhraseEdit> oracle_gold(const gec::Tokens& source, const std::vector<gec::m2::Edit>& gold) {
  std::set<oracle::PhraseEdit> out;
  for (const auto& e : gold) {
    std::string original = oracle::join(source, e.start, e.end);
    std::string replacement = gec::join_tokens(gec::split_tokens(e.correction));
    if (original != replacement) out.insert({e.start, e.end, replacement});
  }
  return out;
}

}  // namespace testing
