// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bpe/pair_stats.h"

#include <algorithm>
#include <optional>

#include "bpe/error.h"

namespace bpe {

PairFreqTable PairFrequencies(std::span<const MergeId> tokens,
                              CountMode mode) {
  PairFreqTable table;
  if (tokens.size() < 2) return table;
  std::optional<MergePair> previous;
  for (size_t i = 0; i + 1 < tokens.size(); ++i) {
    const MergePair pair{tokens[i], tokens[i + 1]};
    if (mode == CountMode::kNonOverlapping && previous == pair) {
      // Overlaps the occurrence just counted; "aaaa" still counts twice
      // because the next one is eligible again.
      previous.reset();
      continue;
    }
    auto [it, inserted] = table.try_emplace(pair, PairStat{0, i});
    ++it->second.count;
    previous = pair;
  }
  return table;
}

std::strong_ordering CompareConcatYields(const MergeTable& table,
                                         const MergePair& a,
                                         const MergePair& b) {
  const SymbolString& a1 = table.Yield(a.left);
  const SymbolString& a2 = table.Yield(a.right);
  const SymbolString& b1 = table.Yield(b.left);
  const SymbolString& b2 = table.Yield(b.right);
  const size_t a_len = a1.size() + a2.size();
  const size_t b_len = b1.size() + b2.size();
  auto at = [](const SymbolString& s1, const SymbolString& s2, size_t i) {
    return i < s1.size() ? s1[i] : s2[i - s1.size()];
  };
  for (size_t i = 0; i < std::min(a_len, b_len); ++i) {
    const Symbol x = at(a1, a2, i);
    const Symbol y = at(b1, b2, i);
    if (x != y) return x <=> y;
  }
  return a_len <=> b_len;
}

bool PairPrecedes(const MergeTable& table, const MergePair& a,
                  const PairStat& a_stat, const MergePair& b,
                  const PairStat& b_stat) {
  if (a_stat.count != b_stat.count) return a_stat.count > b_stat.count;
  if (a_stat.first_pos != b_stat.first_pos) {
    return a_stat.first_pos < b_stat.first_pos;
  }
  const auto by_yield = CompareConcatYields(table, a, b);
  if (by_yield != 0) return by_yield < 0;
  return a < b;
}

MergePair TopPair(const MergeTable& table, const PairFreqTable& freqs) {
  if (freqs.empty()) {
    throw Error(ErrorCode::kNoPair, "pair frequency table is empty");
  }
  auto best = freqs.begin();
  for (auto it = freqs.begin(); it != freqs.end(); ++it) {
    if (PairPrecedes(table, it->first, it->second, best->first,
                     best->second)) {
      best = it;
    }
  }
  return best->first;
}

std::vector<std::pair<MergePair, PairStat>> SortedPairs(
    const MergeTable& table, const PairFreqTable& freqs) {
  std::vector<std::pair<MergePair, PairStat>> out(freqs.begin(), freqs.end());
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
    return PairPrecedes(table, a.first, a.second, b.first, b.second);
  });
  return out;
}

}  // namespace bpe
