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

#ifndef BPE_PAIR_STATS_H_
#define BPE_PAIR_STATS_H_

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "bpe/core.h"

namespace bpe {

struct PairStat {
  size_t count = 0;
  // Stream index of the first counted occurrence.
  size_t first_pos = 0;

  friend bool operator==(const PairStat&, const PairStat&) = default;
};

using PairFreqTable = absl::flat_hash_map<MergePair, PairStat>;

enum class CountMode {
  // Occurrences that overlap the previous counted occurrence of the same
  // pair are skipped, so counts equal ApplyMerge replacements.
  kNonOverlapping,
  // Raw bigram counts. Comparison only; trainers never use this.
  kOverlapping,
};

PairFreqTable PairFrequencies(std::span<const MergeId> tokens,
                              CountMode mode = CountMode::kNonOverlapping);

// Compares the concatenated yields yield(a.left)+yield(a.right) and
// yield(b.left)+yield(b.right) without building them.
std::strong_ordering CompareConcatYields(const MergeTable& table,
                                         const MergePair& a,
                                         const MergePair& b);

// Selection order used by every greedy trainer: higher count first, then the
// earlier first occurrence, then the lexicographically smaller concatenated
// yield. Trained vocabularies depend on this order.
bool PairPrecedes(const MergeTable& table, const MergePair& a,
                  const PairStat& a_stat, const MergePair& b,
                  const PairStat& b_stat);

// Throws Error(kNoPair) when the table is empty.
MergePair TopPair(const MergeTable& table, const PairFreqTable& freqs);

// Every entry, sorted by the selection order.
std::vector<std::pair<MergePair, PairStat>> SortedPairs(
    const MergeTable& table, const PairFreqTable& freqs);

}  // namespace bpe

#endif  // BPE_PAIR_STATS_H_
