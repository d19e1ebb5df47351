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

#include "bpe/greedy.h"

#include <utility>

#include "bpe/pair_stats.h"

namespace bpe {
namespace {

std::optional<MergeId> BarredId(const MergeTable& table,
                                const TrainOptions& options) {
  if (!options.barred) return std::nullopt;
  return table.FindTrivial(*options.barred);
}

}  // namespace

TrainResult TrainGreedySlow(MergeTable& table, SymbolView x, size_t merges,
                            const TrainOptions& options) {
  return TrainGreedySlow(table, LiftString(table, x), merges, options);
}

TrainResult TrainGreedySlow(MergeTable& table, TokenStream stream,
                            size_t merges, const TrainOptions& options) {
  const std::optional<MergeId> barred = BarredId(table, options);
  TrainResult result;
  result.requested = merges;
  result.stream = std::move(stream);
  for (size_t step = 0; step < merges; ++step) {
    PairFreqTable freqs = PairFrequencies(result.stream.tokens);
    if (barred) {
      absl::erase_if(freqs, [&](const auto& kv) {
        return kv.first.left == *barred || kv.first.right == *barred;
      });
    }
    if (freqs.empty()) break;
    const MergeId merge = table.Intern(TopPair(table, freqs));
    const size_t replaced = ApplyMergeInPlace(table, result.stream, merge);
    result.sequence.push_back(merge);
    result.steps.push_back(
        TrainStep{merge, replaced, result.stream.Utility()});
  }
  return result;
}

TrainResult TrainGreedyFast(MergeTable& table, SymbolView x, size_t merges,
                            const TrainOptions& options) {
  const TokenStream lifted = LiftString(table, x);
  PairIndex index(table, lifted.tokens, BarredId(table, options));
  TrainResult result;
  result.requested = merges;
  for (size_t step = 0; step < merges; ++step) {
    const std::optional<MergePair> top = index.Top();
    if (!top) break;
    const MergeId merge = table.Intern(*top);
    const size_t replaced = index.MergeAll(*top, merge);
    result.sequence.push_back(merge);
    result.steps.push_back(TrainStep{
        merge, replaced, index.source_len() - index.live_tokens()});
    if (options.on_step) options.on_step(index, result.steps.back());
  }
  result.stream = index.Stream();
  return result;
}

}  // namespace bpe
