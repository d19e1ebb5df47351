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

#ifndef BPE_GREEDY_H_
#define BPE_GREEDY_H_

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "bpe/core.h"
#include "bpe/pair_index.h"

namespace bpe {

struct TrainStep {
  MergeId merge;
  // R_t: replacements made by this step; equal to its compression gain.
  size_t replacements = 0;
  // κ after this step.
  size_t utility = 0;

  friend bool operator==(const TrainStep&, const TrainStep&) = default;
};

struct TrainResult {
  MergeSequence sequence;
  TokenStream stream;
  std::vector<TrainStep> steps;
  // The merge count asked for; sequence.size() is smaller on early stop.
  size_t requested = 0;

  size_t Utility() const { return stream.Utility(); }
  bool StoppedEarly() const { return sequence.size() < requested; }

  friend bool operator==(const TrainResult&, const TrainResult&) = default;
};

struct TrainOptions {
  // A symbol that never takes part in a merge (word-boundary mode).
  std::optional<Symbol> barred;
  // Fast trainer only: called after every merge step.
  std::function<void(const PairIndex&, const TrainStep&)> on_step;
};

// Reference trainer: every step recounts all pairs over the whole stream,
// picks TopPair() and applies it. O(N) per step.
TrainResult TrainGreedySlow(MergeTable& table, SymbolView x, size_t merges,
                            const TrainOptions& options = {});
TrainResult TrainGreedySlow(MergeTable& table, TokenStream stream,
                            size_t merges, const TrainOptions& options = {});

// Same output as TrainGreedySlow(); each step only touches the occurrences
// of the chosen pair and their neighbours.
TrainResult TrainGreedyFast(MergeTable& table, SymbolView x, size_t merges,
                            const TrainOptions& options = {});

}  // namespace bpe

#endif  // BPE_GREEDY_H_
