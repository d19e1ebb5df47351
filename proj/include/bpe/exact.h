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

#ifndef BPE_EXACT_H_
#define BPE_EXACT_H_

// Exact BPE training by depth-first search over valid merge sequences, and
// the conflict / safe-permutation machinery that characterises when two
// sequences always produce the same bracketing.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "bpe/core.h"

namespace bpe {

// Directed: the last symbol of yield(a) equals the first symbol of yield(b).
bool Conflicts(const MergeTable& table, MergeId a, MergeId b);

// a ⋗ b: ¬Conflicts(a, b), yield(a) is not shorter than yield(b), and
// yield(a) is not lexicographically smaller than yield(b).
bool MergeOrder(const MergeTable& table, MergeId a, MergeId b);

// True when applying `first` then `second` gives the same stream as the
// reverse order for every input: neither merge's right constituent is the
// other's left constituent, and neither is a constituent of the other.
bool Commutes(const MergeTable& table, MergeId first, MergeId second);

// Strict total order on merges by (yield length, yield, constituents).
bool CanonicallyBefore(const MergeTable& table, MergeId a, MergeId b);

enum class Pruning {
  // Every distinct adjacent pair of the current stream is expanded.
  kNone,
  // Expand μ after λ only if μ ⋗ λ. Not exact; kept for comparison.
  kMergeOrder,
  // Skip μ after λ when the two commute and μ is canonically before λ: the
  // swapped order reaches the same stream. Exact.
  kCanonical,
};

struct SearchOptions {
  Pruning pruning = Pruning::kCanonical;
  // Skip states whose stream (and last merge) was already expanded with at
  // least as much remaining depth.
  bool memoize = false;
  // Optimal sequences to collect, in DFS order.
  size_t max_optima = 1;
  // Aborts with Error(kCapacity) after this many states; 0 = unlimited.
  uint64_t state_budget = 0;
};

struct SearchReport {
  MergeSequence best_sequence;
  size_t best_utility = 0;
  uint64_t states_visited = 0;
  // Children rejected by the pruning guard or the memo.
  uint64_t pruned = 0;
  std::vector<MergeSequence> optima;
};

// Best utility over valid sequences of length <= merges whose merges all
// apply at least once. pruned=false is the brute-force search.
SearchReport TrainExact(MergeTable& table, SymbolView x, size_t merges,
                        bool pruned);
SearchReport TrainExact(MergeTable& table, SymbolView x, size_t merges,
                        const SearchOptions& options);

// Walks the same tree as TrainExact(), parents before children. `enter` is
// called for every state including the root and returns whether to descend;
// `leave` is called once the subtree is finished. Children are the distinct
// adjacent pairs of the stream in order of first occurrence.
struct SearchVisitor {
  std::function<bool(const MergeSequence&, const TokenStream&)> enter;
  std::function<void(const MergeSequence&, const TokenStream&)> leave;
};
void WalkSearchTree(MergeTable& table, const TokenStream& root,
                    size_t max_depth, Pruning pruning,
                    const SearchVisitor& visitor);

// Distinct adjacent pairs of a stream, interned, in first-occurrence order.
std::vector<MergeId> StreamPairs(MergeTable& table,
                                 std::span<const MergeId> tokens);

// Transposition (i, j), i < j, 0-based: no merge before j conflicts with
// seq[j] and no merge after i conflicts with seq[i].
bool IsSafeTransposition(const MergeTable& table,
                         std::span<const MergeId> sequence, size_t i,
                         size_t j);

// result[k] = sequence[permutation[k]]. The permutation is realised as a
// series of transpositions (placing each target position in turn), each of
// which must be safe, and the result must be valid. Throws
// Error(kInvalidArgument) if `permutation` is not a bijection.
bool IsSafePermutation(const MergeTable& table,
                       std::span<const MergeId> sequence,
                       std::span<const size_t> permutation);

struct EquivalenceReport {
  bool equivalent = false;
  // A safe permutation mapping a to b when one exists.
  std::vector<size_t> permutation;
  // Random strings on which both sequences were applied.
  size_t strings_checked = 0;
  // A string whose bracketings differ, if any was found.
  std::optional<SymbolString> witness;
};

// Searches all permutations mapping a to b for a safe one, then applies both
// sequences to `spot_checks` random strings. Throws Error(kCapacity) when
// |a| > max_len and Error(kInvalidArgument) when lengths differ.
EquivalenceReport CheckEquivalence(const MergeTable& table,
                                   std::span<const MergeId> a,
                                   std::span<const MergeId> b,
                                   size_t max_len = 8,
                                   size_t spot_checks = 100,
                                   uint64_t seed = 1);

bool SequencesEquivalent(const MergeTable& table, std::span<const MergeId> a,
                         std::span<const MergeId> b, size_t max_len = 8);

}  // namespace bpe

#endif  // BPE_EXACT_H_
