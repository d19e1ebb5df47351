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

#ifndef BPE_PAIR_INDEX_H_
#define BPE_PAIR_INDEX_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "absl/container/btree_set.h"
#include "absl/container/flat_hash_map.h"
#include "bpe/core.h"
#include "bpe/pair_stats.h"

namespace bpe {

// Working state of the fast greedy trainer: the stream as a doubly-linked
// list of token nodes, the positions of every adjacent pair, and a max-heap
// of pairs ordered like TopPair().
//
// Node handles are the token indices of the initial stream; a merged token
// keeps the handle of its left part, so handle order is stream order. Position sets hold every raw occurrence
// (left node handle) of a pair. For pairs of two distinct tokens the count
// is the set size; for (x, x) pairs the non-overlapping count is
// sum(floor(len / 2)) over maximal runs of x, maintained through run
// endpoints. Heap entries are snapshots and are lazily revalidated on pop.
class PairIndex {
 public:
  // Pairs containing `barred` are never indexed, so it never merges.
  PairIndex(const MergeTable& table, std::span<const MergeId> tokens,
            std::optional<MergeId> barred = std::nullopt);

  // Best live pair under the TopPair() order, or nullopt if none remain.
  std::optional<MergePair> Top();

  // Replaces every non-overlapping occurrence of `pair`, left to right, by
  // `merged` and updates neighbouring pairs. Returns the replacement count.
  size_t MergeAll(MergePair pair, MergeId merged);

  size_t live_tokens() const { return live_; }
  size_t source_len() const { return nodes_.size(); }

  // Node visits and index updates since construction; the work done by
  // MergeAll() is proportional to its replacement count.
  uint64_t touches() const { return touches_; }

  TokenStream Stream() const;

  // Counts and first positions (as current stream indices) of every indexed
  // pair, comparable to PairFrequencies() over Stream().
  PairFreqTable Counts() const;

  // Re-derives the index from the linked list. Returns an empty string when
  // consistent, otherwise a description of the first discrepancy.
  std::string CheckConsistency() const;

 private:
  static constexpr int32_t kNone = -1;
  // `prev` of a node absorbed into its left neighbour.
  static constexpr int32_t kDead = -2;

  struct Node {
    MergeId id;
    int32_t prev = kNone;
    int32_t next = kNone;
    // Valid at run endpoints only: the opposite endpoint and run length.
    int32_t run_partner = kNone;
    int32_t run_len = 1;

    bool alive() const { return prev != kDead; }
  };

  struct PairEntry {
    absl::btree_set<int32_t> positions;
    int64_t count = 0;
  };

  struct HeapEntry {
    int64_t count;
    int32_t first;
    MergePair pair;
  };

  struct HeapOrder {
    const MergeTable* table;
    bool operator()(const HeapEntry& a, const HeapEntry& b) const;
  };

  bool Indexable(MergeId left, MergeId right) const;
  void AddPosition(int32_t left_node);
  void RemovePosition(int32_t left_node);
  void AdjustRunCount(MergeId id, int32_t old_len, int32_t new_len);
  void DetachFromRun(int32_t node);
  void AttachToRun(int32_t node);
  void Push(const MergePair& pair);

  const MergeTable* table_;
  std::optional<MergeId> barred_;
  std::vector<Node> nodes_;
  absl::flat_hash_map<MergePair, PairEntry> pairs_;
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapOrder> heap_;
  std::vector<MergePair> pending_;
  size_t live_ = 0;
  uint64_t touches_ = 0;
};

}  // namespace bpe

#endif  // BPE_PAIR_INDEX_H_
