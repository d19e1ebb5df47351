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

#include "bpe/pair_index.h"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "absl/container/flat_hash_map.h"

namespace bpe {

bool PairIndex::HeapOrder::operator()(const HeapEntry& a,
                                      const HeapEntry& b) const {
  // priority_queue keeps the "largest" on top, so a < b iff b goes first.
  return PairPrecedes(*table, b.pair,
                      PairStat{static_cast<size_t>(b.count),
                               static_cast<size_t>(b.first)},
                      a.pair,
                      PairStat{static_cast<size_t>(a.count),
                               static_cast<size_t>(a.first)});
}

PairIndex::PairIndex(const MergeTable& table, std::span<const MergeId> tokens,
                     std::optional<MergeId> barred)
    : table_(&table), barred_(barred), heap_(HeapOrder{&table}) {
  const auto n = static_cast<int32_t>(tokens.size());
  nodes_.resize(tokens.size());
  live_ = tokens.size();
  for (int32_t i = 0; i < n; ++i) {
    Node& node = nodes_[i];
    node.id = tokens[i];
    node.prev = i > 0 ? i - 1 : kNone;
    node.next = i + 1 < n ? i + 1 : kNone;
  }
  for (int32_t start = 0; start < n;) {
    int32_t end = start;
    while (end + 1 < n && tokens[end + 1] == tokens[start]) ++end;
    const int32_t len = end - start + 1;
    nodes_[start].run_partner = end;
    nodes_[start].run_len = len;
    nodes_[end].run_partner = start;
    nodes_[end].run_len = len;
    if (len >= 2 && Indexable(tokens[start], tokens[start])) {
      pairs_[MergePair{tokens[start], tokens[start]}].count += len / 2;
    }
    start = end + 1;
  }
  for (int32_t i = 0; i + 1 < n; ++i) {
    const MergePair pair{tokens[i], tokens[i + 1]};
    if (!Indexable(pair.left, pair.right)) continue;
    PairEntry& entry = pairs_[pair];
    entry.positions.insert(i);
    if (pair.left != pair.right) ++entry.count;
  }
  for (const auto& [pair, entry] : pairs_) Push(pair);
}

bool PairIndex::Indexable(MergeId left, MergeId right) const {
  return !barred_ || (left != *barred_ && right != *barred_);
}

void PairIndex::Push(const MergePair& pair) {
  auto it = pairs_.find(pair);
  if (it == pairs_.end() || it->second.count == 0) return;
  heap_.push(HeapEntry{it->second.count, *it->second.positions.begin(), pair});
}

std::optional<MergePair> PairIndex::Top() {
  while (!heap_.empty()) {
    const HeapEntry top = heap_.top();
    auto it = pairs_.find(top.pair);
    if (it == pairs_.end() || it->second.count == 0) {
      heap_.pop();
      continue;
    }
    const int32_t first = *it->second.positions.begin();
    if (it->second.count != top.count || first != top.first) {
      heap_.pop();
      Push(top.pair);
      continue;
    }
    return top.pair;
  }
  return std::nullopt;
}

void PairIndex::AddPosition(int32_t left_node) {
  ++touches_;
  const MergePair pair{nodes_[left_node].id,
                       nodes_[nodes_[left_node].next].id};
  if (!Indexable(pair.left, pair.right)) return;
  PairEntry& entry = pairs_[pair];
  entry.positions.insert(left_node);
  if (pair.left != pair.right) ++entry.count;
  pending_.push_back(pair);
}

void PairIndex::RemovePosition(int32_t left_node) {
  ++touches_;
  const MergePair pair{nodes_[left_node].id,
                       nodes_[nodes_[left_node].next].id};
  auto it = pairs_.find(pair);
  if (it == pairs_.end()) return;
  it->second.positions.erase(left_node);
  if (pair.left != pair.right) --it->second.count;
  if (it->second.positions.empty()) pairs_.erase(it);
}

void PairIndex::AdjustRunCount(MergeId id, int32_t old_len, int32_t new_len) {
  const int32_t delta = new_len / 2 - old_len / 2;
  if (delta == 0) return;
  auto it = pairs_.find(MergePair{id, id});
  if (it == pairs_.end()) return;
  it->second.count += delta;
}

void PairIndex::DetachFromRun(int32_t node) {
  ++touches_;
  Node& n = nodes_[node];
  const bool is_start = n.prev == kNone || nodes_[n.prev].id != n.id;
  const bool is_end = n.next == kNone || nodes_[n.next].id != n.id;
  if (is_start && is_end) return;
  if (!is_start && !is_end) {
    throw std::logic_error("pair index: detaching a run interior node");
  }
  const int32_t len = n.run_len;
  const int32_t other = n.run_partner;
  const int32_t new_endpoint = is_start ? n.next : n.prev;
  nodes_[new_endpoint].run_partner = other;
  nodes_[new_endpoint].run_len = len - 1;
  nodes_[other].run_partner = new_endpoint;
  nodes_[other].run_len = len - 1;
  AdjustRunCount(n.id, len, len - 1);
  n.run_partner = node;
  n.run_len = 1;
}

void PairIndex::AttachToRun(int32_t node) {
  ++touches_;
  Node& n = nodes_[node];
  n.run_partner = node;
  n.run_len = 1;
  if (n.prev == kNone || nodes_[n.prev].id != n.id) return;
  // The previous node ends its run: merges happen left to right, so the
  // right neighbour cannot carry the new id yet.
  const int32_t start = nodes_[n.prev].run_partner;
  const int32_t len = nodes_[n.prev].run_len;
  nodes_[start].run_partner = node;
  nodes_[start].run_len = len + 1;
  n.run_partner = start;
  n.run_len = len + 1;
  AdjustRunCount(n.id, len, len + 1);
}

size_t PairIndex::MergeAll(MergePair pair, MergeId merged) {
  auto it = pairs_.find(pair);
  if (it == pairs_.end()) return 0;
  const std::vector<int32_t> positions(it->second.positions.begin(),
                                       it->second.positions.end());
  pairs_.erase(it);
  pending_.clear();
  size_t replacements = 0;
  for (const int32_t w1 : positions) {
    ++touches_;
    // Positions consumed by an overlapping replacement earlier in this pass
    // (runs of equal tokens) no longer hold the pair.
    if (!nodes_[w1].alive() || nodes_[w1].id != pair.left) continue;
    const int32_t w2 = nodes_[w1].next;
    if (w2 == kNone || nodes_[w2].id != pair.right) continue;

    const int32_t prev = nodes_[w1].prev;
    const int32_t next = nodes_[w2].next;
    if (prev != kNone) RemovePosition(prev);
    if (next != kNone) RemovePosition(w2);

    DetachFromRun(w1);
    nodes_[w1].id = merged;
    DetachFromRun(w2);

    nodes_[w2].prev = kDead;
    nodes_[w1].next = next;
    if (next != kNone) nodes_[next].prev = w1;
    --live_;
    ++replacements;

    if (prev != kNone) AddPosition(prev);
    if (next != kNone) AddPosition(w1);
    AttachToRun(w1);
  }
  std::sort(pending_.begin(), pending_.end());
  pending_.erase(std::unique(pending_.begin(), pending_.end()),
                 pending_.end());
  for (const MergePair& p : pending_) Push(p);
  pending_.clear();
  return replacements;
}

TokenStream PairIndex::Stream() const {
  TokenStream stream;
  stream.source_len = nodes_.size();
  stream.tokens.reserve(live_);
  for (int32_t i = nodes_.empty() ? kNone : 0; i != kNone; i = nodes_[i].next) {
    stream.tokens.push_back(nodes_[i].id);
  }
  return stream;
}

PairFreqTable PairIndex::Counts() const {
  std::vector<size_t> index_of(nodes_.size(), 0);
  size_t index = 0;
  for (int32_t i = nodes_.empty() ? kNone : 0; i != kNone; i = nodes_[i].next) {
    index_of[i] = index++;
  }
  PairFreqTable out;
  for (const auto& [pair, entry] : pairs_) {
    if (entry.count == 0) continue;
    out[pair] = PairStat{static_cast<size_t>(entry.count),
                         index_of[*entry.positions.begin()]};
  }
  return out;
}

std::string PairIndex::CheckConsistency() const {
  const TokenStream stream = Stream();
  if (stream.tokens.size() != live_) return "live token count mismatch";

  PairFreqTable expected = PairFrequencies(stream.tokens);
  absl::erase_if(expected, [&](const auto& kv) {
    return !Indexable(kv.first.left, kv.first.right);
  });
  const PairFreqTable actual = Counts();
  if (expected.size() != actual.size()) {
    return "indexed pair count " + std::to_string(actual.size()) +
           " != rescanned " + std::to_string(expected.size());
  }
  for (const auto& [pair, stat] : expected) {
    auto it = actual.find(pair);
    if (it == actual.end()) {
      return "missing pair " + table_->Render(pair.left) + " " +
             table_->Render(pair.right);
    }
    if (!(it->second == stat)) {
      return "pair " + table_->Render(pair.left) + " " +
             table_->Render(pair.right) + " indexed count " +
             std::to_string(it->second.count) + "@" +
             std::to_string(it->second.first_pos) + " != rescanned " +
             std::to_string(stat.count) + "@" + std::to_string(stat.first_pos);
    }
  }

  size_t raw_positions = 0;
  for (const auto& [pair, entry] : pairs_) {
    for (const int32_t pos : entry.positions) {
      const Node& node = nodes_[pos];
      if (!node.alive() || node.next == kNone || node.id != pair.left ||
          nodes_[node.next].id != pair.right) {
        return "stale position " + std::to_string(pos);
      }
    }
    raw_positions += entry.positions.size();
  }
  size_t raw_expected = 0;
  for (size_t i = 0; i + 1 < stream.tokens.size(); ++i) {
    if (Indexable(stream.tokens[i], stream.tokens[i + 1])) ++raw_expected;
  }
  if (raw_positions != raw_expected) return "raw position count mismatch";

  for (int32_t i = nodes_.empty() ? kNone : 0; i != kNone;) {
    int32_t end = i;
    int32_t len = 1;
    while (nodes_[end].next != kNone && nodes_[nodes_[end].next].id ==
                                            nodes_[i].id) {
      end = nodes_[end].next;
      ++len;
    }
    if (nodes_[i].run_partner != end || nodes_[end].run_partner != i ||
        nodes_[i].run_len != len || nodes_[end].run_len != len) {
      return "run bookkeeping mismatch at node " + std::to_string(i);
    }
    i = nodes_[end].next;
  }
  return "";
}

}  // namespace bpe
