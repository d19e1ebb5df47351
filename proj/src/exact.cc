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

#include "bpe/exact.h"

#include <algorithm>
#include <compare>
#include <random>
#include <utility>

#include "absl/container/flat_hash_map.h"
#include "absl/container/flat_hash_set.h"
#include "absl/hash/hash.h"
#include "bpe/error.h"

namespace bpe {
namespace {

std::strong_ordering CanonicalCompare(const MergeTable& table, MergeId a,
                                      MergeId b) {
  if (a == b) return std::strong_ordering::equal;
  const SymbolString& ya = table.Yield(a);
  const SymbolString& yb = table.Yield(b);
  if (auto c = ya.size() <=> yb.size(); c != 0) return c;
  if (auto c = ya.compare(yb) <=> 0; c != 0) return c;
  // Same yield, different trees: neither is trivial.
  const MergePair pa = table.Constituents(a);
  const MergePair pb = table.Constituents(b);
  if (auto c = CanonicalCompare(table, pa.left, pb.left); c != 0) return c;
  return CanonicalCompare(table, pa.right, pb.right);
}

struct MemoKey {
  std::vector<MergeId> tokens;
  MergeId last;

  friend bool operator==(const MemoKey&, const MemoKey&) = default;

  template <typename H>
  friend H AbslHashValue(H h, const MemoKey& k) {
    return H::combine(std::move(h), k.tokens, k.last);
  }
};

// Shared depth-first walk. `enter` returns whether to descend.
class Walker {
 public:
  Walker(MergeTable& table, size_t max_depth, Pruning pruning, bool memoize,
         uint64_t state_budget)
      : table_(table),
        max_depth_(max_depth),
        pruning_(pruning),
        memoize_(memoize),
        state_budget_(state_budget) {}

  template <typename Enter, typename Leave>
  void Run(const TokenStream& root, Enter&& enter, Leave&& leave) {
    MergeSequence sequence;
    Visit(sequence, root, enter, leave);
  }

  uint64_t visited() const { return visited_; }
  uint64_t pruned() const { return pruned_; }

 private:
  bool Allowed(const MergeSequence& sequence, MergeId next) const {
    if (sequence.empty()) return true;
    const MergeId last = sequence.back();
    switch (pruning_) {
      case Pruning::kNone:
        return true;
      case Pruning::kMergeOrder:
        return MergeOrder(table_, next, last);
      case Pruning::kCanonical:
        return !(Commutes(table_, last, next) &&
                 CanonicallyBefore(table_, next, last));
    }
    return true;
  }

  // True if this state was already expanded with at least as much depth.
  bool SeenBefore(const MergeSequence& sequence, const TokenStream& stream) {
    const size_t remaining = max_depth_ - sequence.size();
    MemoKey key{stream.tokens,
                pruning_ == Pruning::kNone || sequence.empty()
                    ? MergeId(UINT32_MAX)
                    : sequence.back()};
    auto [it, inserted] = memo_.try_emplace(std::move(key), remaining);
    if (inserted) return false;
    if (it->second >= remaining) return true;
    it->second = remaining;
    return false;
  }

  template <typename Enter, typename Leave>
  void Visit(MergeSequence& sequence, const TokenStream& stream, Enter& enter,
             Leave& leave) {
    ++visited_;
    if (state_budget_ != 0 && visited_ > state_budget_) {
      throw Error(ErrorCode::kCapacity,
                  "search exceeded " + std::to_string(state_budget_) +
                      " states");
    }
    const bool descend = enter(sequence, stream);
    if (descend && sequence.size() < max_depth_) {
      for (MergeId child : StreamPairs(table_, stream.tokens)) {
        if (!Allowed(sequence, child)) {
          ++pruned_;
          continue;
        }
        TokenStream next = stream;
        ApplyMergeInPlace(table_, next, child);
        sequence.push_back(child);
        if (memoize_ && SeenBefore(sequence, next)) {
          ++pruned_;
        } else {
          Visit(sequence, next, enter, leave);
        }
        sequence.pop_back();
      }
    }
    leave(sequence, stream);
  }

  MergeTable& table_;
  size_t max_depth_;
  Pruning pruning_;
  bool memoize_;
  uint64_t state_budget_;
  uint64_t visited_ = 0;
  uint64_t pruned_ = 0;
  absl::flat_hash_map<MemoKey, size_t> memo_;
};

}  // namespace

bool Conflicts(const MergeTable& table, MergeId a, MergeId b) {
  return table.LastSymbol(a) == table.FirstSymbol(b);
}

bool MergeOrder(const MergeTable& table, MergeId a, MergeId b) {
  if (Conflicts(table, a, b)) return false;
  const SymbolString& ya = table.Yield(a);
  const SymbolString& yb = table.Yield(b);
  return ya.size() >= yb.size() && !(ya < yb);
}

bool Commutes(const MergeTable& table, MergeId first, MergeId second) {
  if (first == second) return true;
  const auto constituents = [&](MergeId id) -> std::optional<MergePair> {
    if (table.IsTrivial(id)) return std::nullopt;
    return table.Constituents(id);
  };
  const auto f = constituents(first);
  const auto s = constituents(second);
  if (!f || !s) return true;
  return f->right != s->left && s->right != f->left && s->left != first &&
         s->right != first && f->left != second && f->right != second;
}

bool CanonicallyBefore(const MergeTable& table, MergeId a, MergeId b) {
  return CanonicalCompare(table, a, b) < 0;
}

std::vector<MergeId> StreamPairs(MergeTable& table,
                                 std::span<const MergeId> tokens) {
  std::vector<MergeId> out;
  absl::flat_hash_set<MergePair> seen;
  for (size_t i = 0; i + 1 < tokens.size(); ++i) {
    const MergePair pair{tokens[i], tokens[i + 1]};
    if (seen.insert(pair).second) out.push_back(table.Intern(pair));
  }
  return out;
}

SearchReport TrainExact(MergeTable& table, SymbolView x, size_t merges,
                        bool pruned) {
  SearchOptions options;
  options.pruning = pruned ? Pruning::kCanonical : Pruning::kNone;
  return TrainExact(table, x, merges, options);
}

SearchReport TrainExact(MergeTable& table, SymbolView x, size_t merges,
                        const SearchOptions& options) {
  SearchReport report;
  Walker walker(table, merges, options.pruning, options.memoize,
                options.state_budget);
  const size_t max_optima = std::max<size_t>(options.max_optima, 1);
  walker.Run(
      LiftString(table, x),
      [&](const MergeSequence& sequence, const TokenStream& stream) {
        const size_t utility = stream.Utility();
        if (sequence.empty() || utility > report.best_utility) {
          report.best_utility = utility;
          report.best_sequence = sequence;
          report.optima.assign(1, sequence);
        } else if (utility == report.best_utility &&
                   report.optima.size() < max_optima) {
          report.optima.push_back(sequence);
        }
        return true;
      },
      [](const MergeSequence&, const TokenStream&) {});
  report.states_visited = walker.visited();
  report.pruned = walker.pruned();
  return report;
}

void WalkSearchTree(MergeTable& table, const TokenStream& root,
                    size_t max_depth, Pruning pruning,
                    const SearchVisitor& visitor) {
  Walker walker(table, max_depth, pruning, /*memoize=*/false, 0);
  walker.Run(
      root,
      [&](const MergeSequence& s, const TokenStream& t) {
        return visitor.enter ? visitor.enter(s, t) : true;
      },
      [&](const MergeSequence& s, const TokenStream& t) {
        if (visitor.leave) visitor.leave(s, t);
      });
}

bool IsSafeTransposition(const MergeTable& table,
                         std::span<const MergeId> sequence, size_t i,
                         size_t j) {
  if (i >= j || j >= sequence.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "transposition (" + std::to_string(i) + ", " +
                    std::to_string(j) + ") out of range");
  }
  for (size_t k = 0; k < j; ++k) {
    if (Conflicts(table, sequence[k], sequence[j])) return false;
  }
  for (size_t k = i + 1; k < sequence.size(); ++k) {
    if (Conflicts(table, sequence[k], sequence[i])) return false;
  }
  return true;
}

bool IsSafePermutation(const MergeTable& table,
                       std::span<const MergeId> sequence,
                       std::span<const size_t> permutation) {
  const size_t n = sequence.size();
  if (permutation.size() != n) {
    throw Error(ErrorCode::kInvalidArgument,
                "permutation has " + std::to_string(permutation.size()) +
                    " entries for a sequence of " + std::to_string(n));
  }
  std::vector<bool> used(n, false);
  for (size_t p : permutation) {
    if (p >= n || used[p]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "permutation is not a bijection");
    }
    used[p] = true;
  }
  MergeSequence current(sequence.begin(), sequence.end());
  std::vector<size_t> origin(n);
  for (size_t k = 0; k < n; ++k) origin[k] = k;
  for (size_t p = 0; p < n; ++p) {
    const size_t q = static_cast<size_t>(
        std::find(origin.begin() + p, origin.end(), permutation[p]) -
        origin.begin());
    if (q == p) continue;
    if (!IsSafeTransposition(table, current, p, q)) return false;
    std::swap(current[p], current[q]);
    std::swap(origin[p], origin[q]);
  }
  return IsValidSequence(table, current);
}

namespace {

// Calls `fn` for every permutation with a[perm[k]] == b[k]; stops when `fn`
// returns true.
bool ForEachMatchingPermutation(
    std::span<const MergeId> a, std::span<const MergeId> b,
    std::vector<size_t>& perm, std::vector<bool>& used,
    const std::function<bool(const std::vector<size_t>&)>& fn) {
  const size_t k = perm.size();
  if (k == b.size()) return fn(perm);
  for (size_t i = 0; i < a.size(); ++i) {
    if (used[i] || a[i] != b[k]) continue;
    used[i] = true;
    perm.push_back(i);
    if (ForEachMatchingPermutation(a, b, perm, used, fn)) return true;
    perm.pop_back();
    used[i] = false;
  }
  return false;
}

// Random strings biased towards containing the merges' yields.
SymbolString RandomProbe(const MergeTable& table,
                         std::span<const MergeId> merges,
                         std::span<const Symbol> symbols, std::mt19937_64& rng,
                         size_t max_len) {
  SymbolString out;
  std::uniform_int_distribution<size_t> len_dist(1, max_len);
  const size_t target = len_dist(rng);
  std::bernoulli_distribution use_yield(0.5);
  while (out.size() < target) {
    if (!merges.empty() && use_yield(rng)) {
      std::uniform_int_distribution<size_t> pick(0, merges.size() - 1);
      out += table.Yield(merges[pick(rng)]);
    } else {
      std::uniform_int_distribution<size_t> pick(0, symbols.size() - 1);
      out.push_back(symbols[pick(rng)]);
    }
  }
  return out;
}

}  // namespace

EquivalenceReport CheckEquivalence(const MergeTable& table,
                                   std::span<const MergeId> a,
                                   std::span<const MergeId> b, size_t max_len,
                                   size_t spot_checks, uint64_t seed) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "sequences of different lengths " + std::to_string(a.size()) +
                    " and " + std::to_string(b.size()));
  }
  if (a.size() > max_len) {
    throw Error(ErrorCode::kCapacity,
                "sequence length " + std::to_string(a.size()) +
                    " exceeds the permutation search cap " +
                    std::to_string(max_len));
  }
  EquivalenceReport report;
  std::vector<size_t> perm;
  std::vector<bool> used(a.size(), false);
  report.equivalent = ForEachMatchingPermutation(
      a, b, perm, used, [&](const std::vector<size_t>& candidate) {
        if (!IsSafePermutation(table, a, candidate)) return false;
        report.permutation = candidate;
        return true;
      });

  // Probe strings: spot checks when equivalent, a witness search otherwise.
  absl::flat_hash_set<Symbol> symbol_set;
  for (MergeId m : a) {
    for (Symbol s : table.Yield(m)) symbol_set.insert(s);
  }
  for (MergeId m : b) {
    for (Symbol s : table.Yield(m)) symbol_set.insert(s);
  }
  if (symbol_set.empty()) return report;
  std::vector<Symbol> symbols(symbol_set.begin(), symbol_set.end());
  std::sort(symbols.begin(), symbols.end());
  MergeSequence both(a.begin(), a.end());
  both.insert(both.end(), b.begin(), b.end());
  const bool check_a = IsValidSequence(table, a);
  const bool check_b = IsValidSequence(table, b);
  if (!check_a || !check_b) return report;

  std::mt19937_64 rng(seed);
  const size_t trials = report.equivalent ? spot_checks : spot_checks * 20;
  for (size_t t = 0; t < trials; ++t) {
    SymbolString probe = RandomProbe(table, both, symbols, rng, 12);
    const TokenStream lifted = LiftString(table, probe);
    ++report.strings_checked;
    if (ApplySequence(table, lifted, a) != ApplySequence(table, lifted, b)) {
      report.witness = std::move(probe);
      report.equivalent = false;
      break;
    }
  }
  return report;
}

bool SequencesEquivalent(const MergeTable& table, std::span<const MergeId> a,
                         std::span<const MergeId> b, size_t max_len) {
  return CheckEquivalence(table, a, b, max_len).equivalent;
}

}  // namespace bpe
