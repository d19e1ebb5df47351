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

#ifndef BPE_CORE_H_
#define BPE_CORE_H_

// The merge calculus: alphabets, interned merges, merge sequences, validity,
// application to token streams, yields, and compression utility.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "bpe/text.h"

namespace bpe {

// Dense handle into a MergeTable. Handles below the alphabet size are trivial
// merges (single symbols); the rest are composite merges.
class MergeId {
 public:
  constexpr MergeId() = default;
  constexpr explicit MergeId(uint32_t value) : value_(value) {}

  constexpr uint32_t value() const { return value_; }

  friend constexpr auto operator<=>(MergeId, MergeId) = default;

  template <typename H>
  friend H AbslHashValue(H h, MergeId id) {
    return H::combine(std::move(h), id.value_);
  }

 private:
  uint32_t value_ = 0;
};

// An ordered pair of adjacent units, i.e. the constituents of a prospective
// merge.
struct MergePair {
  MergeId left;
  MergeId right;

  friend constexpr auto operator<=>(const MergePair&,
                                    const MergePair&) = default;

  template <typename H>
  friend H AbslHashValue(H h, const MergePair& p) {
    return H::combine(std::move(h), p.left, p.right);
  }
};

// Merge sequences store handles; the same merge may occur more than once.
using MergeSequence = std::vector<MergeId>;

// Append-only store of merge trees over a fixed alphabet. Every composite
// entry's constituents have smaller handles, and interning is idempotent.
// Safe for concurrent reads once no thread is interning.
class MergeTable {
 public:
  // The alphabet is sorted and deduplicated; trivial handle i is the i-th
  // smallest symbol. Throws Error(kInvalidArgument) if it is empty.
  explicit MergeTable(std::span<const Symbol> alphabet);

  // Alphabet = the distinct symbols of `text`, optionally plus `extra`.
  static MergeTable ForText(SymbolView text, SymbolView extra = {});

  size_t alphabet_size() const { return alphabet_.size(); }
  size_t size() const { return entries_.size(); }
  std::span<const Symbol> alphabet() const { return alphabet_; }

  bool Contains(MergeId id) const { return id.value() < entries_.size(); }
  bool IsTrivial(MergeId id) const;

  // Trivial handle for a symbol; throws Error(kUnknownSymbol).
  MergeId Trivial(Symbol symbol) const;
  std::optional<MergeId> FindTrivial(Symbol symbol) const;

  // Returns the handle of [left, right], creating it on first request.
  // Throws Error(kInvalidHandle) for unknown constituents.
  MergeId Intern(MergeId left, MergeId right);
  MergeId Intern(MergePair pair) { return Intern(pair.left, pair.right); }
  std::optional<MergeId> Find(MergeId left, MergeId right) const;

  // Constituents of a composite merge; throws for trivial or unknown ids.
  MergePair Constituents(MergeId id) const;

  const SymbolString& Yield(MergeId id) const;
  size_t YieldLength(MergeId id) const { return Yield(id).size(); }
  Symbol FirstSymbol(MergeId id) const { return Yield(id).front(); }
  Symbol LastSymbol(MergeId id) const { return Yield(id).back(); }

  // True iff `inner` occurs as a proper descendant in the tree of `outer`.
  bool IsSubmerge(MergeId inner, MergeId outer) const;

  // Bracketed rendering, e.g. "[[a,b],c]"; trivial merges render as the
  // symbol itself.
  std::string Render(MergeId id) const;

  void CheckHandle(MergeId id) const;

 private:
  struct Entry {
    MergePair constituents;  // unused for trivial entries
    SymbolString yield;
    bool trivial = false;
  };

  std::vector<Symbol> alphabet_;
  absl::flat_hash_map<Symbol, MergeId> symbol_ids_;
  std::vector<Entry> entries_;
  absl::flat_hash_map<MergePair, MergeId> composite_ids_;
};

// The current partial bracketing of a source string.
struct TokenStream {
  std::vector<MergeId> tokens;
  size_t source_len = 0;

  // Compression utility of whatever produced this stream.
  size_t Utility() const { return source_len - tokens.size(); }

  friend bool operator==(const TokenStream&, const TokenStream&) = default;
};

// Throws Error(kUnknownSymbol) for symbols outside the table's alphabet.
TokenStream LiftString(const MergeTable& table, SymbolView text);

// One left-to-right pass replacing every non-overlapping (left, right)
// occurrence by `merge`; scanning resumes after each replacement. Returns the
// number of replacements.
size_t ApplyMergeInPlace(const MergeTable& table, TokenStream& stream,
                         MergeId merge);

struct ApplyResult {
  TokenStream stream;
  size_t replacements = 0;
};
ApplyResult ApplyMerge(const MergeTable& table, TokenStream stream,
                       MergeId merge);

// Throws Error(kInvalidSequence) if `sequence` is not valid.
TokenStream ApplySequence(const MergeTable& table, TokenStream stream,
                          std::span<const MergeId> sequence);

// Every constituent of every item is trivial or occurs earlier.
bool IsValidSequence(const MergeTable& table,
                     std::span<const MergeId> sequence);

size_t CompressionUtility(const MergeTable& table, SymbolView x,
                          std::span<const MergeId> sequence);

// κ(base ++ addition) − κ(base).
size_t CompressionGain(const MergeTable& table, SymbolView x,
                       std::span<const MergeId> addition,
                       std::span<const MergeId> base);

MergeSequence Concat(std::span<const MergeId> a, std::span<const MergeId> b);

// Concatenated yields of the tokens; equals the source string.
SymbolString StreamYield(const MergeTable& table, const TokenStream& stream);

// Renders a sequence as "<[a,b], [[a,b],c]>".
std::string RenderSequence(const MergeTable& table,
                           std::span<const MergeId> sequence);

}  // namespace bpe

#endif  // BPE_CORE_H_
