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

#include "bpe/core.h"

#include <algorithm>
#include <cstdio>

#include "absl/container/flat_hash_set.h"
#include "bpe/error.h"

namespace bpe {

MergeTable::MergeTable(std::span<const Symbol> alphabet)
    : alphabet_(alphabet.begin(), alphabet.end()) {
  std::sort(alphabet_.begin(), alphabet_.end());
  alphabet_.erase(std::unique(alphabet_.begin(), alphabet_.end()),
                  alphabet_.end());
  if (alphabet_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "alphabet must be non-empty");
  }
  entries_.reserve(alphabet_.size());
  for (size_t i = 0; i < alphabet_.size(); ++i) {
    MergeId id(static_cast<uint32_t>(i));
    symbol_ids_.emplace(alphabet_[i], id);
    entries_.push_back(Entry{{}, SymbolString(1, alphabet_[i]), true});
  }
}

MergeTable MergeTable::ForText(SymbolView text, SymbolView extra) {
  std::vector<Symbol> symbols(text.begin(), text.end());
  symbols.insert(symbols.end(), extra.begin(), extra.end());
  return MergeTable(symbols);
}

void MergeTable::CheckHandle(MergeId id) const {
  if (!Contains(id)) {
    throw Error(ErrorCode::kInvalidHandle,
                "merge handle " + std::to_string(id.value()) +
                    " not in table of size " + std::to_string(size()));
  }
}

bool MergeTable::IsTrivial(MergeId id) const {
  CheckHandle(id);
  return entries_[id.value()].trivial;
}

MergeId MergeTable::Trivial(Symbol symbol) const {
  if (auto id = FindTrivial(symbol)) return *id;
  char code[16];
  std::snprintf(code, sizeof(code), "U+%04X", static_cast<unsigned>(symbol));
  throw Error(ErrorCode::kUnknownSymbol,
              std::string(code) + " (" + EncodeUtf8(symbol) +
                  ") is not in the alphabet");
}

std::optional<MergeId> MergeTable::FindTrivial(Symbol symbol) const {
  auto it = symbol_ids_.find(symbol);
  if (it == symbol_ids_.end()) return std::nullopt;
  return it->second;
}

MergeId MergeTable::Intern(MergeId left, MergeId right) {
  CheckHandle(left);
  CheckHandle(right);
  const MergePair pair{left, right};
  auto [it, inserted] =
      composite_ids_.try_emplace(pair, MergeId(entries_.size()));
  if (inserted) {
    SymbolString yield = entries_[left.value()].yield;
    yield += entries_[right.value()].yield;
    entries_.push_back(Entry{pair, std::move(yield), false});
  }
  return it->second;
}

std::optional<MergeId> MergeTable::Find(MergeId left, MergeId right) const {
  auto it = composite_ids_.find(MergePair{left, right});
  if (it == composite_ids_.end()) return std::nullopt;
  return it->second;
}

MergePair MergeTable::Constituents(MergeId id) const {
  if (IsTrivial(id)) {
    throw Error(ErrorCode::kInvalidArgument,
                "trivial merge " + Render(id) + " has no constituents");
  }
  return entries_[id.value()].constituents;
}

const SymbolString& MergeTable::Yield(MergeId id) const {
  CheckHandle(id);
  return entries_[id.value()].yield;
}

bool MergeTable::IsSubmerge(MergeId inner, MergeId outer) const {
  CheckHandle(inner);
  if (IsTrivial(outer)) return false;
  // A submerge's yield is a substring of the outer yield, so most candidates
  // are rejected without walking the tree.
  if (YieldLength(inner) >= YieldLength(outer)) return false;
  std::vector<MergeId> stack = {outer};
  while (!stack.empty()) {
    const MergeId node = stack.back();
    stack.pop_back();
    const Entry& e = entries_[node.value()];
    if (e.trivial) continue;
    for (MergeId child : {e.constituents.left, e.constituents.right}) {
      if (child == inner) return true;
      if (YieldLength(child) > YieldLength(inner)) stack.push_back(child);
    }
  }
  return false;
}

std::string MergeTable::Render(MergeId id) const {
  CheckHandle(id);
  const Entry& e = entries_[id.value()];
  if (e.trivial) return EncodeUtf8(e.yield);
  return "[" + Render(e.constituents.left) + "," +
         Render(e.constituents.right) + "]";
}

TokenStream LiftString(const MergeTable& table, SymbolView text) {
  TokenStream stream;
  stream.source_len = text.size();
  stream.tokens.reserve(text.size());
  for (Symbol s : text) stream.tokens.push_back(table.Trivial(s));
  return stream;
}

size_t ApplyMergeInPlace(const MergeTable& table, TokenStream& stream,
                         MergeId merge) {
  const MergePair pair = table.Constituents(merge);
  std::vector<MergeId>& tokens = stream.tokens;
  size_t write = 0;
  size_t read = 0;
  size_t replacements = 0;
  while (read < tokens.size()) {
    if (read + 1 < tokens.size() && tokens[read] == pair.left &&
        tokens[read + 1] == pair.right) {
      tokens[write++] = merge;
      read += 2;
      ++replacements;
    } else {
      tokens[write++] = tokens[read++];
    }
  }
  tokens.resize(write);
  return replacements;
}

ApplyResult ApplyMerge(const MergeTable& table, TokenStream stream,
                       MergeId merge) {
  const size_t replacements = ApplyMergeInPlace(table, stream, merge);
  return ApplyResult{std::move(stream), replacements};
}

TokenStream ApplySequence(const MergeTable& table, TokenStream stream,
                          std::span<const MergeId> sequence) {
  if (!IsValidSequence(table, sequence)) {
    throw Error(ErrorCode::kInvalidSequence,
                "cannot apply invalid sequence " +
                    RenderSequence(table, sequence));
  }
  for (MergeId merge : sequence) ApplyMergeInPlace(table, stream, merge);
  return stream;
}

bool IsValidSequence(const MergeTable& table,
                     std::span<const MergeId> sequence) {
  absl::flat_hash_set<MergeId> seen;
  for (MergeId merge : sequence) {
    if (table.IsTrivial(merge)) return false;
    const MergePair pair = table.Constituents(merge);
    for (MergeId part : {pair.left, pair.right}) {
      if (!table.IsTrivial(part) && !seen.contains(part)) return false;
    }
    seen.insert(merge);
  }
  return true;
}

size_t CompressionUtility(const MergeTable& table, SymbolView x,
                          std::span<const MergeId> sequence) {
  return ApplySequence(table, LiftString(table, x), sequence).Utility();
}

size_t CompressionGain(const MergeTable& table, SymbolView x,
                       std::span<const MergeId> addition,
                       std::span<const MergeId> base) {
  const MergeSequence both = Concat(base, addition);
  if (!IsValidSequence(table, both)) {
    throw Error(ErrorCode::kInvalidSequence,
                "base ++ addition is not valid: " +
                    RenderSequence(table, both));
  }
  TokenStream stream = ApplySequence(table, LiftString(table, x), base);
  const size_t before = stream.Utility();
  for (MergeId merge : addition) ApplyMergeInPlace(table, stream, merge);
  return stream.Utility() - before;
}

MergeSequence Concat(std::span<const MergeId> a, std::span<const MergeId> b) {
  MergeSequence out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

SymbolString StreamYield(const MergeTable& table, const TokenStream& stream) {
  SymbolString out;
  out.reserve(stream.source_len);
  for (MergeId token : stream.tokens) out += table.Yield(token);
  return out;
}

std::string RenderSequence(const MergeTable& table,
                           std::span<const MergeId> sequence) {
  std::string out = "<";
  for (size_t i = 0; i < sequence.size(); ++i) {
    if (i > 0) out += ", ";
    out += table.Render(sequence[i]);
  }
  return out + ">";
}

}  // namespace bpe
