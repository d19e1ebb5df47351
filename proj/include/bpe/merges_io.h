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

#ifndef BPE_MERGES_IO_H_
#define BPE_MERGES_IO_H_

// Merge-file serialization.
//
//   bpe-merges v1
//   ["a","b","c"]
//   0 1
//   3 2
//
// Line 2 is the alphabet as a JSON string array (trivial ids in order); each
// further line is one composite merge as `left_id right_id`, with ids
// counting trivial merges first and composites in file order.

#include <span>
#include <string>
#include <string_view>

#include "bpe/core.h"

namespace bpe {

struct MergeFile {
  MergeTable table;
  // The composites of `table` in order.
  MergeSequence sequence;
};

// Writes the distinct merges of a valid sequence into a fresh table over the
// same alphabet, so that file ids are dense. Throws Error(kInvalidSequence)
// for an invalid sequence.
std::string SerializeMerges(const MergeTable& table,
                            std::span<const MergeId> sequence);

// Throws Error(kParse) with the offending line number.
MergeFile ParseMerges(std::string_view text);

// Yield-pair import: one merge per line, either `left right` (split at
// whitespace) or a JSON array `["left", "right"]`. Each side resolves to the
// most recently built merge with that yield, single symbols to trivial
// merges. A side with no such merge raises Error(kAmbiguity). The alphabet is
// the symbols seen in the file plus `alphabet`.
MergeFile ParseYieldPairs(std::string_view text,
                          std::span<const Symbol> alphabet = {});

void SaveMerges(const std::string& path, const MergeTable& table,
                std::span<const MergeId> sequence);
// Reads either format. `extra_symbols` widens the alphabet of yield-pair
// files; `bpe-merges v1` files carry their own alphabet.
MergeFile LoadMerges(const std::string& path,
                     std::span<const Symbol> extra_symbols = {});

}  // namespace bpe

#endif  // BPE_MERGES_IO_H_
