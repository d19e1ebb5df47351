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

#ifndef BPE_CORPUS_H_
#define BPE_CORPUS_H_

// Text ingestion, word-boundary training over unique words, and the
// non-iterative trainer.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "bpe/core.h"
#include "bpe/greedy.h"

namespace bpe {

enum class CorpusMode {
  // The whole text is a single pseudo-word.
  kRaw,
  // Words are separated by boundaries, which never take part in merges.
  kWordBoundary,
};

struct IngestOptions {
  CorpusMode mode = CorpusMode::kWordBoundary;
  // Word separator. Unset: any run of unicode whitespace is one boundary,
  // written as U+0020 in the normalized text.
  std::optional<Symbol> boundary;
};

struct WordCount {
  SymbolString word;
  size_t count = 0;

  friend bool operator==(const WordCount&, const WordCount&) = default;
};

class Corpus {
 public:
  explicit Corpus(CorpusMode mode = CorpusMode::kWordBoundary,
                  Symbol boundary = U' ');

  CorpusMode mode() const { return mode_; }
  Symbol boundary() const { return boundary_; }

  // Unique words in order of first appearance.
  const std::vector<WordCount>& words() const { return words_; }
  // Word occurrences in text order, as indices into words().
  const std::vector<uint32_t>& occurrences() const { return occurrences_; }
  // Σ counts.
  size_t total_tokens() const { return occurrences_.size(); }
  size_t Count(SymbolView word) const;

  // Appends one occurrence. Throws Error(kInvalidArgument) for an empty word
  // or, in word-boundary mode, a word containing the boundary.
  void Add(SymbolView word);
  // Adds `count` occurrences at the end of the text.
  void Add(SymbolView word, size_t count);

  // Occurrences joined by single boundaries.
  SymbolString NormalizedText() const;

 private:
  CorpusMode mode_;
  Symbol boundary_;
  std::vector<WordCount> words_;
  std::vector<uint32_t> occurrences_;
  absl::flat_hash_map<SymbolString, uint32_t> index_;
};

Corpus Ingest(SymbolView text, const IngestOptions& options = {});

// Greedy training where a pair's count is Σ over unique words of its
// non-overlapping in-word count times the word count. Ties go to the pair
// whose first occurrence is in the earliest word, then earliest in that
// word, then to the smaller concatenated yield. The result (stream over the
// normalized text included) equals TrainGreedySlow() on NormalizedText()
// with the boundary barred. The table's alphabet must cover the corpus and,
// in word-boundary mode with more than one word, the boundary.
TrainResult TrainGreedyWeighted(MergeTable& table, const Corpus& corpus,
                                size_t merges);

struct NonIterativeCandidate {
  MergeId merge;
  // Overlapping weighted occurrence count of the yield.
  size_t frequency = 0;
};

// Every substring of width 2..max_width inside a word is a candidate, with
// every binary bracketing of it. Candidates are ordered by frequency
// (descending), width, yield, then bracketing (split point left to right,
// recursively); the first `merges` of them form the vocabulary, which is
// always a valid sequence. Throws Error(kInvalidArgument) if max_width < 2.
std::vector<NonIterativeCandidate> NonIterativeVocabulary(
    MergeTable& table, const Corpus& corpus, size_t merges,
    size_t max_width);

// Applies NonIterativeVocabulary() in order to the normalized text.
TrainResult TrainNonIterative(MergeTable& table, const Corpus& corpus,
                              size_t merges, size_t max_width);

// Corpus cache: one `word<TAB>count` line per unique word, backslash
// escapes for \\, \t and \n.
std::string SerializeCorpus(const Corpus& corpus);
Corpus ParseCorpus(std::string_view text,
                   CorpusMode mode = CorpusMode::kWordBoundary,
                   Symbol boundary = U' ');

// Escaping shared by the TSV outputs.
std::string EscapeField(std::string_view field);
std::string UnescapeField(std::string_view field);

}  // namespace bpe

#endif  // BPE_CORPUS_H_
