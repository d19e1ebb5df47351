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

#include "bpe/corpus.h"

#include <algorithm>
#include <tuple>
#include <utility>

#include "absl/container/btree_set.h"
#include "bpe/error.h"
#include "bpe/pair_stats.h"

namespace bpe {

Corpus::Corpus(CorpusMode mode, Symbol boundary)
    : mode_(mode), boundary_(boundary) {}

size_t Corpus::Count(SymbolView word) const {
  auto it = index_.find(SymbolString(word));
  return it == index_.end() ? 0 : words_[it->second].count;
}

void Corpus::Add(SymbolView word) { Add(word, 1); }

void Corpus::Add(SymbolView word, size_t count) {
  if (word.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty word");
  }
  if (mode_ == CorpusMode::kWordBoundary &&
      word.find(boundary_) != SymbolView::npos) {
    throw Error(ErrorCode::kInvalidArgument,
                "word contains the boundary symbol: " + EncodeUtf8(word));
  }
  auto [it, inserted] =
      index_.try_emplace(SymbolString(word), uint32_t(words_.size()));
  if (inserted) words_.push_back(WordCount{SymbolString(word), 0});
  words_[it->second].count += count;
  occurrences_.insert(occurrences_.end(), count, it->second);
}

SymbolString Corpus::NormalizedText() const {
  SymbolString out;
  for (size_t i = 0; i < occurrences_.size(); ++i) {
    if (i > 0) out.push_back(boundary_);
    out += words_[occurrences_[i]].word;
  }
  return out;
}

Corpus Ingest(SymbolView text, const IngestOptions& options) {
  const Symbol boundary = options.boundary.value_or(U' ');
  Corpus corpus(options.mode, boundary);
  if (options.mode == CorpusMode::kRaw) {
    if (!text.empty()) corpus.Add(text);
    return corpus;
  }
  const auto is_boundary = [&](Symbol s) {
    return options.boundary ? s == *options.boundary : IsUnicodeWhitespace(s);
  };
  size_t start = 0;
  while (start < text.size()) {
    while (start < text.size() && is_boundary(text[start])) ++start;
    size_t end = start;
    while (end < text.size() && !is_boundary(text[end])) ++end;
    if (end > start) corpus.Add(text.substr(start, end - start));
    start = end;
  }
  return corpus;
}

namespace {

TokenStream StreamOfCorpus(const MergeTable& table, const Corpus& corpus,
                           const std::vector<TokenStream>& words) {
  TokenStream out;
  const auto& occ = corpus.occurrences();
  for (size_t i = 0; i < occ.size(); ++i) {
    if (i > 0) {
      out.tokens.push_back(table.Trivial(corpus.boundary()));
      ++out.source_len;
    }
    const TokenStream& w = words[occ[i]];
    out.tokens.insert(out.tokens.end(), w.tokens.begin(), w.tokens.end());
    out.source_len += w.source_len;
  }
  return out;
}

struct WeightedPair {
  size_t count = 0;
  // Unique words containing the pair.
  absl::btree_set<uint32_t> words;
};

}  // namespace

TrainResult TrainGreedyWeighted(MergeTable& table, const Corpus& corpus,
                                size_t merges) {
  const auto& words = corpus.words();
  std::vector<TokenStream> streams;
  std::vector<PairFreqTable> freqs;
  streams.reserve(words.size());
  freqs.reserve(words.size());
  absl::flat_hash_map<MergePair, WeightedPair> pairs;
  const auto add_word = [&](uint32_t w) {
    for (const auto& [pair, stat] : freqs[w]) {
      WeightedPair& entry = pairs[pair];
      entry.count += stat.count * words[w].count;
      entry.words.insert(w);
    }
  };
  const auto remove_word = [&](uint32_t w) {
    for (const auto& [pair, stat] : freqs[w]) {
      auto it = pairs.find(pair);
      it->second.count -= stat.count * words[w].count;
      it->second.words.erase(w);
      if (it->second.words.empty()) pairs.erase(it);
    }
  };
  for (uint32_t w = 0; w < words.size(); ++w) {
    streams.push_back(LiftString(table, words[w].word));
    freqs.push_back(PairFrequencies(streams.back().tokens));
    add_word(w);
  }

  TrainResult result;
  result.requested = merges;
  size_t utility = 0;
  for (size_t step = 0; step < merges && !pairs.empty(); ++step) {
    // Key: (count desc, first word, position in that word, yield).
    const MergePair* best = nullptr;
    std::tuple<size_t, uint32_t, size_t> best_key;
    for (const auto& [pair, entry] : pairs) {
      const uint32_t w = *entry.words.begin();
      const auto key =
          std::make_tuple(entry.count, w, freqs[w].at(pair).first_pos);
      if (best != nullptr) {
        const auto& [bc, bw, bp] = best_key;
        if (entry.count != bc) {
          if (entry.count < bc) continue;
        } else if (w != bw) {
          if (w > bw) continue;
        } else if (std::get<2>(key) != bp) {
          if (std::get<2>(key) > bp) continue;
        } else if (CompareConcatYields(table, pair, *best) >= 0) {
          continue;
        }
      }
      best = &pair;
      best_key = key;
    }
    const MergePair chosen = *best;
    const MergeId merge = table.Intern(chosen);
    const std::vector<uint32_t> touched(pairs[chosen].words.begin(),
                                        pairs[chosen].words.end());
    size_t replacements = 0;
    for (uint32_t w : touched) {
      remove_word(w);
      replacements += ApplyMergeInPlace(table, streams[w], merge) *
                      words[w].count;
      freqs[w] = PairFrequencies(streams[w].tokens);
      add_word(w);
    }
    utility += replacements;
    result.sequence.push_back(merge);
    result.steps.push_back(TrainStep{merge, replacements, utility});
  }
  result.stream = StreamOfCorpus(table, corpus, streams);
  return result;
}

namespace {

// Every bracketing of `s`, split point left to right.
const std::vector<MergeId>& Bracketings(
    MergeTable& table, const SymbolString& s,
    absl::flat_hash_map<SymbolString, std::vector<MergeId>>& memo) {
  if (auto it = memo.find(s); it != memo.end()) return it->second;
  std::vector<MergeId> out;
  if (s.size() == 1) {
    out.push_back(table.Trivial(s[0]));
  } else {
    for (size_t k = 1; k < s.size(); ++k) {
      // Copies: the recursive calls may rehash the memo.
      const std::vector<MergeId> left =
          Bracketings(table, s.substr(0, k), memo);
      const std::vector<MergeId> right = Bracketings(table, s.substr(k), memo);
      for (MergeId l : left) {
        for (MergeId r : right) out.push_back(table.Intern(l, r));
      }
    }
  }
  return memo[s] = std::move(out);
}

}  // namespace

std::vector<NonIterativeCandidate> NonIterativeVocabulary(
    MergeTable& table, const Corpus& corpus, size_t merges,
    size_t max_width) {
  if (max_width < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "non-iterative width must be at least 2");
  }
  std::vector<NonIterativeCandidate> out;
  if (merges == 0) return out;

  absl::flat_hash_map<SymbolString, size_t> frequency;
  for (const WordCount& wc : corpus.words()) {
    const SymbolView word = wc.word;
    for (size_t i = 0; i < word.size(); ++i) {
      for (size_t w = 2; w <= max_width && i + w <= word.size(); ++w) {
        frequency[SymbolString(word.substr(i, w))] += wc.count;
      }
    }
  }
  std::vector<std::pair<SymbolString, size_t>> substrings(frequency.begin(),
                                                          frequency.end());
  std::sort(substrings.begin(), substrings.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              if (a.first.size() != b.first.size()) {
                return a.first.size() < b.first.size();
              }
              return a.first < b.first;
            });

  absl::flat_hash_map<SymbolString, std::vector<MergeId>> memo;
  for (const auto& [s, freq] : substrings) {
    for (MergeId m : Bracketings(table, s, memo)) {
      out.push_back(NonIterativeCandidate{m, freq});
      if (out.size() == merges) return out;
    }
  }
  return out;
}

TrainResult TrainNonIterative(MergeTable& table, const Corpus& corpus,
                              size_t merges, size_t max_width) {
  TrainResult result;
  result.requested = merges;
  std::vector<TokenStream> streams;
  for (const WordCount& wc : corpus.words()) {
    streams.push_back(LiftString(table, wc.word));
  }
  size_t utility = 0;
  for (const NonIterativeCandidate& c :
       NonIterativeVocabulary(table, corpus, merges, max_width)) {
    size_t replacements = 0;
    for (size_t w = 0; w < streams.size(); ++w) {
      replacements += ApplyMergeInPlace(table, streams[w], c.merge) *
                      corpus.words()[w].count;
    }
    utility += replacements;
    result.sequence.push_back(c.merge);
    result.steps.push_back(TrainStep{c.merge, replacements, utility});
  }
  result.stream = StreamOfCorpus(table, corpus, streams);
  return result;
}

std::string EscapeField(std::string_view field) {
  std::string out;
  out.reserve(field.size());
  for (char c : field) {
    switch (c) {
      case '\\':
        out += "\\\\";
        break;
      case '\t':
        out += "\\t";
        break;
      case '\n':
        out += "\\n";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string UnescapeField(std::string_view field) {
  std::string out;
  out.reserve(field.size());
  for (size_t i = 0; i < field.size(); ++i) {
    if (field[i] != '\\') {
      out += field[i];
      continue;
    }
    if (i + 1 == field.size()) {
      throw Error(ErrorCode::kParse, "dangling backslash");
    }
    switch (field[++i]) {
      case '\\':
        out += '\\';
        break;
      case 't':
        out += '\t';
        break;
      case 'n':
        out += '\n';
        break;
      default:
        throw Error(ErrorCode::kParse,
                    std::string("unknown escape \\") + field[i]);
    }
  }
  return out;
}

std::string SerializeCorpus(const Corpus& corpus) {
  std::string out;
  for (const WordCount& wc : corpus.words()) {
    out += EscapeField(EncodeUtf8(wc.word));
    out += '\t';
    out += std::to_string(wc.count);
    out += '\n';
  }
  return out;
}

Corpus ParseCorpus(std::string_view text, CorpusMode mode, Symbol boundary) {
  Corpus corpus(mode, boundary);
  size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view()
                                         : text.substr(eol + 1);
    if (line.empty()) continue;
    const size_t tab = line.rfind('\t');
    const auto fail = [&](const std::string& why) {
      return Error(ErrorCode::kParse,
                   "corpus line " + std::to_string(line_no) + ": " + why);
    };
    if (tab == std::string_view::npos) throw fail("missing tab");
    size_t count = 0;
    try {
      size_t used = 0;
      const std::string digits(line.substr(tab + 1));
      count = std::stoull(digits, &used);
      if (used != digits.size()) throw fail("bad count");
    } catch (const std::logic_error&) {
      throw fail("bad count");
    }
    try {
      corpus.Add(DecodeUtf8(UnescapeField(line.substr(0, tab))), count);
    } catch (const Error& e) {
      throw fail(e.what());
    }
  }
  return corpus;
}

}  // namespace bpe
