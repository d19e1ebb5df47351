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

#include "bpe/merges_io.h"

#include <algorithm>
#include <fstream>
#include <optional>
#include <utility>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "bpe/error.h"
#include "json.hpp"

namespace bpe {
namespace {

constexpr std::string_view kHeader = "bpe-merges v1";

std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (eol == std::string_view::npos) break;
    text.remove_prefix(eol + 1);
  }
  return lines;
}

Error ParseError(size_t line_no, const std::string& why) {
  return Error(ErrorCode::kParse,
               "line " + std::to_string(line_no) + ": " + why);
}

std::optional<uint32_t> ParseId(std::string_view s) {
  if (s.empty() || s.size() > 9) return std::nullopt;
  uint32_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + static_cast<uint32_t>(c - '0');
  }
  return v;
}

MergeId Reintern(const MergeTable& from, MergeId id, MergeTable& to) {
  if (from.IsTrivial(id)) return to.Trivial(from.Yield(id)[0]);
  const MergePair p = from.Constituents(id);
  const MergeId l = Reintern(from, p.left, to);
  const MergeId r = Reintern(from, p.right, to);
  return to.Intern(l, r);
}

}  // namespace

std::string SerializeMerges(const MergeTable& table,
                            std::span<const MergeId> sequence) {
  if (!IsValidSequence(table, sequence)) {
    throw Error(ErrorCode::kInvalidSequence,
                "cannot save an invalid merge sequence");
  }
  MergeTable compact(table.alphabet());
  for (MergeId m : sequence) Reintern(table, m, compact);

  nlohmann::json alphabet = nlohmann::json::array();
  for (Symbol s : compact.alphabet()) alphabet.push_back(EncodeUtf8(s));
  std::string out(kHeader);
  out += '\n';
  out += alphabet.dump();
  out += '\n';
  for (size_t k = compact.alphabet_size(); k < compact.size(); ++k) {
    const MergePair p = compact.Constituents(MergeId(uint32_t(k)));
    out += std::to_string(p.left.value()) + ' ' +
           std::to_string(p.right.value()) + '\n';
  }
  return out;
}

MergeFile ParseMerges(std::string_view text) {
  const std::vector<std::string_view> lines = SplitLines(text);
  if (lines.empty() || lines[0] != kHeader) {
    throw ParseError(1, "expected header '" + std::string(kHeader) + "'");
  }
  if (lines.size() < 2) throw ParseError(2, "missing alphabet line");
  std::vector<Symbol> alphabet;
  try {
    const nlohmann::json parsed = nlohmann::json::parse(lines[1]);
    if (!parsed.is_array()) throw ParseError(2, "alphabet is not an array");
    for (const auto& item : parsed) {
      const SymbolString s = DecodeUtf8(item.get<std::string>());
      if (s.size() != 1) {
        throw ParseError(2, "alphabet entry is not a single symbol");
      }
      alphabet.push_back(s[0]);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(2, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParse &&
        std::string_view(e.what()).starts_with("parse: line")) {
      throw;
    }
    throw ParseError(2, e.what());
  }
  std::vector<Symbol> sorted = alphabet;
  std::sort(sorted.begin(), sorted.end());
  if (alphabet.empty() || sorted != alphabet ||
      std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ParseError(2, "alphabet must be non-empty, sorted and distinct");
  }

  MergeFile file{MergeTable(alphabet), {}};
  for (size_t i = 2; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    if (line.empty()) continue;
    const size_t space = line.find(' ');
    if (space == std::string_view::npos) {
      throw ParseError(i + 1, "expected 'left_id right_id'");
    }
    const auto l = ParseId(line.substr(0, space));
    const auto r = ParseId(line.substr(space + 1));
    if (!l || !r) throw ParseError(i + 1, "malformed id");
    const size_t size = file.table.size();
    if (*l >= size || *r >= size) {
      throw ParseError(i + 1, "id refers to an undefined merge");
    }
    const MergeId m = file.table.Intern(MergeId(*l), MergeId(*r));
    if (m.value() != size) throw ParseError(i + 1, "duplicate merge");
    file.sequence.push_back(m);
  }
  return file;
}

MergeFile ParseYieldPairs(std::string_view text,
                          std::span<const Symbol> alphabet) {
  std::vector<std::pair<SymbolString, SymbolString>> pairs;
  size_t line_no = 0;
  for (std::string_view line : SplitLines(text)) {
    ++line_no;
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    std::string left, right;
    if (line.front() == '[') {
      try {
        const nlohmann::json parsed = nlohmann::json::parse(line);
        if (!parsed.is_array() || parsed.size() != 2) {
          throw ParseError(line_no, "expected a two-element array");
        }
        left = parsed[0].get<std::string>();
        right = parsed[1].get<std::string>();
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(line_no, e.what());
      }
    } else {
      const size_t a = line.find_first_not_of(" \t");
      const size_t b = line.find_first_of(" \t", a);
      const size_t c = line.find_first_not_of(" \t", b);
      const size_t d = c == std::string_view::npos
                           ? std::string_view::npos
                           : line.find_first_of(" \t", c);
      if (b == std::string_view::npos || c == std::string_view::npos ||
          (d != std::string_view::npos &&
           line.find_first_not_of(" \t", d) != std::string_view::npos)) {
        throw ParseError(line_no, "expected 'left right'");
      }
      left = std::string(line.substr(a, b - a));
      right = std::string(line.substr(c, d == std::string_view::npos
                                             ? std::string_view::npos
                                             : d - c));
    }
    try {
      pairs.emplace_back(DecodeUtf8(left), DecodeUtf8(right));
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
    if (pairs.back().first.empty() || pairs.back().second.empty()) {
      throw ParseError(line_no, "empty yield");
    }
  }

  std::vector<Symbol> symbols(alphabet.begin(), alphabet.end());
  for (const auto& [l, r] : pairs) {
    symbols.insert(symbols.end(), l.begin(), l.end());
    symbols.insert(symbols.end(), r.begin(), r.end());
  }
  if (symbols.empty()) {
    throw Error(ErrorCode::kParse, "no merges and no alphabet");
  }
  MergeFile file{MergeTable(symbols), {}};
  absl::flat_hash_map<SymbolString, MergeId> latest;
  for (Symbol s : file.table.alphabet()) {
    latest[SymbolString(1, s)] = file.table.Trivial(s);
  }
  for (size_t i = 0; i < pairs.size(); ++i) {
    const auto& [l, r] = pairs[i];
    auto li = latest.find(l);
    auto ri = latest.find(r);
    if (li == latest.end() || ri == latest.end()) {
      throw Error(ErrorCode::kAmbiguity,
                  "merge " + std::to_string(i + 1) + " (" + EncodeUtf8(l) +
                      " " + EncodeUtf8(r) +
                      "): no earlier merge has yield '" +
                      EncodeUtf8(li == latest.end() ? l : r) + "'");
    }
    const MergeId m = file.table.Intern(li->second, ri->second);
    latest[file.table.Yield(m)] = m;
    file.sequence.push_back(m);
  }
  return file;
}

void SaveMerges(const std::string& path, const MergeTable& table,
                std::span<const MergeId> sequence) {
  const std::string text = SerializeMerges(table, sequence);
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
}

MergeFile LoadMerges(const std::string& path,
                     std::span<const Symbol> extra_symbols) {
  const std::string text = ReadFile(path);
  if (text.starts_with(kHeader)) return ParseMerges(text);
  return ParseYieldPairs(text, extra_symbols);
}

}  // namespace bpe
