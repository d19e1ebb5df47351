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

// Command-line front end: pair statistics, greedy / non-iterative training,
// encoding with a trained merge file, exact search, and the analysis audit.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "bpe/analysis.h"
#include "bpe/core.h"
#include "bpe/corpus.h"
#include "bpe/error.h"
#include "bpe/exact.h"
#include "bpe/greedy.h"
#include "bpe/merges_io.h"
#include "bpe/pair_stats.h"
#include "bpe/text.h"
#include "json.hpp"

namespace bpe {
namespace {

// Input files are read verbatim except for one trailing newline.
SymbolString ReadInput(const std::string& path, bool bytes) {
  std::string raw = ReadFile(path);
  if (!raw.empty() && raw.back() == '\n') raw.pop_back();
  return bytes ? DecodeBytes(raw) : DecodeUtf8(raw);
}

std::string Output(SymbolView s, bool bytes) {
  if (!bytes) return EncodeUtf8(s);
  std::string out;
  for (Symbol c : s) out += static_cast<char>(c);
  return out;
}

std::string Field(SymbolView s, bool bytes) {
  return EscapeField(Output(s, bytes));
}

Symbol ParseBoundary(const std::string& text) {
  const SymbolString s = DecodeUtf8(text);
  if (s.size() != 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "--boundary must be a single symbol");
  }
  return s[0];
}

int RunStats(const std::string& input, bool overlapping, bool bytes) {
  const SymbolString x = ReadInput(input, bytes);
  if (x.empty()) return 0;
  MergeTable table = MergeTable::ForText(x);
  const PairFreqTable freqs =
      PairFrequencies(LiftString(table, x).tokens,
                      overlapping ? CountMode::kOverlapping
                                  : CountMode::kNonOverlapping);
  for (const auto& [pair, stat] : SortedPairs(table, freqs)) {
    std::cout << Field(table.Yield(pair.left), bytes) << '\t'
              << Field(table.Yield(pair.right), bytes) << '\t' << stat.count
              << '\n';
  }
  return 0;
}

struct TrainArgs {
  std::string algo = "fast";
  std::string mode = "raw";
  size_t merges = 0;
  std::string input;
  std::string output;
  bool stats = false;
  size_t width = 4;
  bool bytes = false;
  std::string boundary;
};

int RunTrain(const TrainArgs& args) {
  const SymbolString text = ReadInput(args.input, args.bytes);
  IngestOptions ingest;
  ingest.mode = args.mode == "words" ? CorpusMode::kWordBoundary
                                     : CorpusMode::kRaw;
  if (!args.boundary.empty()) ingest.boundary = ParseBoundary(args.boundary);
  const Corpus corpus = Ingest(text, ingest);
  const SymbolString normalized =
      ingest.mode == CorpusMode::kRaw ? text : corpus.NormalizedText();
  if (normalized.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "input is empty");
  }
  MergeTable table = MergeTable::ForText(normalized);

  const auto start = std::chrono::steady_clock::now();
  TrainResult result;
  if (args.algo == "nonit") {
    result = TrainNonIterative(table, corpus, args.merges, args.width);
  } else if (ingest.mode == CorpusMode::kWordBoundary && args.algo == "slow") {
    result = TrainGreedyWeighted(table, corpus, args.merges);
  } else {
    TrainOptions options;
    if (ingest.mode == CorpusMode::kWordBoundary) {
      options.barred = corpus.boundary();
    }
    result = args.algo == "slow"
                 ? TrainGreedySlow(table, normalized, args.merges, options)
                 : TrainGreedyFast(table, normalized, args.merges, options);
  }
  const double seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();

  SaveMerges(args.output, table, result.sequence);
  if (args.stats) {
    std::cout << "step\tmerge\treplacements\tutility\n";
    for (size_t i = 0; i < result.steps.size(); ++i) {
      const TrainStep& s = result.steps[i];
      std::cout << i + 1 << '\t' << Field(table.Yield(s.merge), args.bytes)
                << '\t' << s.replacements << '\t' << s.utility << '\n';
    }
  }
  std::cerr << "merges " << result.sequence.size() << "/" << args.merges
            << ", symbols " << normalized.size() << " -> "
            << result.stream.tokens.size() << " tokens (utility "
            << result.Utility() << "), " << seconds << " s\n";
  return 0;
}

int RunEncode(const std::string& merges, const std::string& input, bool ids,
              bool bytes) {
  const SymbolString x = ReadInput(input, bytes);
  const MergeFile file = LoadMerges(merges, x);
  const TokenStream out =
      ApplySequence(file.table, LiftString(file.table, x), file.sequence);
  for (MergeId t : out.tokens) {
    if (ids) {
      std::cout << t.value() << '\n';
    } else {
      std::cout << Field(file.table.Yield(t), bytes) << '\n';
    }
  }
  return 0;
}

int RunExact(size_t merges, const std::string& input, bool brute, bool memo,
             bool bytes) {
  const SymbolString x = ReadInput(input, bytes);
  if (x.empty()) throw Error(ErrorCode::kInvalidArgument, "input is empty");
  MergeTable table = MergeTable::ForText(x);
  SearchOptions options;
  options.pruning = brute ? Pruning::kNone : Pruning::kCanonical;
  options.memoize = memo;
  const auto start = std::chrono::steady_clock::now();
  const SearchReport report = TrainExact(table, x, merges, options);
  const double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
  nlohmann::json pairs = nlohmann::json::array();
  for (MergeId m : report.best_sequence) {
    const MergePair p = table.Constituents(m);
    pairs.push_back({Output(table.Yield(p.left), bytes),
                     Output(table.Yield(p.right), bytes)});
  }
  std::cout << "best_utility\t" << report.best_utility << '\n'
            << "tokens\t" << x.size() - report.best_utility << '\n'
            << "sequence\t" << pairs.dump() << '\n'
            << "states_visited\t" << report.states_visited << '\n'
            << "pruned\t" << report.pruned << '\n'
            << "wall_ms\t" << ms << '\n';
  return 0;
}

nlohmann::json CountsJson(const PropertyCounts& c) {
  return {{"checked", c.checked}, {"skipped", c.skipped},
          {"violated", c.violated}};
}

nlohmann::json WitnessJson(const CurvatureWitness& w) {
  return {{"x", EncodeUtf8(w.x)},
          {"merges", w.merges},
          {"prefix", w.prefix},
          {"optimum", w.optimum}};
}

struct AuditArgs {
  size_t alphabet = 2;
  size_t max_len = 6;
  size_t max_merges = 2;
  std::string english;
  size_t limit = 2000;
  size_t workers = 0;
};

int RunAudit(const AuditArgs& args) {
  const Grid grid{args.alphabet, args.max_len, args.max_merges};
  AuditOptions options;
  options.workers = args.workers != 0
                        ? args.workers
                        : std::max(1u, std::thread::hardware_concurrency());
  std::vector<SymbolString> strings;
  if (args.english.empty()) {
    strings = EnumerateCanonicalStrings(grid.alphabet_size, grid.max_len);
  } else {
    strings = SubstringGrid(ReadInput(args.english, false), grid.alphabet_size,
                            grid.max_len, args.limit);
  }
  const auto start = std::chrono::steady_clock::now();
  const AuditReport report = bpe::RunAudit(strings, grid, options);
  const double seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();

  const CurvatureReport& c = report.curvature;
  nlohmann::json out;
  out["grid"] = {{"alphabet", grid.alphabet_size},
                 {"max_len", grid.max_len},
                 {"max_merges", grid.max_merges},
                 {"source", args.english.empty() ? "exhaustive" : "english"},
                 {"strings", c.strings}};
  out["sigma"] = c.sigma;
  out["bound"] = c.bound;
  out["sigma_witness"] = WitnessJson(c.witness);
  out["sigma_prime"] =
      c.sigma_prime ? nlohmann::json(*c.sigma_prime) : nlohmann::json();
  out["bound_prime"] =
      c.bound_prime ? nlohmann::json(*c.bound_prime) : nlohmann::json();
  out["sigma_prime_witness"] = WitnessJson(c.witness_prime);
  out["lower_bound"] = c.lower_bound;
  out["properties"] = {{"monotonicity", CountsJson(report.monotonicity)},
                       {"submodularity", CountsJson(report.submodularity)},
                       {"hierarchical", CountsJson(report.hierarchical)},
                       {"avg_gain", CountsJson(report.avg_gain)}};
  nlohmann::json violations = nlohmann::json::array();
  for (const PropertyViolation& v : report.violations) {
    violations.push_back(v.ToString());
  }
  out["violations"] = violations;
  out["ratios"] = {{"instances", report.ratios.instances},
                   {"failures", report.ratios.failures},
                   {"min_ratio", report.ratios.min_ratio},
                   {"min_ratio_x", report.ratios.min_ratio_x},
                   {"min_ratio_merges", report.ratios.min_ratio_merges}};
  nlohmann::json failures = nlohmann::json::array();
  for (const InstanceReport& r : report.ratio_failures) {
    failures.push_back({{"x", EncodeUtf8(r.x)},
                        {"merges", r.merges},
                        {"ratio", r.ratio()},
                        {"bound", r.bound()}});
  }
  out["ratio_failures"] = failures;
  out["seconds"] = seconds;
  std::cout << out.dump(2) << '\n';
  return report.TotalViolations() == 0 && report.ratios.failures == 0 ? 0 : 2;
}

int Main(int argc, char** argv) {
  CLI::App app{"Byte-pair encoding training as combinatorial optimization"};
  app.require_subcommand(1);

  std::string stats_input;
  bool overlapping = false;
  bool stats_bytes = false;
  CLI::App* stats = app.add_subcommand("stats", "Pair counts as TSV");
  stats->add_option("file", stats_input)->required()->check(CLI::ExistingFile);
  stats->add_flag("--overlapping", overlapping, "Raw bigram counts");
  stats->add_flag("--bytes", stats_bytes, "One symbol per byte");

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "Train a merge sequence");
  train->add_option("--algo", train_args.algo)
      ->check(CLI::IsMember({"slow", "fast", "nonit"}));
  train->add_option("--mode", train_args.mode)
      ->check(CLI::IsMember({"raw", "words"}));
  train->add_option("--merges", train_args.merges)->required();
  train->add_option("--input", train_args.input)
      ->required()
      ->check(CLI::ExistingFile);
  train->add_option("--output", train_args.output)->required();
  train->add_flag("--stats", train_args.stats, "Per-step TSV on stdout");
  train->add_option("--width", train_args.width,
                    "Maximum candidate width for --algo nonit");
  train->add_flag("--bytes", train_args.bytes, "One symbol per byte");
  train->add_option("--boundary", train_args.boundary,
                    "Word separator for --mode words (default: whitespace)");

  std::string encode_merges, encode_input;
  bool encode_ids = false;
  bool encode_bytes = false;
  CLI::App* encode = app.add_subcommand("encode", "Apply a merge file");
  encode->add_option("--merges", encode_merges)
      ->required()
      ->check(CLI::ExistingFile);
  encode->add_option("--input", encode_input)
      ->required()
      ->check(CLI::ExistingFile);
  encode->add_flag("--ids", encode_ids, "Print token ids instead of yields");
  encode->add_flag("--bytes", encode_bytes, "One symbol per byte");

  size_t exact_merges = 0;
  std::string exact_input;
  bool brute = false;
  bool memo = false;
  bool exact_bytes = false;
  CLI::App* exact = app.add_subcommand("exact", "Optimal merge sequence");
  exact->add_option("--merges", exact_merges)->required();
  exact->add_option("--input", exact_input)
      ->required()
      ->check(CLI::ExistingFile);
  exact->add_flag("--brute", brute, "Disable pruning");
  exact->add_flag("--memo", memo, "Skip repeated states");
  exact->add_flag("--bytes", exact_bytes, "One symbol per byte");

  AuditArgs audit_args;
  CLI::App* audit = app.add_subcommand("audit", "Property and curvature audit");
  audit->add_option("--alphabet", audit_args.alphabet)->required();
  audit->add_option("--max-len", audit_args.max_len)->required();
  audit->add_option("--max-merges", audit_args.max_merges)->required();
  audit->add_option("--english", audit_args.english,
                    "Use substrings of this text instead of all strings")
      ->check(CLI::ExistingFile);
  audit->add_option("--limit", audit_args.limit,
                    "Maximum distinct substrings with --english");
  audit->add_option("--workers", audit_args.workers,
                    "Threads (default: hardware concurrency)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*stats) return RunStats(stats_input, overlapping, stats_bytes);
    if (*train) return RunTrain(train_args);
    if (*encode) {
      return RunEncode(encode_merges, encode_input, encode_ids, encode_bytes);
    }
    if (*exact) {
      return RunExact(exact_merges, exact_input, brute, memo, exact_bytes);
    }
    if (*audit) return RunAudit(audit_args);
  } catch (const Error& e) {
    std::cerr << "bpe: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace
}  // namespace bpe

int main(int argc, char** argv) { return bpe::Main(argc, argv); }
