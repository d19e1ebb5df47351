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

// Acceptance suite. Each criterion prints one PASS/FAIL line; the exit code
// is non-zero when any selected criterion fails.
//
//   bpe_acceptance                 run all criteria
//   bpe_acceptance --criterion 4   run one

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "bpe/analysis.h"
#include "bpe/core.h"
#include "bpe/corpus.h"
#include "bpe/exact.h"
#include "bpe/greedy.h"
#include "bpe/text.h"

namespace bpe {
namespace {

// Frozen from tests/oracles/bpe_oracle.py --full: grid_sigma('abc', 8, 3).
constexpr double kOracleSigma383 = 4.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Timer {
 public:
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

std::string Fmt(double v, int digits = 4) {
  std::ostringstream out;
  out.precision(digits);
  out << std::fixed << v;
  return out.str();
}

std::multiset<std::string> YieldMultiset(const MergeTable& table,
                                         const TokenStream& stream) {
  std::multiset<std::string> out;
  for (MergeId t : stream.tokens) out.insert(EncodeUtf8(table.Yield(t)));
  return out;
}

Outcome WorkedExample() {
  Timer timer;
  const SymbolString x = DecodeUtf8("picked pickled pickles");
  const std::multiset<std::string> expected = {
      "pick", "ed", " ", "pickl", "ed", " ", "pickl", "e", "s"};
  bool ok = true;
  std::string detail;
  for (bool fast : {false, true}) {
    const char* name = fast ? "fast" : "slow";
    // Raw mode: every symbol, the space included, may merge.
    MergeTable raw_table = MergeTable::ForText(x);
    const TrainResult raw = fast ? TrainGreedyFast(raw_table, x, 5)
                                 : TrainGreedySlow(raw_table, x, 5);
    // Word-boundary mode: the space never merges.
    TrainOptions barred;
    barred.barred = U' ';
    MergeTable word_table = MergeTable::ForText(x);
    const TrainResult words = fast ? TrainGreedyFast(word_table, x, 5, barred)
                                   : TrainGreedySlow(word_table, x, 5, barred);
    const bool raw_ok = raw.Utility() == 13 && raw.stream.tokens.size() == 9;
    const bool words_ok = words.Utility() == 13 &&
                          words.stream.tokens.size() == 9 &&
                          YieldMultiset(word_table, words.stream) == expected;
    ok &= raw_ok && words_ok;
    detail += std::string(name) + ": raw κ=" + std::to_string(raw.Utility()) +
              " tokens=" + std::to_string(raw.stream.tokens.size()) +
              ", space-barred κ=" + std::to_string(words.Utility()) +
              " multiset " + (words_ok ? "matches" : "differs") + "; ";
  }
  const double t = timer.Seconds();
  ok &= t < 1.0;
  return {ok, detail + Fmt(t, 3) + " s"};
}

Outcome Suboptimality() {
  Timer timer;
  const SymbolString x = U"abaabbaa";
  MergeTable table = MergeTable::ForText(x);
  const size_t greedy = TrainGreedySlow(table, x, 2).Utility();
  const size_t greedy_fast = TrainGreedyFast(table, x, 2).Utility();
  const size_t brute = TrainExact(table, x, 2, false).best_utility;
  const size_t pruned = TrainExact(table, x, 2, true).best_utility;
  const double ratio = double(greedy) / double(pruned);
  const double t = timer.Seconds();
  const bool ok = greedy == 3 && greedy_fast == 3 && brute == 4 &&
                  pruned == 4 && ratio == 0.75 && t < 1.0;
  return {ok, "greedy κ=" + std::to_string(greedy) + ", exact κ=" +
                  std::to_string(pruned) + ", ratio " + Fmt(ratio) + ", " +
                  Fmt(t, 3) + " s"};
}

Outcome OracleEquivalence() {
  Timer timer;
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<size_t> alphabet(1, 6);
  std::uniform_int_distribution<size_t> length(0, 200);
  std::uniform_int_distribution<size_t> merges(0, 20);
  size_t mismatches = 0;
  const size_t trials = 1000;
  for (size_t trial = 0; trial < trials; ++trial) {
    const size_t k = alphabet(rng);
    std::uniform_int_distribution<size_t> sym(0, k - 1);
    SymbolString x(length(rng), U'a');
    for (Symbol& s : x) s = Symbol(U'a' + sym(rng));
    const size_t m = merges(rng);
    std::vector<Symbol> symbols;
    for (size_t i = 0; i < k; ++i) symbols.push_back(Symbol(U'a' + i));
    MergeTable slow_table(symbols);
    MergeTable fast_table(symbols);
    const TrainResult slow = TrainGreedySlow(slow_table, x, m);
    const TrainResult fast = TrainGreedyFast(fast_table, x, m);
    if (!(slow == fast)) ++mismatches;
  }
  const double t = timer.Seconds();
  return {mismatches == 0 && t < 60.0,
          std::to_string(trials) + " strings, " + std::to_string(mismatches) +
              " mismatches, " + Fmt(t, 2) + " s"};
}

Outcome ExactSoundness() {
  Timer timer;
  const std::vector<SymbolString> strings = EnumerateCanonicalStrings(3, 10);
  const std::vector<SearchComparison> rows =
      CompareSearchModes(strings, 3, Pruning::kCanonical);
  size_t utility_mismatch = 0;
  size_t more_states = 0;
  size_t long_instances = 0;
  size_t long_strictly_fewer = 0;
  uint64_t brute_total = 0;
  uint64_t pruned_total = 0;
  for (const SearchComparison& r : rows) {
    if (r.brute_utility != r.pruned_utility) ++utility_mismatch;
    if (r.pruned_states > r.brute_states) ++more_states;
    brute_total += r.brute_states;
    pruned_total += r.pruned_states;
    if (r.x.size() >= 8) {
      ++long_instances;
      if (r.pruned_states < r.brute_states) ++long_strictly_fewer;
    }
  }
  const double share = double(long_strictly_fewer) / double(long_instances);
  const double t = timer.Seconds();
  const bool ok = utility_mismatch == 0 && more_states == 0 && share >= 0.5 &&
                  t < 600.0;
  return {ok, std::to_string(strings.size()) + " strings x M=1..3: " +
                  std::to_string(utility_mismatch) +
                  " utility mismatches, " + std::to_string(more_states) +
                  " instances with more states; strictly fewer states on " +
                  Fmt(100 * share, 1) + "% of |x|>=8 instances; states " +
                  std::to_string(pruned_total) + " pruned vs " +
                  std::to_string(brute_total) + " brute; " + Fmt(t, 1) +
                  " s"};
}

AuditOptions GridOptions(bool properties) {
  AuditOptions options;
  options.workers = std::max(1u, std::thread::hardware_concurrency());
  options.check_properties = properties;
  return options;
}

Outcome PropertySuites() {
  Timer timer;
  const AuditReport report = AuditGrid(Grid{3, 10, 3}, GridOptions(true));
  const double t = timer.Seconds();
  std::string detail;
  const auto counts = [&](const char* name, const PropertyCounts& c) {
    detail += std::string(name) + " " + std::to_string(c.violated) + "/" +
              std::to_string(c.checked) + ", ";
  };
  counts("monotonicity", report.monotonicity);
  counts("submodularity", report.submodularity);
  counts("hierarchical", report.hierarchical);
  counts("avg-gain", report.avg_gain);
  for (const PropertyViolation& v : report.violations) {
    std::cout << "  " << v.ToString() << '\n';
  }
  return {report.TotalViolations() == 0 && t < 600.0,
          "violations/checks: " + detail + Fmt(t, 1) + " s"};
}

Outcome RatioAudit() {
  Timer timer;
  const AuditReport report = AuditGrid(Grid{3, 10, 3}, GridOptions(false));
  const double t = timer.Seconds();
  for (const InstanceReport& r : report.ratio_failures) {
    std::cout << "  ratio " << r.ratio() << " < bound " << r.bound() << " on "
              << EncodeUtf8(r.x) << " M=" << r.merges << '\n';
  }
  const RatioSummary& s = report.ratios;
  return {s.failures == 0 && t < 900.0,
          std::to_string(s.instances) + " instances with κ*>0, " +
              std::to_string(s.failures) +
              " below the instance bound; min ratio " + Fmt(s.min_ratio) +
              " at " + s.min_ratio_x + " M=" +
              std::to_string(s.min_ratio_merges) + " (" +
              (s.min_ratio >= 0.37 ? ">=" : "<") + " 0.37 reported); " +
              Fmt(t, 1) + " s"};
}

Outcome BoundFormula() {
  const double b25 = BoundFromSigma(2.5);
  const double b20 = BoundFromSigma(2.0);
  const double b15 = BoundFromSigma(1.5);
  const bool ok = std::abs(b25 - 0.3667) <= 0.001 &&
                  std::abs(b20 - 0.432) <= 0.001 &&
                  std::abs(b15 - 0.518) <= 0.001;
  return {ok, "bound(2.5)=" + Fmt(b25) + " bound(2.0)=" + Fmt(b20) +
                  " bound(1.5)=" + Fmt(b15)};
}

Outcome ReducedCurvatureGrid() {
  Timer timer;
  const CurvatureReport report =
      EstimateSigma(Grid{3, 8, 3}, GridOptions(false));
  const double t = timer.Seconds();
  const bool matches = report.sigma == kOracleSigma383;
  const bool at_most = report.sigma <= 2.5;
  return {matches && at_most && !report.lower_bound,
          "σ=" + Fmt(report.sigma) + " (oracle " + Fmt(kOracleSigma383) +
              ", " + (matches ? "match" : "MISMATCH") + "; " +
              (at_most ? "<=" : ">") + " 2.5) at " +
              EncodeUtf8(report.witness.x) + " M=" +
              std::to_string(report.witness.merges) + " prefix " +
              report.witness.prefix + " optimum " + report.witness.optimum +
              "; " + Fmt(t, 1) + " s"};
}

SymbolString SyntheticText(size_t n, uint64_t seed) {
  // Words drawn from a Zipf-like vocabulary, separated by spaces.
  std::mt19937_64 rng(seed);
  std::vector<SymbolString> vocab;
  std::uniform_int_distribution<size_t> len(2, 9);
  std::uniform_int_distribution<int> letter(0, 25);
  for (int i = 0; i < 5000; ++i) {
    SymbolString w(len(rng), U'a');
    for (Symbol& s : w) s = Symbol(U'a' + letter(rng));
    vocab.push_back(w);
  }
  std::vector<double> weights;
  for (size_t i = 0; i < vocab.size(); ++i) weights.push_back(1.0 / (i + 1));
  std::discrete_distribution<size_t> pick(weights.begin(), weights.end());
  SymbolString out;
  while (out.size() < n) {
    if (!out.empty()) out.push_back(U' ');
    out += vocab[pick(rng)];
  }
  out.resize(n);
  return out;
}

// Seconds for one training run with M = 256, or a negative value if the
// trainer stopped early.
double TimeTraining(const SymbolString& x, bool fast) {
  MergeTable table = MergeTable::ForText(x);
  Timer timer;
  const TrainResult result = fast ? TrainGreedyFast(table, x, 256)
                                  : TrainGreedySlow(table, x, 256);
  const double t = timer.Seconds();
  return result.sequence.size() == 256 ? t : -1;
}

// Minimum time per prefix length over `rounds` passes through the whole
// series, after one untimed warm-up pass. Interleaving the sizes spreads
// transient machine load over all of them.
std::vector<double> TimeSeries(const std::vector<SymbolString>& series,
                               bool fast, int rounds) {
  std::vector<double> best(series.size(), 1e300);
  for (int r = -1; r < rounds; ++r) {
    for (size_t i = 0; i < series.size(); ++i) {
      const double t = TimeTraining(series[i], fast);
      if (t < 0) best[i] = -1;
      if (r >= 0 && best[i] >= 0) best[i] = std::min(best[i], t);
    }
  }
  return best;
}

Outcome ScalingBenchmark() {
  Timer total;
  const SymbolString full = SyntheticText(size_t(1) << 20, 7);
  std::vector<SymbolString> series;
  for (int p = 16; p <= 20; ++p) series.push_back(full.substr(0, size_t(1) << p));
  const std::vector<double> fast_times = TimeSeries(series, true, 7);
  const std::vector<double> slow_times = TimeSeries(series, false, 2);
  std::string detail = "fast";
  for (size_t i = 0; i < series.size(); ++i) {
    detail += " 2^" + std::to_string(16 + i) + ":" + Fmt(fast_times[i], 3) +
              "s";
  }
  detail += "; slow";
  for (size_t i = 0; i < series.size(); ++i) {
    detail += " 2^" + std::to_string(16 + i) + ":" + Fmt(slow_times[i], 2) +
              "s";
  }
  bool fast_ok = true;
  double worst_fast = 0;
  for (size_t i = 1; i < fast_times.size(); ++i) {
    const double r = fast_times[i] / fast_times[i - 1];
    worst_fast = std::max(worst_fast, r);
    fast_ok &= fast_times[i - 1] > 0 && r <= 2.5;
  }
  const double slow_last = slow_times.back() / slow_times[slow_times.size() - 2];
  const bool slow_ok = slow_times.back() > 0 && slow_last >= 3.0;
  const double t = total.Seconds();
  return {fast_ok && slow_ok && t < 600.0,
          detail + "; worst fast doubling ratio " + Fmt(worst_fast, 2) +
              " (limit 2.5), slow last doubling ratio " + Fmt(slow_last, 2) +
              " (required >= 3.0); " + Fmt(t, 1) + " s"};
}

Outcome CorpusTrainers() {
  Timer timer;
  // Weighted unique-word training versus boundary-barred full-text training.
  std::mt19937_64 rng(99);
  size_t mismatches = 0;
  TrainOptions barred;
  barred.barred = U' ';
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<size_t> pool_size(1, 12);
    std::uniform_int_distribution<size_t> word_len(1, 8);
    std::uniform_int_distribution<size_t> word_count(1, 60);
    std::uniform_int_distribution<int> letter(0, 3);
    std::vector<SymbolString> pool(pool_size(rng));
    for (SymbolString& w : pool) {
      w.assign(word_len(rng), U'a');
      for (Symbol& s : w) s = Symbol(U'a' + letter(rng));
    }
    std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
    SymbolString text;
    const size_t n = word_count(rng);
    for (size_t i = 0; i < n; ++i) {
      if (i > 0) text += U' ';
      text += pool[pick(rng)];
    }
    const Corpus corpus = Ingest(text);
    MergeTable wt = MergeTable::ForText(text, U" ");
    MergeTable st = MergeTable::ForText(text, U" ");
    const TrainResult weighted = TrainGreedyWeighted(wt, corpus, 20);
    const TrainResult slow = TrainGreedySlow(st, text, 20, barred);
    if (RenderSequence(wt, weighted.sequence) !=
            RenderSequence(st, slow.sequence) ||
        weighted.Utility() != slow.Utility() ||
        weighted.stream.tokens.size() != slow.stream.tokens.size()) {
      ++mismatches;
    }
  }

  // Non-iterative training on a^(w·n) against the exact optimum with the
  // same merge budget. w = 2 gives the smallest ratio of the family.
  const size_t w = 2;
  const size_t n = 16;
  const size_t merges = 6;
  const SymbolString x(w * n, U'a');
  Corpus corpus(CorpusMode::kRaw);
  corpus.Add(x);
  MergeTable table = MergeTable::ForText(x);
  const size_t nonit = TrainNonIterative(table, corpus, merges, w).Utility();
  SearchOptions search;
  search.memoize = true;
  const size_t exact = TrainExact(table, x, merges, search).best_utility;
  const double ratio = double(nonit) / double(exact);
  const double t = timer.Seconds();
  const bool ok = mismatches == 0 && ratio < 0.5 && t < 120.0;
  return {ok, "weighted vs barred: " + std::to_string(mismatches) +
                  "/100 mismatches; non-iterative on a^" +
                  std::to_string(w * n) + " (w=" + std::to_string(w) +
                  ", M=" + std::to_string(merges) + "): κ=" +
                  std::to_string(nonit) + " vs exact κ=" +
                  std::to_string(exact) + ", ratio " + Fmt(ratio) +
                  " (required < 0.5); " + Fmt(t, 2) + " s"};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

int Main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "Run a single criterion (1-10)");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "worked example fixture", WorkedExample},
      {2, "suboptimality fixture", Suboptimality},
      {3, "fast/slow oracle equivalence", OracleEquivalence},
      {4, "exact solver soundness", ExactSoundness},
      {5, "property suites", PropertySuites},
      {6, "approximation ratio audit", RatioAudit},
      {7, "bound formula", BoundFormula},
      {8, "reduced curvature grid", ReducedCurvatureGrid},
      {9, "scaling benchmark", ScalingBenchmark},
      {10, "corpus trainers", CorpusTrainers},
  };
  int failures = 0;
  bool ran = false;
  for (const Criterion& c : criteria) {
    if (only != 0 && c.id != only) continue;
    ran = true;
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (outcome.pass ? "[PASS] " : "[FAIL] ") << "criterion "
              << c.id << " (" << c.name << "): " << outcome.detail
              << std::endl;
    if (!outcome.pass) ++failures;
  }
  if (!ran) {
    std::cerr << "no criterion " << only << '\n';
    return 2;
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace bpe

int main(int argc, char** argv) { return bpe::Main(argc, argv); }
