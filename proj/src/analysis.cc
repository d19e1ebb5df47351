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

#include "bpe/analysis.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>
#include <utility>

#include "absl/container/flat_hash_map.h"
#include "absl/container/flat_hash_set.h"
#include "bpe/error.h"
#include "bpe/greedy.h"
#include "bpe/pair_stats.h"

namespace bpe {
namespace {

constexpr size_t kMaxRecordedViolations = 20;

PropertyCheck Skip(std::string reason) {
  PropertyCheck check;
  check.status = PropertyCheck::Status::kSkipped;
  check.skip_reason = std::move(reason);
  return check;
}

PropertyCheck Compare(std::string property, SymbolView x,
                      std::vector<std::string> merges, size_t lhs,
                      size_t rhs) {
  PropertyCheck check;
  if (lhs < rhs) {
    check.status = PropertyCheck::Status::kViolated;
    check.violation = PropertyViolation{std::move(property), SymbolString(x),
                                        std::move(merges), lhs, rhs};
  }
  return check;
}

bool IsPrefix(std::span<const MergeId> prefix, std::span<const MergeId> full) {
  return prefix.size() <= full.size() &&
         std::equal(prefix.begin(), prefix.end(), full.begin());
}

size_t Gain(const MergeTable& table, SymbolView x,
            std::span<const MergeId> addition, std::span<const MergeId> base) {
  return CompressionGain(table, x, addition, base);
}

// Constituents of `nu` are trivial or among the first `n` merges of `seq`.
bool ValidAfter(const MergeTable& table, std::span<const MergeId> seq,
                size_t n, MergeId nu) {
  if (table.IsTrivial(nu)) return false;
  const MergePair p = table.Constituents(nu);
  const auto available = [&](MergeId c) {
    return table.IsTrivial(c) ||
           std::find(seq.begin(), seq.begin() + n, c) != seq.begin() + n;
  };
  return available(p.left) && available(p.right);
}

size_t CountIn(const PairFreqTable& freqs, const MergePair& pair) {
  auto it = freqs.find(pair);
  return it == freqs.end() ? 0 : it->second.count;
}

void Tally(const PropertyCheck& check, PropertyCounts& counts,
           std::vector<PropertyViolation>& violations) {
  switch (check.status) {
    case PropertyCheck::Status::kHolds:
      ++counts.checked;
      break;
    case PropertyCheck::Status::kSkipped:
      ++counts.skipped;
      break;
    case PropertyCheck::Status::kViolated:
      ++counts.checked;
      ++counts.violated;
      if (violations.size() < kMaxRecordedViolations) {
        violations.push_back(*check.violation);
      }
      break;
  }
}

void Add(PropertyCounts& into, const PropertyCounts& from) {
  into.checked += from.checked;
  into.skipped += from.skipped;
  into.violated += from.violated;
}

struct StringAudit {
  std::vector<InstanceReport> instances;
  PropertyCounts monotonicity;
  PropertyCounts submodularity;
  PropertyCounts hierarchical;
  PropertyCounts avg_gain;
  std::vector<PropertyViolation> violations;
  bool truncated = false;
};

// Walks the brute-force tree of `x` once and derives every per-M quantity
// from the visited states.
StringAudit AuditString(MergeTable& table, SymbolView x, size_t max_merges,
                        const AuditOptions& options) {
  StringAudit audit;
  struct State {
    MergeSequence sequence;
    TokenStream stream;
  };
  std::vector<State> states;
  std::vector<PairFreqTable> path_freqs;
  std::vector<size_t> path_utility;
  const auto render = [&](std::span<const MergeId> s) {
    return RenderSequence(table, s);
  };

  const auto enter = [&](const MergeSequence& seq, const TokenStream& stream) {
    if (options.state_budget != 0 && states.size() >= options.state_budget) {
      throw Error(ErrorCode::kCapacity, "state budget exhausted");
    }
    states.push_back(State{seq, stream});
    path_freqs.push_back(PairFrequencies(stream.tokens));
    path_utility.push_back(stream.Utility());
    if (!options.check_properties) return true;

    const size_t d = seq.size();
    const PairFreqTable& here = path_freqs.back();
    const size_t utility = path_utility.back();
    if (d > 0) {
      Tally(Compare("monotonicity", x, {render(seq)}, utility,
                    path_utility[d - 1]),
            audit.monotonicity, audit.violations);
    }

    for (const auto& [pair, stat] : here) {
      const MergeId nu = table.Intern(pair);
      // Submodularity against every ancestor the merge is valid after.
      for (size_t a = 0; a < d; ++a) {
        if (!ValidAfter(table, seq, a, nu)) continue;
        Tally(Compare("submodularity", x,
                      {render(std::span(seq).first(a)), render(seq),
                       table.Render(nu)},
                      CountIn(path_freqs[a], pair), stat.count),
              audit.submodularity, audit.violations);
      }
      // Hierarchical, with the candidate as the later supermerge.
      for (size_t i = 0; i < d; ++i) {
        if (!table.IsSubmerge(seq[i], nu)) continue;
        Tally(Compare("hierarchical", x,
                      {render(std::span(seq).first(i)), table.Render(seq[i]),
                       render(std::span(seq).subspan(i + 1)),
                       table.Render(nu)},
                      path_utility[i + 1] - path_utility[i], stat.count),
              audit.hierarchical, audit.violations);
      }
    }
    // Hierarchical, with the last merge as the supermerge.
    for (size_t i = 0; i + 1 < d; ++i) {
      if (!table.IsSubmerge(seq[i], seq[d - 1])) continue;
      Tally(Compare("hierarchical", x,
                    {render(std::span(seq).first(i)), table.Render(seq[i]),
                     render(std::span(seq).subspan(i + 1, d - i - 2)),
                     table.Render(seq[d - 1])},
                    path_utility[i + 1] - path_utility[i],
                    utility - path_utility[d - 1]),
            audit.hierarchical, audit.violations);
    }
    // Average-gain lemma with m' = first a merges, m = the rest.
    for (size_t a = 0; a < d; ++a) {
      const size_t m_len = d - a;
      size_t best = 0;
      for (size_t k = a; k < d; ++k) {
        if (!ValidAfter(table, seq, a, seq[k])) continue;
        best = std::max(best, CountIn(path_freqs[a],
                                      table.Constituents(seq[k])));
      }
      Tally(Compare("avg_gain", x,
                    {render(std::span(seq).first(a)),
                     render(std::span(seq).subspan(a))},
                    best * m_len, utility - path_utility[a]),
            audit.avg_gain, audit.violations);
    }
    return true;
  };
  const auto leave = [&](const MergeSequence&, const TokenStream&) {
    path_freqs.pop_back();
    path_utility.pop_back();
  };

  const TokenStream root = LiftString(table, x);
  try {
    WalkSearchTree(table, root, max_merges, Pruning::kNone,
                   SearchVisitor{enter, leave});
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kCapacity) throw;
    audit.truncated = true;
  }

  // Prefix candidates: distinct streams with κ > 0, at their minimum depth.
  absl::flat_hash_map<std::vector<MergeId>, size_t> first_state;
  for (size_t s = 0; s < states.size(); ++s) {
    if (states[s].stream.Utility() == 0) continue;
    auto [it, inserted] = first_state.try_emplace(states[s].stream.tokens, s);
    if (!inserted && states[s].sequence.size() <
                         states[it->second].sequence.size()) {
      it->second = s;
    }
  }
  std::vector<size_t> prefixes;
  for (const auto& [tokens, s] : first_state) prefixes.push_back(s);
  std::sort(prefixes.begin(), prefixes.end());

  const TrainResult greedy = TrainGreedySlow(table, x, max_merges);

  for (size_t m = 1; m <= max_merges; ++m) {
    InstanceReport report;
    report.x = SymbolString(x);
    report.merges = m;
    report.greedy_utility =
        greedy.steps.empty()
            ? 0
            : greedy.steps[std::min(m, greedy.steps.size()) - 1].utility;

    size_t best = 0;
    for (const State& s : states) {
      if (s.sequence.size() <= m) best = std::max(best, s.stream.Utility());
    }
    report.optimal_utility = best;
    std::vector<const State*> optima;
    for (const State& s : states) {
      if (optima.size() >= options.max_optima) break;
      if (s.sequence.size() <= m && s.stream.Utility() == best) {
        optima.push_back(&s);
      }
    }
    report.optima_found = optima.size();
    if (best == 0) {
      audit.instances.push_back(std::move(report));
      continue;
    }

    const auto curvature_term = [&](const TokenStream& prefix_stream,
                                    const State& optimum) {
      const TokenStream both =
          ApplySequence(table, prefix_stream, optimum.sequence);
      const double k_prefix = double(prefix_stream.Utility());
      const double k_both = double(both.Utility());
      return 1.0 - (k_both - double(best)) / k_prefix;
    };
    for (const State* opt : optima) {
      for (size_t p : prefixes) {
        const State& prefix = states[p];
        if (prefix.sequence.size() > m) continue;
        const double term = curvature_term(prefix.stream, *opt);
        if (!report.sigma || term > *report.sigma) {
          report.sigma = term;
          report.sigma_prefix = render(prefix.sequence);
          report.sigma_optimum = render(opt->sequence);
        }
      }
    }

    const size_t prefix_len = std::min(m - 1, greedy.sequence.size());
    const std::span<const MergeId> greedy_prefix =
        std::span(greedy.sequence).first(prefix_len);
    const TokenStream greedy_stream = ApplySequence(table, root, greedy_prefix);
    if (greedy_stream.Utility() > 0) {
      for (const State* opt : optima) {
        const double term = curvature_term(greedy_stream, *opt);
        if (!report.sigma_prime || term > *report.sigma_prime) {
          report.sigma_prime = term;
        }
      }
    }
    audit.instances.push_back(std::move(report));
  }
  return audit;
}

void ParallelFor(size_t n, size_t workers,
                 const std::function<void(size_t)>& fn) {
  workers = std::max<size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> threads;
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  for (size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (size_t i = next++; i < n; i = next++) fn(i);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    });
  }
  for (std::thread& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

void Enumerate(SymbolString& current, size_t used, size_t alphabet_size,
               size_t length, std::vector<SymbolString>& out) {
  if (current.size() == length) {
    out.push_back(current);
    return;
  }
  const size_t limit = std::min(used + 1, alphabet_size);
  for (size_t s = 0; s < limit; ++s) {
    current.push_back(Symbol(U'a' + s));
    Enumerate(current, std::max(used, s + 1), alphabet_size, length, out);
    current.pop_back();
  }
}

}  // namespace

std::string PropertyViolation::ToString() const {
  std::string out = property + " violated on \"" + EncodeUtf8(x) + "\":";
  for (const std::string& m : merges) out += " " + m;
  out += " (" + std::to_string(lhs) + " < " + std::to_string(rhs) + ")";
  return out;
}

PropertyCheck CheckSubmodularity(const MergeTable& table, SymbolView x,
                                 std::span<const MergeId> prefix,
                                 std::span<const MergeId> full, MergeId nu) {
  if (!IsPrefix(prefix, full)) return Skip("prefix is not a prefix of full");
  const MergeSequence with_prefix = Concat(prefix, std::span(&nu, 1));
  const MergeSequence with_full = Concat(full, std::span(&nu, 1));
  if (!IsValidSequence(table, with_prefix)) {
    return Skip("prefix followed by nu is not valid");
  }
  if (!IsValidSequence(table, with_full)) {
    return Skip("full followed by nu is not valid");
  }
  const MergeId one[] = {nu};
  return Compare("submodularity", x,
                 {RenderSequence(table, prefix), RenderSequence(table, full),
                  table.Render(nu)},
                 Gain(table, x, one, prefix), Gain(table, x, one, full));
}

PropertyCheck CheckHierarchical(const MergeTable& table, SymbolView x,
                                std::span<const MergeId> m1, MergeId nu1,
                                std::span<const MergeId> m2, MergeId nu2) {
  if (nu1 != nu2 && !table.IsSubmerge(nu1, nu2)) {
    return Skip("nu1 is not a submerge of nu2");
  }
  MergeSequence before(m1.begin(), m1.end());
  before.push_back(nu1);
  MergeSequence whole = Concat(before, m2);
  whole.push_back(nu2);
  if (!IsValidSequence(table, whole)) return Skip("sequence is not valid");
  const MergeId first[] = {nu1};
  const MergeId second[] = {nu2};
  const MergeSequence base2 = Concat(before, m2);
  return Compare("hierarchical", x,
                 {RenderSequence(table, m1), table.Render(nu1),
                  RenderSequence(table, m2), table.Render(nu2)},
                 Gain(table, x, first, m1), Gain(table, x, second, base2));
}

PropertyCheck CheckAvgGainLemma(const MergeTable& table, SymbolView x,
                                std::span<const MergeId> m_prime,
                                std::span<const MergeId> m) {
  if (m.empty()) return Skip("m is empty");
  if (!IsValidSequence(table, Concat(m_prime, m))) {
    return Skip("m_prime followed by m is not valid");
  }
  size_t best = 0;
  for (MergeId nu : m) {
    MergeSequence extended(m_prime.begin(), m_prime.end());
    extended.push_back(nu);
    if (!IsValidSequence(table, extended)) continue;
    const MergeId one[] = {nu};
    best = std::max(best, Gain(table, x, one, m_prime));
  }
  return Compare("avg_gain", x,
                 {RenderSequence(table, m_prime), RenderSequence(table, m)},
                 best * m.size(), Gain(table, x, m, m_prime));
}

PropertyCheck CheckMonotonicity(const MergeTable& table, SymbolView x,
                                std::span<const MergeId> sequence) {
  if (!IsValidSequence(table, sequence)) return Skip("sequence is not valid");
  TokenStream stream = LiftString(table, x);
  size_t previous = 0;
  for (size_t n = 0; n < sequence.size(); ++n) {
    ApplyMergeInPlace(table, stream, sequence[n]);
    if (stream.Utility() < previous) {
      return Compare("monotonicity", x,
                     {RenderSequence(table, sequence.first(n + 1))},
                     stream.Utility(), previous);
    }
    previous = stream.Utility();
  }
  return PropertyCheck{};
}

double BoundFromSigma(double sigma) {
  if (!(sigma > 0)) {
    throw Error(ErrorCode::kDomain,
                "curvature must be positive, got " + std::to_string(sigma));
  }
  return -std::expm1(-sigma) / sigma;
}

double InstanceReport::ratio() const {
  if (optimal_utility == 0) return 1.0;
  return double(greedy_utility) / double(optimal_utility);
}

double InstanceReport::bound() const {
  if (!sigma || *sigma <= 0) return 1.0;
  return BoundFromSigma(*sigma);
}

bool InstanceReport::ok() const {
  if (optimal_utility == 0) return true;
  return ratio() >= bound() - 1e-12;
}

std::vector<SymbolString> EnumerateCanonicalStrings(size_t alphabet_size,
                                                    size_t max_len) {
  if (alphabet_size == 0 || alphabet_size > 26) {
    throw Error(ErrorCode::kInvalidArgument,
                "grid alphabet size must be in 1..26");
  }
  std::vector<SymbolString> out;
  SymbolString current;
  for (size_t len = 1; len <= max_len; ++len) {
    Enumerate(current, 0, alphabet_size, len, out);
  }
  return out;
}

SymbolString Canonicalize(SymbolView x) {
  absl::flat_hash_map<Symbol, Symbol> rename;
  SymbolString out;
  out.reserve(x.size());
  for (Symbol s : x) {
    auto [it, inserted] =
        rename.try_emplace(s, Symbol(U'a' + rename.size()));
    out.push_back(it->second);
  }
  return out;
}

std::vector<SymbolString> SubstringGrid(SymbolView text, size_t alphabet_size,
                                        size_t max_len, size_t limit) {
  std::vector<SymbolString> out;
  absl::flat_hash_set<SymbolString> seen;
  for (size_t i = 0; i < text.size(); ++i) {
    absl::flat_hash_set<Symbol> distinct;
    for (size_t len = 1; len <= max_len && i + len <= text.size(); ++len) {
      distinct.insert(text[i + len - 1]);
      if (distinct.size() > alphabet_size) break;
      SymbolString c = Canonicalize(text.substr(i, len));
      if (seen.insert(c).second) {
        out.push_back(std::move(c));
        if (limit != 0 && out.size() == limit) return out;
      }
    }
  }
  return out;
}

std::vector<InstanceReport> AnalyzeString(MergeTable& table, SymbolView x,
                                          size_t max_merges,
                                          const AuditOptions& options) {
  AuditOptions quiet = options;
  quiet.check_properties = false;
  return AuditString(table, x, max_merges, quiet).instances;
}

std::optional<double> EstimateSigmaPrime(SymbolView x, size_t merges) {
  if (merges == 0 || x.empty()) return std::nullopt;
  MergeTable table = MergeTable::ForText(x);
  return AnalyzeString(table, x, merges).back().sigma_prime;
}

size_t AuditReport::TotalViolations() const {
  return monotonicity.violated + submodularity.violated +
         hierarchical.violated + avg_gain.violated;
}

AuditReport RunAudit(const std::vector<SymbolString>& strings,
                     const Grid& grid, const AuditOptions& options) {
  std::vector<StringAudit> results(strings.size());
  ParallelFor(strings.size(), options.workers, [&](size_t i) {
    MergeTable table = MergeTable::ForText(strings[i]);
    results[i] = AuditString(table, strings[i], grid.max_merges, options);
  });

  AuditReport report;
  CurvatureReport& curvature = report.curvature;
  curvature.grid = grid;
  curvature.strings = strings.size();
  bool have_sigma = false;
  for (StringAudit& r : results) {
    Add(report.monotonicity, r.monotonicity);
    Add(report.submodularity, r.submodularity);
    Add(report.hierarchical, r.hierarchical);
    Add(report.avg_gain, r.avg_gain);
    for (PropertyViolation& v : r.violations) {
      if (report.violations.size() < kMaxRecordedViolations) {
        report.violations.push_back(std::move(v));
      }
    }
    curvature.lower_bound |= r.truncated;
    for (InstanceReport& inst : r.instances) {
      if (inst.sigma && (!have_sigma || *inst.sigma > curvature.sigma)) {
        have_sigma = true;
        curvature.sigma = *inst.sigma;
        curvature.witness = CurvatureWitness{inst.x, inst.merges,
                                             inst.sigma_prefix,
                                             inst.sigma_optimum};
      }
      if (inst.sigma_prime && (!curvature.sigma_prime ||
                               *inst.sigma_prime > *curvature.sigma_prime)) {
        curvature.sigma_prime = inst.sigma_prime;
        curvature.witness_prime =
            CurvatureWitness{inst.x, inst.merges, "", inst.sigma_optimum};
      }
      if (inst.optimal_utility == 0) continue;
      RatioSummary& ratios = report.ratios;
      ++ratios.instances;
      if (inst.ratio() < ratios.min_ratio) {
        ratios.min_ratio = inst.ratio();
        ratios.min_ratio_x = EncodeUtf8(inst.x);
        ratios.min_ratio_merges = inst.merges;
      }
      if (!inst.ok()) {
        ++ratios.failures;
        if (report.ratio_failures.size() < kMaxRecordedViolations) {
          report.ratio_failures.push_back(inst);
        }
      }
    }
  }
  if (have_sigma && curvature.sigma > 0) {
    curvature.bound = BoundFromSigma(curvature.sigma);
  }
  if (curvature.sigma_prime && *curvature.sigma_prime > 0) {
    curvature.bound_prime = BoundFromSigma(*curvature.sigma_prime);
  }
  return report;
}

AuditReport AuditGrid(const Grid& grid, const AuditOptions& options) {
  return RunAudit(EnumerateCanonicalStrings(grid.alphabet_size, grid.max_len),
                  grid, options);
}

CurvatureReport EstimateSigma(const Grid& grid, const AuditOptions& options) {
  AuditOptions quiet = options;
  quiet.check_properties = false;
  return AuditGrid(grid, quiet).curvature;
}

std::vector<SearchComparison> CompareSearchModes(
    const std::vector<SymbolString>& strings, size_t max_merges,
    Pruning pruning, size_t workers) {
  std::vector<std::vector<SearchComparison>> rows(strings.size());
  ParallelFor(strings.size(), workers, [&](size_t i) {
    MergeTable table = MergeTable::ForText(strings[i]);
    SearchOptions brute;
    brute.pruning = Pruning::kNone;
    SearchOptions pruned;
    pruned.pruning = pruning;
    for (size_t m = 1; m <= max_merges; ++m) {
      const SearchReport b = TrainExact(table, strings[i], m, brute);
      const SearchReport p = TrainExact(table, strings[i], m, pruned);
      rows[i].push_back(SearchComparison{strings[i], m, b.best_utility,
                                         p.best_utility, b.states_visited,
                                         p.states_visited});
    }
  });
  std::vector<SearchComparison> out;
  for (auto& r : rows) out.insert(out.end(), r.begin(), r.end());
  return out;
}

}  // namespace bpe
