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

#ifndef BPE_ANALYSIS_H_
#define BPE_ANALYSIS_H_

// Executable checks of the structural properties of compression utility
// (monotonicity, sequence submodularity, hierarchical submodularity, the
// average-gain lemma), total backward curvature estimation, and the greedy
// approximation audit, over exhaustive grids of short strings.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bpe/core.h"
#include "bpe/exact.h"

namespace bpe {

struct PropertyViolation {
  std::string property;
  SymbolString x;
  // Rendered sequences / merges of the instance.
  std::vector<std::string> merges;
  // The claimed inequality is lhs >= rhs; recorded only when lhs < rhs.
  size_t lhs = 0;
  size_t rhs = 0;

  std::string ToString() const;
};

struct PropertyCheck {
  enum class Status { kHolds, kViolated, kSkipped };
  Status status = Status::kHolds;
  std::optional<PropertyViolation> violation;
  std::string skip_reason;

  bool holds() const { return status == Status::kHolds; }
  bool skipped() const { return status == Status::kSkipped; }
};

// κ(nu | prefix) >= κ(nu | full). Skipped unless prefix is a prefix of full
// and both prefix++nu and full++nu are valid.
PropertyCheck CheckSubmodularity(const MergeTable& table, SymbolView x,
                                 std::span<const MergeId> prefix,
                                 std::span<const MergeId> full, MergeId nu);

// κ(nu1 | m1) >= κ(nu2 | m1 nu1 m2). Skipped unless nu1 is a submerge of nu2
// (or equal to it) and m1 nu1 m2 nu2 is valid.
PropertyCheck CheckHierarchical(const MergeTable& table, SymbolView x,
                                std::span<const MergeId> m1, MergeId nu1,
                                std::span<const MergeId> m2, MergeId nu2);

// Some nu in m with m_prime++nu valid has |m|·κ(nu | m_prime) >=
// κ(m | m_prime). Skipped when m is empty or m_prime++m is invalid.
PropertyCheck CheckAvgGainLemma(const MergeTable& table, SymbolView x,
                                std::span<const MergeId> m_prime,
                                std::span<const MergeId> m);

// κ is non-decreasing over the prefixes of a valid sequence.
PropertyCheck CheckMonotonicity(const MergeTable& table, SymbolView x,
                                std::span<const MergeId> sequence);

// (1/σ)(1 − e^{−σ}); throws Error(kDomain) for σ <= 0.
double BoundFromSigma(double sigma);

struct Grid {
  size_t alphabet_size = 2;
  size_t max_len = 6;
  size_t max_merges = 2;
};

// Strings of length 1..max_len over the first `alphabet_size` lowercase
// letters, one per renaming class: symbols appear in alphabetical order of
// first occurrence ("aab", never "bba"). Sorted by length, then content.
std::vector<SymbolString> EnumerateCanonicalStrings(size_t alphabet_size,
                                                    size_t max_len);

// Renames symbols to a, b, c, ... in order of first occurrence.
SymbolString Canonicalize(SymbolView x);

// Distinct canonical forms of the substrings of `text` of length 1..max_len
// with at most `alphabet_size` distinct symbols, at most `limit` of them in
// order of first appearance (0 = no limit).
std::vector<SymbolString> SubstringGrid(SymbolView text, size_t alphabet_size,
                                        size_t max_len, size_t limit = 0);

struct AuditOptions {
  // Optimal sequences considered per instance, in DFS order.
  size_t max_optima = 8;
  // Search states per string before the instance is abandoned (the report
  // is then a lower bound); 0 = unlimited.
  uint64_t state_budget = 0;
  // Worker threads; results are merged in string order.
  size_t workers = 1;
  bool check_properties = true;
};

// One (x, M) grid point.
struct InstanceReport {
  SymbolString x;
  size_t merges = 0;
  size_t greedy_utility = 0;
  size_t optimal_utility = 0;
  // Instance curvature; unset when no prefix has κ > 0.
  std::optional<double> sigma;
  // Rendered argmax prefix and optimum for sigma.
  std::string sigma_prefix;
  std::string sigma_optimum;
  // Curvature against the greedy prefix; unset when that prefix has κ = 0.
  std::optional<double> sigma_prime;
  size_t optima_found = 0;

  // κ(greedy)/κ(optimal); meaningful when optimal_utility > 0.
  double ratio() const;
  // (1/σ)(1 − e^{−σ}), or its limit 1 when σ <= 0.
  double bound() const;
  // ratio >= bound; true when optimal_utility == 0.
  bool ok() const;
};

// σ and σ′ for every M in 1..max_merges of a single string.
std::vector<InstanceReport> AnalyzeString(MergeTable& table, SymbolView x,
                                          size_t max_merges,
                                          const AuditOptions& options = {});

std::optional<double> EstimateSigmaPrime(SymbolView x, size_t merges);

struct CurvatureWitness {
  SymbolString x;
  size_t merges = 0;
  std::string prefix;
  std::string optimum;
};

struct CurvatureReport {
  Grid grid;
  size_t strings = 0;
  double sigma = 0;
  std::optional<double> sigma_prime;
  // BoundFromSigma(sigma); 0 when sigma <= 0.
  double bound = 0;
  std::optional<double> bound_prime;
  CurvatureWitness witness;
  CurvatureWitness witness_prime;
  // Some instance hit the state budget; sigma is then a lower bound.
  bool lower_bound = false;
};

struct PropertyCounts {
  size_t checked = 0;
  size_t skipped = 0;
  size_t violated = 0;
};

struct RatioSummary {
  size_t instances = 0;
  size_t failures = 0;
  double min_ratio = 1.0;
  std::string min_ratio_x;
  size_t min_ratio_merges = 0;
};

struct AuditReport {
  CurvatureReport curvature;
  PropertyCounts monotonicity;
  PropertyCounts submodularity;
  PropertyCounts hierarchical;
  PropertyCounts avg_gain;
  // First violations found (at most 20).
  std::vector<PropertyViolation> violations;
  RatioSummary ratios;
  // Grid points whose ratio fell below the instance bound.
  std::vector<InstanceReport> ratio_failures;

  size_t TotalViolations() const;
};

// Runs the property checks, curvature estimation and ratio audit on
// `strings` for M = 1..grid.max_merges.
AuditReport RunAudit(const std::vector<SymbolString>& strings,
                     const Grid& grid, const AuditOptions& options = {});

// RunAudit() on EnumerateCanonicalStrings(grid).
AuditReport AuditGrid(const Grid& grid, const AuditOptions& options = {});

// Curvature only.
CurvatureReport EstimateSigma(const Grid& grid,
                              const AuditOptions& options = {});

// Pruned versus brute-force exact search on one grid point.
struct SearchComparison {
  SymbolString x;
  size_t merges = 0;
  size_t brute_utility = 0;
  size_t pruned_utility = 0;
  uint64_t brute_states = 0;
  uint64_t pruned_states = 0;
};

std::vector<SearchComparison> CompareSearchModes(
    const std::vector<SymbolString>& strings, size_t max_merges,
    Pruning pruning = Pruning::kCanonical, size_t workers = 1);

}  // namespace bpe

#endif  // BPE_ANALYSIS_H_
