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
#include <cmath>
#include <span>

#include "bpe/error.h"
#include "bpe/exact.h"
#include "bpe/greedy.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace bpe {
namespace {

using ::bpe::testing::M;
using ::bpe::testing::Seq;
using ::bpe::testing::U;

// Values frozen from tests/oracles/bpe_oracle.py.
constexpr double kBound25 = 0.36716600055044046;
constexpr double kBound20 = 0.43233235838169365;
constexpr double kBound15 = 0.5179132265677134;

TEST(BoundFromSigmaTest, KnownValues) {
  EXPECT_NEAR(BoundFromSigma(2.5), kBound25, 1e-12);
  EXPECT_NEAR(BoundFromSigma(2.0), kBound20, 1e-12);
  EXPECT_NEAR(BoundFromSigma(1.5), kBound15, 1e-12);
}

TEST(BoundFromSigmaTest, DomainAndMonotonicity) {
  try {
    BoundFromSigma(0.0);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDomain);
  }
  EXPECT_THROW(BoundFromSigma(-1.0), Error);
  double previous = 1.0;
  for (int i = 1; i <= 1000; ++i) {
    const double b = BoundFromSigma(i / 100.0);
    EXPECT_LT(b, previous);
    EXPECT_GT(b, 0.0);
    previous = b;
  }
}

TEST(SubmodularityTest, InvalidPrefixIsSkipped) {
  MergeTable table = MergeTable::ForText(U"abcde");
  const PropertyCheck check = CheckSubmodularity(
      table, U"aabcde", Seq(table, {"[a,a]"}), Seq(table, {"[a,a]", "[c,d]"}),
      M(table, "[b,[c,d]]"));
  EXPECT_TRUE(check.skipped());
}

TEST(SubmodularityTest, EqualSequencesHold) {
  MergeTable table = MergeTable::ForText(U"abc");
  const MergeSequence s = Seq(table, {"[a,b]"});
  EXPECT_TRUE(CheckSubmodularity(table, U"abcabc", s, s, M(table, "[[a,b],c]"))
                  .holds());
}

TEST(SubmodularityTest, NotAPrefixIsSkipped) {
  MergeTable table = MergeTable::ForText(U"abc");
  EXPECT_TRUE(CheckSubmodularity(table, U"abcabc", Seq(table, {"[b,c]"}),
                                 Seq(table, {"[a,b]"}), M(table, "[c,a]"))
                  .skipped());
}

TEST(HierarchicalTest, FigureOneInstance) {
  MergeTable table = MergeTable::ForText(U"abc");
  const PropertyCheck check = CheckHierarchical(
      table, U"abaabacbcb", Seq(table, {"[a,b]"}), M(table, "[[a,b],a]"),
      Seq(table, {"[c,b]"}), M(table, "[[[a,b],a],[c,b]]"));
  EXPECT_TRUE(check.holds());
}

TEST(HierarchicalTest, SameMergeTwice) {
  MergeTable table = MergeTable::ForText(U"ab");
  const MergeId ab = M(table, "[a,b]");
  EXPECT_TRUE(CheckHierarchical(table, U"abab", {}, ab, {}, ab).holds());
}

TEST(HierarchicalTest, NonSubmergeIsSkipped) {
  MergeTable table = MergeTable::ForText(U"ab");
  EXPECT_TRUE(CheckHierarchical(table, U"abab", {}, M(table, "[a,b]"), {},
                                M(table, "[b,a]"))
                  .skipped());
}

TEST(AvgGainLemmaTest, Cases) {
  MergeTable table = MergeTable::ForText(U"abcd");
  EXPECT_TRUE(
      CheckAvgGainLemma(table, U"abab", {}, Seq(table, {"[a,b]"})).holds());
  // m acts on a part of the string m' never touches.
  EXPECT_TRUE(CheckAvgGainLemma(table, U"ababcdcdcd", Seq(table, {"[a,b]"}),
                                Seq(table, {"[c,d]", "[[c,d],[c,d]]"}))
                  .holds());
  EXPECT_TRUE(CheckAvgGainLemma(table, U"abab", {}, {}).skipped());
}

TEST(MonotonicityTest, TrainedSequences) {
  MergeTable table = MergeTable::ForText(U"abc");
  const TrainResult r = TrainGreedySlow(table, U"abcabcbbcaab", 6);
  EXPECT_TRUE(CheckMonotonicity(table, U"abcabcbbcaab", r.sequence).holds());
}

TEST(GridTest, CanonicalStrings) {
  EXPECT_EQ(EnumerateCanonicalStrings(2, 6).size(), 63);
  EXPECT_EQ(EnumerateCanonicalStrings(3, 3),
            (std::vector<SymbolString>{U"a", U"aa", U"ab", U"aaa", U"aab",
                                       U"aba", U"abb", U"abc"}));
  EXPECT_EQ(Canonicalize(U"xyzx"), U"abca");
}

TEST(GridTest, SubstringGrid) {
  EXPECT_EQ(SubstringGrid(U"the", 2, 3),
            (std::vector<SymbolString>{U"a", U"ab"}));
  EXPECT_EQ(SubstringGrid(U"the", 3, 3, 2).size(), 2);
}

TEST(CurvatureTest, AbaabbaaInstance) {
  MergeTable table = MergeTable::ForText(U"ab");
  const std::vector<InstanceReport> rows = AnalyzeString(table, U"abaabbaa", 2);
  ASSERT_EQ(rows.size(), 2);
  const InstanceReport& r = rows[1];
  EXPECT_EQ(r.greedy_utility, 3);
  EXPECT_EQ(r.optimal_utility, 4);
  EXPECT_DOUBLE_EQ(r.ratio(), 0.75);
  ASSERT_TRUE(r.sigma.has_value());
  EXPECT_DOUBLE_EQ(*r.sigma, 2.0);
  ASSERT_TRUE(r.sigma_prime.has_value());
  EXPECT_DOUBLE_EQ(*r.sigma_prime, 1.0);
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(EstimateSigmaPrime(U"abaabbaa", 2), 1.0);
  EXPECT_EQ(EstimateSigmaPrime(U"abaabbaa", 1), std::nullopt);
}

TEST(CurvatureTest, SmallGridMatchesOracle) {
  const CurvatureReport report = EstimateSigma(Grid{2, 6, 2});
  EXPECT_DOUBLE_EQ(report.sigma, 3.0);
  EXPECT_EQ(report.witness.x, U"abab");
  EXPECT_EQ(report.witness.merges, 2);
  EXPECT_DOUBLE_EQ(report.bound, BoundFromSigma(3.0));
  EXPECT_FALSE(report.lower_bound);
}

TEST(CurvatureTest, ThreeLetterGridMatchesOracle) {
  const CurvatureReport report = EstimateSigma(Grid{3, 8, 3});
  EXPECT_DOUBLE_EQ(report.sigma, 4.0);
  EXPECT_EQ(report.witness.x, U"aabab");
  EXPECT_EQ(report.witness.merges, 3);
  EXPECT_FALSE(report.lower_bound);
}

TEST(CurvatureTest, GreedyOptimumAfterItsOwnPrefix) {
  // When greedy is optimal and the greedy sequence itself is taken as the
  // optimum, prefixing it with its own first M-1 merges loses nothing, so
  // that curvature term is exactly 1.
  size_t instances = 0;
  for (const SymbolString& x : EnumerateCanonicalStrings(3, 7)) {
    for (size_t m = 2; m <= 3; ++m) {
      MergeTable table = MergeTable::ForText(x);
      const TrainResult greedy = TrainGreedySlow(table, x, m);
      if (greedy.Utility() != TrainExact(table, x, m, true).best_utility) {
        continue;
      }
      const std::span<const MergeId> prefix =
          std::span(greedy.sequence).first(std::min(m - 1, greedy.sequence.size()));
      const size_t k_prefix = CompressionUtility(table, x, prefix);
      if (k_prefix == 0) continue;
      ++instances;
      const size_t k_both =
          CompressionUtility(table, x, Concat(prefix, greedy.sequence));
      EXPECT_GE(k_both, greedy.Utility()) << EncodeUtf8(x);
    }
  }
  EXPECT_GT(instances, 100);
}

TEST(CurvatureTest, OtherOptimaCanPushSigmaPrimeAboveOne) {
  // aab, M=2: greedy <[a,a],[aa,b]> is optimal, but the optimum
  // <[a,b],[a,ab]> gains only 1 after the greedy prefix [a,a].
  EXPECT_EQ(EstimateSigmaPrime(U"aab", 2), 2.0);
}

TEST(CurvatureTest, BudgetMarksLowerBound) {
  AuditOptions options;
  options.state_budget = 5;
  EXPECT_TRUE(EstimateSigma(Grid{2, 6, 2}, options).lower_bound);
}

TEST(AuditTest, SmallGridHasNoViolations) {
  AuditOptions options;
  options.workers = 2;
  const AuditReport report = AuditGrid(Grid{3, 7, 3}, options);
  EXPECT_EQ(report.TotalViolations(), 0);
  for (const PropertyViolation& v : report.violations) {
    ADD_FAILURE() << v.ToString();
  }
  EXPECT_GT(report.submodularity.checked, 0);
  EXPECT_GT(report.hierarchical.checked, 0);
  EXPECT_GT(report.avg_gain.checked, 0);
  EXPECT_EQ(report.ratios.failures, 0);
  EXPECT_GT(report.ratios.instances, 0);
}

TEST(AuditTest, WorkersDoNotChangeTheReport) {
  AuditOptions one;
  AuditOptions three;
  three.workers = 3;
  const AuditReport a = AuditGrid(Grid{3, 6, 2}, one);
  const AuditReport b = AuditGrid(Grid{3, 6, 2}, three);
  EXPECT_EQ(a.curvature.sigma, b.curvature.sigma);
  EXPECT_EQ(a.curvature.witness.x, b.curvature.witness.x);
  EXPECT_EQ(a.submodularity.checked, b.submodularity.checked);
  EXPECT_EQ(a.ratios.min_ratio, b.ratios.min_ratio);
  EXPECT_EQ(a.ratios.min_ratio_x, b.ratios.min_ratio_x);
}

}  // namespace
}  // namespace bpe
