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

#include "bpe/pair_stats.h"

#include <algorithm>
#include <random>

#include "bpe/error.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace bpe {
namespace {

using ::bpe::testing::U;

MergePair P(const MergeTable& table, Symbol l, Symbol r) {
  return MergePair{table.Trivial(l), table.Trivial(r)};
}

TEST(PairFrequenciesTest, OverlapsAreNotCounted) {
  MergeTable table = MergeTable::ForText(U"a");
  const MergePair aa = P(table, U'a', U'a');
  EXPECT_EQ(PairFrequencies(LiftString(table, U"aaa").tokens).at(aa).count, 1);
  EXPECT_EQ(PairFrequencies(LiftString(table, U"aaaa").tokens).at(aa).count,
            2);
  EXPECT_EQ(PairFrequencies(LiftString(table, U"aaaa").tokens,
                            CountMode::kOverlapping)
                .at(aa)
                .count,
            3);
}

TEST(PairFrequenciesTest, Abaabbaa) {
  MergeTable table = MergeTable::ForText(U"ab");
  const PairFreqTable f = PairFrequencies(LiftString(table, U"abaabbaa").tokens);
  EXPECT_EQ(f.size(), 4);
  EXPECT_EQ(f.at(P(table, U'a', U'b')), (PairStat{2, 0}));
  EXPECT_EQ(f.at(P(table, U'b', U'a')), (PairStat{2, 1}));
  EXPECT_EQ(f.at(P(table, U'a', U'a')), (PairStat{2, 2}));
  EXPECT_EQ(f.at(P(table, U'b', U'b')), (PairStat{1, 4}));
}

TEST(PairFrequenciesTest, ShortStreamsHaveNoPairs) {
  MergeTable table = MergeTable::ForText(U"a");
  EXPECT_TRUE(PairFrequencies(LiftString(table, U"").tokens).empty());
  EXPECT_TRUE(PairFrequencies(LiftString(table, U"a").tokens).empty());
}

TEST(PairFrequenciesTest, RunsOfEqualSymbols) {
  MergeTable table = MergeTable::ForText(U"a");
  for (size_t n = 2; n <= 64; ++n) {
    const PairFreqTable f =
        PairFrequencies(LiftString(table, SymbolString(n, U'a')).tokens);
    EXPECT_EQ(f.at(P(table, U'a', U'a')).count, n / 2) << n;
  }
}

TEST(PairFrequenciesTest, CountsAgreeWithApply) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    MergeTable table = testing::AlphabetTable(3);
    const SymbolString x = testing::RandomString(rng, 60, 3);
    // Merge a few pairs first so the stream has composite tokens.
    TokenStream stream = LiftString(table, x);
    for (int k = 0; k < 3 && stream.tokens.size() > 1; ++k) {
      ApplyMergeInPlace(table, stream,
                        table.Intern(TopPair(table,
                                             PairFrequencies(stream.tokens))));
    }
    const PairFreqTable f = PairFrequencies(stream.tokens);
    for (const auto& [pair, stat] : f) {
      EXPECT_EQ(ApplyMerge(table, stream, table.Intern(pair)).replacements,
                stat.count);
    }
  }
}

TEST(TopPairTest, FirstOccurrenceBreaksTies) {
  MergeTable table = MergeTable::ForText(U"ab");
  const PairFreqTable f = PairFrequencies(LiftString(table, U"abaabbaa").tokens);
  EXPECT_EQ(TopPair(table, f), P(table, U'a', U'b'));
}

TEST(TopPairTest, PickedExampleStartsWithPi) {
  const SymbolString x = U("picked pickled pickles");
  MergeTable table = MergeTable::ForText(x);
  const PairFreqTable f = PairFrequencies(LiftString(table, x).tokens);
  EXPECT_EQ(f.at(P(table, U'p', U'i')).count, 3);
  EXPECT_EQ(f.at(P(table, U'c', U'k')).count, 3);
  EXPECT_EQ(TopPair(table, f), P(table, U'p', U'i'));
}

TEST(TopPairTest, SingleEntryAndEmpty) {
  MergeTable table = MergeTable::ForText(U"ab");
  const PairFreqTable f = PairFrequencies(LiftString(table, U"ab").tokens);
  EXPECT_EQ(TopPair(table, f), P(table, U'a', U'b'));
  try {
    TopPair(table, PairFreqTable());
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoPair);
  }
}

TEST(TopPairTest, YieldBreaksRemainingTies) {
  MergeTable table = MergeTable::ForText(U"abc");
  PairFreqTable f;
  f[P(table, U'b', U'c')] = PairStat{2, 0};
  f[P(table, U'a', U'c')] = PairStat{2, 0};
  EXPECT_EQ(TopPair(table, f), P(table, U'a', U'c'));
}

TEST(TopPairTest, IndependentOfInsertionOrder) {
  std::mt19937_64 rng(5);
  MergeTable table = testing::AlphabetTable(4);
  const SymbolString x = testing::RandomString(rng, 80, 4, 40);
  const PairFreqTable f = PairFrequencies(LiftString(table, x).tokens);
  auto entries = SortedPairs(table, f);
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(entries.begin(), entries.end(), rng);
    PairFreqTable shuffled;
    for (const auto& [pair, stat] : entries) shuffled.emplace(pair, stat);
    EXPECT_EQ(TopPair(table, shuffled), TopPair(table, f));
  }
}

TEST(CompareConcatYieldsTest, ComparesWithoutBuilding) {
  MergeTable table = MergeTable::ForText(U"abc");
  const MergePair ab_c{table.Intern(table.Trivial(U'a'), table.Trivial(U'b')),
                       table.Trivial(U'c')};
  const MergePair a_bc{table.Trivial(U'a'),
                       table.Intern(table.Trivial(U'b'), table.Trivial(U'c'))};
  EXPECT_EQ(CompareConcatYields(table, ab_c, a_bc),
            std::strong_ordering::equal);
  EXPECT_EQ(CompareConcatYields(table, P(table, U'a', U'b'), ab_c),
            std::strong_ordering::less);
}

}  // namespace
}  // namespace bpe
