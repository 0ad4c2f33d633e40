#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "seqprint/error.hpp"
#include "seqprint/extract.hpp"
#include "seqprint/parallel.hpp"
#include "seqprint/seqgen.hpp"
#include "test_support.hpp"

namespace seqprint {
namespace {

using testing::naive_count;
using testing::naive_profile;

BitSequence bits(const char* s) { return BitSequence::from_string(s); }

std::map<std::uint64_t, std::uint64_t> as_map(const PatternProfile& p) {
  std::map<std::uint64_t, std::uint64_t> out;
  for (const auto& e : p.entries()) out[e.pattern] = e.count;
  return out;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Io;
}

TEST(CountOccurrences, SmallExamples) {
  EXPECT_EQ(count_occurrences(bits("0"), bits("0000")), 4u);
  EXPECT_EQ(count_occurrences(bits("01"), bits("0101")), 2u);
  EXPECT_EQ(naive_count("11", "0110111"), 3u);
  EXPECT_EQ(count_occurrences(bits("11"), bits("0110111")), 3u);
  EXPECT_EQ(count_occurrences(bits("11"), bits("1111")), 3u);
}

TEST(CountOccurrences, LongPatternsBeyond64Bits) {
  std::mt19937_64 rng(5);
  const auto text = testing::random_sequence(rng, 400, 0.9);
  const std::string t = text.to_string();
  const std::string pattern = t.substr(100, 80);
  EXPECT_EQ(count_occurrences(BitSequence::from_string(pattern), text), naive_count(pattern, t));
}

TEST(CountOccurrences, PatternLongerThanSequence) {
  EXPECT_EQ(kind_of([] { count_occurrences(bits("0101"), bits("010")); }), ErrorKind::EmptyWindow);
}

TEST(ExtractProfile, SmallExamples) {
  const auto p = extract_profile(bits("0101"), 2);
  EXPECT_EQ(p.total_windows(), 3u);
  EXPECT_EQ(as_map(p), (std::map<std::uint64_t, std::uint64_t>{{0b01, 2}, {0b10, 1}}));

  const auto z = extract_profile(bits("0000000000"), 3);
  EXPECT_EQ(z.total_windows(), 8u);
  EXPECT_EQ(as_map(z), (std::map<std::uint64_t, std::uint64_t>{{0, 8}}));
}

TEST(ExtractProfile, Errors) {
  EXPECT_EQ(kind_of([] { extract_profile(bits("01"), 3); }), ErrorKind::EmptyWindow);
  EXPECT_EQ(kind_of([] { extract_profile(bits("01"), 0); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { extract_profile(bits("01"), 65); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { extract_profile(BitSequence::from_string(std::string(40, '1')), 17, ExtractMethod::Dense); }), ErrorKind::InvalidArgument);
}

TEST(ExtractProfile, FullWidthWindows) {
  std::mt19937_64 rng(8);
  const auto s = testing::random_sequence(rng, 200);
  const auto p = extract_profile(s, 64);
  EXPECT_EQ(p.total_windows(), 137u);
  EXPECT_EQ(p.count(s.window(10, 64)), static_cast<std::uint64_t>(naive_count(s.to_string().substr(10, 64), s.to_string())));
}

TEST(ExtractProfile, MatchesNaiveRescanOracle) {
  std::mt19937_64 rng(20260101);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::uint64_t n = 1 + rng() % 256;
    const unsigned m = 1 + static_cast<unsigned>(rng() % std::min<std::uint64_t>(16, n));
    const double p_one = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
    const auto s = testing::random_sequence(rng, n, p_one);
    const auto profile = extract_profile(s, m);
    ASSERT_EQ(as_map(profile), naive_profile(testing::bit_string(s), m)) << "n=" << n << " m=" << m;
    ASSERT_EQ(profile.total_windows(), n - m + 1);
    ASSERT_LE(profile.distinct(), std::min<std::uint64_t>(std::uint64_t{1} << m, n - m + 1));
  }
}

TEST(ExtractProfile, DenseAndSparseAgree) {
  std::mt19937_64 rng(77);
  for (unsigned m = 12; m <= 16; ++m) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto s = testing::random_sequence(rng, 16 + rng() % 3000, 0.8);
      ASSERT_EQ(extract_profile(s, m, ExtractMethod::Dense), extract_profile(s, m, ExtractMethod::Sparse)) << "m=" << m;
    }
  }
}

TEST(ExtractProfile, EveryPatternValueFitsM) {
  std::mt19937_64 rng(4);
  const auto s = testing::random_sequence(rng, 500);
  for (unsigned m : {1u, 5u, 13u, 31u, 47u}) {
    const auto profile = extract_profile(s, m);
    for (const auto& e : profile.entries()) ASSERT_LT(e.pattern, std::uint64_t{1} << m);
  }
}

TEST(MergeProfiles, Examples) {
  const auto p = extract_profile(bits("0110100"), 2);
  const std::vector<PatternProfile> twice{p, p};
  const auto doubled = merge_profiles(twice);
  EXPECT_EQ(doubled.total_windows(), 2 * p.total_windows());
  for (const auto& e : p.entries()) EXPECT_EQ(doubled.count(e.pattern), 2 * e.count);

  const std::vector<PatternProfile> disjoint{PatternProfile(2, 1, {{0b00, 1}}), PatternProfile(2, 2, {{0b01, 2}})};
  const auto merged = merge_profiles(disjoint);
  EXPECT_EQ(merged.total_windows(), 3u);
  EXPECT_EQ(as_map(merged), (std::map<std::uint64_t, std::uint64_t>{{0b00, 1}, {0b01, 2}}));
}

TEST(MergeProfiles, Errors) {
  const std::vector<PatternProfile> mixed{extract_profile(bits("0101"), 2), extract_profile(bits("0101"), 3)};
  EXPECT_EQ(kind_of([&] { merge_profiles(mixed); }), ErrorKind::IncompatibleProfile);
  EXPECT_EQ(kind_of([] { merge_profiles({}); }), ErrorKind::InvalidArgument);
}

TEST(MergeProfiles, CorpusMergeMatchesNaiveSumAndIsOrderFree) {
  const auto corpus = generate_corpus(Lcg{3}, Seed{12}, 100, 300);
  for (unsigned m : {4u, 9u, 20u}) {
    std::vector<PatternProfile> profiles;
    std::map<std::uint64_t, std::uint64_t> oracle;
    for (const auto& s : corpus.sequences) {
      profiles.push_back(extract_profile(s, m));
      for (const auto& [v, c] : naive_profile(testing::bit_string(s), m)) oracle[v] += c;
    }
    const auto merged = merge_profiles(profiles);
    EXPECT_EQ(as_map(merged), oracle);
    EXPECT_EQ(merged.total_windows(), 100u * (300 - m + 1));

    std::mt19937_64 rng(m);
    std::shuffle(profiles.begin(), profiles.end(), rng);
    EXPECT_EQ(merge_profiles(profiles), merged);
    EXPECT_EQ(extract_pooled_profile(corpus.sequences, m), merged);
  }
}

TEST(PooledProfile, ScheduleIndependent) {
  const auto corpus = generate_corpus(UniformRef{}, Seed{3}, 41, 500);
  for (unsigned m : {8u, 24u}) {
    set_thread_count(1);
    const auto one = extract_pooled_profile(corpus.sequences, m);
    set_thread_count(7);
    const auto many = extract_pooled_profile(corpus.sequences, m);
    set_thread_count(0);
    EXPECT_EQ(one, many);
  }
}

TEST(Normalize, Examples) {
  const auto d = normalize(PatternProfile(3, 8, {{0, 8}}));
  ASSERT_EQ(d.probs.size(), 1u);
  EXPECT_EQ(d.probs[0].prob, 1.0);

  const auto e = normalize(extract_profile(bits("0101"), 2));
  EXPECT_DOUBLE_EQ(e.prob(0b01), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(e.prob(0b10), 1.0 / 3.0);
  EXPECT_EQ(e.prob(0b11), 0.0);

  const auto p = extract_profile(bits("1101001110"), 3);
  const std::vector<PatternProfile> twice{p, p};
  EXPECT_EQ(normalize(merge_profiles(twice)).probs, normalize(p).probs);
}

TEST(Normalize, SumsToOne) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = testing::random_sequence(rng, 64 + rng() % 1000);
    double sum = 0.0;
    for (const auto& e : normalize(extract_profile(s, 1 + rng() % 20)).probs) {
      EXPECT_GT(e.prob, 0.0);
      sum += e.prob;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(PatternProfile, ConstructorValidates) {
  EXPECT_THROW(PatternProfile(2, 3, {{1, 1}, {0, 2}}), Error);  // unsorted
  EXPECT_THROW(PatternProfile(2, 3, {{4, 3}}), Error);          // value >= 2^m
  EXPECT_THROW(PatternProfile(2, 4, {{1, 3}}), Error);          // sum mismatch
  EXPECT_THROW(PatternProfile(2, 0, {{1, 0}}), Error);          // zero count
}

}  // namespace
}  // namespace seqprint
