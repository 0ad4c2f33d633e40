#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "seqprint/extract.hpp"
#include "seqprint/fingerprint.hpp"
#include "seqprint/metrics.hpp"
#include "seqprint/seqgen.hpp"

namespace seqprint {

inline constexpr std::uint64_t kDefaultShuffles = 100;

struct CorpusIdentity {
  GeneratorSpec spec;
  Seed master_seed;
  std::uint64_t count = 0;
  std::uint64_t length_bits = 0;

  static CorpusIdentity of(const Corpus& corpus) {
    return {corpus.spec, corpus.master_seed, corpus.count(), corpus.length_bits};
  }
  friend bool operator==(const CorpusIdentity&, const CorpusIdentity&) = default;
};

// Mean and standard deviation (n - 1 denominator; 0 for a single value).
struct Summary {
  double mean = 0.0;
  double stddev = 0.0;
  friend bool operator==(const Summary&, const Summary&) = default;
};

Summary summarize(std::span<const double> values);

struct ScaleAnalysis {
  unsigned m = 0;
  PatternProfile pooled;  // counts summed over every sequence
  StructuralMetrics metrics;
  RecurrenceHistogram recurrence;
  Summary sequence_entropy;  // entropy_bits computed per sequence
};

struct CorpusAnalysis {
  CorpusIdentity identity;
  std::vector<ScaleAnalysis> scales;  // in m_set order
  Fingerprint fingerprint;            // provenance = corpus

  std::vector<unsigned> m_set() const;
  // Throws IncompatibleAnalysis when m was not analyzed.
  const ScaleAnalysis& scale(unsigned m) const;
};

// Throws InvalidArgument for an empty or duplicated m_set, EmptyWindow when
// some m exceeds the sequence length.
void check_m_set(std::span<const unsigned> m_set, std::uint64_t length_bits);

CorpusAnalysis analyze_corpus(const Corpus& corpus, std::span<const unsigned> m_set);

// Entropy of one sequence's m-bit window distribution.
double sequence_entropy(const BitSequence& sequence, unsigned m);

struct NullBaseline {
  unsigned m = 0;
  std::uint64_t shuffle_count = 0;
  double d_mean = 0.0;
  double d_std = 0.0;
  Seed seed;
  friend bool operator==(const NullBaseline&, const NullBaseline&) = default;
};

// Deviation between the pooled distributions of two equal random halves of
// `sequences`, repeated shuffle_count times. With an odd count one sequence
// sits out each split. Requires >= 4 equal-length sequences and
// shuffle_count >= 2 (InvalidArgument otherwise).
NullBaseline null_baseline(std::span<const BitSequence> sequences, unsigned m,
                           std::uint64_t shuffle_count, Seed seed);
NullBaseline null_baseline(const Corpus& reference, unsigned m, std::uint64_t shuffle_count,
                           Seed seed);

// Permutation null for comparing `a` against `b`: splits the union of both
// corpora, so each half matches the size of the compared corpora.
std::vector<NullBaseline> permutation_nulls(const Corpus& a, const Corpus& b,
                                            std::span<const unsigned> m_set,
                                            std::uint64_t shuffle_count, Seed seed);

// (D - d_mean) / d_std, with +/-infinity when d_std = 0 and D differs from
// d_mean, and 0 when they coincide.
double z_score(double deviation, const NullBaseline& null);

struct ScaleComparison {
  unsigned m = 0;
  double deviation = 0.0;
  std::optional<NullBaseline> null;
  std::optional<double> z;
  StructuralMetrics a;
  StructuralMetrics b;
  RecurrenceHistogram recurrence_a;
  RecurrenceHistogram recurrence_b;
  Summary sequence_entropy_a;
  Summary sequence_entropy_b;
};

struct ComparisonReport {
  CorpusIdentity a;
  CorpusIdentity b;
  std::vector<ScaleComparison> rows;  // one per m, in m_set order
};

// `nulls` may be empty (no significance); otherwise it must hold exactly one
// baseline per analyzed m. Throws IncompatibleAnalysis on shape mismatch.
ComparisonReport compare(const CorpusAnalysis& a, const CorpusAnalysis& b,
                         std::span<const NullBaseline> nulls);

}  // namespace seqprint
