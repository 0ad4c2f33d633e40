#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "seqprint/bits.hpp"

namespace seqprint {

inline constexpr unsigned kMaxPatternLength = 64;
// Largest m counted with a dense 2^m table under ExtractMethod::Auto.
inline constexpr unsigned kDenseLimit = 16;

// Throws InvalidArgument unless 1 <= m <= 64.
void check_pattern_length(unsigned m);

struct PatternCount {
  std::uint64_t pattern = 0;  // window bits, MSB-first
  std::uint64_t count = 0;
  friend bool operator==(const PatternCount&, const PatternCount&) = default;
};

// Occurrence counts of every observed m-bit pattern. Entries are sorted by
// pattern value with no zero counts, so equal profiles compare equal
// regardless of how they were built.
class PatternProfile {
 public:
  PatternProfile() = default;
  // Validates ordering, pattern range and that counts sum to total_windows.
  PatternProfile(unsigned m, std::uint64_t total_windows, std::vector<PatternCount> entries);

  unsigned m() const noexcept { return m_; }
  std::uint64_t total_windows() const noexcept { return total_windows_; }
  std::size_t distinct() const noexcept { return entries_.size(); }
  std::span<const PatternCount> entries() const noexcept { return entries_; }

  // Zero for unobserved patterns.
  std::uint64_t count(std::uint64_t pattern) const noexcept;

  friend bool operator==(const PatternProfile&, const PatternProfile&) = default;

 private:
  unsigned m_ = 0;
  std::uint64_t total_windows_ = 0;
  std::vector<PatternCount> entries_;
};

struct PatternProb {
  std::uint64_t pattern = 0;
  double prob = 0.0;
  friend bool operator==(const PatternProb&, const PatternProb&) = default;
};

// Normalized profile; sorted by pattern, zero-probability patterns omitted.
struct Distribution {
  unsigned m = 0;
  std::vector<PatternProb> probs;

  double prob(std::uint64_t pattern) const noexcept;
};

enum class ExtractMethod { Auto, Dense, Sparse };

// Overlapping occurrences of `pattern` in `sequence`. Throws EmptyWindow when
// the pattern is longer than the sequence.
std::uint64_t count_occurrences(const BitSequence& pattern, const BitSequence& sequence);

// Stride-1 sliding-window profile. Dense counts through a 2^m table, Sparse
// sorts window values; Auto picks Dense for m <= kDenseLimit.
PatternProfile extract_profile(const BitSequence& sequence, unsigned m,
                               ExtractMethod method = ExtractMethod::Auto);

// Pattern-wise sum. Throws IncompatibleProfile on mixed m, InvalidArgument on
// an empty list.
PatternProfile merge_profiles(std::span<const PatternProfile> profiles);

// Same result as merging extract_profile over every sequence, without
// materializing per-sequence profiles. Runs in parallel.
PatternProfile extract_pooled_profile(std::span<const BitSequence> sequences, unsigned m);

Distribution normalize(const PatternProfile& profile);

}  // namespace seqprint
