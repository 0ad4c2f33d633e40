#pragma once

#include <array>
#include <cstdint>

#include "seqprint/extract.hpp"

namespace seqprint {

struct StructuralMetrics {
  unsigned m = 0;
  std::uint64_t total_windows = 0;
  std::uint64_t distinct_patterns = 0;
  double entropy_bits = 0.0;
  double entropy_max_bits = 0.0;  // min(m, log2(total_windows))
  double max_prob = 0.0;
  double distinct_fraction = 0.0;
  double repeated_window_fraction = 0.0;  // windows whose pattern occurs >= 2 times
  double mean_recurrence = 0.0;           // mean of (occurrences - 1) over distinct patterns
};

// Recurrence = occurrences - 1 per distinct pattern, binned {0, 1, 2, 3, 4+}.
struct RecurrenceHistogram {
  static constexpr std::size_t kBins = 5;
  unsigned m = 0;
  std::array<double, kBins> bins{};
};

// L1 distance between two pattern distributions over the union of their
// supports; in [0, 2]. Throws IncompatibleProfile on mismatched m.
double deviation_score(const Distribution& a, const Distribution& b);
// Same value computed straight from counts (no normalized copy).
double deviation_score(const PatternProfile& a, const PatternProfile& b);

// Plug-in Shannon entropy in bits.
double pattern_entropy(const Distribution& p);
double pattern_entropy(const PatternProfile& profile);

double entropy_upper_bound(unsigned m, std::uint64_t total_windows);

RecurrenceHistogram recurrence_histogram(const PatternProfile& profile);

StructuralMetrics concentration_stats(const PatternProfile& profile);

}  // namespace seqprint
