#pragma once

#include <span>
#include <string>
#include <vector>

#include "seqprint/extract.hpp"
#include "seqprint/metrics.hpp"

namespace seqprint {

inline constexpr int kFingerprintLayoutVersion = 1;
inline constexpr std::size_t kFeaturesPerScale = 5;

enum class Provenance { Sequence, Corpus };

std::string to_string(Provenance provenance);
Provenance provenance_from_string(const std::string& text);

// Layout (version 1), per m in m_set order:
//   [0] entropy / entropy_max   [1] max_prob   [2] distinct_fraction
//   [3] repeated_window_fraction   [4] mean_recurrence / total_windows
struct Fingerprint {
  std::vector<unsigned> m_set;
  std::vector<double> features;
  Provenance provenance = Provenance::Sequence;

  std::size_t dimension() const noexcept { return features.size(); }
  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

// The five features for one scale.
std::vector<double> scale_features(const StructuralMetrics& metrics);

// Throws IncompatibleProfile on an empty list or a duplicated m.
Fingerprint fingerprint_from_metrics(std::span<const StructuralMetrics> scales,
                                     Provenance provenance = Provenance::Sequence);

// One profile per m, in the order given. Throws IncompatibleProfile on an
// empty list or a duplicated m.
Fingerprint compute_fingerprint(std::span<const PatternProfile> profiles,
                                Provenance provenance = Provenance::Sequence);

Fingerprint fingerprint_sequence(const BitSequence& sequence, std::span<const unsigned> m_set);

// Euclidean distance. Throws IncompatibleFingerprint on shape mismatch.
double fingerprint_distance(const Fingerprint& a, const Fingerprint& b);

}  // namespace seqprint
