#include "seqprint/fingerprint.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "seqprint/error.hpp"

namespace seqprint {

std::string to_string(Provenance provenance) {
  return provenance == Provenance::Corpus ? "corpus" : "sequence";
}

Provenance provenance_from_string(const std::string& text) {
  if (text == "corpus") return Provenance::Corpus;
  if (text == "sequence") return Provenance::Sequence;
  throw Error(ErrorKind::Format, "unknown fingerprint provenance '" + text + "'");
}

std::vector<double> scale_features(const StructuralMetrics& metrics) {
  // A single window has no spread to normalize against.
  const double normalized_entropy =
      metrics.entropy_max_bits > 0.0 ? std::clamp(metrics.entropy_bits / metrics.entropy_max_bits, 0.0, 1.0)
                                     : 0.0;
  return {
      normalized_entropy,
      metrics.max_prob,
      metrics.distinct_fraction,
      metrics.repeated_window_fraction,
      metrics.mean_recurrence / static_cast<double>(metrics.total_windows),
  };
}

Fingerprint fingerprint_from_metrics(std::span<const StructuralMetrics> scales, Provenance provenance) {
  if (scales.empty()) throw Error(ErrorKind::IncompatibleProfile, "fingerprint needs at least one scale");
  Fingerprint fp;
  fp.provenance = provenance;
  std::set<unsigned> seen;
  for (const auto& metrics : scales) {
    if (!seen.insert(metrics.m).second) {
      throw Error(ErrorKind::IncompatibleProfile, "duplicate pattern length " + std::to_string(metrics.m));
    }
    fp.m_set.push_back(metrics.m);
    const auto features = scale_features(metrics);
    fp.features.insert(fp.features.end(), features.begin(), features.end());
  }
  return fp;
}

Fingerprint compute_fingerprint(std::span<const PatternProfile> profiles, Provenance provenance) {
  std::vector<StructuralMetrics> scales;
  scales.reserve(profiles.size());
  for (const auto& profile : profiles) scales.push_back(concentration_stats(profile));
  return fingerprint_from_metrics(scales, provenance);
}

Fingerprint fingerprint_sequence(const BitSequence& sequence, std::span<const unsigned> m_set) {
  std::vector<PatternProfile> profiles;
  profiles.reserve(m_set.size());
  for (unsigned m : m_set) profiles.push_back(extract_profile(sequence, m));
  return compute_fingerprint(profiles, Provenance::Sequence);
}

double fingerprint_distance(const Fingerprint& a, const Fingerprint& b) {
  if (a.m_set != b.m_set || a.features.size() != b.features.size()) {
    throw Error(ErrorKind::IncompatibleFingerprint, "fingerprints have different m_set or dimension");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.features.size(); ++i) {
    const double diff = a.features[i] - b.features[i];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

}  // namespace seqprint
