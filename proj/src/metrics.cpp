#include "seqprint/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "seqprint/error.hpp"

namespace seqprint {

namespace {

void require_same_m(unsigned a, unsigned b) {
  if (a != b) {
    throw Error(ErrorKind::IncompatibleProfile,
                "pattern lengths differ (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

void require_windows(const PatternProfile& profile) {
  if (profile.total_windows() == 0) throw Error(ErrorKind::EmptyWindow, "profile has no windows");
}

// Walks two pattern-sorted ranges in lockstep, calling fn(pa, pb) with the
// probability on each side (0 where absent).
template <typename A, typename B, typename ProbA, typename ProbB, typename Fn>
void union_walk(const A& a, const B& b, ProbA prob_a, ProbB prob_b, Fn&& fn) {
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].pattern < b[j].pattern)) {
      fn(prob_a(a[i++]), 0.0);
    } else if (i == a.size() || b[j].pattern < a[i].pattern) {
      fn(0.0, prob_b(b[j++]));
    } else {
      fn(prob_a(a[i++]), prob_b(b[j++]));
    }
  }
}

inline double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

}  // namespace

double deviation_score(const Distribution& a, const Distribution& b) {
  require_same_m(a.m, b.m);
  double d = 0.0;
  auto prob = [](const PatternProb& e) { return e.prob; };
  union_walk(a.probs, b.probs, prob, prob, [&](double pa, double pb) { d += std::abs(pa - pb); });
  return d;
}

double deviation_score(const PatternProfile& a, const PatternProfile& b) {
  require_same_m(a.m(), b.m());
  require_windows(a);
  require_windows(b);
  const double na = static_cast<double>(a.total_windows());
  const double nb = static_cast<double>(b.total_windows());
  double d = 0.0;
  union_walk(
      a.entries(), b.entries(), [na](const PatternCount& e) { return static_cast<double>(e.count) / na; },
      [nb](const PatternCount& e) { return static_cast<double>(e.count) / nb; },
      [&](double pa, double pb) { d += std::abs(pa - pb); });
  return d;
}

double pattern_entropy(const Distribution& p) {
  double h = 0.0;
  for (const auto& e : p.probs) h -= plogp(e.prob);
  return h;
}

double pattern_entropy(const PatternProfile& profile) {
  require_windows(profile);
  const double n = static_cast<double>(profile.total_windows());
  double h = 0.0;
  for (const auto& e : profile.entries()) h -= plogp(static_cast<double>(e.count) / n);
  return h;
}

double entropy_upper_bound(unsigned m, std::uint64_t total_windows) {
  if (total_windows == 0) return 0.0;
  return std::min(static_cast<double>(m), std::log2(static_cast<double>(total_windows)));
}

RecurrenceHistogram recurrence_histogram(const PatternProfile& profile) {
  require_windows(profile);
  std::array<std::uint64_t, RecurrenceHistogram::kBins> tally{};
  for (const auto& e : profile.entries()) {
    ++tally[std::min<std::uint64_t>(e.count - 1, RecurrenceHistogram::kBins - 1)];
  }
  RecurrenceHistogram hist;
  hist.m = profile.m();
  const double distinct = static_cast<double>(profile.distinct());
  for (std::size_t k = 0; k < tally.size(); ++k) hist.bins[k] = static_cast<double>(tally[k]) / distinct;
  return hist;
}

StructuralMetrics concentration_stats(const PatternProfile& profile) {
  require_windows(profile);
  StructuralMetrics s;
  s.m = profile.m();
  s.total_windows = profile.total_windows();
  s.distinct_patterns = profile.distinct();
  s.entropy_bits = pattern_entropy(profile);
  s.entropy_max_bits = entropy_upper_bound(s.m, s.total_windows);

  std::uint64_t max_count = 0;
  std::uint64_t repeated_windows = 0;
  for (const auto& e : profile.entries()) {
    max_count = std::max(max_count, e.count);
    if (e.count >= 2) repeated_windows += e.count;
  }
  const double n = static_cast<double>(s.total_windows);
  const double distinct = static_cast<double>(s.distinct_patterns);
  s.max_prob = static_cast<double>(max_count) / n;
  s.distinct_fraction = distinct / n;
  s.repeated_window_fraction = static_cast<double>(repeated_windows) / n;
  s.mean_recurrence = static_cast<double>(s.total_windows - s.distinct_patterns) / distinct;
  return s;
}

}  // namespace seqprint
