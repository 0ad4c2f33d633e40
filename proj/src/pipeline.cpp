#include "seqprint/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include "seqprint/error.hpp"
#include "seqprint/parallel.hpp"

namespace seqprint {

namespace {

struct IdCount {
  std::uint32_t id;
  std::uint32_t count;
};

// Patterns seen at least twice across the pooled sequences get a compact id;
// everything else can only ever contribute |count| = 1 to a split's L1 sum.
class SharedPatterns {
 public:
  SharedPatterns(std::span<const BitSequence> sequences, unsigned m) {
    if (m <= kDenseLimit) {
      std::vector<std::uint64_t> table(std::size_t{1} << m, 0);
      for (const auto& seq : sequences) for_each_window(seq, m, [&](std::uint64_t v) { ++table[v]; });
      dense_ids_.assign(table.size(), kNone);
      for (std::size_t v = 0; v < table.size(); ++v) {
        if (table[v] < 2) continue;
        add(v, table[v]);
        dense_ids_[v] = static_cast<std::uint32_t>(totals_.size() - 1);
      }
      return;
    }
    std::uint64_t total = 0;
    for (const auto& seq : sequences) total += seq.size() - m + 1;
    std::vector<std::uint64_t> values;
    values.reserve(total);
    for (const auto& seq : sequences) for_each_window(seq, m, [&](std::uint64_t v) { values.push_back(v); });
    std::sort(values.begin(), values.end());
    for (std::size_t i = 0; i < values.size();) {
      std::size_t j = i + 1;
      while (j < values.size() && values[j] == values[i]) ++j;
      if (j - i >= 2) add(values[i], j - i);
      i = j;
    }
  }

  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  std::size_t size() const noexcept { return totals_.size(); }
  const std::vector<std::uint64_t>& totals() const noexcept { return totals_; }

  std::uint32_t id_of(std::uint64_t pattern) const noexcept {
    if (!dense_ids_.empty()) return dense_ids_[pattern];
    auto it = std::lower_bound(patterns_.begin(), patterns_.end(), pattern);
    return it != patterns_.end() && *it == pattern ? static_cast<std::uint32_t>(it - patterns_.begin()) : kNone;
  }

 private:
  void add(std::uint64_t pattern, std::uint64_t total) {
    if (totals_.size() >= kNone) throw Error(ErrorKind::InvalidArgument, "too many shared patterns for the null baseline");
    if (dense_ids_.empty()) patterns_.push_back(pattern);
    totals_.push_back(total);
  }

  std::vector<std::uint64_t> patterns_;
  std::vector<std::uint32_t> dense_ids_;
  std::vector<std::uint64_t> totals_;
};

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

}  // namespace

Summary summarize(std::span<const double> values) {
  Summary s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return s;
}

std::vector<unsigned> CorpusAnalysis::m_set() const {
  std::vector<unsigned> out;
  out.reserve(scales.size());
  for (const auto& s : scales) out.push_back(s.m);
  return out;
}

const ScaleAnalysis& CorpusAnalysis::scale(unsigned m) const {
  for (const auto& s : scales) {
    if (s.m == m) return s;
  }
  throw Error(ErrorKind::IncompatibleAnalysis, "analysis has no block for m = " + std::to_string(m));
}

void check_m_set(std::span<const unsigned> m_set, std::uint64_t length_bits) {
  if (m_set.empty()) throw Error(ErrorKind::InvalidArgument, "m_set must not be empty");
  std::set<unsigned> seen;
  for (unsigned m : m_set) {
    check_pattern_length(m);
    if (!seen.insert(m).second) {
      throw Error(ErrorKind::InvalidArgument, "duplicate pattern length " + std::to_string(m));
    }
    if (m > length_bits) {
      throw Error(ErrorKind::EmptyWindow, "pattern length " + std::to_string(m) + " exceeds sequence length " +
                                              std::to_string(length_bits));
    }
  }
}

double sequence_entropy(const BitSequence& sequence, unsigned m) {
  check_pattern_length(m);
  if (m > sequence.size()) throw Error(ErrorKind::EmptyWindow, "pattern longer than sequence");
  const std::uint64_t windows = sequence.size() - m + 1;
  const double n = static_cast<double>(windows);
  double h = 0.0;
  auto add = [&](std::uint64_t count) {
    const double p = static_cast<double>(count) / n;
    h -= p * std::log2(p);
  };
  if (m <= kDenseLimit && (std::uint64_t{1} << m) <= 4 * windows) {
    std::vector<std::uint64_t> table(std::size_t{1} << m, 0);
    for_each_window(sequence, m, [&](std::uint64_t v) { ++table[v]; });
    for (std::uint64_t c : table) {
      if (c != 0) add(c);
    }
    return h;
  }
  std::vector<std::uint64_t> values;
  values.reserve(windows);
  for_each_window(sequence, m, [&](std::uint64_t v) { values.push_back(v); });
  std::sort(values.begin(), values.end());
  for (std::size_t i = 0; i < values.size();) {
    std::size_t j = i + 1;
    while (j < values.size() && values[j] == values[i]) ++j;
    add(j - i);
    i = j;
  }
  return h;
}

CorpusAnalysis analyze_corpus(const Corpus& corpus, std::span<const unsigned> m_set) {
  if (corpus.sequences.empty()) throw Error(ErrorKind::InvalidArgument, "cannot analyze an empty corpus");
  for (const auto& seq : corpus.sequences) {
    if (seq.size() != corpus.length_bits) {
      throw Error(ErrorKind::InvalidArgument, "corpus sequences must share length_bits");
    }
  }
  check_m_set(m_set, corpus.length_bits);

  CorpusAnalysis analysis;
  analysis.identity = CorpusIdentity::of(corpus);
  std::vector<double> entropies(corpus.count());
  for (unsigned m : m_set) {
    ScaleAnalysis scale;
    scale.m = m;
    scale.pooled = extract_pooled_profile(corpus.sequences, m);
    scale.metrics = concentration_stats(scale.pooled);
    scale.recurrence = recurrence_histogram(scale.pooled);
    parallel_for(corpus.count(), [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) entropies[i] = sequence_entropy(corpus.sequences[i], m);
    });
    scale.sequence_entropy = summarize(entropies);
    analysis.scales.push_back(std::move(scale));
  }
  std::vector<StructuralMetrics> metrics;
  for (const auto& s : analysis.scales) metrics.push_back(s.metrics);
  analysis.fingerprint = fingerprint_from_metrics(metrics, Provenance::Corpus);
  return analysis;
}

NullBaseline null_baseline(std::span<const BitSequence> sequences, unsigned m,
                           std::uint64_t shuffle_count, Seed seed) {
  check_pattern_length(m);
  if (sequences.size() < 4) throw Error(ErrorKind::InvalidArgument, "null baseline needs at least 4 sequences");
  if (shuffle_count < 2) throw Error(ErrorKind::InvalidArgument, "null baseline needs at least 2 shuffles");
  const std::uint64_t length = sequences.front().size();
  for (const auto& seq : sequences) {
    if (seq.size() != length) throw Error(ErrorKind::InvalidArgument, "null baseline needs equal-length sequences");
  }
  if (m > length) throw Error(ErrorKind::EmptyWindow, "pattern longer than sequences");
  if (length - m + 1 > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorKind::InvalidArgument, "sequences too long for the null baseline");
  }

  const std::size_t count = sequences.size();
  const SharedPatterns shared(sequences, m);

  // Per sequence: (shared id, count) pairs plus how many windows hit patterns
  // seen exactly once in the whole pool.
  std::vector<std::vector<IdCount>> per_seq(count);
  std::vector<std::uint64_t> singles(count, 0);
  parallel_for(count, [&](std::size_t begin, std::size_t end) {
    std::vector<std::uint32_t> ids;
    for (std::size_t s = begin; s < end; ++s) {
      ids.clear();
      std::uint64_t lone = 0;
      for_each_window(sequences[s], m, [&](std::uint64_t v) {
        const std::uint32_t id = shared.id_of(v);
        if (id == SharedPatterns::kNone) {
          ++lone;
        } else {
          ids.push_back(id);
        }
      });
      std::sort(ids.begin(), ids.end());
      auto& out = per_seq[s];
      for (std::size_t i = 0; i < ids.size();) {
        std::size_t j = i + 1;
        while (j < ids.size() && ids[j] == ids[i]) ++j;
        out.push_back({ids[i], static_cast<std::uint32_t>(j - i)});
        i = j;
      }
      out.shrink_to_fit();
      singles[s] = lone;
    }
  });

  const std::size_t half = count / 2;
  const double half_windows = static_cast<double>(half) * static_cast<double>(length - m + 1);
  std::vector<double> deviations(shuffle_count);
  parallel_for(shuffle_count, [&](std::size_t begin, std::size_t end) {
    std::vector<std::size_t> order(count);
    std::vector<std::int64_t> target(shared.size());
    std::vector<std::int64_t> side_a(shared.size());
    for (std::size_t k = begin; k < end; ++k) {
      std::mt19937_64 rng(mix64(seed.value ^ mix64(k)));
      std::iota(order.begin(), order.end(), std::size_t{0});
      for (std::size_t i = 0; i < 2 * half; ++i) std::swap(order[i], order[i + bounded(rng, count - i)]);

      // With both halves drawn from the pool, |a - b| = |2a - t| where t is
      // the pool total minus any sequence left out of the split.
      for (std::size_t id = 0; id < shared.size(); ++id) target[id] = static_cast<std::int64_t>(shared.totals()[id]);
      std::fill(side_a.begin(), side_a.end(), 0);
      std::uint64_t l1 = 0;
      for (std::size_t i = 2 * half; i < count; ++i) {
        for (const auto& e : per_seq[order[i]]) target[e.id] -= e.count;
      }
      for (std::size_t i = 0; i < 2 * half; ++i) l1 += singles[order[i]];
      for (std::size_t i = 0; i < half; ++i) {
        for (const auto& e : per_seq[order[i]]) side_a[e.id] += e.count;
      }
      for (std::size_t id = 0; id < shared.size(); ++id) {
        const std::int64_t diff = 2 * side_a[id] - target[id];
        l1 += static_cast<std::uint64_t>(diff < 0 ? -diff : diff);
      }
      deviations[k] = static_cast<double>(l1) / half_windows;
    }
  });

  const Summary stats = summarize(deviations);
  return NullBaseline{m, shuffle_count, stats.mean, stats.stddev, seed};
}

NullBaseline null_baseline(const Corpus& reference, unsigned m, std::uint64_t shuffle_count, Seed seed) {
  return null_baseline(std::span<const BitSequence>(reference.sequences), m, shuffle_count, seed);
}

std::vector<NullBaseline> permutation_nulls(const Corpus& a, const Corpus& b,
                                            std::span<const unsigned> m_set,
                                            std::uint64_t shuffle_count, Seed seed) {
  if (a.length_bits != b.length_bits) {
    throw Error(ErrorKind::IncompatibleAnalysis, "corpora have different sequence lengths");
  }
  check_m_set(m_set, a.length_bits);
  std::vector<BitSequence> pool;
  pool.reserve(a.count() + b.count());
  pool.insert(pool.end(), a.sequences.begin(), a.sequences.end());
  pool.insert(pool.end(), b.sequences.begin(), b.sequences.end());
  std::vector<NullBaseline> out;
  for (unsigned m : m_set) out.push_back(null_baseline(pool, m, shuffle_count, seed));
  return out;
}

double z_score(double deviation, const NullBaseline& null) {
  if (null.d_std > 0.0) return (deviation - null.d_mean) / null.d_std;
  if (deviation > null.d_mean) return std::numeric_limits<double>::infinity();
  if (deviation < null.d_mean) return -std::numeric_limits<double>::infinity();
  return 0.0;
}

ComparisonReport compare(const CorpusAnalysis& a, const CorpusAnalysis& b, std::span<const NullBaseline> nulls) {
  if (a.m_set() != b.m_set()) throw Error(ErrorKind::IncompatibleAnalysis, "analyses cover different m_set");
  if (a.identity.length_bits != b.identity.length_bits) {
    throw Error(ErrorKind::IncompatibleAnalysis, "analyses have different sequence lengths");
  }
  if (!nulls.empty() && nulls.size() != a.scales.size()) {
    throw Error(ErrorKind::IncompatibleAnalysis, "need exactly one null baseline per pattern length");
  }
  ComparisonReport report{a.identity, b.identity, {}};
  for (const auto& sa : a.scales) {
    const auto& sb = b.scale(sa.m);
    ScaleComparison row;
    row.m = sa.m;
    row.deviation = deviation_score(sa.pooled, sb.pooled);
    if (!nulls.empty()) {
      auto it = std::find_if(nulls.begin(), nulls.end(), [&](const NullBaseline& n) { return n.m == sa.m; });
      if (it == nulls.end()) {
        throw Error(ErrorKind::IncompatibleAnalysis, "no null baseline for m = " + std::to_string(sa.m));
      }
      row.null = *it;
      row.z = z_score(row.deviation, *it);
    }
    row.a = sa.metrics;
    row.b = sb.metrics;
    row.recurrence_a = sa.recurrence;
    row.recurrence_b = sb.recurrence;
    row.sequence_entropy_a = sa.sequence_entropy;
    row.sequence_entropy_b = sb.sequence_entropy;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace seqprint
