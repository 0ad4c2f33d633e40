#include "seqprint/extract.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "seqprint/error.hpp"
#include "seqprint/parallel.hpp"

namespace seqprint {

namespace {

void require_windows(std::uint64_t m, std::uint64_t n) {
  if (m > n) {
    throw Error(ErrorKind::EmptyWindow, "pattern length " + std::to_string(m) +
                                            " exceeds sequence length " + std::to_string(n));
  }
}

std::vector<PatternCount> run_lengths(std::span<const std::uint64_t> sorted) {
  std::vector<PatternCount> out;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i + 1;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    out.push_back({sorted[i], j - i});
    i = j;
  }
  return out;
}

std::vector<PatternCount> from_table(std::span<const std::uint64_t> table) {
  std::vector<PatternCount> out;
  for (std::size_t v = 0; v < table.size(); ++v) {
    if (table[v] != 0) out.push_back({v, table[v]});
  }
  return out;
}

}  // namespace

void check_pattern_length(unsigned m) {
  if (m < 1 || m > kMaxPatternLength) {
    throw Error(ErrorKind::InvalidArgument,
                "pattern length must be in [1, 64], got " + std::to_string(m));
  }
}

PatternProfile::PatternProfile(unsigned m, std::uint64_t total_windows,
                               std::vector<PatternCount> entries)
    : m_(m), total_windows_(total_windows), entries_(std::move(entries)) {
  check_pattern_length(m);
  const std::uint64_t limit = m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.count == 0) throw Error(ErrorKind::InvalidArgument, "profile entries must have nonzero counts");
    if (e.pattern > limit) throw Error(ErrorKind::InvalidArgument, "pattern value exceeds 2^m - 1");
    if (i > 0 && entries_[i - 1].pattern >= e.pattern) {
      throw Error(ErrorKind::InvalidArgument, "profile entries must be strictly sorted by pattern");
    }
    sum += e.count;
  }
  if (sum != total_windows_) {
    throw Error(ErrorKind::InvalidArgument, "profile counts sum to " + std::to_string(sum) +
                                                " but total_windows is " + std::to_string(total_windows_));
  }
}

std::uint64_t PatternProfile::count(std::uint64_t pattern) const noexcept {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), pattern,
                             [](const PatternCount& e, std::uint64_t p) { return e.pattern < p; });
  return it != entries_.end() && it->pattern == pattern ? it->count : 0;
}

double Distribution::prob(std::uint64_t pattern) const noexcept {
  auto it = std::lower_bound(probs.begin(), probs.end(), pattern,
                             [](const PatternProb& e, std::uint64_t p) { return e.pattern < p; });
  return it != probs.end() && it->pattern == pattern ? it->prob : 0.0;
}

std::uint64_t count_occurrences(const BitSequence& pattern, const BitSequence& sequence) {
  if (pattern.empty()) throw Error(ErrorKind::InvalidArgument, "pattern must be nonempty");
  require_windows(pattern.size(), sequence.size());
  const std::uint64_t m = pattern.size();
  if (m <= kMaxPatternLength) {
    const std::uint64_t target = pattern.window(0, static_cast<unsigned>(m));
    std::uint64_t hits = 0;
    for_each_window(sequence, static_cast<unsigned>(m), [&](std::uint64_t v) { hits += v == target; });
    return hits;
  }
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i + m <= sequence.size(); ++i) {
    std::uint64_t k = 0;
    while (k < m && sequence.bit(i + k) == pattern.bit(k)) ++k;
    hits += k == m;
  }
  return hits;
}

PatternProfile extract_profile(const BitSequence& sequence, unsigned m, ExtractMethod method) {
  check_pattern_length(m);
  require_windows(m, sequence.size());
  const std::uint64_t windows = sequence.size() - m + 1;
  if (method == ExtractMethod::Auto) method = m <= kDenseLimit ? ExtractMethod::Dense : ExtractMethod::Sparse;
  if (method == ExtractMethod::Dense) {
    if (m > kDenseLimit) {
      throw Error(ErrorKind::InvalidArgument, "dense counting is limited to m <= 16");
    }
    std::vector<std::uint64_t> table(std::size_t{1} << m, 0);
    for_each_window(sequence, m, [&](std::uint64_t v) { ++table[v]; });
    return PatternProfile(m, windows, from_table(table));
  }
  std::vector<std::uint64_t> values;
  values.reserve(windows);
  for_each_window(sequence, m, [&](std::uint64_t v) { values.push_back(v); });
  std::sort(values.begin(), values.end());
  return PatternProfile(m, windows, run_lengths(values));
}

PatternProfile merge_profiles(std::span<const PatternProfile> profiles) {
  if (profiles.empty()) throw Error(ErrorKind::InvalidArgument, "cannot merge an empty profile list");
  const unsigned m = profiles.front().m();
  std::uint64_t total = 0;
  for (const auto& p : profiles) {
    if (p.m() != m) {
      throw Error(ErrorKind::IncompatibleProfile, "cannot merge profiles with m = " + std::to_string(m) +
                                                      " and m = " + std::to_string(p.m()));
    }
    total += p.total_windows();
  }
  // Pairwise merge of sorted runs; integer addition keeps it order-independent.
  std::vector<std::vector<PatternCount>> runs;
  runs.reserve(profiles.size());
  for (const auto& p : profiles) runs.emplace_back(p.entries().begin(), p.entries().end());
  while (runs.size() > 1) {
    std::vector<std::vector<PatternCount>> next;
    next.reserve((runs.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < runs.size(); i += 2) {
      const auto& a = runs[i];
      const auto& b = runs[i + 1];
      std::vector<PatternCount> merged;
      merged.reserve(a.size() + b.size());
      std::size_t x = 0, y = 0;
      while (x < a.size() || y < b.size()) {
        if (y == b.size() || (x < a.size() && a[x].pattern < b[y].pattern)) {
          merged.push_back(a[x++]);
        } else if (x == a.size() || b[y].pattern < a[x].pattern) {
          merged.push_back(b[y++]);
        } else {
          merged.push_back({a[x].pattern, a[x].count + b[y].count});
          ++x;
          ++y;
        }
      }
      next.push_back(std::move(merged));
    }
    if (runs.size() % 2 == 1) next.push_back(std::move(runs.back()));
    runs = std::move(next);
  }
  return PatternProfile(m, total, std::move(runs.front()));
}

PatternProfile extract_pooled_profile(std::span<const BitSequence> sequences, unsigned m) {
  check_pattern_length(m);
  if (sequences.empty()) throw Error(ErrorKind::InvalidArgument, "cannot pool an empty sequence list");
  std::vector<std::uint64_t> offsets(sequences.size() + 1, 0);
  for (std::size_t i = 0; i < sequences.size(); ++i) {
    require_windows(m, sequences[i].size());
    offsets[i + 1] = offsets[i] + sequences[i].size() - m + 1;
  }
  const std::uint64_t total = offsets.back();

  if (m <= kDenseLimit) {
    const std::size_t width = std::size_t{1} << m;
    const std::size_t workers = std::min<std::size_t>(thread_count(), sequences.size());
    std::vector<std::vector<std::uint64_t>> tables(workers, std::vector<std::uint64_t>(width, 0));
    const std::size_t chunk = (sequences.size() + workers - 1) / workers;
    parallel_for(workers, [&](std::size_t wb, std::size_t we) {
      for (std::size_t w = wb; w < we; ++w) {
        auto& table = tables[w];
        const std::size_t end = std::min(sequences.size(), (w + 1) * chunk);
        for (std::size_t i = w * chunk; i < end; ++i) {
          for_each_window(sequences[i], m, [&](std::uint64_t v) { ++table[v]; });
        }
      }
    });
    for (std::size_t w = 1; w < workers; ++w) {
      for (std::size_t v = 0; v < width; ++v) tables[0][v] += tables[w][v];
    }
    return PatternProfile(m, total, from_table(tables[0]));
  }

  std::vector<std::uint64_t> values(total);
  parallel_for(sequences.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      std::uint64_t* out = values.data() + offsets[i];
      for_each_window(sequences[i], m, [&](std::uint64_t v) { *out++ = v; });
    }
  });
  std::sort(values.begin(), values.end());
  auto entries = run_lengths(values);
  values = {};
  return PatternProfile(m, total, std::move(entries));
}

Distribution normalize(const PatternProfile& profile) {
  if (profile.total_windows() == 0) throw Error(ErrorKind::EmptyWindow, "cannot normalize a profile with zero windows");
  Distribution dist{profile.m(), {}};
  dist.probs.reserve(profile.distinct());
  const double total = static_cast<double>(profile.total_windows());
  for (const auto& e : profile.entries()) dist.probs.push_back({e.pattern, static_cast<double>(e.count) / total});
  return dist;
}

}  // namespace seqprint
