#include "seqprint/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <memory>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "seqprint/error.hpp"

namespace seqprint {

using json = nlohmann::ordered_json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr char kProfileMagic[4] = {'S', 'B', 'F', 'P'};
constexpr std::uint16_t kProfileVersion = 1;

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), &EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
      throw Error(ErrorKind::Io, "cannot initialise SHA-256");
    }
  }
  void update(const void* data, std::size_t size) { EVP_DigestUpdate(ctx_.get(), data, size); }
  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned len = 0;
    EVP_DigestFinal_ex(ctx_.get(), md.data(), &len);
    std::string out;
    for (unsigned i = 0; i < len; ++i) out += fmt::format("{:02x}", md[i]);
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

void put_varint(std::string& out, std::uint64_t value) {
  while (value >= 0x80) {
    out.push_back(static_cast<char>((value & 0x7F) | 0x80));
    value >>= 7;
  }
  out.push_back(static_cast<char>(value));
}

void put_be(std::string& out, std::uint64_t value, int octets) {
  for (int i = octets - 1; i >= 0; --i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
}

// Cursor over an in-memory profile stream.
class ByteReader {
 public:
  explicit ByteReader(std::string_view data) : data_(data) {}

  std::uint8_t byte() {
    if (pos_ >= data_.size()) throw Error(ErrorKind::Format, "truncated profile stream");
    return static_cast<std::uint8_t>(data_[pos_++]);
  }
  std::uint64_t be(int octets) {
    std::uint64_t v = 0;
    for (int i = 0; i < octets; ++i) v = (v << 8) | byte();
    return v;
  }
  std::uint64_t varint() {
    std::uint64_t v = 0;
    for (int shift = 0; shift < 64; shift += 7) {
      const std::uint8_t b = byte();
      v |= static_cast<std::uint64_t>(b & 0x7F) << shift;
      if ((b & 0x80) == 0) return v;
    }
    throw Error(ErrorKind::Format, "malformed varint in profile stream");
  }
  bool done() const noexcept { return pos_ == data_.size(); }

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
};

json identity_to_json(const CorpusIdentity& id) {
  json gen = std::visit(overloaded{
                            [](const ArxKeystream& s) { return json{{"kind", "arx"}, {"rounds", s.rounds}}; },
                            [](const Lcg& s) {
                              return json{{"kind", "lcg"},
                                          {"bits_per_step", s.bits_per_step},
                                          {"modulus", Lcg::kModulus},
                                          {"multiplier", Lcg::kMultiplier},
                                          {"increment", Lcg::kIncrement}};
                            },
                            [](const BiasedBits& s) { return json{{"kind", "biased"}, {"p_one", s.p_one}}; },
                            [](const UniformRef&) { return json{{"kind", "uniform"}}; },
                        },
                        id.spec);
  return json{{"generator", gen},
              {"master_seed", id.master_seed.value},
              {"count", id.count},
              {"length_bits", id.length_bits}};
}

CorpusIdentity identity_from_json(const json& j) {
  CorpusIdentity id;
  const auto& gen = j.at("generator");
  const std::string kind = gen.at("kind").get<std::string>();
  if (kind == "arx") {
    id.spec = ArxKeystream{gen.at("rounds").get<unsigned>()};
  } else if (kind == "lcg") {
    id.spec = Lcg{gen.at("bits_per_step").get<unsigned>()};
  } else if (kind == "biased") {
    id.spec = BiasedBits{gen.at("p_one").get<double>()};
  } else if (kind == "uniform") {
    id.spec = UniformRef{};
  } else {
    throw Error(ErrorKind::Format, "unknown generator kind '" + kind + "'");
  }
  id.master_seed = Seed{j.at("master_seed").get<std::uint64_t>()};
  id.count = j.at("count").get<std::uint64_t>();
  id.length_bits = j.at("length_bits").get<std::uint64_t>();
  return id;
}

json metrics_to_json(const StructuralMetrics& s) {
  return json{{"total_windows", s.total_windows},
              {"distinct_patterns", s.distinct_patterns},
              {"entropy_bits", s.entropy_bits},
              {"entropy_max_bits", s.entropy_max_bits},
              {"max_prob", s.max_prob},
              {"distinct_fraction", s.distinct_fraction},
              {"repeated_window_fraction", s.repeated_window_fraction},
              {"mean_recurrence", s.mean_recurrence}};
}

json fingerprint_json(const Fingerprint& fp) {
  return json{{"layout_version", kFingerprintLayoutVersion},
              {"m_set", fp.m_set},
              {"provenance", to_string(fp.provenance)},
              {"d", fp.features.size()},
              {"features", fp.features}};
}

json number_or_marker(double value) {
  if (std::isinf(value)) return value > 0 ? "+inf" : "-inf";
  return value;
}

std::string describe_identity(const CorpusIdentity& id) {
  return fmt::format("{} seed={} count={} length={}", describe(id.spec), id.master_seed.value, id.count,
                     id.length_bits);
}

template <typename F>
auto parse_guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Format, e.what());
  }
}

}  // namespace

std::string sha256_hex(std::span<const std::uint8_t> data) {
  Sha256 h;
  h.update(data.data(), data.size());
  return h.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  Sha256 h;
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return h.hex();
}

void write_profiles(std::ostream& out, std::span<const PatternProfile* const> profiles) {
  std::string buf(kProfileMagic, 4);
  put_be(buf, kProfileVersion, 2);
  put_be(buf, profiles.size(), 4);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  for (const PatternProfile* p : profiles) {
    buf.clear();
    put_be(buf, p->m(), 1);
    put_be(buf, p->total_windows(), 8);
    put_be(buf, p->distinct(), 8);
    std::uint64_t prev = 0;
    for (const auto& e : p->entries()) {
      put_varint(buf, e.pattern - prev);
      put_varint(buf, e.count);
      prev = e.pattern;
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
  if (!out) throw Error(ErrorKind::Io, "failed writing profile stream");
}

std::vector<PatternProfile> read_profiles(std::istream& in) {
  const std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (data.size() < 4 || std::memcmp(data.data(), kProfileMagic, 4) != 0) {
    throw Error(ErrorKind::Format, "not a profile stream (bad magic)");
  }
  ByteReader r(std::string_view(data).substr(4));
  if (r.be(2) != kProfileVersion) throw Error(ErrorKind::Format, "unsupported profile stream version");
  const auto n = r.be(4);
  std::vector<PatternProfile> out;
  for (std::uint64_t k = 0; k < n; ++k) {
    const auto m = static_cast<unsigned>(r.byte());
    const auto total = r.be(8);
    const auto distinct = r.be(8);
    std::vector<PatternCount> entries;
    entries.reserve(std::min<std::uint64_t>(distinct, data.size()));
    std::uint64_t prev = 0;
    for (std::uint64_t i = 0; i < distinct; ++i) {
      const std::uint64_t pattern = prev + r.varint();
      entries.push_back({pattern, r.varint()});
      prev = pattern;
    }
    try {
      out.emplace_back(m, total, std::move(entries));
    } catch (const Error& e) {
      throw Error(ErrorKind::Format, std::string("inconsistent profile in stream: ") + e.what());
    }
  }
  if (!r.done()) throw Error(ErrorKind::Format, "trailing bytes after the declared profiles");
  return out;
}

std::filesystem::path profiles_path_for(const std::filesystem::path& analysis_path) {
  auto p = analysis_path;
  p += ".profiles";
  return p;
}

void write_analysis(const std::filesystem::path& path, const CorpusAnalysis& analysis) {
  const auto side = profiles_path_for(path);
  {
    std::ofstream out(side, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + side.string() + " for writing");
    std::vector<const PatternProfile*> ptrs;
    for (const auto& s : analysis.scales) ptrs.push_back(&s.pooled);
    write_profiles(out, ptrs);
    out.close();
    if (!out) throw Error(ErrorKind::Io, "failed writing " + side.string());
  }
  json scales = json::array();
  for (const auto& s : analysis.scales) {
    scales.push_back(json{{"m", s.m},
                          {"metrics", metrics_to_json(s.metrics)},
                          {"recurrence_bins", s.recurrence.bins},
                          {"sequence_entropy", {{"mean", s.sequence_entropy.mean}, {"std", s.sequence_entropy.stddev}}}});
  }
  json doc{{"schema", "seqprint.analysis"},
           {"schema_version", kAnalysisSchemaVersion},
           {"aggregation", "pooled"},
           {"corpus", identity_to_json(analysis.identity)},
           {"m_set", analysis.m_set()},
           {"profiles_file", side.filename().string()},
           {"profiles_sha256", sha256_file(side)},
           {"scales", scales},
           {"fingerprint", fingerprint_json(analysis.fingerprint)}};
  write_text_file(path, doc.dump(2) + "\n");
}

CorpusAnalysis read_analysis(const std::filesystem::path& path) {
  const json doc = parse_guarded([&] { return json::parse(read_text_file(path)); });
  return parse_guarded([&] {
    if (doc.at("schema").get<std::string>() != "seqprint.analysis" ||
        doc.at("schema_version").get<int>() != kAnalysisSchemaVersion) {
      throw Error(ErrorKind::Format, path.string() + " is not a version 1 analysis document");
    }
    CorpusAnalysis analysis;
    analysis.identity = identity_from_json(doc.at("corpus"));
    const auto side = path.parent_path() / doc.at("profiles_file").get<std::string>();
    if (sha256_file(side) != doc.at("profiles_sha256").get<std::string>()) {
      throw Error(ErrorKind::Format, side.string() + " does not match the digest recorded in " + path.string());
    }
    std::ifstream in(side, std::ios::binary);
    auto profiles = read_profiles(in);
    const auto& scales = doc.at("scales");
    if (profiles.size() != scales.size()) throw Error(ErrorKind::Format, "profile count does not match scales");
    std::vector<StructuralMetrics> metrics;
    for (std::size_t i = 0; i < profiles.size(); ++i) {
      const auto& js = scales.at(i);
      ScaleAnalysis s;
      s.m = js.at("m").get<unsigned>();
      if (profiles[i].m() != s.m) throw Error(ErrorKind::Format, "profile order does not match scales");
      s.pooled = std::move(profiles[i]);
      s.metrics = concentration_stats(s.pooled);
      s.recurrence = recurrence_histogram(s.pooled);
      s.sequence_entropy = {js.at("sequence_entropy").at("mean").get<double>(),
                            js.at("sequence_entropy").at("std").get<double>()};
      metrics.push_back(s.metrics);
      analysis.scales.push_back(std::move(s));
    }
    analysis.fingerprint = fingerprint_from_metrics(metrics, Provenance::Corpus);
    return analysis;
  });
}

std::string fingerprint_to_json(const Fingerprint& fp) { return fingerprint_json(fp).dump(2) + "\n"; }

Fingerprint fingerprint_from_json(const std::string& text) {
  return parse_guarded([&] {
    const json j = json::parse(text);
    if (j.at("layout_version").get<int>() != kFingerprintLayoutVersion) {
      throw Error(ErrorKind::Format, "unsupported fingerprint layout version");
    }
    Fingerprint fp;
    fp.m_set = j.at("m_set").get<std::vector<unsigned>>();
    fp.provenance = provenance_from_string(j.at("provenance").get<std::string>());
    fp.features = j.at("features").get<std::vector<double>>();
    const auto d = j.at("d").get<std::size_t>();
    if (d != fp.features.size() || d != kFeaturesPerScale * fp.m_set.size()) {
      throw Error(ErrorKind::Format, "fingerprint dimension does not match its m_set");
    }
    return fp;
  });
}

std::string report_to_json(const ComparisonReport& report) {
  json rows = json::array();
  std::vector<unsigned> m_set;
  for (const auto& r : report.rows) {
    m_set.push_back(r.m);
    json null_json = nullptr;
    if (r.null) {
      null_json = json{{"shuffle_count", r.null->shuffle_count},
                       {"d_mean", r.null->d_mean},
                       {"d_std", r.null->d_std},
                       {"seed", r.null->seed.value}};
    }
    rows.push_back(json{
        {"m", r.m},
        {"deviation", r.deviation},
        {"z", r.z ? number_or_marker(*r.z) : json(nullptr)},
        {"null", null_json},
        {"entropy",
         {{"a", r.a.entropy_bits},
          {"b", r.b.entropy_bits},
          {"a_max", r.a.entropy_max_bits},
          {"b_max", r.b.entropy_max_bits},
          {"a_sequence_mean", r.sequence_entropy_a.mean},
          {"a_sequence_std", r.sequence_entropy_a.stddev},
          {"b_sequence_mean", r.sequence_entropy_b.mean},
          {"b_sequence_std", r.sequence_entropy_b.stddev}}},
        {"concentration", {{"a", metrics_to_json(r.a)}, {"b", metrics_to_json(r.b)}}},
        {"recurrence", {{"bins", {"0", "1", "2", "3", "4+"}}, {"a", r.recurrence_a.bins}, {"b", r.recurrence_b.bins}}},
    });
  }
  json doc{{"schema", "seqprint.report"},
           {"schema_version", kReportSchemaVersion},
           {"aggregation", "pooled"},
           {"corpus_a", identity_to_json(report.a)},
           {"corpus_b", identity_to_json(report.b)},
           {"m_set", m_set},
           {"scales", rows}};
  return doc.dump(2) + "\n";
}

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "+inf" : "-inf";
  return fmt::format("{}", value);
}

std::string deviation_csv(const ComparisonReport& report) {
  std::string out = "m,deviation,z,null_d_mean,null_d_std,null_shuffles\n";
  for (const auto& r : report.rows) {
    out += fmt::format("{},{},{},{},{},{}\n", r.m, format_number(r.deviation), r.z ? format_number(*r.z) : "",
                       r.null ? format_number(r.null->d_mean) : "", r.null ? format_number(r.null->d_std) : "",
                       r.null ? std::to_string(r.null->shuffle_count) : "");
  }
  return out;
}

std::string entropy_csv(const ComparisonReport& report) {
  std::string out =
      "m,entropy_a,entropy_b,entropy_max_a,entropy_max_b,"
      "sequence_entropy_mean_a,sequence_entropy_std_a,sequence_entropy_mean_b,sequence_entropy_std_b\n";
  for (const auto& r : report.rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", r.m, format_number(r.a.entropy_bits),
                       format_number(r.b.entropy_bits), format_number(r.a.entropy_max_bits),
                       format_number(r.b.entropy_max_bits), format_number(r.sequence_entropy_a.mean),
                       format_number(r.sequence_entropy_a.stddev), format_number(r.sequence_entropy_b.mean),
                       format_number(r.sequence_entropy_b.stddev));
  }
  return out;
}

std::string recurrence_csv(const ComparisonReport& report) {
  std::string out = "m,a_r0,a_r1,a_r2,a_r3,a_r4plus,b_r0,b_r1,b_r2,b_r3,b_r4plus\n";
  for (const auto& r : report.rows) {
    out += std::to_string(r.m);
    for (double v : r.recurrence_a.bins) out += "," + format_number(v);
    for (double v : r.recurrence_b.bins) out += "," + format_number(v);
    out += "\n";
  }
  return out;
}

std::string concentration_csv(const ComparisonReport& report) {
  std::string out =
      "m,max_prob_a,max_prob_b,repeated_window_fraction_a,repeated_window_fraction_b,"
      "distinct_fraction_a,distinct_fraction_b\n";
  for (const auto& r : report.rows) {
    out += fmt::format("{},{},{},{},{},{},{}\n", r.m, format_number(r.a.max_prob), format_number(r.b.max_prob),
                       format_number(r.a.repeated_window_fraction), format_number(r.b.repeated_window_fraction),
                       format_number(r.a.distinct_fraction), format_number(r.b.distinct_fraction));
  }
  return out;
}

std::string render_tables(const ComparisonReport& report) {
  std::string out;
  out += fmt::format("A: {}\nB: {}\n\n", describe_identity(report.a), describe_identity(report.b));

  out += "Concentration\n";
  out += fmt::format("{:>8} | {:>12} {:>12} | {:>12} {:>12} | {:>12} {:>12}\n", "m", "max_prob A", "max_prob B",
                     "repeated A", "repeated B", "distinct A", "distinct B");
  for (const auto& r : report.rows) {
    out += fmt::format("{:>8} | {:>12.6g} {:>12.6g} | {:>12.6g} {:>12.6g} | {:>12.6g} {:>12.6g}\n",
                       fmt::format("{} bits", r.m), r.a.max_prob, r.b.max_prob, r.a.repeated_window_fraction,
                       r.b.repeated_window_fraction, r.a.distinct_fraction, r.b.distinct_fraction);
  }

  out += "\nDeviation\n";
  out += fmt::format("{:>8} | {:>12} | {:>12} {:>12} | {:>10}\n", "m", "D", "null mean", "null std", "z");
  for (const auto& r : report.rows) {
    out += fmt::format("{:>8} | {:>12.6g} | {:>12} {:>12} | {:>10}\n", fmt::format("{} bits", r.m), r.deviation,
                       r.null ? fmt::format("{:.6g}", r.null->d_mean) : "-",
                       r.null ? fmt::format("{:.6g}", r.null->d_std) : "-",
                       r.z ? (std::isinf(*r.z) ? format_number(*r.z) : fmt::format("{:.3f}", *r.z)) : "-");
  }

  out += "\nEntropy (bits)\n";
  out += fmt::format("{:>8} | {:>10} {:>10} | {:>10} | {:>14} {:>14}\n", "m", "pooled A", "pooled B", "bound",
                     "per-seq A", "per-seq B");
  for (const auto& r : report.rows) {
    out += fmt::format("{:>8} | {:>10.4f} {:>10.4f} | {:>10.4f} | {:>14} {:>14}\n", fmt::format("{} bits", r.m),
                       r.a.entropy_bits, r.b.entropy_bits, r.a.entropy_max_bits,
                       fmt::format("{:.4f}±{:.4f}", r.sequence_entropy_a.mean, r.sequence_entropy_a.stddev),
                       fmt::format("{:.4f}±{:.4f}", r.sequence_entropy_b.mean, r.sequence_entropy_b.stddev));
  }

  out += "\nRecurrence (fraction of distinct patterns)\n";
  out += fmt::format("{:>8} {:>3} | {:>8} {:>8} {:>8} {:>8} {:>8}\n", "m", "", "0", "1", "2", "3", "4+");
  for (const auto& r : report.rows) {
    const auto& ha = r.recurrence_a.bins;
    const auto& hb = r.recurrence_b.bins;
    out += fmt::format("{:>8} {:>3} | {:>8.4f} {:>8.4f} {:>8.4f} {:>8.4f} {:>8.4f}\n", fmt::format("{} bits", r.m), "A",
                       ha[0], ha[1], ha[2], ha[3], ha[4]);
    out += fmt::format("{:>8} {:>3} | {:>8.4f} {:>8.4f} {:>8.4f} {:>8.4f} {:>8.4f}\n", "", "B", hb[0], hb[1], hb[2],
                       hb[3], hb[4]);
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace seqprint
