// seqprint: generate, analyze, compare and fingerprint bit-sequence corpora.
//
// Exit status: 0 success, 1 usage/validation error, 2 data/format error,
// 3 internal error.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "seqprint/error.hpp"
#include "seqprint/io.hpp"
#include "seqprint/pipeline.hpp"
#include "seqprint/seqgen.hpp"

namespace fs = std::filesystem;
using namespace seqprint;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

struct GenerateOptions {
  std::string gen = "arx";
  std::optional<unsigned> rounds;
  std::optional<unsigned> bits_per_step;
  std::optional<double> p_one;
  std::uint64_t count = 10000;
  std::uint64_t length = 4096;
  std::uint64_t seed = 0;
  std::string out;
};

struct AnalyzeOptions {
  std::string in;
  std::vector<unsigned> m_set{8, 16, 32};
  std::string out;
};

struct CompareOptions {
  std::string a;
  std::string b;
  std::vector<std::string> null_corpora;
  std::uint64_t shuffles = kDefaultShuffles;
  std::uint64_t null_seed = 0;
  std::string out_dir = ".";
  std::string format = "all";
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

GeneratorSpec build_spec(const GenerateOptions& o) {
  auto reject = [&](bool present, const char* flag) {
    if (present) throw UsageError(std::string(flag) + " does not apply to --gen " + o.gen);
  };
  GeneratorSpec spec;
  if (o.gen == "arx") {
    reject(o.bits_per_step.has_value(), "--bits-per-step");
    reject(o.p_one.has_value(), "--p-one");
    spec = ArxKeystream{o.rounds.value_or(20)};
  } else if (o.gen == "uniform") {
    reject(o.rounds.has_value(), "--rounds");
    reject(o.bits_per_step.has_value(), "--bits-per-step");
    reject(o.p_one.has_value(), "--p-one");
    spec = UniformRef{};
  } else if (o.gen == "lcg") {
    reject(o.rounds.has_value(), "--rounds");
    reject(o.p_one.has_value(), "--p-one");
    spec = Lcg{o.bits_per_step.value_or(1)};
  } else if (o.gen == "biased") {
    reject(o.rounds.has_value(), "--rounds");
    reject(o.bits_per_step.has_value(), "--bits-per-step");
    if (!o.p_one) throw UsageError("--gen biased requires --p-one");
    spec = BiasedBits{*o.p_one};
  } else {
    throw UsageError("unknown generator '" + o.gen + "'");
  }
  try {
    validate(spec);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return spec;
}

int run_generate(const GenerateOptions& o) {
  const GeneratorSpec spec = build_spec(o);
  if (o.count == 0 || o.count > 0xFFFFFFFFull) throw UsageError("--count must be in [1, 2^32 - 1]");
  if (o.length == 0) throw UsageError("--length must be at least 1");
  const Corpus corpus = generate_corpus(spec, Seed{o.seed}, o.count, o.length);
  write_corpus(fs::path(o.out), corpus);
  std::cout << "wrote " << o.out << ": gen=" << describe(spec) << " seed=" << o.seed << " count=" << o.count
            << " length=" << o.length << " sha256=" << sha256_file(o.out) << "\n";
  return kOk;
}

int run_analyze(const AnalyzeOptions& o) {
  const Corpus corpus = read_corpus(fs::path(o.in));
  const CorpusAnalysis analysis = analyze_corpus(corpus, o.m_set);
  write_analysis(o.out, analysis);
  std::cout << "analyzed " << o.in << " (" << corpus.count() << " x " << corpus.length_bits << " bits) -> " << o.out
            << "\n";
  for (const auto& s : analysis.scales) {
    std::cout << "  m=" << s.m << " windows=" << s.metrics.total_windows << " distinct=" << s.metrics.distinct_patterns
              << " entropy=" << format_number(s.metrics.entropy_bits) << "\n";
  }
  return kOk;
}

int run_fingerprint(const AnalyzeOptions& o) {
  const Corpus corpus = read_corpus(fs::path(o.in));
  check_m_set(o.m_set, corpus.length_bits);
  std::vector<StructuralMetrics> metrics;
  for (unsigned m : o.m_set) metrics.push_back(concentration_stats(extract_pooled_profile(corpus.sequences, m)));
  const Fingerprint fp = fingerprint_from_metrics(metrics, Provenance::Corpus);
  write_text_file(o.out, fingerprint_to_json(fp));
  std::cout << "fingerprint d=" << fp.dimension() << " -> " << o.out << "\n";
  return kOk;
}

int run_compare(const CompareOptions& o) {
  if (o.format != "all" && o.format != "json" && o.format != "csv" && o.format != "table") {
    throw UsageError("--format must be one of all, json, csv, table");
  }
  const CorpusAnalysis a = read_analysis(o.a);
  const CorpusAnalysis b = read_analysis(o.b);
  std::vector<NullBaseline> nulls;
  if (!o.null_corpora.empty()) {
    std::vector<BitSequence> pool;
    for (const auto& path : o.null_corpora) {
      Corpus c = read_corpus(fs::path(path));
      if (c.length_bits != a.identity.length_bits) {
        throw Error(ErrorKind::IncompatibleAnalysis, path + " has a different sequence length than the analyses");
      }
      for (auto& s : c.sequences) pool.push_back(std::move(s));
    }
    for (unsigned m : a.m_set()) nulls.push_back(null_baseline(pool, m, o.shuffles, Seed{o.null_seed}));
  }
  const ComparisonReport report = compare(a, b, nulls);

  const bool all = o.format == "all";
  if (all || o.format == "json" || o.format == "csv") fs::create_directories(o.out_dir);
  const fs::path dir(o.out_dir);
  if (all || o.format == "json") write_text_file(dir / "report.json", report_to_json(report));
  if (all || o.format == "csv") {
    write_text_file(dir / "deviation.csv", deviation_csv(report));
    write_text_file(dir / "entropy.csv", entropy_csv(report));
    write_text_file(dir / "recurrence.csv", recurrence_csv(report));
    write_text_file(dir / "concentration.csv", concentration_csv(report));
  }
  if (all || o.format == "table") std::cout << render_tables(report);
  return kOk;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidSpec:
    case ErrorKind::InvalidArgument: return kUsage;
    default: return kData;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structural fingerprinting of bit-sequence corpora"};
  app.require_subcommand(1);

  GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "Generate a corpus file");
  generate->add_option("--gen", gen.gen, "Generator: arx | lcg | biased | uniform")->capture_default_str();
  generate->add_option("--rounds", gen.rounds, "ARX rounds (even, 2..20)");
  generate->add_option("--bits-per-step", gen.bits_per_step, "LCG low bits emitted per step (1..16)");
  generate->add_option("--p-one", gen.p_one, "Probability of a 1 bit for --gen biased");
  generate->add_option("--count", gen.count, "Number of sequences")->capture_default_str();
  generate->add_option("--length", gen.length, "Bits per sequence")->capture_default_str();
  generate->add_option("--seed", gen.seed, "Master seed")->capture_default_str();
  generate->add_option("--out", gen.out, "Output corpus path")->required();

  AnalyzeOptions ana;
  auto* analyze = app.add_subcommand("analyze", "Pattern statistics of a corpus");
  analyze->add_option("--in", ana.in, "Corpus file")->required();
  analyze->add_option("--m", ana.m_set, "Pattern lengths")->delimiter(',')->capture_default_str();
  analyze->add_option("--out", ana.out, "Analysis JSON path")->required();

  AnalyzeOptions fpo;
  auto* fingerprint = app.add_subcommand("fingerprint", "Corpus-level fingerprint vector");
  fingerprint->add_option("--in", fpo.in, "Corpus file")->required();
  fingerprint->add_option("--m", fpo.m_set, "Pattern lengths")->delimiter(',')->capture_default_str();
  fingerprint->add_option("--out", fpo.out, "Fingerprint JSON path")->required();

  CompareOptions cmp;
  auto* comp = app.add_subcommand("compare", "Compare two analyses");
  comp->add_option("--a", cmp.a, "First analysis (e.g. cipher output)")->required();
  comp->add_option("--b", cmp.b, "Second analysis (e.g. reference)")->required();
  comp->add_option("--null-corpus", cmp.null_corpora,
                   "Corpus file(s) pooled for the permutation null; pass both compared corpora");
  comp->add_option("--shuffles", cmp.shuffles, "Permutation splits")->capture_default_str();
  comp->add_option("--null-seed", cmp.null_seed, "Seed for the permutation splits")->capture_default_str();
  comp->add_option("--out-dir", cmp.out_dir, "Directory for report.json and csv files")->capture_default_str();
  comp->add_option("--format", cmp.format, "all | json | csv | table")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*generate) return run_generate(gen);
    if (*analyze) return run_analyze(ana);
    if (*fingerprint) return run_fingerprint(fpo);
    if (*comp) return run_compare(cmp);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
