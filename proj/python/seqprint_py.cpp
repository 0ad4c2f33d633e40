#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <map>

#include "seqprint/error.hpp"
#include "seqprint/io.hpp"
#include "seqprint/pipeline.hpp"
#include "seqprint/seqgen.hpp"

namespace py = pybind11;
using namespace seqprint;

namespace {

std::map<std::uint64_t, std::uint64_t> profile_counts(const PatternProfile& p) {
  std::map<std::uint64_t, std::uint64_t> out;
  for (const auto& e : p.entries()) out.emplace(e.pattern, e.count);
  return out;
}

PatternProfile profile_from_counts(unsigned m, const std::map<std::uint64_t, std::uint64_t>& counts) {
  std::vector<PatternCount> entries;
  std::uint64_t total = 0;
  for (const auto& [pattern, count] : counts) {
    if (count == 0) continue;
    entries.push_back({pattern, count});
    total += count;
  }
  return PatternProfile(m, total, std::move(entries));
}

py::dict metrics_dict(const StructuralMetrics& s) {
  py::dict d;
  d["m"] = s.m;
  d["total_windows"] = s.total_windows;
  d["distinct_patterns"] = s.distinct_patterns;
  d["entropy_bits"] = s.entropy_bits;
  d["entropy_max_bits"] = s.entropy_max_bits;
  d["max_prob"] = s.max_prob;
  d["distinct_fraction"] = s.distinct_fraction;
  d["repeated_window_fraction"] = s.repeated_window_fraction;
  d["mean_recurrence"] = s.mean_recurrence;
  return d;
}

}  // namespace

PYBIND11_MODULE(_seqprint, m) {
  m.doc() = "Substring pattern statistics and structural fingerprints for bit-sequence corpora";

  static py::exception<Error> error_type(m, "SeqprintError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
      exc.attr("kind") = std::string(to_string(e.kind()));
      py::set_error(error_type, exc);
    }
  });

  py::class_<BitSequence>(m, "BitSequence")
      .def(py::init(&BitSequence::from_string), py::arg("bits"))
      .def_static("from_bytes",
                  [](py::bytes data, std::uint64_t length_bits) {
                    const std::string raw = data;
                    return BitSequence(length_bits, std::vector<std::uint8_t>(raw.begin(), raw.end()));
                  })
      .def("__len__", &BitSequence::size)
      .def("__str__", &BitSequence::to_string)
      .def("__eq__", [](const BitSequence& a, const BitSequence& b) { return a == b; })
      .def("to_bytes", [](const BitSequence& s) {
        const auto b = s.bytes();
        return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
      });

  py::class_<ArxKeystream>(m, "ArxKeystream")
      .def(py::init([](unsigned rounds) { return ArxKeystream{rounds}; }), py::arg("rounds") = 20)
      .def_readonly("rounds", &ArxKeystream::rounds);
  py::class_<Lcg>(m, "Lcg")
      .def(py::init([](unsigned bits) { return Lcg{bits}; }), py::arg("bits_per_step") = 1)
      .def_readonly("bits_per_step", &Lcg::bits_per_step);
  py::class_<BiasedBits>(m, "BiasedBits")
      .def(py::init([](double p) { return BiasedBits{p}; }), py::arg("p_one"))
      .def_readonly("p_one", &BiasedBits::p_one);
  py::class_<UniformRef>(m, "UniformRef").def(py::init<>());

  m.def("arx_block",
        [](const ArxKey& key, const ArxNonce& nonce, std::uint32_t counter, unsigned rounds) {
          const auto block = arx_block(key, nonce, counter, rounds);
          return py::bytes(reinterpret_cast<const char*>(block.data()), block.size());
        },
        py::arg("key"), py::arg("nonce"), py::arg("counter"), py::arg("rounds") = 20);

  m.def("generate_sequence",
        [](const GeneratorSpec& spec, std::uint64_t seed, std::uint64_t index, std::uint64_t length_bits) {
          return generate_sequence(spec, Seed{seed}, index, length_bits);
        },
        py::arg("spec"), py::arg("seed"), py::arg("index"), py::arg("length_bits"));

  py::class_<Corpus>(m, "Corpus")
      .def_property_readonly("spec", [](const Corpus& c) { return c.spec; })
      .def_property_readonly("master_seed", [](const Corpus& c) { return c.master_seed.value; })
      .def_readonly("length_bits", &Corpus::length_bits)
      .def_property_readonly("count", &Corpus::count)
      .def_readonly("sequences", &Corpus::sequences);

  m.def("generate_corpus",
        [](const GeneratorSpec& spec, std::uint64_t seed, std::uint64_t count, std::uint64_t length_bits) {
          py::gil_scoped_release release;
          return generate_corpus(spec, Seed{seed}, count, length_bits);
        },
        py::arg("spec"), py::arg("seed"), py::arg("count"), py::arg("length_bits"));
  m.def("write_corpus", py::overload_cast<const std::filesystem::path&, const Corpus&>(&write_corpus),
        py::arg("path"), py::arg("corpus"));
  m.def("read_corpus", py::overload_cast<const std::filesystem::path&>(&read_corpus), py::arg("path"));

  py::class_<PatternProfile>(m, "PatternProfile")
      .def(py::init(&profile_from_counts), py::arg("m"), py::arg("counts"))
      .def_property_readonly("m", &PatternProfile::m)
      .def_property_readonly("total_windows", &PatternProfile::total_windows)
      .def_property_readonly("distinct", &PatternProfile::distinct)
      .def("count", &PatternProfile::count, py::arg("pattern"))
      .def("counts", &profile_counts)
      .def("__eq__", [](const PatternProfile& a, const PatternProfile& b) { return a == b; });

  py::class_<Distribution>(m, "Distribution")
      .def_readonly("m", &Distribution::m)
      .def("probs", [](const Distribution& d) {
        std::map<std::uint64_t, double> out;
        for (const auto& e : d.probs) out.emplace(e.pattern, e.prob);
        return out;
      });

  m.def("count_occurrences", &count_occurrences, py::arg("pattern"), py::arg("sequence"));
  m.def("extract_profile", [](const BitSequence& s, unsigned mm) { return extract_profile(s, mm); },
        py::arg("sequence"), py::arg("m"));
  m.def("merge_profiles", [](const std::vector<PatternProfile>& ps) { return merge_profiles(ps); },
        py::arg("profiles"));
  m.def("normalize", &normalize, py::arg("profile"));

  py::class_<StructuralMetrics>(m, "StructuralMetrics")
      .def_readonly("m", &StructuralMetrics::m)
      .def_readonly("total_windows", &StructuralMetrics::total_windows)
      .def_readonly("distinct_patterns", &StructuralMetrics::distinct_patterns)
      .def_readonly("entropy_bits", &StructuralMetrics::entropy_bits)
      .def_readonly("entropy_max_bits", &StructuralMetrics::entropy_max_bits)
      .def_readonly("max_prob", &StructuralMetrics::max_prob)
      .def_readonly("distinct_fraction", &StructuralMetrics::distinct_fraction)
      .def_readonly("repeated_window_fraction", &StructuralMetrics::repeated_window_fraction)
      .def_readonly("mean_recurrence", &StructuralMetrics::mean_recurrence)
      .def("as_dict", &metrics_dict);

  py::class_<RecurrenceHistogram>(m, "RecurrenceHistogram")
      .def_readonly("m", &RecurrenceHistogram::m)
      .def_readonly("bins", &RecurrenceHistogram::bins);

  m.def("deviation_score", py::overload_cast<const Distribution&, const Distribution&>(&deviation_score),
        py::arg("a"), py::arg("b"));
  m.def("pattern_entropy", py::overload_cast<const Distribution&>(&pattern_entropy), py::arg("distribution"));
  m.def("recurrence_histogram", &recurrence_histogram, py::arg("profile"));
  m.def("concentration_stats", &concentration_stats, py::arg("profile"));

  py::class_<Fingerprint>(m, "Fingerprint")
      .def_readonly("m_set", &Fingerprint::m_set)
      .def_readonly("features", &Fingerprint::features)
      .def_property_readonly("provenance", [](const Fingerprint& f) { return to_string(f.provenance); })
      .def_property_readonly("dimension", &Fingerprint::dimension)
      .def("to_json", &fingerprint_to_json)
      .def_static("from_json", &fingerprint_from_json, py::arg("text"));

  m.def("compute_fingerprint",
        [](const std::vector<PatternProfile>& ps) { return compute_fingerprint(ps, Provenance::Sequence); },
        py::arg("profiles"));
  m.def("fingerprint_distance", &fingerprint_distance, py::arg("a"), py::arg("b"));

  py::class_<CorpusAnalysis>(m, "CorpusAnalysis")
      .def_property_readonly("m_set", &CorpusAnalysis::m_set)
      .def_readonly("fingerprint", &CorpusAnalysis::fingerprint)
      .def("pooled_profile", [](const CorpusAnalysis& a, unsigned mm) { return a.scale(mm).pooled; })
      .def("metrics", [](const CorpusAnalysis& a, unsigned mm) { return a.scale(mm).metrics; })
      .def("recurrence", [](const CorpusAnalysis& a, unsigned mm) { return a.scale(mm).recurrence; })
      .def("sequence_entropy", [](const CorpusAnalysis& a, unsigned mm) {
        const auto& s = a.scale(mm).sequence_entropy;
        return py::make_tuple(s.mean, s.stddev);
      });

  m.def("analyze_corpus",
        [](const Corpus& c, const std::vector<unsigned>& m_set) {
          py::gil_scoped_release release;
          return analyze_corpus(c, m_set);
        },
        py::arg("corpus"), py::arg("m_set"));

  py::class_<NullBaseline>(m, "NullBaseline")
      .def_readonly("m", &NullBaseline::m)
      .def_readonly("shuffle_count", &NullBaseline::shuffle_count)
      .def_readonly("d_mean", &NullBaseline::d_mean)
      .def_readonly("d_std", &NullBaseline::d_std)
      .def_property_readonly("seed", [](const NullBaseline& n) { return n.seed.value; });

  m.def("null_baseline",
        [](const Corpus& c, unsigned mm, std::uint64_t shuffles, std::uint64_t seed) {
          py::gil_scoped_release release;
          return null_baseline(c, mm, shuffles, Seed{seed});
        },
        py::arg("reference"), py::arg("m"), py::arg("shuffle_count") = kDefaultShuffles, py::arg("seed") = 0);
  m.def("permutation_nulls",
        [](const Corpus& a, const Corpus& b, const std::vector<unsigned>& m_set, std::uint64_t shuffles,
           std::uint64_t seed) {
          py::gil_scoped_release release;
          return permutation_nulls(a, b, m_set, shuffles, Seed{seed});
        },
        py::arg("a"), py::arg("b"), py::arg("m_set"), py::arg("shuffle_count") = kDefaultShuffles,
        py::arg("seed") = 0);

  py::class_<ComparisonReport>(m, "ComparisonReport")
      .def_property_readonly("rows", [](const ComparisonReport& r) {
        py::list rows;
        for (const auto& row : r.rows) {
          py::dict d;
          d["m"] = row.m;
          d["deviation"] = row.deviation;
          d["z"] = row.z ? py::cast(*row.z) : py::none();
          d["entropy_a"] = row.a.entropy_bits;
          d["entropy_b"] = row.b.entropy_bits;
          d["recurrence_a"] = row.recurrence_a.bins;
          d["recurrence_b"] = row.recurrence_b.bins;
          rows.append(d);
        }
        return rows;
      });

  m.def("compare",
        [](const CorpusAnalysis& a, const CorpusAnalysis& b, const std::vector<NullBaseline>& nulls) {
          return compare(a, b, nulls);
        },
        py::arg("a"), py::arg("b"), py::arg("nulls") = std::vector<NullBaseline>{});
  m.def("report_to_json", &report_to_json, py::arg("report"));
}
