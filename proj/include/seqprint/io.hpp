#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "seqprint/fingerprint.hpp"
#include "seqprint/pipeline.hpp"

namespace seqprint {

inline constexpr int kAnalysisSchemaVersion = 1;
inline constexpr int kReportSchemaVersion = 1;

// Lower-case hex SHA-256 of a byte buffer or a file's contents.
std::string sha256_hex(std::span<const std::uint8_t> data);
std::string sha256_file(const std::filesystem::path& path);

// Pooled profiles as a compact binary stream ("SBFP"): delta-coded pattern
// values and counts as LEB128 varints.
void write_profiles(std::ostream& out, std::span<const PatternProfile* const> profiles);
std::vector<PatternProfile> read_profiles(std::istream& in);

// An analysis is a JSON document plus a sibling "<name>.profiles" file
// holding the pooled counts. Metrics are recomputed from the counts on read.
std::filesystem::path profiles_path_for(const std::filesystem::path& analysis_path);
void write_analysis(const std::filesystem::path& path, const CorpusAnalysis& analysis);
CorpusAnalysis read_analysis(const std::filesystem::path& path);

std::string fingerprint_to_json(const Fingerprint& fp);
Fingerprint fingerprint_from_json(const std::string& text);

std::string report_to_json(const ComparisonReport& report);

// One data row per m.
std::string deviation_csv(const ComparisonReport& report);
std::string entropy_csv(const ComparisonReport& report);
std::string recurrence_csv(const ComparisonReport& report);
std::string concentration_csv(const ComparisonReport& report);

// Plain-text tables: concentration, deviation, entropy, recurrence.
std::string render_tables(const ComparisonReport& report);

// "+inf" / "-inf" for infinities, shortest round-trip decimal otherwise.
std::string format_number(double value);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace seqprint
