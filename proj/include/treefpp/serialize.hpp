#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include "treefpp/fpp.hpp"
#include "treefpp/group_checks.hpp"
#include "treefpp/nucleus.hpp"

namespace treefpp {

using Json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "treefpp/1";
inline constexpr const char* kToolVersion = "0.1.0";

struct Report {
    std::string schema = kSchemaVersion;
    std::string version = kToolVersion;
    Json config = Json::object();
    Json group = Json::object();
    Json results = Json::object();
    double elapsed_seconds = 0;
    uint64_t fingerprint = 0;
};

// Stamps the fingerprint from the canonical results dump alone, so identical
// results fingerprint identically regardless of timing or config echoes such
// as thread counts.
void finalize_report(Report& r);

Json report_to_json(const Report& r);
std::string report_string(const Report& r);  // indented, ends with a newline

// Vertex paths and tree letters are 1-based in all serialized output,
// matching the CLI and presentation language conventions.
Json rational_json(const mpq_class& q);
Json interval_json(const RationalInterval& v);
Json portrait_json(const Portrait& p);
Json mc_json(const McEstimate& m);
Json fpp_series_json(const FppSeries& s);
Json transitivity_json(const TransitivityReport& r);
Json fractality_json(const FractalityReport& r, const GroupPresentation* G);
Json martingale_json(const MartingaleReport& r);
Json nucleus_json(const NucleusReport& r);
Json jones_json(const JonesReport& r);
Json xn_json(const XnHistogram& h);
Json conditional_json(const ConditionalResult& r);
Json cylinder_json(const CylinderCheck& c);

// Columns: level, exact_num, exact_den, mc_estimate, mc_stderr, samples,
// quotient_order. Interval entries report midpoint and half-width in the MC
// columns with an empty samples field.
std::string render_csv(const FppSeries& s);

void write_text_file(const std::filesystem::path& path, const std::string& content);

// Level-quotient disk cache, magic "TFQ1": degree, level, presentation hash,
// element count, witness flag, key bytes, witness arrays.
std::filesystem::path quotient_cache_path(const std::filesystem::path& dir,
                                          const GroupPresentation& G, int level);
void save_quotient_cache(const std::filesystem::path& file, const LevelQuotient& Q);
// Null when the file is absent, corrupt, or was written for a different
// presentation.
std::shared_ptr<const LevelQuotient> load_quotient_cache(
    const std::filesystem::path& file, std::shared_ptr<const GroupPresentation> G);

}  // namespace treefpp
