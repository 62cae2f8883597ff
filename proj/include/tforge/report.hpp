#pragma once

#include "json.hpp"
#include "tforge/torsion.hpp"

namespace tforge {

// All machine-readable output. Big integers are serialized as decimal
// strings so the interchange is lossless.
using Json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

inline std::string mpz_str(const mpz_class& v) { return v.get_str(); }

Json to_json(const FeasibilityPlan& plan);
Json to_json(const TraceProfile& profile);
Json to_json(const MultiplicityProfile& profile);
Json to_json(const AdAppearsReport& report);
Json to_json(const CharPolyInt& poly);
Json to_json(const FactoredCharPoly& poly);
Json to_json(const FactoredOrder& order);
Json to_json(const RankReport& report);
Json to_json(const TwistReport& report);

// the one report envelope: {command, params, results, diagnostics,
// timings, seed, version}
Json envelope(const std::string& command, Json params, Json results, Json diagnostics, Json timings,
              uint64_t seed);

std::string csv_table_header();
std::string csv_table_row(const RankReport& report);

// "" or "-" writes to stdout; otherwise write-to-temp plus rename
void write_output(const std::string& text, const std::string& path);

}  // namespace tforge
