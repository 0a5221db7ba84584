#pragma once

#include <json.hpp>
#include <string>

#include "huntil/certificates.hpp"
#include "huntil/monitor.hpp"
#include "huntil/until.hpp"

// Schema-versioned machine-readable reports with a companion human summary.
// Report bodies are byte-stable for identical inputs; timestamps only ever
// appear in a separate header line.

namespace huntil {

using Json = nlohmann::ordered_json;

Json to_json(const Vec& v);
Json to_json(const HybridTime& tj);
Json to_json(const SubReport& sub);
Json to_json(const CheckReport& rep);
Json to_json(const Verdict& v);
Json to_json(const AggregateVerdict& v);
Json to_json(const UntilCertReport& rep);
Json to_json(const OracleReport& rep);
Json arc_summary_json(const HybridArc& arc);

// Canonical single-string body (trailing newline included).
std::string report_body(const Json& j);

// "# huntil report <ISO timestamp>" header line followed by the body.
void write_report_file(const std::string& path, const Json& body);

std::string human_summary(const CheckReport& rep);

}  // namespace huntil
