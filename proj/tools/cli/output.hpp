#pragma once

// File formats written by the tool.

#include <filesystem>
#include <ostream>
#include <string>

#include <json.hpp>
#include <riemobs/riemobs.hpp>

namespace riemobs::cli {

inline constexpr const char* kSampledDisclaimer =
    "sampled verification: a pass means no sampled point or geodesic violated the condition, "
    "not a proof over the whole region";
inline constexpr const char* kConvexityNote =
    "weak geodesic convexity of the simulation region is user-asserted and not checked";

/// %.17g, with nan/inf spelled out.
std::string format_full(double v);

/// Finite numbers as JSON numbers (shortest round trip); others as strings.
nlohmann::json json_number(double v);
nlohmann::json json_vector(const Vec& v);

nlohmann::json report_to_json(const ConditionReport& r);

/// t,x_1..x_n,xhat_1..xhat_n,y_1..y_p,dist,dist_method,valid
void write_run_csv(std::ostream& os, const ObserverRun& run);
/// s,x_1..x_n,speed
void write_geodesic_csv(std::ostream& os, const Geodesic& g, const MetricField& p);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace riemobs::cli
