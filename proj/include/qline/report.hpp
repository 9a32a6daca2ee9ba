#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "qline/scan.hpp"

namespace qline::report {

// all machine output uses insertion-ordered JSON so fixed inputs reproduce
// byte-identical documents
using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

struct RunConfig {
    quadrics::QuadricParams params;
    Tolerances tolerances;
    std::uint64_t seed = 0;
    std::optional<std::string> output_path;
};

struct ConfigError {
    std::string message;
};

/// Parses the key = value config format (keys c1..c6, d1..d3, seed, tol_*).
/// Missing, duplicate or unknown keys are errors.
std::optional<RunConfig> parse_config_text(const std::string& text, ConfigError* error);
std::optional<RunConfig> load_config_file(const std::string& path, ConfigError* error);

Json to_json(const numerics::Complex& z);
numerics::Complex complex_from_json(const Json& j);

Json to_json(const quadrics::QuadricParams& p);
quadrics::QuadricParams params_from_json(const Json& j);

Json to_json(const smoothness::BSolution& s);
Json to_json(const smoothness::SmoothnessReport& rep);

Json to_json(const line::ComplexLine& l, const quadrics::QuadricParams& params);
line::ComplexLine line_from_json(const Json& j);

Json to_json(const line::StageReport& stages);
Json to_json(const certify::RealnessCertificate& cert);
Json to_json(const scan::SearchSpec& spec);
Json to_json(const scan::SearchResult& result, const scan::SearchSpec& spec,
             const quadrics::QuadricParams* base = nullptr);
Json to_json(const scan::IntersectionReport& rep);

/// Wraps a command payload with the schema header.
Json document(const std::string& command, Json payload);

}  // namespace qline::report
