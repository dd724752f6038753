#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "fusion/dual.hpp"
#include "fusion/fusion.hpp"

namespace fusion {

struct RunConfig {
    std::string subcommand;  // singular | module-basis | fuse | dual | crosscheck
    std::string algebra = "virasoro";
    std::string c = "0";
    std::string h1, h2;
    std::string lambda1, lambda2;
    std::vector<long> singular_levels;  // candidate levels checked for both modules
    long auto_singular_max = 0;
    long depth = 0;
    std::string w = "1";
    long lmax = -1;  // -1: documented floor
    std::string format = "json";
    bool check_dual = false;
    bool audit_extra_family = false;
};

// Builds the module described by (algebra, c, h or lambda) with singular
// relations detected at the configured levels.
std::shared_ptr<const Module> build_module(const RunConfig& cfg, const std::string& h,
                                           const std::string& lambda);

// Dispatches the configured pipeline.  Throws the typed errors from
// errors.hpp; the CLI maps them to exit codes.
nlohmann::json run(const RunConfig& cfg);

// Deterministic serialization: sorted-key JSON, or an equivalent plain-text
// rendering of the same numbers.
std::string emit(const nlohmann::json& doc, const std::string& format);

// Serialization helpers shared with the pipelines.
nlohmann::json jordan_to_json(const JordanReport& rep);
nlohmann::json matrix_to_json(const RatMatrix& m);

}  // namespace fusion
