#pragma once

// One-step report: runs the analyses on a spec file and renders the results
// as JSON and as a static HTML page derived from that JSON.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace gr1::report {

using Json = nlohmann::ordered_json;

/// Analysis identifiers in the order they run and appear.
const std::vector<std::string>& known_analyses();

enum class SemanticsMode { Strict, NonStrict, Both };

struct ReportConfig {
    std::vector<std::string> analyses = known_analyses();
    SemanticsMode semantics = SemanticsMode::Both;
    bool robotics = false;
    long max_k = 16;
    std::size_t max_cubes = 10;
    std::size_t max_trace_steps = 64;
    std::size_t abstract_horizon = 64;
    std::size_t node_budget = 0;      // 0: unlimited
    double timeout_seconds = 0;       // per analysis, 0: none
    std::vector<std::size_t> glitch_free;
    bool timings = false;
    std::optional<std::string> dump_bdd;  // DOT file for the baseline winning region

    /// Throws std::invalid_argument on unknown analyses or non-positive bounds.
    void validate() const;
};

struct Report {
    Json json;
    int exit_code = 0;  // 0 done, 2 baseline check out of resources
};

/// Throws SpecError for parse, shape and compile errors.
Report run_report_text(const std::string& text, const std::string& spec_name, const ReportConfig& config);
/// Also throws std::runtime_error when the file cannot be read.
Report run_report(const std::string& spec_path, const ReportConfig& config);

/// Canonical serialization: two-space indent and a trailing newline.
std::string dump_json(const Json& report);
std::string render_html(const Json& report);

std::string sha256_hex(const std::string& data);

}  // namespace gr1::report
