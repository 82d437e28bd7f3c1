#pragma once

#include "drawpath/contour.hpp"
#include "drawpath/output.hpp"
#include "drawpath/solver.hpp"
#include "drawpath/trace.hpp"

#include <stdexcept>
#include <string>

namespace drawpath {

/// Configuration problems map to exit code 2 in the CLI.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Everything the end-to-end pipeline needs, loadable from a JSON file.
/// Precedence: CLI flag > config file > built-in default.
struct PipelineConfig {
    FdogParams fdog;
    TraceParams trace;
    GaConfig ga;
    Point2 home{0.0, 0.0};
    double cost_lift = 30.0;
    double threshold = 0.5;
    std::string method = "rkga2optlk";

    void validate() const;
};

/// Parses a flat-key JSON config. Unknown keys raise ConfigError naming the
/// key; missing keys keep their defaults.
PipelineConfig load_config(const std::string& path);
PipelineConfig parse_config_json(const std::string& text);
std::string serialize_config(const PipelineConfig& cfg);

struct PipelineReport {
    int segment_count = 0;
    double v_fitness = 0.0;
    int n_lift = 0;
    double contour_seconds = 0.0;
    double trace_seconds = 0.0;
    double solve_seconds = 0.0;
    std::string contour_file;
    std::string segments_file;
    std::string path_file;
    std::string svg_file;
};

/// image -> contours -> segments -> optimized path -> SVG + report.
/// Zero-segment inputs succeed with an empty plan (no path or SVG files).
PipelineReport run_pipeline(const PipelineConfig& cfg, const std::string& input,
                            const std::string& out_dir);

void write_report(const PipelineReport& report, const std::string& path);

} // namespace drawpath
