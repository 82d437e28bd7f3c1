#pragma once

#include "drawpath/solver.hpp"

#include <string>
#include <vector>

namespace drawpath {

/// Writes the planned path as a structured document: pen-up moves and
/// pen-down polylines in drawing order, plus home, cost_lift, and the
/// fitness report. Transitions between exactly coincident endpoints emit no
/// pen-up record.
void export_path(const DrawingPath& p, const GtspInstance& inst, const std::string& path);

/// Re-reads an exported path file; the reported v_fitness round-trips.
struct ImportedPath {
    GtspInstance instance;
    DrawingPath path;
    FitnessReport report;
};
ImportedPath import_path(const std::string& path);

/// Static preview: solid strokes for pen-down polylines, dashed strokes for
/// pen-up travels, a marker at home. Viewport = image dimensions.
void render_svg(const DrawingPath& p, const GtspInstance& inst, int width, int height,
                const std::string& path);

struct BenchmarkResult {
    std::string instance_name;
    std::string method;
    int trials = 0;
    double mean_fitness = 0.0;
    double improvement_over_greedy_pct = 0.0;
};

/// Method labels understood by bench and the CLI.
extern const std::vector<std::string> kAllMethods; // greedy first

/// Runs one method once. Seed only matters for the RKGA variants.
DrawingPath run_method(const GtspInstance& inst, const std::string& method, uint64_t seed,
                       const GaConfig& cfg = GaConfig{});

/// Seeded trials per (instance, method) cell; seeds are base_seed + trial.
/// Improvement is measured against the deterministic greedy fitness.
/// jobs > 1 runs cells on a thread pool; results are identical for any
/// degree of parallelism.
std::vector<BenchmarkResult> bench(
    const std::vector<std::pair<std::string, GtspInstance>>& instances,
    const std::vector<std::string>& methods, int trials, uint64_t base_seed, int jobs = 1);

/// Human-readable methods x instances table with an average column.
std::string format_bench_table(const std::vector<BenchmarkResult>& results);

/// Machine-readable CSV, stable field formatting.
std::string format_bench_csv(const std::vector<BenchmarkResult>& results);

} // namespace drawpath
