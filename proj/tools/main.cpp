#include "drawpath/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace drawpath;

Point2 parse_home(const std::string& text) {
    std::istringstream in(text);
    Point2 p;
    char comma = 0;
    if (!(in >> p.x >> comma >> p.y) || comma != ',')
        throw ConfigError("config: --home expects 'x,y'");
    return p;
}

void add_fdog_flags(CLI::App* cmd, FdogParams& f) {
    cmd->add_option("--sigma-c", f.sigma_c, "Center Gaussian sigma of the cross-flow DoG");
    cmd->add_option("--rho", f.rho, "Surround/center sigma ratio");
    cmd->add_option("--sigma-m", f.sigma_m, "Gaussian sigma along the flow");
    cmd->add_option("--line-length", f.line_length, "Flow integration half-length (px)");
    cmd->add_option("--tau", f.tau, "Binarization threshold for the filter response");
    cmd->add_option("--etf-radius", f.etf_radius, "ETF smoothing kernel radius (px)");
    cmd->add_option("--etf-iterations", f.etf_iterations, "ETF smoothing passes");
}

void add_trace_flags(CLI::App* cmd, TraceParams& t) {
    cmd->add_option("--min-component-px", t.min_component_px,
                    "Remove ink components smaller than this");
    cmd->add_option("--max-spur-px", t.max_spur_px, "Prune branches shorter than this");
    cmd->add_option("--max-extension-px", t.max_extension_px, "Line-end extension limit");
}

void add_ga_flags(CLI::App* cmd, GaConfig& g) {
    cmd->add_option("--population-size", g.population_size);
    cmd->add_option("--elite-count", g.elite_count);
    cmd->add_option("--p-crossover", g.p_crossover);
    cmd->add_option("--p-mutation", g.p_mutation);
    cmd->add_option("--key-inherit-p", g.key_inherit_p);
    cmd->add_option("--reverse-p", g.reverse_p);
    cmd->add_option("--shuffle-p", g.shuffle_p);
    cmd->add_option("--flip-p", g.flip_p);
    cmd->add_option("--tournament-k", g.tournament_k);
    cmd->add_option("--thres-base", g.thres_base);
    cmd->add_option("--thres-step", g.thres_step);
    cmd->add_option("--thres-cap", g.thres_cap);
    cmd->add_option("--max-generations", g.max_generations);
    cmd->add_option("--stall-limit", g.stall_limit);
    cmd->add_option("--seed", g.seed);
}

int run(int argc, char** argv) {
    CLI::App app{"drawpath: line-art images to optimized pen-drawing paths"};
    app.set_version_flag("--version", "drawpath 1.0.0");
    app.require_subcommand(1);

    // Config file first, CLI flags override, built-in defaults last.
    PipelineConfig cfg;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") cfg = load_config(argv[i + 1]);

    std::string input, output, home_text;

    auto* contour_cmd = app.add_subcommand("contour", "Extract a binary contour image (ETF + FDoG)");
    contour_cmd->add_option("input", input)->required();
    contour_cmd->add_option("-o,--output", output)->required();
    add_fdog_flags(contour_cmd, cfg.fdog);
    contour_cmd->callback([&] {
        GrayImage img = load_gray(input);
        EtfField etf = compute_etf(img, cfg.fdog);
        GrayImage response = fdog(img, etf, cfg.fdog);
        save_gray(to_gray(binarize(response, cfg.fdog.tau)), output);
    });

    auto* trace_cmd = app.add_subcommand("trace", "Trace a binary image into ordered line segments");
    trace_cmd->add_option("input", input)->required();
    trace_cmd->add_option("-o,--output", output)->required();
    trace_cmd->add_option("--threshold", cfg.threshold, "Ink threshold for grayscale inputs");
    add_trace_flags(trace_cmd, cfg.trace);
    trace_cmd->callback([&] {
        GrayImage img = load_gray(input);
        BinaryImage mask = binarize(img, cfg.threshold);
        BinaryImage skel = skeletonize(clean(mask, cfg.trace));
        skel = extend_line_ends(prune(skel, cfg.trace), cfg.trace);
        TracedSegments traced{img.width, img.height, split_and_trace(skel)};
        save_segments(traced, output);
        std::cout << "traced " << traced.segments.size() << " segments\n";
    });

    auto* plan_cmd = app.add_subcommand("plan", "Plan a low-cost drawing path over traced segments");
    plan_cmd->add_option("input", input)->required();
    plan_cmd->add_option("-o,--output", output)->required();
    plan_cmd->add_option("--method", cfg.method, "greedy|greedy2opt|greedy2optlk|rkga2opt|rkga2optlk");
    plan_cmd->add_option("--home", home_text, "Home position 'x,y'");
    plan_cmd->add_option("--cost-lift", cfg.cost_lift, "Cost per pen lift");
    add_ga_flags(plan_cmd, cfg.ga);
    plan_cmd->callback([&] {
        if (!home_text.empty()) cfg.home = parse_home(home_text);
        cfg.validate();
        TracedSegments traced = load_segments(input);
        GtspInstance inst = build_instance(traced.segments, cfg.home, cfg.cost_lift);
        DrawingPath path = run_method(inst, cfg.method, cfg.ga.seed, cfg.ga);
        export_path(path, inst, output);
        std::cout << "v_fitness " << evaluate(inst, path).v_fitness << "\n";
    });

    int width = 0, height = 0;
    auto* render_cmd = app.add_subcommand("render", "Render a planned path to SVG");
    render_cmd->add_option("input", input)->required();
    render_cmd->add_option("-o,--output", output)->required();
    render_cmd->add_option("--width", width, "Viewport width (default: fit geometry)");
    render_cmd->add_option("--height", height, "Viewport height (default: fit geometry)");
    render_cmd->callback([&] {
        ImportedPath imported = import_path(input);
        if (width <= 0 || height <= 0) {
            for (const LineSegment& s : imported.instance.segments) {
                for (PixelCoord p : s.points) {
                    width = std::max(width, p.x + 2);
                    height = std::max(height, p.y + 2);
                }
            }
        }
        render_svg(imported.path, imported.instance, width, height, output);
    });

    std::vector<std::string> instance_files;
    std::vector<std::string> methods = kAllMethods;
    int trials = 10, jobs = 1;
    uint64_t bench_seed = 0;
    std::string csv_out;
    auto* bench_cmd = app.add_subcommand("bench", "Compare optimization methods over instances");
    bench_cmd->add_option("instances", instance_files, "Segment files")->required();
    bench_cmd->add_option("--methods", methods, "Methods to benchmark");
    bench_cmd->add_option("--trials", trials);
    bench_cmd->add_option("--seed", bench_seed);
    bench_cmd->add_option("--jobs", jobs, "Worker threads");
    bench_cmd->add_option("--csv", csv_out, "Write CSV to this file");
    bench_cmd->add_option("--home", home_text, "Home position 'x,y'");
    bench_cmd->add_option("--cost-lift", cfg.cost_lift, "Cost per pen lift");
    bench_cmd->callback([&] {
        if (!home_text.empty()) cfg.home = parse_home(home_text);
        std::vector<std::pair<std::string, GtspInstance>> instances;
        for (const std::string& f : instance_files) {
            TracedSegments traced = load_segments(f);
            std::string name = std::filesystem::path(f).stem().string();
            instances.emplace_back(name,
                                   build_instance(traced.segments, cfg.home, cfg.cost_lift));
        }
        auto results = bench(instances, methods, trials, bench_seed, jobs);
        std::cout << format_bench_table(results);
        if (!csv_out.empty()) {
            std::ofstream out(csv_out);
            if (!out) throw std::runtime_error("cannot write CSV: " + csv_out);
            out << format_bench_csv(results);
        }
    });

    std::string out_dir = ".", config_file;
    auto* pipe_cmd = app.add_subcommand(
        "pipeline", "Full run: image -> contours -> segments -> path -> SVG + report");
    pipe_cmd->add_option("input", input)->required();
    pipe_cmd->add_option("-o,--out-dir", out_dir);
    pipe_cmd->add_option("--config", config_file, "JSON config file (flags override it)");
    pipe_cmd->add_option("--threshold", cfg.threshold);
    pipe_cmd->add_option("--method", cfg.method);
    pipe_cmd->add_option("--home", home_text, "Home position 'x,y'");
    pipe_cmd->add_option("--cost-lift", cfg.cost_lift);
    add_fdog_flags(pipe_cmd, cfg.fdog);
    add_trace_flags(pipe_cmd, cfg.trace);
    add_ga_flags(pipe_cmd, cfg.ga);
    pipe_cmd->callback([&] {
        if (!home_text.empty()) cfg.home = parse_home(home_text);
        PipelineReport report = run_pipeline(cfg, input, out_dir);
        write_report(report, (std::filesystem::path(out_dir) / "report.json").string());
        std::cout << "segments: " << report.segment_count << "\n";
        if (report.segment_count > 0)
            std::cout << "v_fitness: " << report.v_fitness << " (lifts " << report.n_lift
                      << ")\n";
        else
            std::cout << "empty plan (no ink traced)\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const drawpath::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
