#include "drawpath/pipeline.hpp"

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>

namespace drawpath {

namespace {

using nlohmann::json;

json config_to_json(const PipelineConfig& c) {
    return json{
        {"sigma_c", c.fdog.sigma_c},
        {"rho", c.fdog.rho},
        {"sigma_m", c.fdog.sigma_m},
        {"line_length", c.fdog.line_length},
        {"tau", c.fdog.tau},
        {"etf_radius", c.fdog.etf_radius},
        {"etf_iterations", c.fdog.etf_iterations},
        {"min_component_px", c.trace.min_component_px},
        {"max_spur_px", c.trace.max_spur_px},
        {"max_extension_px", c.trace.max_extension_px},
        {"population_size", c.ga.population_size},
        {"elite_count", c.ga.elite_count},
        {"p_crossover", c.ga.p_crossover},
        {"p_mutation", c.ga.p_mutation},
        {"key_inherit_p", c.ga.key_inherit_p},
        {"reverse_p", c.ga.reverse_p},
        {"shuffle_p", c.ga.shuffle_p},
        {"flip_p", c.ga.flip_p},
        {"tournament_k", c.ga.tournament_k},
        {"thres_base", c.ga.thres_base},
        {"thres_step", c.ga.thres_step},
        {"thres_cap", c.ga.thres_cap},
        {"max_generations", c.ga.max_generations},
        {"stall_limit", c.ga.stall_limit},
        {"seed", c.ga.seed},
        {"home_x", c.home.x},
        {"home_y", c.home.y},
        {"cost_lift", c.cost_lift},
        {"threshold", c.threshold},
        {"method", c.method},
    };
}

template <typename T>
void assign(const json& j, const std::string& key, T& out) {
    try {
        out = j.get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config: bad value for key '" + key + "'");
    }
}

} // namespace

void PipelineConfig::validate() const {
    try {
        fdog.validate();
        trace.validate();
        ga.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (threshold < 0.0 || threshold > 1.0)
        throw ConfigError("config: threshold must lie in [0,1]");
    if (cost_lift < 0.0) throw ConfigError("config: cost_lift must be >= 0");
    if (std::find(kAllMethods.begin(), kAllMethods.end(), method) == kAllMethods.end())
        throw ConfigError("config: unknown method '" + method + "'");
}

PipelineConfig parse_config_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");

    PipelineConfig c;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        const json& v = it.value();
        if (k == "sigma_c") assign(v, k, c.fdog.sigma_c);
        else if (k == "rho") assign(v, k, c.fdog.rho);
        else if (k == "sigma_m") assign(v, k, c.fdog.sigma_m);
        else if (k == "line_length") assign(v, k, c.fdog.line_length);
        else if (k == "tau") assign(v, k, c.fdog.tau);
        else if (k == "etf_radius") assign(v, k, c.fdog.etf_radius);
        else if (k == "etf_iterations") assign(v, k, c.fdog.etf_iterations);
        else if (k == "min_component_px") assign(v, k, c.trace.min_component_px);
        else if (k == "max_spur_px") assign(v, k, c.trace.max_spur_px);
        else if (k == "max_extension_px") assign(v, k, c.trace.max_extension_px);
        else if (k == "population_size") assign(v, k, c.ga.population_size);
        else if (k == "elite_count") assign(v, k, c.ga.elite_count);
        else if (k == "p_crossover") assign(v, k, c.ga.p_crossover);
        else if (k == "p_mutation") assign(v, k, c.ga.p_mutation);
        else if (k == "key_inherit_p") assign(v, k, c.ga.key_inherit_p);
        else if (k == "reverse_p") assign(v, k, c.ga.reverse_p);
        else if (k == "shuffle_p") assign(v, k, c.ga.shuffle_p);
        else if (k == "flip_p") assign(v, k, c.ga.flip_p);
        else if (k == "tournament_k") assign(v, k, c.ga.tournament_k);
        else if (k == "thres_base") assign(v, k, c.ga.thres_base);
        else if (k == "thres_step") assign(v, k, c.ga.thres_step);
        else if (k == "thres_cap") assign(v, k, c.ga.thres_cap);
        else if (k == "max_generations") assign(v, k, c.ga.max_generations);
        else if (k == "stall_limit") assign(v, k, c.ga.stall_limit);
        else if (k == "seed") assign(v, k, c.ga.seed);
        else if (k == "home_x") assign(v, k, c.home.x);
        else if (k == "home_y") assign(v, k, c.home.y);
        else if (k == "cost_lift") assign(v, k, c.cost_lift);
        else if (k == "threshold") assign(v, k, c.threshold);
        else if (k == "method") assign(v, k, c.method);
        else throw ConfigError("config: unknown key '" + k + "'");
    }
    return c;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot read file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config_json(text);
}

std::string serialize_config(const PipelineConfig& cfg) { return config_to_json(cfg).dump(1) + "\n"; }

PipelineReport run_pipeline(const PipelineConfig& cfg, const std::string& input,
                            const std::string& out_dir) {
    cfg.validate();
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    auto out = [&](const std::string& name) { return (fs::path(out_dir) / name).string(); };
    using clock = std::chrono::steady_clock;

    PipelineReport report;

    auto t0 = clock::now();
    GrayImage img = load_gray(input);
    EtfField etf = compute_etf(img, cfg.fdog);
    GrayImage response = fdog(img, etf, cfg.fdog);
    BinaryImage contour_mask = binarize(response, cfg.fdog.tau);
    report.contour_file = out("contour.png");
    save_gray(to_gray(contour_mask), report.contour_file);
    report.contour_seconds = std::chrono::duration<double>(clock::now() - t0).count();

    t0 = clock::now();
    BinaryImage cleaned = clean(contour_mask, cfg.trace);
    BinaryImage skel = skeletonize(cleaned);
    skel = prune(skel, cfg.trace);
    skel = extend_line_ends(skel, cfg.trace);
    TracedSegments traced{img.width, img.height, split_and_trace(skel)};
    report.segments_file = out("segments.json");
    save_segments(traced, report.segments_file);
    report.trace_seconds = std::chrono::duration<double>(clock::now() - t0).count();
    report.segment_count = static_cast<int>(traced.segments.size());

    if (traced.segments.empty()) return report; // empty plan, still a success

    t0 = clock::now();
    GtspInstance inst = build_instance(traced.segments, cfg.home, cfg.cost_lift);
    DrawingPath path = run_method(inst, cfg.method, cfg.ga.seed, cfg.ga);
    FitnessReport fr = evaluate(inst, path);
    report.solve_seconds = std::chrono::duration<double>(clock::now() - t0).count();
    report.v_fitness = fr.v_fitness;
    report.n_lift = fr.n_lift;

    report.path_file = out("path.json");
    export_path(path, inst, report.path_file);
    report.svg_file = out("preview.svg");
    render_svg(path, inst, img.width, img.height, report.svg_file);
    return report;
}

void write_report(const PipelineReport& r, const std::string& path) {
    json j{
        {"segment_count", r.segment_count},
        {"v_fitness", r.v_fitness},
        {"n_lift", r.n_lift},
        {"timings",
         {{"contour_s", r.contour_seconds},
          {"trace_s", r.trace_seconds},
          {"solve_s", r.solve_seconds}}},
        {"artifacts",
         {{"contour", r.contour_file},
          {"segments", r.segments_file},
          {"path", r.path_file},
          {"svg", r.svg_file}}},
    };
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write report: " + path);
    out << j.dump(1) << "\n";
}

} // namespace drawpath
