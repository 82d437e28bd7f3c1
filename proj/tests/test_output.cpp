#include "drawpath/output.hpp"

#include "test_support.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

using namespace drawpath;
using namespace drawpath::testsupport;

namespace {

std::string temp_file(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

LineSegment seg(int id, std::vector<PixelCoord> pts) {
    LineSegment s;
    s.id = id;
    s.points = std::move(pts);
    return s;
}

size_t count_occurrences(const std::string& text, const std::string& needle) {
    size_t n = 0;
    for (size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size()))
        ++n;
    return n;
}

} // namespace

TEST_CASE("export_path: single segment emits 2 pen-ups and 1 polyline") {
    GtspInstance inst = build_instance({seg(0, {{2, 2}, {3, 2}, {4, 2}})}, {0.0, 0.0}, 30.0);
    DrawingPath p{{{0, Direction::Forward}}};
    std::string path = temp_file("single.path.json");
    export_path(p, inst, path);

    nlohmann::json j = nlohmann::json::parse(slurp(path));
    int pen_up = 0, pen_down = 0;
    for (const auto& m : j.at("moves"))
        m.at("type") == "pen_up" ? ++pen_up : ++pen_down;
    CHECK(pen_up == 2);
    CHECK(pen_down == 1);
    CHECK(j.at("fitness").at("n_lift") == 2);
    CHECK(j.at("cost_lift") == 30.0);
}

TEST_CASE("export_path: chained zero-distance transition emits no pen-up") {
    std::vector<LineSegment> segs;
    segs.push_back(seg(0, {{0, 0}, {4, 0}}));
    segs.push_back(seg(1, {{4, 0}, {4, 4}}));
    GtspInstance inst = build_instance(std::move(segs), {0.0, 0.0}, 30.0);
    DrawingPath p{{{0, Direction::Forward}, {1, Direction::Forward}}};
    std::string path = temp_file("chained.path.json");
    export_path(p, inst, path);

    nlohmann::json j = nlohmann::json::parse(slurp(path));
    int pen_up = 0;
    for (const auto& m : j.at("moves"))
        if (m.at("type") == "pen_up") ++pen_up;
    // Home sits on segment 0's start, so only the final return lifts the pen.
    CHECK(pen_up == 1);
    CHECK(j.at("fitness").at("n_lift") == 2);
}

TEST_CASE("export_path/import_path round-trips the fitness") {
    std::mt19937_64 rng(501);
    for (int trial = 0; trial < 10; ++trial) {
        int k = 2 + static_cast<int>(rng() % 12);
        GtspInstance inst = random_instance(k, rng);
        DrawingPath p = random_path(k, rng);
        double expected = evaluate(inst, p).v_fitness;

        std::string path = temp_file("rt.path.json");
        export_path(p, inst, path);
        ImportedPath back = import_path(path);
        CHECK(std::abs(back.report.v_fitness - expected) < 1e-9);
        CHECK(back.path.tour.size() == p.tour.size());
    }
}

TEST_CASE("render_svg: empty path shows only the home marker") {
    GtspInstance inst = build_instance({seg(0, {{1, 1}, {2, 2}})}, {5.0, 5.0}, 30.0);
    std::string path = temp_file("empty.svg");
    render_svg(DrawingPath{}, inst, 10, 10, path);
    std::string svg = slurp(path);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(count_occurrences(svg, "<circle") == 1);
    CHECK(count_occurrences(svg, "<polyline") == 0);
    CHECK(count_occurrences(svg, "stroke-dasharray") == 0);
    CHECK(svg.find("width=\"10\"") != std::string::npos);
}

TEST_CASE("render_svg: K polylines and n_lift dashed strokes") {
    std::mt19937_64 rng(502);
    for (int trial = 0; trial < 5; ++trial) {
        int k = 2 + static_cast<int>(rng() % 10);
        GtspInstance inst = random_instance(k, rng);
        DrawingPath p = random_path(k, rng);
        FitnessReport report = evaluate(inst, p);

        std::string path = temp_file("render.svg");
        render_svg(p, inst, 100, 100, path);
        std::string svg = slurp(path);
        CHECK(count_occurrences(svg, "<polyline") == static_cast<size_t>(k));
        CHECK(count_occurrences(svg, "stroke-dasharray") ==
              static_cast<size_t>(report.n_lift));
    }
}

TEST_CASE("run_method: labels and baseline relationships") {
    std::mt19937_64 rng(503);
    GtspInstance inst = random_instance(12, rng);
    double g = evaluate(inst, run_method(inst, "greedy", 0)).v_fitness;
    double g2 = evaluate(inst, run_method(inst, "greedy2opt", 0)).v_fitness;
    double g2lk = evaluate(inst, run_method(inst, "greedy2optlk", 0)).v_fitness;
    CHECK(g2 <= g + 1e-9);
    CHECK(g2lk <= g2 + 1e-9);
    for (const std::string& m : kAllMethods)
        CHECK_NOTHROW(validate_path(inst, run_method(inst, m, 1)));
    CHECK_THROWS_AS(run_method(inst, "simulated_annealing", 0), std::invalid_argument);
}

TEST_CASE("bench: greedy against itself is 0% improvement") {
    std::mt19937_64 rng(504);
    std::vector<std::pair<std::string, GtspInstance>> instances;
    instances.emplace_back("i0", random_instance(10, rng));
    auto results = bench(instances, {"greedy"}, 3, 42);
    REQUIRE(results.size() == 1);
    CHECK(results[0].improvement_over_greedy_pct == doctest::Approx(0.0));
    CHECK(results[0].trials == 3);
}

TEST_CASE("bench: improvement formula holds for every row") {
    std::mt19937_64 rng(505);
    std::vector<std::pair<std::string, GtspInstance>> instances;
    instances.emplace_back("a", random_instance(10, rng));
    instances.emplace_back("b", random_instance(14, rng));
    auto results = bench(instances, {"greedy", "greedy2opt"}, 2, 7);
    REQUIRE(results.size() == 4);
    for (const auto& r : results) {
        const GtspInstance& inst =
            r.instance_name == "a" ? instances[0].second : instances[1].second;
        double g = evaluate(inst, greedy(inst)).v_fitness;
        CHECK(r.improvement_over_greedy_pct ==
              doctest::Approx(100.0 * (g - r.mean_fitness) / g).epsilon(1e-12));
    }
}

TEST_CASE("bench: CSV is reproducible and parallelism-independent") {
    std::mt19937_64 rng(506);
    std::vector<std::pair<std::string, GtspInstance>> instances;
    instances.emplace_back("a", random_instance(10, rng));
    instances.emplace_back("b", random_instance(12, rng));
    std::vector<std::string> methods = {"greedy", "greedy2opt", "rkga2opt"};

    GaConfig quick; // default config is used inside bench via run_method

    std::string csv1 = format_bench_csv(bench(instances, methods, 2, 9, 1));
    std::string csv2 = format_bench_csv(bench(instances, methods, 2, 9, 1));
    std::string csv4 = format_bench_csv(bench(instances, methods, 2, 9, 4));
    CHECK(csv1 == csv2);
    CHECK(csv1 == csv4);
    CHECK(csv1.rfind("instance,method,trials,mean_fitness,improvement_over_greedy_pct\n", 0) ==
          0);
    (void)quick;
}

TEST_CASE("format_bench_table: shape") {
    std::vector<BenchmarkResult> results = {
        {"g1", "greedy2opt", 10, 90.0, 12.1},
        {"g2", "greedy2opt", 10, 95.0, 11.3},
        {"g1", "rkga2optlk", 10, 80.0, 17.5},
        {"g2", "rkga2optlk", 10, 82.0, 16.9},
    };
    std::string table = format_bench_table(results);
    CHECK(table.find("greedy2opt") != std::string::npos);
    CHECK(table.find("rkga2optlk") != std::string::npos);
    CHECK(table.find("g1") != std::string::npos);
    CHECK(table.find("Avg.") != std::string::npos);
    CHECK(table.find("17.2") != std::string::npos); // (17.5 + 16.9) / 2
}

TEST_CASE("bench: rejects bad arguments") {
    std::mt19937_64 rng(507);
    std::vector<std::pair<std::string, GtspInstance>> instances;
    instances.emplace_back("a", random_instance(5, rng));
    CHECK_THROWS_AS(bench(instances, {"nope"}, 2, 0), std::invalid_argument);
    CHECK_THROWS_AS(bench(instances, {"greedy"}, 0, 0), std::invalid_argument);
}
