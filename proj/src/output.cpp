#include "drawpath/output.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace drawpath {

namespace {

nlohmann::json point_json(Point2 p) { return nlohmann::json{p.x, p.y}; }

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9f", v);
    return buf;
}

} // namespace

void export_path(const DrawingPath& p, const GtspInstance& inst, const std::string& path) {
    FitnessReport report = evaluate(inst, p);
    nlohmann::json j;
    j["home"] = point_json(inst.home);
    j["cost_lift"] = inst.cost_lift;
    j["fitness"] = {
        {"v_fitness", report.v_fitness},   {"n_lift", report.n_lift},
        {"lift_cost", report.lift_cost},   {"d_home_first", report.d_home_first},
        {"d_last_home", report.d_last_home}, {"d_inter", report.d_inter},
    };

    auto& moves = j["moves"] = nlohmann::json::array();
    Point2 cur = inst.home;
    for (size_t i = 0; i < p.tour.size(); ++i) {
        DirectedNode node = inst.node(p.tour[i].first, p.tour[i].second);
        if (distance(cur, node.start) > 0.0) {
            moves.push_back({{"type", "pen_up"},
                             {"from", point_json(cur)},
                             {"to", point_json(node.start)}});
        }
        const LineSegment& seg = inst.segments[static_cast<size_t>(node.segment_id)];
        nlohmann::json pts = nlohmann::json::array();
        if (node.direction == Direction::Forward) {
            for (PixelCoord c : seg.points) pts.push_back({c.x, c.y});
        } else {
            for (auto it = seg.points.rbegin(); it != seg.points.rend(); ++it)
                pts.push_back({it->x, it->y});
        }
        moves.push_back({{"type", "pen_down"},
                         {"segment", node.segment_id},
                         {"direction", node.direction == Direction::Forward ? "forward" : "reverse"},
                         {"points", std::move(pts)}});
        cur = node.end;
    }
    moves.push_back(
        {{"type", "pen_up"}, {"from", point_json(cur)}, {"to", point_json(inst.home)}});

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write path file: " + path);
    out << j.dump(1) << "\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

ImportedPath import_path(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read path file: " + path);
    nlohmann::json j;
    in >> j;

    ImportedPath result;
    std::vector<LineSegment> segments;
    for (const auto& m : j.at("moves")) {
        if (m.at("type").get<std::string>() != "pen_down") continue;
        LineSegment seg;
        seg.id = m.at("segment").get<int>();
        for (const auto& pt : m.at("points"))
            seg.points.push_back({pt.at(0).get<int>(), pt.at(1).get<int>()});
        bool forward = m.at("direction").get<std::string>() == "forward";
        if (!forward) std::reverse(seg.points.begin(), seg.points.end());
        result.path.tour.emplace_back(seg.id, forward ? Direction::Forward : Direction::Reverse);
        segments.push_back(std::move(seg));
    }
    Point2 home{j.at("home").at(0).get<double>(), j.at("home").at(1).get<double>()};
    result.instance = build_instance(std::move(segments), home, j.at("cost_lift").get<double>());
    result.report = evaluate(result.instance, result.path);
    return result;
}

void render_svg(const DrawingPath& p, const GtspInstance& inst, int width, int height,
                const std::string& path) {
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    Point2 cur = inst.home;
    auto dashed = [&](Point2 a, Point2 b) {
        svg << "<line x1=\"" << a.x << "\" y1=\"" << a.y << "\" x2=\"" << b.x << "\" y2=\""
            << b.y << "\" stroke=\"red\" stroke-width=\"0.5\" stroke-dasharray=\"2,2\"/>\n";
    };
    for (auto [id, dir] : p.tour) {
        DirectedNode node = inst.node(id, dir);
        if (distance(cur, node.start) > 0.0) dashed(cur, node.start);
        const LineSegment& seg = inst.segments[static_cast<size_t>(id)];
        svg << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
        if (dir == Direction::Forward) {
            for (PixelCoord c : seg.points) svg << c.x << "," << c.y << " ";
        } else {
            for (auto it = seg.points.rbegin(); it != seg.points.rend(); ++it)
                svg << it->x << "," << it->y << " ";
        }
        svg << "\"/>\n";
        cur = node.end;
    }
    if (!p.tour.empty()) dashed(cur, inst.home);
    svg << "<circle cx=\"" << inst.home.x << "\" cy=\"" << inst.home.y
        << "\" r=\"2\" fill=\"blue\"/>\n";
    svg << "</svg>\n";

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write SVG: " + path);
    out << svg.str();
    if (!out) throw std::runtime_error("write failed: " + path);
}

const std::vector<std::string> kAllMethods = {"greedy", "greedy2opt", "greedy2optlk",
                                              "rkga2opt", "rkga2optlk"};

DrawingPath run_method(const GtspInstance& inst, const std::string& method, uint64_t seed,
                       const GaConfig& cfg) {
    if (method == "greedy") return greedy(inst);
    if (method == "greedy2opt") return two_opt(inst, greedy(inst));
    if (method == "greedy2optlk") return lin_kernighan(inst, two_opt(inst, greedy(inst)));
    if (method == "rkga2opt" || method == "rkga2optlk") {
        GaConfig run_cfg = cfg;
        run_cfg.seed = seed;
        return run_rkga(inst, run_cfg, method == "rkga2optlk").first;
    }
    throw std::invalid_argument("unknown method: " + method);
}

std::vector<BenchmarkResult> bench(
    const std::vector<std::pair<std::string, GtspInstance>>& instances,
    const std::vector<std::string>& methods, int trials, uint64_t base_seed, int jobs) {
    if (trials < 1) throw std::invalid_argument("bench: trials must be >= 1");
    for (const auto& m : methods)
        if (std::find(kAllMethods.begin(), kAllMethods.end(), m) == kAllMethods.end())
            throw std::invalid_argument("unknown method: " + m);

    struct Cell {
        size_t instance_idx;
        size_t method_idx;
    };
    std::vector<Cell> cells;
    for (size_t i = 0; i < instances.size(); ++i)
        for (size_t m = 0; m < methods.size(); ++m) cells.push_back({i, m});

    std::vector<double> greedy_fitness(instances.size());
    for (size_t i = 0; i < instances.size(); ++i)
        greedy_fitness[i] = evaluate(instances[i].second, greedy(instances[i].second)).v_fitness;

    std::vector<BenchmarkResult> results(cells.size());
    std::atomic<size_t> next_cell{0};
    auto worker = [&]() {
        for (;;) {
            size_t idx = next_cell.fetch_add(1);
            if (idx >= cells.size()) return;
            const Cell& cell = cells[idx];
            const GtspInstance& inst = instances[cell.instance_idx].second;
            const std::string& method = methods[cell.method_idx];
            bool stochastic = method.rfind("rkga", 0) == 0;
            double sum = 0.0;
            if (stochastic) {
                for (int t = 0; t < trials; ++t) {
                    DrawingPath p = run_method(inst, method, base_seed + static_cast<uint64_t>(t));
                    sum += evaluate(inst, p).v_fitness;
                }
            } else {
                sum = evaluate(inst, run_method(inst, method, base_seed)).v_fitness * trials;
            }
            double mean = sum / trials;
            double g = greedy_fitness[cell.instance_idx];
            results[idx] = {instances[cell.instance_idx].first, method, trials, mean,
                            100.0 * (g - mean) / g};
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return results;
}

std::string format_bench_table(const std::vector<BenchmarkResult>& results) {
    // Rows = methods, columns = instances + Avg; cells = improvement %.
    std::vector<std::string> methods, instances;
    for (const auto& r : results) {
        if (std::find(methods.begin(), methods.end(), r.method) == methods.end())
            methods.push_back(r.method);
        if (std::find(instances.begin(), instances.end(), r.instance_name) == instances.end())
            instances.push_back(r.instance_name);
    }
    std::ostringstream out;
    out << "Improvement over greedy (%)\n";
    char buf[64];
    out << std::left;
    std::snprintf(buf, sizeof(buf), "%-14s", "method");
    out << buf;
    for (const auto& inst : instances) {
        std::snprintf(buf, sizeof(buf), " %10s", inst.c_str());
        out << buf;
    }
    out << "       Avg.\n";
    for (const auto& m : methods) {
        std::snprintf(buf, sizeof(buf), "%-14s", m.c_str());
        out << buf;
        double sum = 0.0;
        int count = 0;
        for (const auto& inst : instances) {
            for (const auto& r : results) {
                if (r.method == m && r.instance_name == inst) {
                    std::snprintf(buf, sizeof(buf), " %10.1f", r.improvement_over_greedy_pct);
                    out << buf;
                    sum += r.improvement_over_greedy_pct;
                    ++count;
                }
            }
        }
        std::snprintf(buf, sizeof(buf), " %10.1f", count > 0 ? sum / count : 0.0);
        out << buf << "\n";
    }
    return out.str();
}

std::string format_bench_csv(const std::vector<BenchmarkResult>& results) {
    std::ostringstream out;
    out << "instance,method,trials,mean_fitness,improvement_over_greedy_pct\n";
    for (const auto& r : results) {
        out << r.instance_name << "," << r.method << "," << r.trials << ","
            << fmt_double(r.mean_fitness) << "," << fmt_double(r.improvement_over_greedy_pct)
            << "\n";
    }
    return out.str();
}

} // namespace drawpath
