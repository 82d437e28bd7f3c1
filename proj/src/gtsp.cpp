#include "drawpath/gtsp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace drawpath {

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

DirectedNode GtspInstance::node(int segment_id, Direction dir) const {
    const LineSegment& s = segments[static_cast<size_t>(segment_id)];
    Point2 first{static_cast<double>(s.points.front().x), static_cast<double>(s.points.front().y)};
    Point2 last{static_cast<double>(s.points.back().x), static_cast<double>(s.points.back().y)};
    if (dir == Direction::Forward) return {segment_id, dir, first, last};
    return {segment_id, dir, last, first};
}

GtspInstance build_instance(std::vector<LineSegment> segments, Point2 home, double cost_lift) {
    if (segments.empty()) throw std::invalid_argument("build_instance: no segments");
    if (cost_lift < 0.0) throw std::invalid_argument("build_instance: negative cost_lift");
    std::vector<uint8_t> seen(segments.size(), 0);
    for (const LineSegment& s : segments) {
        if (s.id < 0 || s.id >= static_cast<int>(segments.size()) || seen[s.id])
            throw std::invalid_argument("build_instance: segment ids must be 0..K-1 and unique");
        seen[s.id] = 1;
        if (s.points.size() < 2)
            throw std::invalid_argument("build_instance: segment with fewer than 2 points");
    }
    std::sort(segments.begin(), segments.end(),
              [](const LineSegment& a, const LineSegment& b) { return a.id < b.id; });
    return {std::move(segments), home, cost_lift};
}

DrawingPath decode(const Chromosome& c) {
    const int k = static_cast<int>(c.keys.size());
    std::vector<int> order(static_cast<size_t>(k));
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> frac(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) {
        double key = c.keys[static_cast<size_t>(i)];
        if (!(key >= 0.0 && key < 2.0))
            throw std::invalid_argument("decode: key outside [0,2)");
        frac[static_cast<size_t>(i)] = key - std::floor(key);
    }
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return frac[static_cast<size_t>(a)] < frac[static_cast<size_t>(b)];
    });
    DrawingPath p;
    p.tour.reserve(static_cast<size_t>(k));
    for (int id : order) {
        bool forward = c.keys[static_cast<size_t>(id)] >= 1.0;
        p.tour.emplace_back(id, forward ? Direction::Forward : Direction::Reverse);
    }
    return p;
}

Chromosome encode(const DrawingPath& p) {
    const int k = static_cast<int>(p.tour.size());
    Chromosome c;
    c.keys.resize(static_cast<size_t>(k), 0.0);
    for (int j = 0; j < k; ++j) {
        auto [id, dir] = p.tour[static_cast<size_t>(j)];
        double bit = dir == Direction::Forward ? 1.0 : 0.0;
        c.keys[static_cast<size_t>(id)] = bit + (j + 0.5) / (k + 1);
    }
    return c;
}

void validate_path(const GtspInstance& inst, const DrawingPath& p) {
    const int k = inst.num_segments();
    if (static_cast<int>(p.tour.size()) != k)
        throw std::invalid_argument("path length does not match instance");
    std::vector<uint8_t> seen(static_cast<size_t>(k), 0);
    for (auto [id, dir] : p.tour) {
        if (id < 0 || id >= k || seen[static_cast<size_t>(id)])
            throw std::invalid_argument("path is not a permutation of segment ids");
        seen[static_cast<size_t>(id)] = 1;
    }
}

FitnessReport evaluate(const GtspInstance& inst, const DrawingPath& p) {
    validate_path(inst, p);
    FitnessReport r;
    const int k = inst.num_segments();
    DirectedNode first = inst.node(p.tour.front().first, p.tour.front().second);
    DirectedNode last = inst.node(p.tour.back().first, p.tour.back().second);
    r.d_home_first = distance(inst.home, first.start);
    r.d_last_home = distance(last.end, inst.home);
    r.n_lift = 2; // home travels always lift the pen
    r.d_inter.reserve(static_cast<size_t>(k > 0 ? k - 1 : 0));
    for (int i = 0; i + 1 < k; ++i) {
        DirectedNode a = inst.node(p.tour[static_cast<size_t>(i)].first,
                                   p.tour[static_cast<size_t>(i)].second);
        DirectedNode b = inst.node(p.tour[static_cast<size_t>(i) + 1].first,
                                   p.tour[static_cast<size_t>(i) + 1].second);
        double d = distance(a.end, b.start);
        r.d_inter.push_back(d);
        if (d > 0.0) ++r.n_lift;
    }
    r.lift_cost = r.n_lift * inst.cost_lift;
    r.v_fitness = r.lift_cost + r.d_home_first + r.d_last_home +
                  std::accumulate(r.d_inter.begin(), r.d_inter.end(), 0.0);
    return r;
}

} // namespace drawpath
