#pragma once

#include "drawpath/trace.hpp"

#include <cstdint>
#include <vector>

namespace drawpath {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Point2&) const = default;
};

double distance(Point2 a, Point2 b);

enum class Direction : uint8_t { Forward = 1, Reverse = 0 };

/// One of the two directed nodes a segment contributes to the GTSP.
struct DirectedNode {
    int segment_id = 0;
    Direction direction = Direction::Forward;
    Point2 start;
    Point2 end;
};

/// Drawing-order problem: K segment node-sets of two directions each,
/// a home point, and a per-lift cost.
struct GtspInstance {
    std::vector<LineSegment> segments;
    Point2 home{0.0, 0.0};
    double cost_lift = 30.0;

    int num_segments() const { return static_cast<int>(segments.size()); }
    DirectedNode node(int segment_id, Direction dir) const;
};

GtspInstance build_instance(std::vector<LineSegment> segments, Point2 home, double cost_lift);

/// K random keys in [0,2): integer part = direction bit, decimal part =
/// relative visit order.
struct Chromosome {
    std::vector<double> keys;
};

/// Visit order over (segment, direction) pairs; exactly one node per set.
struct DrawingPath {
    std::vector<std::pair<int, Direction>> tour;
};

struct FitnessReport {
    double v_fitness = 0.0;
    int n_lift = 0;
    double lift_cost = 0.0;
    double d_home_first = 0.0;
    double d_last_home = 0.0;
    std::vector<double> d_inter;
};

/// Sorts segments by the decimal part of their key (ties by segment id);
/// integer part 1 = Forward, 0 = Reverse. Throws on keys outside [0,2).
DrawingPath decode(const Chromosome& c);

/// Inverse of decode: key at tour position j = dir_bit + (j+0.5)/(K+1).
Chromosome encode(const DrawingPath& p);

/// Total cost: n_lift * cost_lift + home travel + inter-segment travel.
/// The two home travels always lift the pen; an inter-segment transition
/// lifts iff its distance is nonzero (exactly coincident endpoints chain).
FitnessReport evaluate(const GtspInstance& inst, const DrawingPath& p);

/// Throws std::invalid_argument unless p visits each segment id 0..K-1
/// exactly once.
void validate_path(const GtspInstance& inst, const DrawingPath& p);

} // namespace drawpath
