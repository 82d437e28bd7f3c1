#pragma once

#include "drawpath/image.hpp"

#include <set>
#include <string>
#include <utility>
#include <vector>

namespace drawpath {

struct PixelCoord {
    int x = 0;
    int y = 0;
    auto operator<=>(const PixelCoord&) const = default;
};

/// Ordered pixel polyline traced from the skeleton. Consecutive points are
/// 8-adjacent and distinct; closed loops repeat the first point as the last.
struct LineSegment {
    int id = 0;
    std::vector<PixelCoord> points;
};

struct TraceParams {
    int min_component_px = 8; // cleanup: components smaller than this are removed
    int max_spur_px = 5;      // pruning: branches shorter than this are removed
    int max_extension_px = 3; // line-end extension limit

    void validate() const;
};

/// Removes 8-connected ink components with fewer than min_component_px pixels.
BinaryImage clean(const BinaryImage& img, const TraceParams& params);

/// Morphological thinning by iterated hit-or-miss passes until fixpoint.
/// The result is a subset of the input ink and preserves 8-connectivity.
BinaryImage skeletonize(const BinaryImage& img);

/// Removes every open branch (endpoint to nearest junction) shorter than
/// max_spur_px, repeating until fixpoint. Whole components are not spurs.
BinaryImage prune(const BinaryImage& skel, const TraceParams& params);

/// Extends each endpoint along its local direction by up to max_extension_px
/// pixels, stopping early when the extension meets existing ink.
BinaryImage extend_line_ends(const BinaryImage& skel, const TraceParams& params);

/// Number of blank->ink transitions scanning the 8-neighborhood circularly.
int crossing_number(const BinaryImage& img, int x, int y);

/// All ink pixels with crossing number >= 3.
std::set<PixelCoord> detect_junctions(const BinaryImage& skel);

/// Splits the skeleton at junction pixels and traces each remaining arc into
/// an ordered LineSegment. Junction pixels are replicated as endpoints of
/// each incident segment. Closed loops start at their lowest (y,x) pixel and
/// repeat the first point last. Isolated single pixels cannot form a
/// two-point polyline and are dropped.
std::vector<LineSegment> split_and_trace(const BinaryImage& skel);

/// Segment file: the contract between tracing and path planning.
struct TracedSegments {
    int width = 0;
    int height = 0;
    std::vector<LineSegment> segments;
};

void save_segments(const TracedSegments& traced, const std::string& path);
TracedSegments load_segments(const std::string& path);

} // namespace drawpath
