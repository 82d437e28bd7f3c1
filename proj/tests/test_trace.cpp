#include "drawpath/trace.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <random>
#include <set>
#include <vector>

using namespace drawpath;
using namespace drawpath::testsupport;

namespace {

// Flood-fill component counter, independent of any library traversal code.
// 8-connectivity for ink, 4-connectivity for blank (the standard dual pair).
int count_components(const BinaryImage& img, bool ink_value, bool eight) {
    std::vector<uint8_t> seen(img.ink.size(), 0);
    int components = 0;
    for (int sy = 0; sy < img.height; ++sy) {
        for (int sx = 0; sx < img.width; ++sx) {
            size_t si = static_cast<size_t>(sy) * img.width + sx;
            if (seen[si] || img.at(sx, sy) != ink_value) continue;
            ++components;
            std::vector<std::pair<int, int>> stack{{sx, sy}};
            seen[si] = 1;
            while (!stack.empty()) {
                auto [x, y] = stack.back();
                stack.pop_back();
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        if (!eight && dx != 0 && dy != 0) continue;
                        int nx = x + dx, ny = y + dy;
                        if (!img.in_bounds(nx, ny) || img.at(nx, ny) != ink_value) continue;
                        size_t ni = static_cast<size_t>(ny) * img.width + nx;
                        if (!seen[ni]) {
                            seen[ni] = 1;
                            stack.emplace_back(nx, ny);
                        }
                    }
                }
            }
        }
    }
    return components;
}

// Holes = interior blank components (4-connected, not touching the border).
int count_holes(const BinaryImage& img) {
    // Pad with one blank ring so the outside is a single border-touching region.
    BinaryImage padded(img.width + 2, img.height + 2);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) padded.set(x + 1, y + 1, img.at(x, y));
    return count_components(padded, false, false) - 1;
}

bool is_thin(const BinaryImage& img) {
    for (int y = 1; y + 1 < img.height; ++y)
        for (int x = 1; x + 1 < img.width; ++x)
            if (img.at(x, y) && img.at(x - 1, y) && img.at(x + 1, y) && img.at(x, y - 1) &&
                img.at(x, y + 1))
                return false;
    return true;
}

bool subset_of(const BinaryImage& sub, const BinaryImage& super) {
    for (size_t i = 0; i < sub.ink.size(); ++i)
        if (sub.ink[i] && !super.ink[i]) return false;
    return true;
}

// 9x9 plus sign: 4-px arms meeting at (4,4).
BinaryImage plus_sign() {
    BinaryImage img(9, 9);
    for (int i = 0; i < 9; ++i) {
        img.set(i, 4, true);
        img.set(4, i, true);
    }
    return img;
}

BinaryImage random_blob(std::mt19937_64& rng, int size = 40) {
    BinaryImage img(size, size);
    std::uniform_int_distribution<int> coord(4, size - 5);
    std::uniform_int_distribution<int> radius(2, 6);
    int disks = 3 + static_cast<int>(rng() % 4);
    for (int d = 0; d < disks; ++d) {
        int cx = coord(rng), cy = coord(rng), r = radius(rng);
        for (int y = cy - r; y <= cy + r; ++y)
            for (int x = cx - r; x <= cx + r; ++x)
                if (img.in_bounds(x, y) && (x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r)
                    img.set(x, y, true);
    }
    return img;
}

} // namespace

TEST_CASE("clean: removes small components only") {
    TraceParams params;
    params.min_component_px = 10;

    BinaryImage empty(16, 16);
    CHECK(clean(empty, params) == empty);

    // 100-px curve (L shape) plus a 3-px blob.
    BinaryImage img(120, 8);
    for (int x = 0; x < 99; ++x) img.set(x, 2, true);
    img.set(98, 3, true); // 100th pixel turns the corner
    img.set(110, 6, true);
    img.set(111, 6, true);
    img.set(111, 7, true);
    REQUIRE(count_components(img, true, true) == 2);

    BinaryImage cleaned = clean(img, params);
    CHECK(count_components(cleaned, true, true) == 1);
    CHECK(cleaned.ink_count() == 100);
    CHECK_FALSE(cleaned.at(110, 6));

    params.min_component_px = 0;
    CHECK(clean(img, params) == img);
}

TEST_CASE("skeletonize: 1-px line is a fixpoint") {
    BinaryImage line = bitmap({
        "........",
        ".######.",
        "........",
    });
    CHECK(skeletonize(line) == line);
}

TEST_CASE("skeletonize: 5x5 filled square collapses to a thin remnant") {
    BinaryImage img(9, 9);
    for (int y = 2; y < 7; ++y)
        for (int x = 2; x < 7; ++x) img.set(x, y, true);
    BinaryImage skel = skeletonize(img);
    CHECK(skel.ink_count() < img.ink_count() / 2);
    CHECK(skel.ink_count() >= 1);
    CHECK(is_thin(skel));
    CHECK(subset_of(skel, img));
    CHECK(count_components(skel, true, true) == 1);
}

TEST_CASE("skeletonize: 3-px ring keeps its topology") {
    // 10x10 filled square with a 4x4 hole: a ring of width 3.
    BinaryImage img(14, 14);
    for (int y = 2; y < 12; ++y)
        for (int x = 2; x < 12; ++x) img.set(x, y, true);
    for (int y = 5; y < 9; ++y)
        for (int x = 5; x < 9; ++x) img.set(x, y, false);
    REQUIRE(count_components(img, true, true) == 1);
    REQUIRE(count_holes(img) == 1);

    BinaryImage skel = skeletonize(img);
    CHECK(count_components(skel, true, true) == 1);
    CHECK(count_holes(skel) == 1);
    CHECK(is_thin(skel));
    CHECK(subset_of(skel, img));
}

TEST_CASE("skeletonize: connectivity preserved on random blobs") {
    std::mt19937_64 rng(301);
    for (int trial = 0; trial < 10; ++trial) {
        BinaryImage img = random_blob(rng);
        BinaryImage skel = skeletonize(img);
        CHECK(subset_of(skel, img));
        CHECK(count_components(skel, true, true) == count_components(img, true, true));
        CHECK(is_thin(skel));
    }
}

TEST_CASE("prune: short spur removed, plus sign intact") {
    // 13x13 plus (arms of 6) keeps every arm tip farther from a junction
    // than max_spur_px, so only the added spur is a prunable branch.
    BinaryImage plus13(13, 13);
    for (int i = 0; i < 13; ++i) {
        plus13.set(i, 6, true);
        plus13.set(6, i, true);
    }
    BinaryImage img = plus13;
    img.set(7, 5, true); // 2-px diagonal spur off the north arm
    img.set(8, 4, true);
    TraceParams params;
    params.max_spur_px = 4;
    BinaryImage pruned = prune(img, params);
    CHECK(pruned == plus13);

    params.max_spur_px = 0;
    CHECK(prune(img, params) == img);
}

TEST_CASE("prune: whole components are not spurs") {
    BinaryImage img = bitmap({
        ".....",
        ".###.",
        ".....",
    });
    TraceParams params;
    params.max_spur_px = 10;
    CHECK(prune(img, params) == img);
}

TEST_CASE("extend_line_ends: closes a 2-px gap") {
    BinaryImage img = bitmap({"####..####"});
    TraceParams params;
    params.max_extension_px = 3;
    BinaryImage extended = extend_line_ends(img, params);
    CHECK(count_components(extended, true, true) == 1);
    CHECK(is_thin(extended));

    params.max_extension_px = 0;
    CHECK(extend_line_ends(img, params) == img);
}

TEST_CASE("extend_line_ends: clipped at the border") {
    BinaryImage img = bitmap({"###......."});
    TraceParams params;
    params.max_extension_px = 5;
    BinaryImage extended = extend_line_ends(img, params);
    CHECK(extended.width == img.width);
    // The left endpoint is at the border; only the right endpoint can grow.
    CHECK(extended.at(0, 0));
    CHECK(extended.ink_count() <= img.ink_count() + 2 * params.max_extension_px);
}

TEST_CASE("crossing_number and detect_junctions") {
    BinaryImage line = bitmap({"........", ".######.", "........"});
    CHECK(detect_junctions(line).empty());
    CHECK(crossing_number(line, 3, 1) == 2);
    CHECK(crossing_number(line, 1, 1) == 1); // endpoint

    BinaryImage plus = plus_sign();
    CHECK(crossing_number(plus, 4, 4) == 4);
    std::set<PixelCoord> j = detect_junctions(plus);
    REQUIRE(j.size() == 1);
    CHECK(*j.begin() == PixelCoord{4, 4});

    BinaryImage tee = bitmap({
        "#######",
        "...#...",
        "...#...",
        "...#...",
    });
    std::set<PixelCoord> jt = detect_junctions(tee);
    REQUIRE(jt.size() == 1);
    CHECK(*jt.begin() == PixelCoord{3, 0});
}

TEST_CASE("split_and_trace: plus sign splits into 4 arm segments") {
    std::vector<LineSegment> segs = split_and_trace(plus_sign());
    REQUIRE(segs.size() == 4);
    for (const LineSegment& s : segs) {
        REQUIRE(s.points.size() == 5); // 4-px arm + replicated center
        bool center_is_endpoint = s.points.front() == PixelCoord{4, 4} ||
                                  s.points.back() == PixelCoord{4, 4};
        CHECK(center_is_endpoint);
    }
}

TEST_CASE("split_and_trace: single open curve and empty image") {
    BinaryImage curve = bitmap({
        "#.....",
        ".#....",
        "..##..",
        "....##",
    });
    std::vector<LineSegment> segs = split_and_trace(curve);
    REQUIRE(segs.size() == 1);
    CHECK(segs[0].points.size() == curve.ink_count());

    CHECK(split_and_trace(BinaryImage(8, 8)).empty());
}

TEST_CASE("split_and_trace: closed loop starts at lowest (y,x) and repeats it") {
    BinaryImage ring = bitmap({
        "......",
        ".####.",
        ".#..#.",
        ".####.",
        "......",
    });
    std::vector<LineSegment> segs = split_and_trace(ring);
    REQUIRE(segs.size() == 1);
    const auto& pts = segs[0].points;
    CHECK(pts.size() == ring.ink_count() + 1);
    CHECK(pts.front() == PixelCoord{1, 1});
    CHECK(pts.front() == pts.back());
}

TEST_CASE("split_and_trace: conservation, adjacency, determinism") {
    std::mt19937_64 rng(302);
    TraceParams params;
    for (int trial = 0; trial < 10; ++trial) {
        BinaryImage skel = prune(skeletonize(random_blob(rng)), params);
        std::vector<LineSegment> segs = split_and_trace(skel);

        // Adjacency invariant per segment.
        for (const LineSegment& s : segs) {
            REQUIRE(s.points.size() >= 2);
            for (size_t i = 1; i < s.points.size(); ++i) {
                int dx = std::abs(s.points[i].x - s.points[i - 1].x);
                int dy = std::abs(s.points[i].y - s.points[i - 1].y);
                CHECK(std::max(dx, dy) == 1); // 8-adjacent and distinct
            }
            // Simple path: no interior repeats (loops repeat only first=last).
            std::set<PixelCoord> uniq(s.points.begin(), s.points.end());
            size_t expected = s.points.front() == s.points.back() ? s.points.size() - 1
                                                                  : s.points.size();
            CHECK(uniq.size() == expected);
        }

        // Pixel conservation: every traced point is ink, and every ink pixel
        // except isolated singletons (undrawable) appears in some segment.
        std::set<PixelCoord> traced;
        for (const LineSegment& s : segs)
            traced.insert(s.points.begin(), s.points.end());
        for (PixelCoord p : traced) CHECK(skel.at(p.x, p.y));
        for (int y = 0; y < skel.height; ++y) {
            for (int x = 0; x < skel.width; ++x) {
                if (!skel.at(x, y)) continue;
                bool has_neighbor = false;
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx)
                        if ((dx || dy) && skel.in_bounds(x + dx, y + dy) &&
                            skel.at(x + dx, y + dy))
                            has_neighbor = true;
                if (has_neighbor) CHECK(traced.count({x, y}) == 1);
            }
        }

        // Determinism including ordering and ids.
        std::vector<LineSegment> again = split_and_trace(skel);
        REQUIRE(again.size() == segs.size());
        for (size_t i = 0; i < segs.size(); ++i) {
            CHECK(again[i].id == segs[i].id);
            CHECK(again[i].id == static_cast<int>(i));
            CHECK(again[i].points == segs[i].points);
        }
    }
}

TEST_CASE("segment file round-trips losslessly") {
    std::mt19937_64 rng(303);
    TraceParams params;
    BinaryImage skel = prune(skeletonize(random_blob(rng)), params);
    TracedSegments traced{skel.width, skel.height, split_and_trace(skel)};
    REQUIRE_FALSE(traced.segments.empty());

    std::string path =
        (std::filesystem::temp_directory_path() / "segments_rt.json").string();
    save_segments(traced, path);
    TracedSegments back = load_segments(path);
    CHECK(back.width == traced.width);
    CHECK(back.height == traced.height);
    REQUIRE(back.segments.size() == traced.segments.size());
    for (size_t i = 0; i < traced.segments.size(); ++i) {
        CHECK(back.segments[i].id == traced.segments[i].id);
        CHECK(back.segments[i].points == traced.segments[i].points);
    }
}
