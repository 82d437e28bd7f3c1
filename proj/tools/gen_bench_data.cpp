// Generates the bundled benchmark data: five synthetic sketch-like traced
// instances plus a small test sketch image. Outputs are committed to data/
// so tests do not depend on this tool at runtime.
//
// Usage: gen_bench_data <output-dir>

#include "drawpath/image.hpp"
#include "drawpath/trace.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <vector>

namespace {

using namespace drawpath;

void draw_line(BinaryImage& img, double x0, double y0, double x1, double y1) {
    int steps = static_cast<int>(std::ceil(std::max(std::abs(x1 - x0), std::abs(y1 - y0)))) + 1;
    for (int i = 0; i <= steps; ++i) {
        double t = static_cast<double>(i) / steps;
        int x = static_cast<int>(std::lround(x0 + t * (x1 - x0)));
        int y = static_cast<int>(std::lround(y0 + t * (y1 - y0)));
        if (img.in_bounds(x, y)) img.set(x, y, true);
    }
}

void draw_bezier(BinaryImage& img, double x0, double y0, double cx, double cy, double x1,
                 double y1) {
    double px = x0, py = y0;
    for (int i = 1; i <= 64; ++i) {
        double t = i / 64.0;
        double u = 1.0 - t;
        double x = u * u * x0 + 2 * u * t * cx + t * t * x1;
        double y = u * u * y0 + 2 * u * t * cy + t * t * y1;
        draw_line(img, px, py, x, y);
        px = x;
        py = y;
    }
}

void draw_ellipse(BinaryImage& img, double cx, double cy, double rx, double ry) {
    double px = cx + rx, py = cy;
    for (int i = 1; i <= 96; ++i) {
        double a = 2.0 * M_PI * i / 96.0;
        double x = cx + rx * std::cos(a);
        double y = cy + ry * std::sin(a);
        draw_line(img, px, py, x, y);
        px = x;
        py = y;
    }
}

// Sketch-like doodle: a face-ish layout of ellipses, curves, and hatching.
BinaryImage sketch_image(uint64_t seed, int size) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    auto coord = [&] { return 16.0 + u01(rng) * (size - 32); };

    BinaryImage img(size, size);
    int ellipses = 2 + static_cast<int>(rng() % 2);
    for (int i = 0; i < ellipses; ++i)
        draw_ellipse(img, coord(), coord(), 8 + u01(rng) * 30, 8 + u01(rng) * 30);
    int curves = 6 + static_cast<int>(rng() % 3);
    for (int i = 0; i < curves; ++i)
        draw_bezier(img, coord(), coord(), coord(), coord(), coord(), coord());
    int strokes = 5 + static_cast<int>(rng() % 3);
    for (int i = 0; i < strokes; ++i) {
        double x = coord(), y = coord();
        double len = 10 + u01(rng) * 50;
        double ang = u01(rng) * 2.0 * M_PI;
        draw_line(img, x, y, x + len * std::cos(ang), y + len * std::sin(ang));
    }
    return img;
}

TracedSegments trace_sketch(const BinaryImage& raw) {
    TraceParams params;
    BinaryImage skel = skeletonize(clean(raw, params));
    skel = extend_line_ends(prune(skel, params), params);
    return {raw.width, raw.height, split_and_trace(skel)};
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: gen_bench_data <output-dir>\n";
        return 2;
    }
    namespace fs = std::filesystem;
    fs::path out_dir(argv[1]);
    fs::create_directories(out_dir / "instances");

    // Seeds chosen so the five instances average ~74 segments.
    const uint64_t seeds[5] = {2, 25, 39, 46, 50};
    int total = 0;
    for (int i = 0; i < 5; ++i) {
        BinaryImage img = sketch_image(seeds[i], 256);
        TracedSegments traced = trace_sketch(img);
        std::string name = "g" + std::to_string(i + 1);
        save_segments(traced, (out_dir / "instances" / (name + ".json")).string());
        std::cout << name << ": " << traced.segments.size() << " segments\n";
        total += static_cast<int>(traced.segments.size());
        if (i == 0) save_gray(to_gray(img), (out_dir / "test_sketch.png").string());
    }
    std::cout << "average: " << total / 5.0 << " segments\n";
    return 0;
}
