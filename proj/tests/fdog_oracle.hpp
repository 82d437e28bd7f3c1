#pragma once

// Independent brute-force FDoG oracle: recomputes the filter from its
// definition with plain nested loops; shares no code with the library
// implementation. Used by the unit tests and the acceptance suite.

#include "drawpath/contour.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace drawpath::testsupport {

struct OracleVec2 {
    double x = 0.0, y = 0.0;
};

inline double oracle_bilinear(const GrayImage& img, double x, double y) {
    x = std::min(std::max(x, 0.0), img.width - 1.0);
    y = std::min(std::max(y, 0.0), img.height - 1.0);
    int x0 = static_cast<int>(x), y0 = static_cast<int>(y);
    int x1 = std::min(x0 + 1, img.width - 1), y1 = std::min(y0 + 1, img.height - 1);
    double fx = x - x0, fy = y - y0;
    return img.at(x0, y0) * (1 - fx) * (1 - fy) + img.at(x1, y0) * fx * (1 - fy) +
           img.at(x0, y1) * (1 - fx) * fy + img.at(x1, y1) * fx * fy;
}

// Dominant orientation of a 3x3 ETF window via the half-angle form of the
// structure-tensor eigenvector (different closed form than the library).
inline OracleVec2 oracle_window_orientation(const EtfField& etf, int px, int py) {
    double a = 0, b = 0, c = 0;
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
            int x = px + dx, y = py + dy;
            if (x < 0 || x >= etf.width || y < 0 || y >= etf.height) continue;
            double tx = etf.vx[etf.idx(x, y)], ty = etf.vy[etf.idx(x, y)];
            a += tx * tx;
            b += tx * ty;
            c += ty * ty;
        }
    if (a + c < 1e-12) return {};
    double theta = 0.5 * std::atan2(2.0 * b, a - c);
    return {std::cos(theta), std::sin(theta)};
}

inline std::vector<OracleVec2> oracle_tangents(const EtfField& etf) {
    std::vector<OracleVec2> t(etf.vx.size());
    for (int y = 0; y < etf.height; ++y)
        for (int x = 0; x < etf.width; ++x) {
            size_t i = etf.idx(x, y);
            OracleVec2 v{etf.vx[i], etf.vy[i]};
            if (std::hypot(v.x, v.y) < 1e-12) v = oracle_window_orientation(etf, x, y);
            t[i] = v;
        }
    return t;
}

// Full oracle. flow=false replaces streamline accumulation with repeated
// accumulation of the pixel's own cross-flow response (per-pixel DoG with
// the same total weight but no spatial coherence).
inline GrayImage oracle_fdog(const GrayImage& img, const EtfField& etf, const FdogParams& p,
                             bool flow = true) {
    const int w = img.width, h = img.height;
    const double sigma_s = p.rho * p.sigma_c;
    const int tr = static_cast<int>(std::ceil(3.0 * sigma_s));
    std::vector<OracleVec2> tan = oracle_tangents(etf);

    auto gauss = [](double t, double s) { return std::exp(-t * t / (2.0 * s * s)); };
    double nc = 0, ns = 0;
    for (int t = -tr; t <= tr; ++t) {
        nc += gauss(t, p.sigma_c);
        ns += gauss(t, sigma_s);
    }

    GrayImage resp(w, h, 0.0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            OracleVec2 tv = tan[etf.idx(x, y)];
            if (std::hypot(tv.x, tv.y) < 1e-12) continue;
            double px = tv.y, py = -tv.x;
            double f = 0;
            for (int t = -tr; t <= tr; ++t)
                f += (gauss(t, p.sigma_c) / nc - gauss(t, sigma_s) / ns) *
                     oracle_bilinear(img, x + t * px, y + t * py);
            resp.at(x, y) = f;
        }

    GrayImage out(w, h, 1.0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            OracleVec2 tv = tan[etf.idx(x, y)];
            if (std::hypot(tv.x, tv.y) < 1e-12) continue;
            double acc = resp.at(x, y);
            for (int side = 0; side < 2; ++side) {
                OracleVec2 dir = side == 0 ? tv : OracleVec2{-tv.x, -tv.y};
                double cx = x, cy = y;
                for (int s = 1; s <= p.line_length; ++s) {
                    cx += dir.x;
                    cy += dir.y;
                    int ix = static_cast<int>(std::lround(cx));
                    int iy = static_cast<int>(std::lround(cy));
                    if (ix < 0 || ix >= w || iy < 0 || iy >= h) break;
                    double wgt = gauss(s, p.sigma_m);
                    acc += wgt * (flow ? oracle_bilinear(resp, cx, cy) : resp.at(x, y));
                    OracleVec2 nxt = tan[etf.idx(ix, iy)];
                    if (std::hypot(nxt.x, nxt.y) < 1e-12) break;
                    if (nxt.x * dir.x + nxt.y * dir.y < 0) nxt = {-nxt.x, -nxt.y};
                    dir = nxt;
                }
            }
            out.at(x, y) = std::clamp(1.0 + std::tanh(3.0 * acc), 0.0, 1.0);
        }
    return out;
}

} // namespace drawpath::testsupport
