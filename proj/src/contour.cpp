#include "drawpath/contour.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace drawpath {

namespace {

constexpr double kEps = 1e-12;

// Steepness of the response-to-[0,1] mapping. Fixed so that a clean 1-px
// line at default parameters lands well below tau while single-pixel
// responses stay above it.
constexpr double kResponseSteepness = 3.0;

double bilinear(const GrayImage& img, double x, double y) {
    // Replicate padding at the borders.
    x = std::clamp(x, 0.0, static_cast<double>(img.width - 1));
    y = std::clamp(y, 0.0, static_cast<double>(img.height - 1));
    int x0 = static_cast<int>(std::floor(x));
    int y0 = static_cast<int>(std::floor(y));
    int x1 = std::min(x0 + 1, img.width - 1);
    int y1 = std::min(y0 + 1, img.height - 1);
    double fx = x - x0;
    double fy = y - y0;
    double top = img.at(x0, y0) * (1.0 - fx) + img.at(x1, y0) * fx;
    double bot = img.at(x0, y1) * (1.0 - fx) + img.at(x1, y1) * fx;
    return top * (1.0 - fy) + bot * fy;
}

struct Vec2 {
    double x = 0.0, y = 0.0;
    double norm() const { return std::hypot(x, y); }
};

// Dominant orientation of the ETF vectors in the 3x3 window around (px,py),
// via the structure tensor (sign-invariant). Used where the ETF vector
// itself vanishes, e.g. at the symmetric center of a 1-px line.
Vec2 window_orientation(const EtfField& etf, int px, int py) {
    double a = 0.0, b = 0.0, c = 0.0;
    for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
            int x = px + dx, y = py + dy;
            if (x < 0 || x >= etf.width || y < 0 || y >= etf.height) continue;
            double tx = etf.vx[etf.idx(x, y)];
            double ty = etf.vy[etf.idx(x, y)];
            a += tx * tx;
            b += tx * ty;
            c += ty * ty;
        }
    }
    if (a + c < kEps) return {};
    double half_diff = 0.5 * (a - c);
    double lam = 0.5 * (a + c) + std::sqrt(half_diff * half_diff + b * b);
    Vec2 v1{b, lam - a};
    Vec2 v2{lam - c, b};
    Vec2 v = v1.norm() >= v2.norm() ? v1 : v2;
    double n = v.norm();
    if (n < kEps) return {};
    return {v.x / n, v.y / n};
}

// ETF where nonzero, window orientation otherwise.
std::vector<Vec2> effective_tangents(const EtfField& etf) {
    std::vector<Vec2> t(static_cast<size_t>(etf.width) * etf.height);
    for (int y = 0; y < etf.height; ++y) {
        for (int x = 0; x < etf.width; ++x) {
            size_t i = etf.idx(x, y);
            Vec2 v{etf.vx[i], etf.vy[i]};
            if (v.norm() < kEps) v = window_orientation(etf, x, y);
            t[i] = v;
        }
    }
    return t;
}

} // namespace

void FdogParams::validate() const {
    if (sigma_c <= 0.0 || sigma_m <= 0.0)
        throw std::invalid_argument("FdogParams: sigmas must be positive");
    if (rho <= 1.0) throw std::invalid_argument("FdogParams: rho must be > 1");
    if (etf_iterations < 1)
        throw std::invalid_argument("FdogParams: etf_iterations must be >= 1");
    if (tau < 0.0 || tau > 1.0) throw std::invalid_argument("FdogParams: tau must be in [0,1]");
    if (line_length < 0 || etf_radius < 0)
        throw std::invalid_argument("FdogParams: lengths must be non-negative");
}

EtfField compute_etf(const GrayImage& img, const FdogParams& params) {
    params.validate();
    if (img.width <= 0 || img.height <= 0)
        throw std::invalid_argument("compute_etf: empty image");

    const int w = img.width, h = img.height;
    EtfField etf(w, h);
    std::vector<double> mag(static_cast<size_t>(w) * h, 0.0);

    // Sobel gradient; tangent = gradient rotated 90 degrees.
    auto clamped = [&](int x, int y) {
        return img.at(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1));
    };
    double max_mag = 0.0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double gx = (clamped(x + 1, y - 1) + 2.0 * clamped(x + 1, y) + clamped(x + 1, y + 1)) -
                        (clamped(x - 1, y - 1) + 2.0 * clamped(x - 1, y) + clamped(x - 1, y + 1));
            double gy = (clamped(x - 1, y + 1) + 2.0 * clamped(x, y + 1) + clamped(x + 1, y + 1)) -
                        (clamped(x - 1, y - 1) + 2.0 * clamped(x, y - 1) + clamped(x + 1, y - 1));
            double m = std::hypot(gx, gy);
            size_t i = etf.idx(x, y);
            mag[i] = m;
            max_mag = std::max(max_mag, m);
            if (m > kEps) {
                etf.vx[i] = -gy / m;
                etf.vy[i] = gx / m;
            }
        }
    }
    if (max_mag > kEps)
        for (auto& m : mag) m /= max_mag;

    const int r = params.etf_radius;
    std::vector<double> nvx(etf.vx.size()), nvy(etf.vy.size());
    for (int it = 0; it < params.etf_iterations; ++it) {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                size_t i = etf.idx(x, y);
                double cx = etf.vx[i], cy = etf.vy[i];
                double sx = 0.0, sy = 0.0;
                for (int dy = -r; dy <= r; ++dy) {
                    int yy = y + dy;
                    if (yy < 0 || yy >= h) continue;
                    for (int dx = -r; dx <= r; ++dx) {
                        int xx = x + dx;
                        if (xx < 0 || xx >= w) continue;
                        if (dx * dx + dy * dy > r * r) continue;
                        size_t j = etf.idx(xx, yy);
                        double dot = cx * etf.vx[j] + cy * etf.vy[j];
                        double w_m = 0.5 * (mag[j] - mag[i] + 1.0);
                        double w_d = std::fabs(dot);
                        double phi = dot >= 0.0 ? 1.0 : -1.0;
                        sx += phi * etf.vx[j] * w_m * w_d;
                        sy += phi * etf.vy[j] * w_m * w_d;
                    }
                }
                double n = std::hypot(sx, sy);
                if (n > kEps) {
                    nvx[i] = sx / n;
                    nvy[i] = sy / n;
                } else {
                    nvx[i] = 0.0;
                    nvy[i] = 0.0;
                }
            }
        }
        etf.vx.swap(nvx);
        etf.vy.swap(nvy);
    }
    return etf;
}

GrayImage fdog(const GrayImage& img, const EtfField& etf, const FdogParams& params) {
    params.validate();
    if (img.width != etf.width || img.height != etf.height)
        throw std::invalid_argument("fdog: image/ETF dimension mismatch");

    const int w = img.width, h = img.height;
    const double sigma_s = params.rho * params.sigma_c;
    const int t_radius = static_cast<int>(std::ceil(3.0 * sigma_s));

    // Cross-flow DoG weights, each lobe normalized to unit sum so a uniform
    // image yields exactly zero response.
    std::vector<double> wc(2 * t_radius + 1), ws(2 * t_radius + 1);
    double sum_c = 0.0, sum_s = 0.0;
    for (int t = -t_radius; t <= t_radius; ++t) {
        double gc = std::exp(-0.5 * t * t / (params.sigma_c * params.sigma_c));
        double gs = std::exp(-0.5 * t * t / (sigma_s * sigma_s));
        wc[t + t_radius] = gc;
        ws[t + t_radius] = gs;
        sum_c += gc;
        sum_s += gs;
    }
    for (auto& v : wc) v /= sum_c;
    for (auto& v : ws) v /= sum_s;

    std::vector<Vec2> tangent = effective_tangents(etf);

    // Pass 1: 1D DoG across the flow.
    GrayImage resp(w, h, 0.0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const Vec2& tv = tangent[etf.idx(x, y)];
            if (tv.norm() < kEps) continue;
            double dx = tv.y, dy = -tv.x; // perpendicular to the flow
            double f = 0.0;
            for (int t = -t_radius; t <= t_radius; ++t) {
                double v = bilinear(img, x + t * dx, y + t * dy);
                f += (wc[t + t_radius] - ws[t + t_radius]) * v;
            }
            resp.at(x, y) = f;
        }
    }

    // Pass 2: accumulate responses along streamlines with Gaussian(sigma_m)
    // weights (unnormalized, so coherent runs amplify each other).
    auto trace_dir = [&](double px, double py, Vec2 dir, int x0, int y0, double& acc) {
        for (int s = 1; s <= params.line_length; ++s) {
            px += dir.x;
            py += dir.y;
            int ix = static_cast<int>(std::lround(px));
            int iy = static_cast<int>(std::lround(py));
            if (ix < 0 || ix >= w || iy < 0 || iy >= h) break;
            double wgt = std::exp(-0.5 * s * s / (params.sigma_m * params.sigma_m));
            acc += wgt * bilinear(resp, px, py);
            Vec2 next = tangent[etf.idx(ix, iy)];
            if (next.norm() < kEps) break;
            if (next.x * dir.x + next.y * dir.y < 0.0) {
                next.x = -next.x;
                next.y = -next.y;
            }
            dir = next;
        }
        (void)x0;
        (void)y0;
    };

    GrayImage out(w, h, 1.0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const Vec2& tv = tangent[etf.idx(x, y)];
            if (tv.norm() < kEps) continue; // no flow: neutral response
            double acc = resp.at(x, y);
            trace_dir(x, y, tv, x, y, acc);
            trace_dir(x, y, {-tv.x, -tv.y}, x, y, acc);
            double mapped = 1.0 + std::tanh(kResponseSteepness * acc);
            out.at(x, y) = std::clamp(mapped, 0.0, 1.0);
        }
    }
    return out;
}

} // namespace drawpath
