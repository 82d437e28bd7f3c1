#pragma once

#include "drawpath/image.hpp"

namespace drawpath {

/// Per-pixel unit tangents of the dominant local edge direction.
/// The zero vector marks pixels with no edge information.
struct EtfField {
    int width = 0;
    int height = 0;
    std::vector<double> vx;
    std::vector<double> vy;

    EtfField() = default;
    EtfField(int w, int h)
        : width(w), height(h),
          vx(static_cast<size_t>(w) * h, 0.0),
          vy(static_cast<size_t>(w) * h, 0.0) {}

    size_t idx(int x, int y) const { return static_cast<size_t>(y) * width + x; }
};

struct FdogParams {
    double sigma_c = 1.0;    // center Gaussian of the cross-flow DoG, pixels
    double rho = 1.6;        // surround sigma / center sigma
    double sigma_m = 3.0;    // Gaussian weight along flow, pixels
    int line_length = 8;     // flow integration half-length, pixels
    double tau = 0.3;        // downstream binarization threshold, [0,1]
    int etf_radius = 5;      // ETF smoothing kernel radius, pixels
    int etf_iterations = 3;

    void validate() const;
};

/// Builds the edge tangent flow: Sobel gradients rotated 90deg, then
/// etf_iterations passes of magnitude-weighted, direction-aligned smoothing
/// within etf_radius. Every output vector is unit length or exactly zero.
EtfField compute_etf(const GrayImage& img, const FdogParams& params);

/// Flow-based difference-of-Gaussians. A 1D DoG(sigma_c, rho*sigma_c) is
/// applied across the flow at each pixel, and responses are accumulated with
/// a Gaussian(sigma_m) weight along streamlines of half-length line_length.
/// Output values lie in [0,1]; 0 = strong line response. Binarize with tau.
GrayImage fdog(const GrayImage& img, const EtfField& etf, const FdogParams& params);

} // namespace drawpath
