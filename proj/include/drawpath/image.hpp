#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace drawpath {

/// Grayscale raster, row-major, intensities normalized to [0,1].
/// Dark pixels are ink (drawings are dark-on-light).
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    GrayImage() = default;
    GrayImage(int w, int h, double fill = 1.0)
        : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {}

    double at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
    double& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width && y >= 0 && y < height;
    }
};

/// Binary mask, row-major; true = ink.
struct BinaryImage {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> ink;

    BinaryImage() = default;
    BinaryImage(int w, int h, bool fill = false)
        : width(w), height(h), ink(static_cast<size_t>(w) * h, fill ? 1 : 0) {}

    bool at(int x, int y) const { return ink[static_cast<size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { ink[static_cast<size_t>(y) * width + x] = v ? 1 : 0; }
    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width && y >= 0 && y < height;
    }
    size_t ink_count() const;
    bool operator==(const BinaryImage&) const = default;
};

/// Loads a PNG or PGM image as normalized grayscale.
/// Color inputs are converted by Rec.709 luminance.
/// Throws std::runtime_error on unreadable files, unsupported formats,
/// or zero-dimension images.
GrayImage load_gray(const std::string& path);

/// Writes a GrayImage as 8-bit PNG or PGM depending on the file extension.
void save_gray(const GrayImage& img, const std::string& path);

/// ink(p) = img(p) < threshold (strict inequality at the boundary).
BinaryImage binarize(const GrayImage& img, double threshold);

/// Ink -> 0.0, blank -> 1.0.
GrayImage to_gray(const BinaryImage& img);

} // namespace drawpath
