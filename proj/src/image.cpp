#include "drawpath/image.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace drawpath {

namespace {

std::string lower_ext(const std::string& path) {
    auto dot = path.find_last_of('.');
    if (dot == std::string::npos) return "";
    std::string ext = path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext;
}

struct FileCloser {
    void operator()(FILE* f) const {
        if (f) std::fclose(f);
    }
};

GrayImage load_png(const std::string& path) {
    std::unique_ptr<FILE, FileCloser> fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw std::runtime_error("cannot open file: " + path);

    png_byte header[8];
    if (std::fread(header, 1, 8, fp.get()) != 8 || png_sig_cmp(header, 0, 8) != 0)
        throw std::runtime_error("not a PNG file: " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw std::runtime_error("png_create_info_struct failed");
    }
    std::vector<png_bytep> row_ptrs;
    std::vector<png_byte> pixels;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("PNG decode error: " + path);
    }
    png_init_io(png, fp.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    png_uint_32 w = png_get_image_width(png, info);
    png_uint_32 h = png_get_image_height(png, info);
    int color_type = png_get_color_type(png, info);
    int bit_depth = png_get_bit_depth(png, info);

    // Normalize every variant to 8-bit RGB.
    if (bit_depth == 16) png_set_strip_16(png);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    if (w == 0 || h == 0) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("zero-dimension image: " + path);
    }

    size_t rowbytes = png_get_rowbytes(png, info);
    pixels.resize(rowbytes * h);
    row_ptrs.resize(h);
    for (png_uint_32 y = 0; y < h; ++y) row_ptrs[y] = pixels.data() + y * rowbytes;
    png_read_image(png, row_ptrs.data());
    png_destroy_read_struct(&png, &info, nullptr);

    GrayImage img(static_cast<int>(w), static_cast<int>(h));
    for (png_uint_32 y = 0; y < h; ++y) {
        const png_byte* row = pixels.data() + y * rowbytes;
        for (png_uint_32 x = 0; x < w; ++x) {
            double r = row[3 * x + 0] / 255.0;
            double g = row[3 * x + 1] / 255.0;
            double b = row[3 * x + 2] / 255.0;
            img.at(static_cast<int>(x), static_cast<int>(y)) =
                0.2126 * r + 0.7152 * g + 0.0722 * b;
        }
    }
    return img;
}

GrayImage load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::string magic;
    in >> magic;
    if (magic != "P2" && magic != "P5")
        throw std::runtime_error("unsupported PGM variant: " + magic);

    auto next_int = [&in]() {
        // Skips whitespace and '#' comment lines.
        for (;;) {
            int c = in.peek();
            if (c == '#') {
                std::string line;
                std::getline(in, line);
            } else if (std::isspace(c)) {
                in.get();
            } else {
                break;
            }
        }
        long v = -1;
        in >> v;
        if (!in) throw std::runtime_error("malformed PGM header");
        return v;
    };

    long w = next_int();
    long h = next_int();
    long maxval = next_int();
    if (w <= 0 || h <= 0) throw std::runtime_error("zero-dimension image");
    if (maxval <= 0 || maxval > 65535) throw std::runtime_error("bad PGM maxval");

    GrayImage img(static_cast<int>(w), static_cast<int>(h));
    if (magic == "P2") {
        for (auto& v : img.data) {
            long p;
            in >> p;
            if (!in) throw std::runtime_error("truncated PGM data");
            v = static_cast<double>(p) / maxval;
        }
    } else {
        in.get(); // single whitespace after maxval
        int bytes = maxval > 255 ? 2 : 1;
        std::vector<unsigned char> raw(static_cast<size_t>(w) * h * bytes);
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
        if (!in) throw std::runtime_error("truncated PGM data");
        for (size_t i = 0; i < img.data.size(); ++i) {
            long p = bytes == 1 ? raw[i] : (raw[2 * i] << 8 | raw[2 * i + 1]);
            img.data[i] = static_cast<double>(p) / maxval;
        }
    }
    return img;
}

void save_png(const GrayImage& img, const std::string& path) {
    std::unique_ptr<FILE, FileCloser> fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw std::runtime_error("cannot write file: " + path);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw std::runtime_error("png_create_info_struct failed");
    }
    std::vector<png_byte> row(static_cast<size_t>(img.width));
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("PNG encode error: " + path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width),
                 static_cast<png_uint_32>(img.height), 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double v = std::clamp(img.at(x, y), 0.0, 1.0);
            row[static_cast<size_t>(x)] = static_cast<png_byte>(std::lround(v * 255.0));
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

void save_pgm(const GrayImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    for (double v : img.data) {
        v = std::clamp(v, 0.0, 1.0);
        out.put(static_cast<char>(std::lround(v * 255.0)));
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace

size_t BinaryImage::ink_count() const {
    return static_cast<size_t>(std::count(ink.begin(), ink.end(), 1));
}

GrayImage load_gray(const std::string& path) {
    std::string ext = lower_ext(path);
    if (ext == "png") return load_png(path);
    if (ext == "pgm") return load_pgm(path);
    throw std::runtime_error("unsupported image format: ." + ext + " (expected .png or .pgm)");
}

void save_gray(const GrayImage& img, const std::string& path) {
    if (img.width <= 0 || img.height <= 0)
        throw std::runtime_error("cannot save zero-dimension image");
    std::string ext = lower_ext(path);
    if (ext == "png")
        save_png(img, path);
    else if (ext == "pgm")
        save_pgm(img, path);
    else
        throw std::runtime_error("unsupported image format: ." + ext + " (expected .png or .pgm)");
}

BinaryImage binarize(const GrayImage& img, double threshold) {
    BinaryImage out(img.width, img.height);
    for (size_t i = 0; i < img.data.size(); ++i)
        out.ink[i] = img.data[i] < threshold ? 1 : 0;
    return out;
}

GrayImage to_gray(const BinaryImage& img) {
    GrayImage out(img.width, img.height);
    for (size_t i = 0; i < img.ink.size(); ++i) out.data[i] = img.ink[i] ? 0.0 : 1.0;
    return out;
}

} // namespace drawpath
