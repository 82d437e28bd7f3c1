#include "drawpath/image.hpp"

#include "test_support.hpp"

#include <doctest.h>
#include <png.h>

#include <cstdio>
#include <filesystem>
#include <random>
#include <stdexcept>
#include <string>

using namespace drawpath;
using namespace drawpath::testsupport;

namespace {

std::string temp_file(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

// Writes an RGB PNG directly with libpng so load_gray's color conversion is
// exercised against pixels we control byte-for-byte.
void write_rgb_png(const std::string& path, int w, int h, uint8_t r, uint8_t g, uint8_t b) {
    FILE* fp = std::fopen(path.c_str(), "wb");
    REQUIRE(fp != nullptr);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    REQUIRE(setjmp(png_jmpbuf(png)) == 0);
    png_init_io(png, fp);
    png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<uint8_t> row(static_cast<size_t>(w) * 3);
    for (int x = 0; x < w; ++x) {
        row[static_cast<size_t>(x) * 3] = r;
        row[static_cast<size_t>(x) * 3 + 1] = g;
        row[static_cast<size_t>(x) * 3 + 2] = b;
    }
    for (int y = 0; y < h; ++y) png_write_row(png, row.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

} // namespace

TEST_CASE("load_gray: 1x1 white PNG") {
    std::string path = temp_file("white1.png");
    save_gray(GrayImage(1, 1, 1.0), path);
    GrayImage img = load_gray(path);
    CHECK(img.width == 1);
    CHECK(img.height == 1);
    CHECK(img.at(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("load_gray: 1x1 black PNG") {
    std::string path = temp_file("black1.png");
    save_gray(GrayImage(1, 1, 0.0), path);
    GrayImage img = load_gray(path);
    CHECK(img.at(0, 0) == doctest::Approx(0.0));
}

TEST_CASE("load_gray: RGB red pixel converts by luminance") {
    std::string path = temp_file("red.png");
    write_rgb_png(path, 2, 2, 255, 0, 0);
    GrayImage img = load_gray(path);
    CHECK(img.width == 2);
    CHECK(img.height == 2);
    CHECK(img.at(0, 0) == doctest::Approx(0.2126).epsilon(0.005)); // +-0.001 absolute
    CHECK(std::abs(img.at(1, 1) - 0.2126) < 0.001);
}

TEST_CASE("load_gray: green and blue luminance weights") {
    std::string gpath = temp_file("green.png");
    std::string bpath = temp_file("blue.png");
    write_rgb_png(gpath, 1, 1, 0, 255, 0);
    write_rgb_png(bpath, 1, 1, 0, 0, 255);
    CHECK(std::abs(load_gray(gpath).at(0, 0) - 0.7152) < 0.001);
    CHECK(std::abs(load_gray(bpath).at(0, 0) - 0.0722) < 0.001);
}

TEST_CASE("load_gray errors") {
    CHECK_THROWS_AS(load_gray(temp_file("does_not_exist_417.png")), std::runtime_error);
    std::string bad = temp_file("notraster.txt");
    {
        std::FILE* f = std::fopen(bad.c_str(), "wb");
        std::fputs("hello", f);
        std::fclose(f);
    }
    CHECK_THROWS_AS(load_gray(bad), std::runtime_error);
}

TEST_CASE("save/load round-trips within 1/255") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    GrayImage img(9, 5);
    for (double& v : img.data) v = u(rng);

    for (const char* name : {"rt.png", "rt.pgm"}) {
        std::string path = temp_file(name);
        save_gray(img, path);
        GrayImage back = load_gray(path);
        REQUIRE(back.width == img.width);
        REQUIRE(back.height == img.height);
        for (size_t i = 0; i < img.data.size(); ++i)
            CHECK(std::abs(back.data[i] - img.data[i]) <= 1.0 / 255.0 + 1e-12);
    }
}

TEST_CASE("binarize: trivial and boundary cases") {
    GrayImage ones(3, 3, 1.0);
    GrayImage zeros(3, 3, 0.0);
    CHECK(binarize(ones, 0.5).ink_count() == 0);
    CHECK(binarize(zeros, 0.5).ink_count() == 9);

    GrayImage half(1, 1, 0.5);
    CHECK_FALSE(binarize(half, 0.5).at(0, 0)); // strict inequality at the boundary
    CHECK(binarize(GrayImage(1, 1, 0.499), 0.5).at(0, 0));
}

TEST_CASE("binarize idempotent through to_gray") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        GrayImage img(8, 8);
        for (double& v : img.data) v = u(rng);
        double t = u(rng);
        BinaryImage b = binarize(img, t);
        CHECK(binarize(to_gray(b), t) == b);
    }
}

TEST_CASE("to_gray maps ink to 0 and blank to 1") {
    BinaryImage b = bitmap({"#.", ".#"});
    GrayImage g = to_gray(b);
    CHECK(g.at(0, 0) == 0.0);
    CHECK(g.at(1, 0) == 1.0);
    CHECK(g.at(0, 1) == 1.0);
    CHECK(g.at(1, 1) == 0.0);
}
