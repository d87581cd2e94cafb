#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "drawgraph/geometry.hpp"

namespace drawgraph {

// 8-bit grayscale page image, row-major.
struct GrayRaster {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels; // size = width * height

    GrayRaster() = default;
    GrayRaster(int w, int h, std::uint8_t fill = 255)
        : width(w), height(h), pixels(std::size_t(w) * std::size_t(h), fill) {}

    std::uint8_t at(int x, int y) const { return pixels[std::size_t(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return pixels[std::size_t(y) * width + x]; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
};

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb&) const = default;
};

// 8-bit RGB raster (ground-truth renders).
struct ColorRaster {
    int width = 0;
    int height = 0;
    std::vector<Rgb> pixels;

    ColorRaster() = default;
    ColorRaster(int w, int h, Rgb fill = {255, 255, 255})
        : width(w), height(h), pixels(std::size_t(w) * std::size_t(h), fill) {}

    Rgb at(int x, int y) const { return pixels[std::size_t(y) * width + x]; }
    Rgb& at(int x, int y) { return pixels[std::size_t(y) * width + x]; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
};

// Ink mask of a page: dark strokes on a light background.
struct BinaryRaster {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> ink; // 0 or 1, row-major

    BinaryRaster() = default;
    BinaryRaster(int w, int h) : width(w), height(h), ink(std::size_t(w) * std::size_t(h), 0) {}

    bool at(int x, int y) const { return ink[std::size_t(y) * width + x] != 0; }
    void set(int x, int y, bool v) { ink[std::size_t(y) * width + x] = v ? 1 : 0; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
    // Out-of-bounds coordinates read as background.
    bool ink_at(int x, int y) const { return in_bounds(x, y) && at(x, y); }

    std::size_t ink_count() const;
    std::vector<Px> ink_pixels() const; // row-major order
    bool operator==(const BinaryRaster&) const = default;
};

// Decoders accept 8-bit grayscale/RGB PNG and binary PGM/PPM (P5/P6).
GrayRaster load_gray(const std::string& path);
ColorRaster load_color(const std::string& path);

void save_png(const GrayRaster& img, const std::string& path);
void save_png(const ColorRaster& img, const std::string& path);

// ink = pixels strictly below threshold (dark-on-light convention).
BinaryRaster binarize(const GrayRaster& img, int threshold);

// Number of 8-connected ink components.
int count_components8(const BinaryRaster& mask);

// Per-pixel component labels (0 = background, 1..n = component id in
// row-major discovery order). Returns the number of components.
int label_components8(const BinaryRaster& mask, std::vector<int>& labels_out);

} // namespace drawgraph
