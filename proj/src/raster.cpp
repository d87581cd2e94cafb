#include "drawgraph/raster.hpp"

#include <png.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>

#include "drawgraph/errors.hpp"

namespace drawgraph {

std::size_t BinaryRaster::ink_count() const {
    std::size_t n = 0;
    for (std::uint8_t v : ink) n += v;
    return n;
}

std::vector<Px> BinaryRaster::ink_pixels() const {
    std::vector<Px> out;
    out.reserve(ink_count());
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            if (at(x, y)) out.push_back({x, y});
    return out;
}

BinaryRaster binarize(const GrayRaster& img, int threshold) {
    BinaryRaster mask(img.width, img.height);
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        mask.ink[i] = img.pixels[i] < threshold ? 1 : 0;
    return mask;
}

int label_components8(const BinaryRaster& mask, std::vector<int>& labels) {
    labels.assign(mask.ink.size(), 0);
    int next = 0;
    std::vector<Px> stack;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y) || labels[std::size_t(y) * mask.width + x] != 0) continue;
            ++next;
            stack.push_back({x, y});
            labels[std::size_t(y) * mask.width + x] = next;
            while (!stack.empty()) {
                Px p = stack.back();
                stack.pop_back();
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        int nx = p.x + dx, ny = p.y + dy;
                        if (!mask.ink_at(nx, ny)) continue;
                        std::size_t idx = std::size_t(ny) * mask.width + nx;
                        if (labels[idx] == 0) {
                            labels[idx] = next;
                            stack.push_back({nx, ny});
                        }
                    }
                }
            }
        }
    }
    return next;
}

int count_components8(const BinaryRaster& mask) {
    std::vector<int> labels;
    return label_components8(mask, labels);
}

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// ITU-R 601 luma, rounded to nearest integer.
std::uint8_t luma(Rgb c) {
    double y = 0.299 * c.r + 0.587 * c.g + 0.114 * c.b;
    return std::uint8_t(std::lround(y));
}

bool has_png_signature(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    unsigned char sig[8] = {};
    in.read(reinterpret_cast<char*>(sig), 8);
    if (!in) return false;
    return png_sig_cmp(sig, 0, 8) == 0;
}

ColorRaster load_png_rgb(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw IoError("unreadable file: " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("unreadable file: " + path);
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("unreadable file: " + path);
    }
    std::vector<png_bytep> rows;
    std::vector<std::uint8_t> data;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("unreadable file: " + path);
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    png_uint_32 w = png_get_image_width(png, info);
    png_uint_32 h = png_get_image_height(png, info);
    int color_type = png_get_color_type(png, info);
    int bit_depth = png_get_bit_depth(png, info);

    if (w == 0 || h == 0) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("zero-dimension image: " + path);
    }

    if (bit_depth == 16) png_set_strip_16(png);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(png);
    png_set_strip_alpha(png);
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    data.resize(std::size_t(w) * h * 3);
    rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y) rows[y] = data.data() + std::size_t(y) * w * 3;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    ColorRaster img{int(w), int(h)};
    img.pixels.resize(std::size_t(w) * h);
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        img.pixels[i] = {data[i * 3], data[i * 3 + 1], data[i * 3 + 2]};
    return img;
}

void write_png(const std::string& path, int width, int height, int color_type,
               const std::uint8_t* data, std::size_t stride) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw IoError("cannot open for writing: " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("png write failure: " + path);
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("png write failure: " + path);
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("png write failure: " + path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, png_uint_32(width), png_uint_32(height), 8, color_type,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < height; ++y)
        png_write_row(png, const_cast<png_bytep>(data + std::size_t(y) * stride));
    png_write_end(png, info);
    png_destroy_write_struct(&png, &info);
}

// Reads one PNM header token, skipping whitespace and '#' comments.
std::string pnm_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(char(c));
    }
    return tok;
}

// P5 -> 1 channel, P6 -> 3 channels.
std::vector<std::uint8_t> load_pnm(const std::string& path, int& width, int& height,
                                   int& channels) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("unreadable file: " + path);
    std::string magic = pnm_token(in);
    if (magic == "P5")
        channels = 1;
    else if (magic == "P6")
        channels = 3;
    else
        throw IoError("unsupported format: " + path);

    auto parse_int = [&](const std::string& tok) {
        if (tok.empty()) throw IoError("unreadable file: " + path);
        for (char ch : tok)
            if (!std::isdigit(static_cast<unsigned char>(ch)))
                throw IoError("unreadable file: " + path);
        return std::stoi(tok);
    };
    width = parse_int(pnm_token(in));
    height = parse_int(pnm_token(in));
    int maxval = parse_int(pnm_token(in));
    if (width <= 0 || height <= 0) throw IoError("zero-dimension image: " + path);
    if (maxval <= 0 || maxval > 255) throw IoError("unsupported format: " + path);

    std::vector<std::uint8_t> data(std::size_t(width) * height * channels);
    in.read(reinterpret_cast<char*>(data.data()), std::streamsize(data.size()));
    if (std::size_t(in.gcount()) != data.size()) throw IoError("unreadable file: " + path);
    return data;
}

} // namespace

GrayRaster load_gray(const std::string& path) {
    if (!std::filesystem::exists(path)) throw IoError("unreadable file: " + path);
    if (has_png_signature(path)) {
        ColorRaster rgb = load_png_rgb(path);
        GrayRaster img(rgb.width, rgb.height);
        for (std::size_t i = 0; i < rgb.pixels.size(); ++i) img.pixels[i] = luma(rgb.pixels[i]);
        return img;
    }
    int w = 0, h = 0, ch = 0;
    std::vector<std::uint8_t> data = load_pnm(path, w, h, ch);
    GrayRaster img(w, h);
    if (ch == 1) {
        img.pixels = std::move(data);
    } else {
        for (std::size_t i = 0; i < img.pixels.size(); ++i)
            img.pixels[i] = luma({data[i * 3], data[i * 3 + 1], data[i * 3 + 2]});
    }
    return img;
}

ColorRaster load_color(const std::string& path) {
    if (!std::filesystem::exists(path)) throw IoError("unreadable file: " + path);
    if (has_png_signature(path)) return load_png_rgb(path);
    int w = 0, h = 0, ch = 0;
    std::vector<std::uint8_t> data = load_pnm(path, w, h, ch);
    ColorRaster img(w, h);
    if (ch == 3) {
        for (std::size_t i = 0; i < img.pixels.size(); ++i)
            img.pixels[i] = {data[i * 3], data[i * 3 + 1], data[i * 3 + 2]};
    } else {
        for (std::size_t i = 0; i < img.pixels.size(); ++i)
            img.pixels[i] = {data[i], data[i], data[i]};
    }
    return img;
}

void save_png(const GrayRaster& img, const std::string& path) {
    write_png(path, img.width, img.height, PNG_COLOR_TYPE_GRAY, img.pixels.data(),
              std::size_t(img.width));
}

void save_png(const ColorRaster& img, const std::string& path) {
    std::vector<std::uint8_t> data(std::size_t(img.width) * img.height * 3);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        data[i * 3] = img.pixels[i].r;
        data[i * 3 + 1] = img.pixels[i].g;
        data[i * 3 + 2] = img.pixels[i].b;
    }
    write_png(path, img.width, img.height, PNG_COLOR_TYPE_RGB, data.data(),
              std::size_t(img.width) * 3);
}

} // namespace drawgraph
