#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include "drawgraph/raster.hpp"

namespace testutil {

// Per-process scratch directory under the working directory.
inline std::filesystem::path temp_dir() {
    static std::filesystem::path dir = [] {
        auto p = std::filesystem::current_path() / "test_tmp";
        std::filesystem::create_directories(p);
        return p;
    }();
    return dir;
}

inline std::string write_file(const std::string& name, const std::string& bytes) {
    auto path = temp_dir() / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << bytes;
    return path.string();
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Build a mask from ascii art: '#' = ink, anything else = background.
inline drawgraph::BinaryRaster mask_from_art(const std::vector<std::string>& rows) {
    int h = int(rows.size());
    int w = 0;
    for (const auto& r : rows) w = std::max(w, int(r.size()));
    drawgraph::BinaryRaster m(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < int(rows[std::size_t(y)].size()); ++x)
            if (rows[std::size_t(y)][std::size_t(x)] == '#') m.set(x, y, true);
    return m;
}

} // namespace testutil
