#include "gazeforge/core/raster.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace gazeforge::core {

Raster::Raster(int width, int height, std::array<std::uint8_t, 3> fill)
    : width_(width), height_(height) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("Raster: non-positive size");
    pixels_.assign(static_cast<std::size_t>(width) * height, fill);
}

void Raster::fill_rect(int x0, int y0, int x1, int y1, std::array<std::uint8_t, 3> color) {
    x0 = std::max(0, x0);
    y0 = std::max(0, y0);
    x1 = std::min(width_, x1);
    y1 = std::min(height_, y1);
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) at(x, y) = color;
}

void Raster::save_ppm(const std::filesystem::path& path) const {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_ppm: cannot open " + path.string());
    out << "P3\n" << width_ << " " << height_ << "\n255\n";
    for (int y = 0; y < height_; ++y) {
        for (int x = 0; x < width_; ++x) {
            const auto& p = at(x, y);
            out << int(p[0]) << ' ' << int(p[1]) << ' ' << int(p[2]);
            out << (x + 1 == width_ ? '\n' : ' ');
        }
    }
}

Raster Raster::load_ppm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_ppm: cannot open " + path.string());
    std::string magic;
    in >> magic;
    if (magic != "P3") throw std::runtime_error("load_ppm: expected P3, got " + magic);
    int w = 0, h = 0, maxval = 0;
    in >> w >> h >> maxval;
    if (w <= 0 || h <= 0 || maxval != 255) throw std::runtime_error("load_ppm: bad header");
    Raster r(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            int c0, c1, c2;
            in >> c0 >> c1 >> c2;
            if (!in) throw std::runtime_error("load_ppm: truncated pixel data");
            r.at(x, y) = {static_cast<std::uint8_t>(c0), static_cast<std::uint8_t>(c1),
                          static_cast<std::uint8_t>(c2)};
        }
    }
    return r;
}

}  // namespace gazeforge::core
