#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace gazeforge::core {

// RGB8 image, row-major. Text PPM (P3) in/out so golden files stay diffable.
class Raster {
public:
    Raster() = default;
    Raster(int width, int height, std::array<std::uint8_t, 3> fill = {0, 0, 0});

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return width_ == 0 || height_ == 0; }

    const std::array<std::uint8_t, 3>& at(int x, int y) const {
        return pixels_[static_cast<std::size_t>(y) * width_ + x];
    }
    std::array<std::uint8_t, 3>& at(int x, int y) {
        return pixels_[static_cast<std::size_t>(y) * width_ + x];
    }

    // Rec.601 luminance in [0,1]
    double gray(int x, int y) const {
        const auto& p = at(x, y);
        return (0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2]) / 255.0;
    }

    void fill_rect(int x0, int y0, int x1, int y1, std::array<std::uint8_t, 3> color);

    void save_ppm(const std::filesystem::path& path) const;
    static Raster load_ppm(const std::filesystem::path& path);

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::array<std::uint8_t, 3>> pixels_;
};

}  // namespace gazeforge::core
