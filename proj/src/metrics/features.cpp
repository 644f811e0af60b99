#include "gazeforge/metrics/features.hpp"

#include <algorithm>
#include <cmath>

namespace gazeforge::metrics {

namespace {

std::vector<double> region_features(const core::Raster& raster, int x0, int y0, int x1, int y1) {
    if (x0 >= x1 || y0 >= y1)
        throw std::invalid_argument("extract_features: empty window after clipping");
    std::vector<double> hist(49, 0.0);
    double grad_sum = 0.0;
    long count = 0;
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            const auto& px = raster.at(x, y);
            for (int c = 0; c < 3; ++c) hist[c * 16 + (px[c] >> 4)] += 1.0;
            const int xm = std::max(x - 1, 0), xp = std::min(x + 1, raster.width() - 1);
            const int ym = std::max(y - 1, 0), yp = std::min(y + 1, raster.height() - 1);
            const double gx = (raster.gray(xp, y) - raster.gray(xm, y)) * 0.5;
            const double gy = (raster.gray(x, yp) - raster.gray(x, ym)) * 0.5;
            grad_sum += std::sqrt(gx * gx + gy * gy);
            ++count;
        }
    }
    hist[48] = count > 0 ? grad_sum / count : 0.0;
    double norm = 0.0;
    for (double v : hist) norm += v * v;
    norm = std::sqrt(norm);
    if (norm > 0.0)
        for (double& v : hist) v /= norm;
    return hist;
}

}  // namespace

FeaturePair extract_features(const core::Raster& raster, const core::ErpPoint& gaze,
                             const FccConfig& config) {
    config.validate();
    if (config.extractor != "hist48")
        throw std::invalid_argument("extract_features: unknown extractor '" + config.extractor +
                                    "'");
    const int gx = static_cast<int>(std::floor(gaze.u));
    const int gy = static_cast<int>(std::floor(gaze.v));
    const int r = config.window_radius;
    FeaturePair out;
    out.local = region_features(raster, std::max(0, gx - r), std::max(0, gy - r),
                                std::min(raster.width(), gx + r + 1),
                                std::min(raster.height(), gy + r + 1));
    out.global = region_features(raster, 0, 0, raster.width(), raster.height());
    return out;
}

core::Raster render_attended(const core::Scene& scene, const core::Raster& scene_raster,
                             const sio::SioSequence& seq) {
    core::Raster out(scene_raster.width(), scene_raster.height(), {128, 128, 128});
    for (const auto& item : seq.items) {
        const core::SceneObject* obj = scene.find_object(item.object_id);
        if (!obj) continue;
        const int x0 = std::max(0, static_cast<int>(std::floor(obj->bbox.x_min)));
        const int y0 = std::max(0, static_cast<int>(std::floor(obj->bbox.y_min)));
        const int x1 = std::min(scene_raster.width(), static_cast<int>(std::ceil(obj->bbox.x_max)));
        const int y1 =
            std::min(scene_raster.height(), static_cast<int>(std::ceil(obj->bbox.y_max)));
        for (int y = y0; y < y1; ++y)
            for (int x = x0; x < x1; ++x) out.at(x, y) = scene_raster.at(x, y);
    }
    return out;
}

}  // namespace gazeforge::metrics
