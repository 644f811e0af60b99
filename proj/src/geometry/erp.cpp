#include "gazeforge/geometry/erp.hpp"

#include <algorithm>
#include <cmath>

namespace gazeforge::geometry {

SphereDir erp_to_dir(const core::ErpPoint& pt) {
    const double lon = 2.0 * M_PI * pt.u / pt.width - M_PI;
    const double lat = M_PI / 2.0 - M_PI * pt.v / pt.height;
    return SphereDir::from_angles(lon, lat);
}

core::ErpPoint dir_to_erp(const SphereDir& d, double width, double height) {
    const double lon = d.lon();
    const double lat = d.lat();
    double u = (lon + M_PI) * width / (2.0 * M_PI);
    double v = (M_PI / 2.0 - lat) * height / M_PI;
    // wrap/clamp onto the half-open pixel ranges
    u = std::fmod(u, width);
    if (u < 0.0) u += width;
    if (u >= width) u = 0.0;
    v = std::clamp(v, 0.0, std::nexttoward(height, 0.0));
    return core::ErpPoint(u, v, width, height);
}

SphereDir head_to_dir(const HeadPose& pose) {
    return SphereDir::from_angles(pose.yaw, pose.pitch);
}

double fov_diagonal_half_angle(double fov_deg, int out_w, int out_h) {
    const double tan_h = std::tan(fov_deg * M_PI / 180.0 / 2.0);
    const double tan_v = tan_h * static_cast<double>(out_h) / out_w;
    return std::atan(std::sqrt(tan_h * tan_h + tan_v * tan_v));
}

FovPatch extract_fov(const core::Raster& scene_raster, const SphereDir& g, double fov_deg,
                     int out_w, int out_h) {
    if (!(fov_deg > 0.0 && fov_deg < 180.0))
        throw std::invalid_argument("extract_fov: fov_deg out of (0, 180)");
    if (out_w <= 0 || out_h <= 0) throw std::invalid_argument("extract_fov: bad output size");
    if (scene_raster.empty()) throw std::invalid_argument("extract_fov: empty raster");

    const double W = scene_raster.width();
    const double H = scene_raster.height();

    const Vec3 forward = g.d;
    Vec3 up_ref{0.0, 0.0, 1.0};
    if (std::abs(forward.dot(up_ref)) > 0.999999) up_ref = Vec3{1.0, 0.0, 0.0};
    const Vec3 right = up_ref.cross(forward).normalized();
    const Vec3 down = right.cross(forward);

    const double tan_h = std::tan(fov_deg * M_PI / 180.0 / 2.0);
    const double tan_v = tan_h * static_cast<double>(out_h) / out_w;

    FovPatch result;
    result.patch = core::Raster(out_w, out_h);
    result.backmap.reserve(static_cast<std::size_t>(out_w) * out_h);

    for (int j = 0; j < out_h; ++j) {
        const double y = (2.0 * (j + 0.5) / out_h - 1.0) * tan_v;
        for (int i = 0; i < out_w; ++i) {
            const double x = (2.0 * (i + 0.5) / out_w - 1.0) * tan_h;
            const Vec3 dir = (forward + right * x + down * y).normalized();
            const core::ErpPoint src = dir_to_erp(SphereDir{dir}, W, H);
            const int su = std::clamp(static_cast<int>(std::floor(src.u)), 0,
                                      scene_raster.width() - 1);
            const int sv = std::clamp(static_cast<int>(std::floor(src.v)), 0,
                                      scene_raster.height() - 1);
            result.patch.at(i, j) = scene_raster.at(su, sv);
            result.backmap.push_back(src);
        }
    }
    return result;
}

}  // namespace gazeforge::geometry
