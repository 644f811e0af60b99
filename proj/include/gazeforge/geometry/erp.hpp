#pragma once

#include "gazeforge/core/raster.hpp"
#include "gazeforge/core/types.hpp"
#include "gazeforge/geometry/camera.hpp"

namespace gazeforge::geometry {

// lambda = 2*pi*u/W - pi, lat = pi/2 - pi*v/H
SphereDir erp_to_dir(const core::ErpPoint& pt);
core::ErpPoint dir_to_erp(const SphereDir& d, double width, double height);

// Forward vector of yaw∘pitch; roll does not move the forward axis.
SphereDir head_to_dir(const HeadPose& pose);

struct FovPatch {
    core::Raster patch;
    // per output pixel, row-major: the ERP source point it samples
    std::vector<core::ErpPoint> backmap;

    const core::ErpPoint& backmap_at(int x, int y) const {
        return backmap[static_cast<std::size_t>(y) * patch.width() + x];
    }
};

// Gnomonic (rectilinear) patch centered at g. fov_deg is the full horizontal
// angle; the vertical extent follows the output aspect ratio. Nearest-neighbor
// sampling from the ERP raster.
FovPatch extract_fov(const core::Raster& scene_raster, const SphereDir& g, double fov_deg,
                     int out_w, int out_h);

// Half-angle of the patch diagonal; no back-mapped direction exceeds it.
double fov_diagonal_half_angle(double fov_deg, int out_w, int out_h);

}  // namespace gazeforge::geometry
