#pragma once

#include <stdexcept>
#include <vector>

#include "gazeforge/core/rng.hpp"
#include "gazeforge/geometry/camera.hpp"

namespace gazeforge::simscene {

class CoverageError : public std::runtime_error {
public:
    explicit CoverageError(const std::string& what) : std::runtime_error(what) {}
};

struct CameraObservation {
    int camera_index = 0;
    geometry::Vec2 pixel;
};

// Exact projection of the 3D head point plus isotropic pixel noise; cameras
// that see the point behind them are omitted. Throws CoverageError when
// fewer than two cameras observe the point.
std::vector<CameraObservation> simulate_multicam(const geometry::CameraRig& rig,
                                                 const geometry::Vec3& head_point,
                                                 double pixel_noise_sigma,
                                                 core::RngStream& rng);

}  // namespace gazeforge::simscene
