#include "gazeforge/simscene/multicam.hpp"

namespace gazeforge::simscene {

std::vector<CameraObservation> simulate_multicam(const geometry::CameraRig& rig,
                                                 const geometry::Vec3& head_point,
                                                 double pixel_noise_sigma,
                                                 core::RngStream& rng) {
    rig.validate();
    if (pixel_noise_sigma < 0.0)
        throw std::invalid_argument("simulate_multicam: negative pixel noise");
    std::vector<CameraObservation> observations;
    for (std::size_t i = 0; i < rig.cameras.size(); ++i) {
        const auto proj = geometry::project_point(rig.cameras[i], head_point);
        if (!proj) continue;
        geometry::Vec2 px = *proj;
        if (pixel_noise_sigma > 0.0) {
            px.x += rng.normal(0.0, pixel_noise_sigma);
            px.y += rng.normal(0.0, pixel_noise_sigma);
        }
        observations.push_back({static_cast<int>(i), px});
    }
    if (observations.size() < 2)
        throw CoverageError("simulate_multicam: fewer than 2 cameras observe the point (" +
                            std::to_string(observations.size()) + ")");
    return observations;
}

}  // namespace gazeforge::simscene
