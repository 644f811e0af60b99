#pragma once

#include <utility>

#include "gazeforge/calib/events.hpp"
#include "gazeforge/core/types.hpp"

namespace gazeforge::calib {

// Angular prior around the head direction at a movement boundary.
struct HintRegion {
    geometry::SphereDir center;
    double radius = 0.0;  // radians

    bool contains(const geometry::SphereDir& dir) const { return center.angle_to(dir) <= radius; }
    // Candidates outside the cone are projected onto its boundary.
    geometry::SphereDir clamp(const geometry::SphereDir& dir) const;
};

HintRegion strong_hint(const HeadEvent& event, double hint_radius_rad);

// Objective fixation: among objects whose centroid direction lies inside the
// prior (all objects when none do), a dynamic object's motion start wins;
// otherwise the highest-saliency centroid. Ties go to the lowest id.
core::ErpPoint teacher_fixation(const core::Scene& scene, const HintRegion& region);

// Fine-tune window after a scene transition; pairs inside it count double.
std::pair<double, double> scene_transition_window(double transition_time,
                                                  double window_s = 0.3);

inline bool in_transition_window(double t, const std::pair<double, double>& window) {
    return t >= window.first && t <= window.second;
}

}  // namespace gazeforge::calib
