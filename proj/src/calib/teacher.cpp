#include "gazeforge/calib/teacher.hpp"

#include <cmath>

#include "gazeforge/geometry/erp.hpp"

namespace gazeforge::calib {

geometry::SphereDir HintRegion::clamp(const geometry::SphereDir& dir) const {
    const double angle = center.angle_to(dir);
    if (angle <= radius) return dir;
    // rotate center toward dir by exactly `radius` (slerp on the great circle)
    const geometry::Vec3 c = center.d;
    const geometry::Vec3 v = dir.d;
    const geometry::Vec3 ortho = (v - c * v.dot(c));
    const double ortho_norm = ortho.norm();
    if (ortho_norm < 1e-15) return center;  // antipodal / identical: nothing to project along
    const geometry::Vec3 u = ortho * (1.0 / ortho_norm);
    return geometry::SphereDir{(c * std::cos(radius) + u * std::sin(radius)).normalized()};
}

HintRegion strong_hint(const HeadEvent& event, double hint_radius_rad) {
    if (!(hint_radius_rad > 0.0)) throw std::invalid_argument("strong_hint: radius must be > 0");
    return HintRegion{geometry::head_to_dir(event.pose), hint_radius_rad};
}

core::ErpPoint teacher_fixation(const core::Scene& scene, const HintRegion& region) {
    scene.validate();
    std::vector<const core::SceneObject*> candidates;
    for (const auto& obj : scene.objects) {
        const core::ErpPoint centroid(obj.bbox.centroid_x(), obj.bbox.centroid_y(), scene.width,
                                      scene.height);
        if (region.contains(geometry::erp_to_dir(centroid))) candidates.push_back(&obj);
    }
    if (candidates.empty())
        for (const auto& obj : scene.objects) candidates.push_back(&obj);

    const core::SceneObject* dynamic_pick = nullptr;
    for (const auto* obj : candidates)
        if (obj->dynamic && (!dynamic_pick || obj->id < dynamic_pick->id)) dynamic_pick = obj;
    if (dynamic_pick) return *dynamic_pick->motion_start;

    const core::SceneObject* best = candidates.front();
    for (const auto* obj : candidates)
        if (obj->saliency > best->saliency ||
            (obj->saliency == best->saliency && obj->id < best->id))
            best = obj;
    return core::ErpPoint(best->bbox.centroid_x(), best->bbox.centroid_y(), scene.width,
                          scene.height);
}

std::pair<double, double> scene_transition_window(double transition_time, double window_s) {
    return {transition_time, transition_time + window_s};
}

}  // namespace gazeforge::calib
