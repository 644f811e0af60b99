#pragma once

#include <stdexcept>

#include "gazeforge/core/raster.hpp"
#include "gazeforge/core/types.hpp"

namespace gazeforge::simscene {

class GenerationError : public std::runtime_error {
public:
    explicit GenerationError(const std::string& what) : std::runtime_error(what) {}
};

struct SceneGenOptions {
    int n_objects = 8;
    core::Lighting lighting = core::Lighting::Normal;
    double dynamic_fraction = 0.25;
    double width = 1920.0;
    double height = 960.0;
    // reject a candidate box whose IoU with an existing one exceeds this
    double max_overlap = 0.25;
};

// Deterministic in seed. Throws GenerationError when boxes cannot be packed
// within the retry budget.
core::Scene gen_scene(std::uint64_t seed, const SceneGenOptions& options);

// Pure function of the scene record: procedural background from
// background_seed, objects as brightness-scaled fills with a
// saliency-scaled border, painted in id order (later object wins).
core::Raster render_scene(const core::Scene& scene);

// Object features the policies score on, each normalized to [0,1].
struct ObjectFeatures {
    double saliency = 0.0;
    double brightness = 0.0;
    double corner = 0.0;  // proximity of centroid to the nearest image corner
    double detail = 0.0;  // smaller boxes read as more detailed
};

ObjectFeatures object_features(const core::Scene& scene, const core::SceneObject& obj);

}  // namespace gazeforge::simscene
