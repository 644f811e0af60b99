#pragma once

#include <array>
#include <string>
#include <vector>

#include "gazeforge/core/rng.hpp"
#include "gazeforge/core/types.hpp"
#include "gazeforge/simscene/policy.hpp"
#include "gazeforge/simscene/scene_gen.hpp"

namespace gazeforge::simscene {

// Per-subject gaze observation model: affine bias on (lon, lat) plus
// isotropic angular noise. Models the appearance-to-gaze mismatch the
// calibration stage has to undo.
struct SubjectProfile {
    std::string id = "subject";
    std::array<std::array<double, 2>, 2> bias{{{1.0, 0.0}, {0.0, 1.0}}};
    std::array<double, 2> offset{0.0, 0.0};  // radians
    double noise_sigma = 0.0;                // radians
    std::vector<std::string> tags;           // reporting only

    void validate() const;
    static SubjectProfile identity(const std::string& id);
    // seeded random bias with offset magnitude ~ bias_deg and small shear
    static SubjectProfile seeded(const std::string& id, std::uint64_t seed, double bias_deg,
                                 double noise_deg);
    SubjectProfile inverse() const;
    std::array<double, 2> apply(double lon, double lat) const;
};

struct ScanpathGenOptions {
    int n_fix = 10;
    double interval = 0.1;      // projection interval; timestamps snap to it
    double temperature = 0.12;  // softmax temperature; 0 selects argmax
    double jitter = 0.15;       // fixation jitter as a fraction of box half-extent
    double gap_prob = 0.3;      // chance of a 1-2 tick scanning gap between fixations
};

// Emotion-conditioned scanpath over scene objects. Ground-truth target ids
// are recorded on each fixation; points always land inside the target box.
core::Scanpath gen_scanpath(const core::Scene& scene, core::EmotionLabel emotion,
                            const EmotionPolicy& policy, const SubjectProfile& profile,
                            const ScanpathGenOptions& options, core::RngStream& rng);

// Pushes every fixation through the profile's affine bias plus noise.
// Ground truth stays on the input; the returned path is the observation.
core::Scanpath apply_bias(const core::Scanpath& scanpath, const SubjectProfile& profile,
                          core::RngStream& rng);

// Softmax selection probabilities over unvisited objects for one step.
std::vector<double> policy_scores(const core::Scene& scene, const EmotionPolicy& policy);

}  // namespace gazeforge::simscene
