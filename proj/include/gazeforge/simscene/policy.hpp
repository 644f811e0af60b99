#pragma once

#include <array>
#include <filesystem>
#include <string>

#include "gazeforge/core/types.hpp"

namespace gazeforge::simscene {

// Per-emotion object-ordering weights plus fixation statistics. Weights act
// on normalized object features (saliency, brightness, corner proximity,
// detail level); higher score means looked-at earlier.
struct EmotionPolicy {
    double w_saliency = 0.0;
    double w_brightness = 0.0;
    double w_corner = 0.0;
    double w_detail = 0.0;
    double mean_duration = 0.3;      // seconds
    double duration_dispersion = 0.1;  // seconds
    double revisit_prob = 0.2;

    void validate() const;
};

class PolicyParseError : public std::runtime_error {
public:
    explicit PolicyParseError(const std::string& what) : std::runtime_error(what) {}
};

struct PolicyTable {
    std::array<EmotionPolicy, core::kNumEmotions> policies;

    const EmotionPolicy& for_emotion(core::EmotionLabel label) const {
        return policies[static_cast<int>(label)];
    }

    // The default table ships as policy-format data so experiments can
    // redefine separability without recompiling.
    static PolicyTable builtin_default();
    static PolicyTable parse(const std::string& text, const std::string& origin = "<string>");
    static PolicyTable load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;
    std::string to_text() const;
};

}  // namespace gazeforge::simscene
