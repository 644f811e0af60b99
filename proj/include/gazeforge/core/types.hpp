#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gazeforge::core {

// Thrown when a record violates its schema; message names the offending field.
class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

enum class EmotionLabel : int {
    Angry = 0,
    Disgust = 1,
    Fear = 2,
    Happy = 3,
    Sad = 4,
    Surprise = 5,
};

inline constexpr int kNumEmotions = 6;

const char* to_string(EmotionLabel label);
EmotionLabel emotion_from_ordinal(int ordinal);
std::optional<EmotionLabel> emotion_from_string(const std::string& name);
std::vector<EmotionLabel> all_emotions();

// Continuous pixel coordinate on an equirectangular canvas. W = 2H always.
struct ErpPoint {
    double u = 0.0;
    double v = 0.0;
    double width = 1920.0;
    double height = 960.0;

    ErpPoint() = default;
    ErpPoint(double u_, double v_, double width_ = 1920.0, double height_ = 960.0);
};

struct Fixation {
    ErpPoint point;
    double t_start = 0.0;
    double duration = 0.0;
    // Simulator ground truth: id of the object this fixation targets, -1 when unknown.
    int target_object = -1;
    // Set when bias pushed the point out of latitude range and it was clamped.
    bool clamped = false;
};

struct Scanpath {
    std::vector<Fixation> fixations;
    std::string subject_id;
    EmotionLabel emotion = EmotionLabel::Angry;
    std::string scene_id;

    void validate() const;
};

struct BoundingBox {
    double x_min = 0.0, y_min = 0.0, x_max = 0.0, y_max = 0.0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    double area() const { return width() * height(); }
    // Inclusive on all four edges.
    bool contains(double x, double y) const {
        return x_min <= x && x <= x_max && y_min <= y && y <= y_max;
    }
    double centroid_x() const { return 0.5 * (x_min + x_max); }
    double centroid_y() const { return 0.5 * (y_min + y_max); }
    void validate(double image_w, double image_h, const std::string& ctx) const;
};

struct SceneObject {
    int id = 0;
    BoundingBox bbox;
    std::string category;
    double saliency = 0.0;    // [0,1]
    double brightness = 0.0;  // [0,1]
    bool dynamic = false;
    std::optional<ErpPoint> motion_start;
};

enum class Lighting : int { High = 0, Low = 1, Normal = 2 };

const char* to_string(Lighting lighting);
std::optional<Lighting> lighting_from_string(const std::string& name);

struct Scene {
    std::string id;
    double width = 1920.0;
    double height = 960.0;
    std::vector<SceneObject> objects;
    std::uint64_t background_seed = 0;
    Lighting lighting = Lighting::Normal;
    bool dynamic = false;

    void validate() const;
    const SceneObject* find_object(int object_id) const;
};

struct RunManifest {
    std::uint64_t seed = 0;
    std::string config_digest;
    std::string tool_version;
    std::string created_at;  // ISO-8601; excluded from reproducibility digests
};

inline constexpr const char* kToolVersion = "gazeforge 0.1.0";

}  // namespace gazeforge::core
