#include "gazeforge/core/types.hpp"

#include <cmath>
#include <unordered_set>

namespace gazeforge::core {

namespace {
const char* kEmotionNames[kNumEmotions] = {"Angry", "Disgust", "Fear",
                                           "Happy", "Sad",     "Surprise"};
}

const char* to_string(EmotionLabel label) { return kEmotionNames[static_cast<int>(label)]; }

EmotionLabel emotion_from_ordinal(int ordinal) {
    if (ordinal < 0 || ordinal >= kNumEmotions)
        throw SchemaError("emotion ordinal out of range: " + std::to_string(ordinal));
    return static_cast<EmotionLabel>(ordinal);
}

std::optional<EmotionLabel> emotion_from_string(const std::string& name) {
    for (int i = 0; i < kNumEmotions; ++i)
        if (name == kEmotionNames[i]) return static_cast<EmotionLabel>(i);
    return std::nullopt;
}

std::vector<EmotionLabel> all_emotions() {
    std::vector<EmotionLabel> out;
    out.reserve(kNumEmotions);
    for (int i = 0; i < kNumEmotions; ++i) out.push_back(static_cast<EmotionLabel>(i));
    return out;
}

ErpPoint::ErpPoint(double u_, double v_, double width_, double height_)
    : u(u_), v(v_), width(width_), height(height_) {
    if (!(width == 2.0 * height))
        throw SchemaError("ErpPoint.width: W = 2H required, got W=" + std::to_string(width) +
                          " H=" + std::to_string(height));
    if (!(u >= 0.0 && u < width))
        throw SchemaError("ErpPoint.u: out of [0, W): " + std::to_string(u));
    if (!(v >= 0.0 && v < height))
        throw SchemaError("ErpPoint.v: out of [0, H): " + std::to_string(v));
}

void Scanpath::validate() const {
    if (fixations.empty()) throw SchemaError("Scanpath.fixations: must be non-empty");
    double prev = -1.0;
    for (std::size_t i = 0; i < fixations.size(); ++i) {
        const auto& f = fixations[i];
        if (!(f.duration > 0.0))
            throw SchemaError("Scanpath.fixations[" + std::to_string(i) + "].duration: must be > 0");
        if (i > 0 && !(f.t_start > prev))
            throw SchemaError("Scanpath.fixations[" + std::to_string(i) +
                              "].t_start: must be strictly increasing");
        prev = f.t_start;
    }
}

void BoundingBox::validate(double image_w, double image_h, const std::string& ctx) const {
    if (!(x_min < x_max)) throw SchemaError(ctx + ".bbox.x_min: x_min < x_max required");
    if (!(y_min < y_max)) throw SchemaError(ctx + ".bbox.y_min: y_min < y_max required");
    if (x_min < 0.0 || y_min < 0.0 || x_max > image_w || y_max > image_h)
        throw SchemaError(ctx + ".bbox: box outside image bounds");
}

void Scene::validate() const {
    if (objects.empty()) throw SchemaError("Scene.objects: at least one object required");
    if (!(width == 2.0 * height)) throw SchemaError("Scene.width: W = 2H required");
    std::unordered_set<int> ids;
    for (const auto& obj : objects) {
        const std::string ctx = "Scene.objects[" + std::to_string(obj.id) + "]";
        if (!ids.insert(obj.id).second) throw SchemaError(ctx + ".id: duplicate object id");
        obj.bbox.validate(width, height, ctx);
        if (obj.saliency < 0.0 || obj.saliency > 1.0)
            throw SchemaError(ctx + ".saliency: out of [0,1]");
        if (obj.brightness < 0.0 || obj.brightness > 1.0)
            throw SchemaError(ctx + ".brightness: out of [0,1]");
        if (obj.dynamic) {
            if (!obj.motion_start) throw SchemaError(ctx + ".motion_start: required for dynamic object");
            if (!obj.bbox.contains(obj.motion_start->u, obj.motion_start->v))
                throw SchemaError(ctx + ".motion_start: must lie inside bbox");
        }
    }
}

const SceneObject* Scene::find_object(int object_id) const {
    for (const auto& obj : objects)
        if (obj.id == object_id) return &obj;
    return nullptr;
}

const char* to_string(Lighting lighting) {
    switch (lighting) {
        case Lighting::High: return "high";
        case Lighting::Low: return "low";
        default: return "normal";
    }
}

std::optional<Lighting> lighting_from_string(const std::string& name) {
    if (name == "high") return Lighting::High;
    if (name == "low") return Lighting::Low;
    if (name == "normal") return Lighting::Normal;
    return std::nullopt;
}

}  // namespace gazeforge::core
