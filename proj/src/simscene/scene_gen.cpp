#include "gazeforge/simscene/scene_gen.hpp"

#include <algorithm>
#include <cmath>

#include "gazeforge/core/rng.hpp"

namespace gazeforge::simscene {

namespace {

const char* kCategories[] = {"artwork", "window", "sofa",   "table", "door",
                             "person",  "plant",  "screen", "lamp",  "rug"};
constexpr int kNumCategories = 10;

double iou(const core::BoundingBox& a, const core::BoundingBox& b) {
    const double ix = std::max(0.0, std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min));
    const double iy = std::max(0.0, std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min));
    const double inter = ix * iy;
    const double uni = a.area() + b.area() - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

// base color per category, scaled later by brightness
std::array<std::uint8_t, 3> category_color(const std::string& category, double brightness) {
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : category) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ULL;
    const double value = 0.25 + 0.75 * brightness;
    const auto channel = [&](int shift) {
        const double base = 96.0 + static_cast<double>((h >> shift) & 0x7F);
        return static_cast<std::uint8_t>(std::clamp(base * value, 0.0, 255.0));
    };
    return {channel(0), channel(8), channel(16)};
}

}  // namespace

core::Scene gen_scene(std::uint64_t seed, const SceneGenOptions& options) {
    if (options.n_objects < 1) throw std::invalid_argument("gen_scene: n_objects must be >= 1");
    core::RngStream rng(seed, 0);

    core::Scene scene;
    scene.id = "scene-" + std::to_string(seed);
    scene.width = options.width;
    scene.height = options.height;
    scene.lighting = options.lighting;
    scene.background_seed = core::RngStream(seed, 1).next_u64();

    const double W = options.width, H = options.height;
    const int n_dynamic =
        static_cast<int>(std::lround(options.n_objects * options.dynamic_fraction));
    scene.dynamic = n_dynamic > 0;

    const long retry_budget = 60L * options.n_objects;
    long retries = 0;
    for (int i = 0; i < options.n_objects; ++i) {
        core::SceneObject obj;
        obj.id = i;
        obj.category = kCategories[rng.index(kNumCategories)];
        while (true) {
            const double bw = rng.uniform(0.05, 0.16) * W;
            const double bh = rng.uniform(0.10, 0.30) * H;
            // keep boxes off the poles where ERP distortion dominates
            const double cx = rng.uniform(bw / 2.0, W - bw / 2.0);
            const double cy = rng.uniform(0.15 * H + bh / 2.0, 0.85 * H - bh / 2.0);
            obj.bbox = {cx - bw / 2.0, cy - bh / 2.0, cx + bw / 2.0, cy + bh / 2.0};
            bool ok = true;
            for (const auto& prev : scene.objects)
                if (iou(obj.bbox, prev.bbox) > options.max_overlap) {
                    ok = false;
                    break;
                }
            if (ok) break;
            if (++retries > retry_budget)
                throw GenerationError("gen_scene: cannot pack " +
                                      std::to_string(options.n_objects) +
                                      " objects within the retry budget");
        }
        obj.saliency = rng.uniform();
        switch (options.lighting) {
            case core::Lighting::High: obj.brightness = rng.uniform(0.5, 1.0); break;
            case core::Lighting::Low: obj.brightness = rng.uniform() * 0.5; break;
            default: obj.brightness = rng.uniform(); break;
        }
        obj.dynamic = i < n_dynamic;
        if (obj.dynamic) {
            const double mu = rng.uniform(obj.bbox.x_min, obj.bbox.x_max);
            const double mv = rng.uniform(obj.bbox.y_min, obj.bbox.y_max);
            obj.motion_start = core::ErpPoint(mu, mv, W, H);
        }
        scene.objects.push_back(std::move(obj));
    }
    scene.validate();
    return scene;
}

core::Raster render_scene(const core::Scene& scene) {
    const int W = static_cast<int>(scene.width);
    const int H = static_cast<int>(scene.height);
    core::Raster raster(W, H);

    double base = 110.0;
    if (scene.lighting == core::Lighting::High) base = 185.0;
    if (scene.lighting == core::Lighting::Low) base = 45.0;
    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
            std::uint64_t s = scene.background_seed ^
                              (static_cast<std::uint64_t>(y) * 0x9E3779B97F4A7C15ULL + x);
            const double n = static_cast<double>(core::splitmix64(s) & 0x3F) - 32.0;  // +-32
            const auto g = static_cast<std::uint8_t>(std::clamp(base + 0.5 * n, 0.0, 255.0));
            raster.at(x, y) = {g, g, g};
        }
    }

    for (const auto& obj : scene.objects) {
        const int x0 = static_cast<int>(std::floor(obj.bbox.x_min));
        const int y0 = static_cast<int>(std::floor(obj.bbox.y_min));
        const int x1 = static_cast<int>(std::ceil(obj.bbox.x_max));
        const int y1 = static_cast<int>(std::ceil(obj.bbox.y_max));
        // border contrast carries saliency; fill value carries brightness
        const auto border_gray = static_cast<std::uint8_t>(std::lround(255.0 * obj.saliency));
        raster.fill_rect(x0, y0, x1, y1, {border_gray, border_gray, border_gray});
        const int bx = std::max(1, static_cast<int>(std::lround(0.08 * (x1 - x0))));
        const int by = std::max(1, static_cast<int>(std::lround(0.08 * (y1 - y0))));
        raster.fill_rect(x0 + bx, y0 + by, x1 - bx, y1 - by,
                         category_color(obj.category, obj.brightness));
    }
    return raster;
}

ObjectFeatures object_features(const core::Scene& scene, const core::SceneObject& obj) {
    ObjectFeatures f;
    f.saliency = obj.saliency;
    f.brightness = obj.brightness;

    const double cx = obj.bbox.centroid_x();
    const double cy = obj.bbox.centroid_y();
    double nearest = std::numeric_limits<double>::infinity();
    for (double corner_x : {0.0, scene.width})
        for (double corner_y : {0.0, scene.height}) {
            const double dx = cx - corner_x, dy = cy - corner_y;
            nearest = std::min(nearest, std::sqrt(dx * dx + dy * dy));
        }
    const double half_diag = 0.5 * std::sqrt(scene.width * scene.width +
                                             scene.height * scene.height);
    f.corner = std::clamp(1.0 - nearest / half_diag, 0.0, 1.0);

    double max_area = 0.0;
    for (const auto& o : scene.objects) max_area = std::max(max_area, o.bbox.area());
    f.detail = max_area > 0.0 ? std::clamp(1.0 - obj.bbox.area() / max_area, 0.0, 1.0) : 0.0;
    return f;
}

}  // namespace gazeforge::simscene
