#include "gazeforge/simscene/scanpath_gen.hpp"

#include <algorithm>
#include <cmath>

#include "gazeforge/geometry/erp.hpp"

namespace gazeforge::simscene {

void SubjectProfile::validate() const {
    const double det = bias[0][0] * bias[1][1] - bias[0][1] * bias[1][0];
    if (std::abs(det) < 1e-12)
        throw std::invalid_argument("SubjectProfile: bias matrix not invertible");
    if (noise_sigma < 0.0) throw std::invalid_argument("SubjectProfile: noise_sigma < 0");
}

SubjectProfile SubjectProfile::identity(const std::string& id) {
    SubjectProfile p;
    p.id = id;
    return p;
}

SubjectProfile SubjectProfile::seeded(const std::string& id, std::uint64_t seed, double bias_deg,
                                      double noise_deg) {
    core::RngStream rng(seed, 77);
    SubjectProfile p;
    p.id = id;
    const double mag = rng.uniform(0.8, 1.2) * bias_deg * M_PI / 180.0;
    const double angle = rng.uniform(0.0, 2.0 * M_PI);
    p.offset = {mag * std::cos(angle), mag * std::sin(angle)};
    p.bias[0][0] = 1.0 + rng.uniform(-0.05, 0.05);
    p.bias[1][1] = 1.0 + rng.uniform(-0.05, 0.05);
    p.bias[0][1] = rng.uniform(-0.04, 0.04);
    p.bias[1][0] = rng.uniform(-0.04, 0.04);
    p.noise_sigma = noise_deg * M_PI / 180.0;
    p.validate();
    return p;
}

SubjectProfile SubjectProfile::inverse() const {
    validate();
    const double det = bias[0][0] * bias[1][1] - bias[0][1] * bias[1][0];
    SubjectProfile inv;
    inv.id = id + "-inverse";
    inv.bias[0][0] = bias[1][1] / det;
    inv.bias[0][1] = -bias[0][1] / det;
    inv.bias[1][0] = -bias[1][0] / det;
    inv.bias[1][1] = bias[0][0] / det;
    inv.offset[0] = -(inv.bias[0][0] * offset[0] + inv.bias[0][1] * offset[1]);
    inv.offset[1] = -(inv.bias[1][0] * offset[0] + inv.bias[1][1] * offset[1]);
    inv.noise_sigma = 0.0;
    return inv;
}

std::array<double, 2> SubjectProfile::apply(double lon, double lat) const {
    return {bias[0][0] * lon + bias[0][1] * lat + offset[0],
            bias[1][0] * lon + bias[1][1] * lat + offset[1]};
}

std::vector<double> policy_scores(const core::Scene& scene, const EmotionPolicy& policy) {
    std::vector<double> scores;
    scores.reserve(scene.objects.size());
    for (const auto& obj : scene.objects) {
        const ObjectFeatures f = object_features(scene, obj);
        scores.push_back(policy.w_saliency * f.saliency + policy.w_brightness * f.brightness +
                         policy.w_corner * f.corner + policy.w_detail * f.detail);
    }
    return scores;
}

namespace {

std::size_t pick_from_pool(const std::vector<double>& scores, const std::vector<int>& pool,
                           double temperature, core::RngStream& rng) {
    if (temperature <= 0.0) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < pool.size(); ++i)
            if (scores[pool[i]] > scores[pool[best]]) best = i;
        return best;
    }
    double mx = scores[pool[0]];
    for (int idx : pool) mx = std::max(mx, scores[idx]);
    std::vector<double> cum(pool.size());
    double z = 0.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        z += std::exp((scores[pool[i]] - mx) / temperature);
        cum[i] = z;
    }
    const double draw = rng.uniform() * z;
    for (std::size_t i = 0; i < pool.size(); ++i)
        if (draw < cum[i]) return i;
    return pool.size() - 1;
}

}  // namespace

core::Scanpath gen_scanpath(const core::Scene& scene, core::EmotionLabel emotion,
                            const EmotionPolicy& policy, const SubjectProfile& profile,
                            const ScanpathGenOptions& options, core::RngStream& rng) {
    if (options.n_fix < 1) throw std::invalid_argument("gen_scanpath: n_fix must be >= 1");
    scene.validate();
    policy.validate();

    const std::vector<double> scores = policy_scores(scene, policy);

    core::Scanpath path;
    path.subject_id = profile.id;
    path.emotion = emotion;
    path.scene_id = scene.id;

    std::vector<char> visited(scene.objects.size(), 0);
    long ticks = 0;
    for (int fix = 0; fix < options.n_fix; ++fix) {
        std::vector<int> pool;
        for (std::size_t i = 0; i < scene.objects.size(); ++i)
            if (!visited[i]) pool.push_back(static_cast<int>(i));
        if (pool.empty() || (fix > 0 && rng.uniform() < policy.revisit_prob)) {
            pool.clear();
            for (std::size_t i = 0; i < scene.objects.size(); ++i)
                pool.push_back(static_cast<int>(i));
        }
        const std::size_t chosen = pick_from_pool(scores, pool, options.temperature, rng);
        const int obj_index = pool[chosen];
        visited[obj_index] = 1;
        const auto& obj = scene.objects[obj_index];

        // dynamic objects draw the gaze to their motion onset
        double u = obj.dynamic ? obj.motion_start->u : obj.bbox.centroid_x();
        double v = obj.dynamic ? obj.motion_start->v : obj.bbox.centroid_y();
        if (options.jitter > 0.0) {
            u += rng.normal(0.0, options.jitter * obj.bbox.width() / 2.0);
            v += rng.normal(0.0, options.jitter * obj.bbox.height() / 2.0);
            u = std::clamp(u, obj.bbox.x_min, obj.bbox.x_max);
            v = std::clamp(v, obj.bbox.y_min, obj.bbox.y_max);
        }

        const long dur_ticks = std::max<long>(
            1, std::lround(rng.normal(policy.mean_duration, policy.duration_dispersion) /
                           options.interval));

        core::Fixation f;
        f.point = core::ErpPoint(u, v, scene.width, scene.height);
        f.t_start = static_cast<double>(ticks) * options.interval;
        f.duration = static_cast<double>(dur_ticks) * options.interval;
        f.target_object = obj.id;
        path.fixations.push_back(f);

        ticks += dur_ticks;
        if (options.gap_prob > 0.0 && rng.uniform() < options.gap_prob)
            ticks += 1 + static_cast<long>(rng.index(2));
    }
    path.validate();
    return path;
}

core::Scanpath apply_bias(const core::Scanpath& scanpath, const SubjectProfile& profile,
                          core::RngStream& rng) {
    scanpath.validate();
    profile.validate();
    core::Scanpath out = scanpath;
    constexpr double kLatLimit = M_PI / 2.0 - 1e-6;
    for (auto& f : out.fixations) {
        const auto dir = geometry::erp_to_dir(f.point);
        auto [lon, lat] = profile.apply(dir.lon(), dir.lat());
        if (profile.noise_sigma > 0.0) {
            lon += rng.normal(0.0, profile.noise_sigma);
            lat += rng.normal(0.0, profile.noise_sigma);
        }
        lon = geometry::wrap_longitude(lon);
        if (lat < -kLatLimit || lat > kLatLimit) {
            lat = std::clamp(lat, -kLatLimit, kLatLimit);
            f.clamped = true;
        }
        f.point = geometry::dir_to_erp(geometry::SphereDir::from_angles(lon, lat), f.point.width,
                                       f.point.height);
    }
    return out;
}

}  // namespace gazeforge::simscene
