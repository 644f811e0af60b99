#include "doctest.h"

#include <algorithm>
#include <fstream>

#include "gazeforge/core/records.hpp"
#include "gazeforge/metrics/metrics.hpp"
#include "gazeforge/simscene/scanpath_gen.hpp"
#include "gazeforge/simscene/scene_gen.hpp"
#include "gazeforge/sio/sio.hpp"

using namespace gazeforge;
using sio::SioItem;
using sio::SioSequence;

namespace {

core::Scene two_box_scene() {
    core::Scene scene;
    scene.id = "boxes";
    scene.background_seed = 0;
    core::SceneObject a;
    a.id = 0;
    a.bbox = {0.0, 0.0, 10.0, 10.0};
    a.category = "rug";
    a.saliency = 0.4;
    a.brightness = 0.6;
    core::SceneObject b = a;
    b.id = 1;
    b.bbox = {600.0, 300.0, 800.0, 500.0};
    scene.objects = {a, b};
    return scene;
}

core::Fixation fix_at(double u, double v, double t, double dur) {
    core::Fixation f;
    f.point = core::ErpPoint(u, v);
    f.t_start = t;
    f.duration = dur;
    return f;
}

}  // namespace

TEST_CASE("map_gaze_to_object: interior, inclusive boundary, exterior") {
    const auto scene = two_box_scene();
    CHECK(sio::map_gaze_to_object(scene, core::ErpPoint(5.0, 5.0)) == 0);
    // boundary inclusive on the max corner
    CHECK(sio::map_gaze_to_object(scene, core::ErpPoint(10.0, 10.0)) == 0);
    CHECK(sio::map_gaze_to_object(scene, core::ErpPoint(0.0, 0.0)) == 0);
    CHECK(!sio::map_gaze_to_object(scene, core::ErpPoint(15.0, 5.0)).has_value());
}

TEST_CASE("map_gaze_to_object: smallest-area box wins, then lowest id") {
    core::Scene scene = two_box_scene();
    core::SceneObject small;
    small.id = 2;
    small.bbox = {650.0, 350.0, 700.0, 400.0};  // nested inside object 1
    small.category = "lamp";
    small.saliency = 0.1;
    small.brightness = 0.1;
    scene.objects.push_back(small);
    CHECK(sio::map_gaze_to_object(scene, core::ErpPoint(660.0, 360.0)) == 2);
    CHECK(sio::map_gaze_to_object(scene, core::ErpPoint(610.0, 310.0)) == 1);

    // equal-area overlap: lowest id
    core::SceneObject twin = small;
    twin.id = 3;
    twin.bbox = {640.0, 340.0, 690.0, 390.0};
    scene.objects.push_back(twin);
    CHECK(sio::map_gaze_to_object(scene, core::ErpPoint(660.0, 360.0)) == 2);
}

TEST_CASE("build_sio: consecutive duplicates merge with summed durations") {
    const auto scene = two_box_scene();
    const auto raster = simscene::render_scene(scene);
    core::Scanpath path;
    path.subject_id = "s";
    path.scene_id = scene.id;
    path.fixations = {fix_at(5, 5, 0.0, 0.1), fix_at(6, 6, 0.1, 0.3), fix_at(700, 400, 0.4, 0.2)};
    const auto seq = sio::build_sio(scene, raster, path, 8);
    REQUIRE(seq.items.size() == 2);
    CHECK(seq.items[0].object_id == 0);
    CHECK(seq.items[0].duration == doctest::Approx(0.4));
    CHECK(seq.items[0].t == 1);
    CHECK(seq.items[1].object_id == 1);
    CHECK(seq.items[1].t == 2);
    CHECK(seq.raw_coords.size() == 3);
}

TEST_CASE("build_sio: unmapped fixations drop out") {
    const auto scene = two_box_scene();
    const auto raster = simscene::render_scene(scene);
    core::Scanpath path;
    path.subject_id = "s";
    path.scene_id = scene.id;
    path.fixations = {fix_at(5, 5, 0.0, 0.1), fix_at(400, 700, 0.1, 0.1),
                      fix_at(700, 400, 0.2, 0.1)};
    const auto seq = sio::build_sio(scene, raster, path, 8);
    REQUIRE(seq.items.size() == 2);
    CHECK(seq.items[0].object_id == 0);
    CHECK(seq.items[1].object_id == 1);
}

TEST_CASE("build_sio: all fixations unmapped raises") {
    const auto scene = two_box_scene();
    const auto raster = simscene::render_scene(scene);
    core::Scanpath path;
    path.subject_id = "s";
    path.scene_id = scene.id;
    path.fixations = {fix_at(400, 700, 0.0, 0.1)};
    CHECK_THROWS_AS(sio::build_sio(scene, raster, path, 8), sio::EmptySioError);
}

TEST_CASE("build_sio: simulator ground truth matches SIO ids after merging") {
    simscene::SceneGenOptions sopts;
    sopts.n_objects = 8;
    const auto table = simscene::PolicyTable::builtin_default();
    simscene::ScanpathGenOptions opts;
    opts.n_fix = 10;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto scene = simscene::gen_scene(400 + seed, sopts);
        const auto raster = simscene::render_scene(scene);
        core::RngStream rng(seed, 70);
        const auto label = core::emotion_from_ordinal(static_cast<int>(seed % 6));
        const auto path = simscene::gen_scanpath(scene, label, table.for_emotion(label),
                                                 simscene::SubjectProfile::identity("s"), opts,
                                                 rng);
        // merge consecutive duplicates of the ground-truth target ids
        std::vector<int> expected;
        for (const auto& f : path.fixations)
            if (expected.empty() || expected.back() != f.target_object)
                expected.push_back(f.target_object);
        const auto seq = sio::build_sio(scene, raster, path, 8);
        REQUIRE(seq.items.size() == expected.size());
        for (std::size_t i = 0; i < expected.size(); ++i)
            CHECK(seq.items[i].object_id == expected[i]);
    }
}

TEST_CASE("gaze-to-object accuracy is exactly 1 for zero-bias simulator episodes") {
    simscene::SceneGenOptions sopts;
    sopts.n_objects = 6;
    const auto table = simscene::PolicyTable::builtin_default();
    simscene::ScanpathGenOptions opts;
    long hits = 0, total = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto scene = simscene::gen_scene(500 + seed, sopts);
        std::vector<core::BoundingBox> boxes;
        for (const auto& obj : scene.objects) boxes.push_back(obj.bbox);
        core::RngStream rng(seed, 71);
        const auto label = core::emotion_from_ordinal(static_cast<int>(seed % 6));
        const auto path = simscene::gen_scanpath(scene, label, table.for_emotion(label),
                                                 simscene::SubjectProfile::identity("s"), opts,
                                                 rng);
        for (const auto& f : path.fixations) {
            hits += metrics::gaze_accuracy(f.point, boxes);
            ++total;
        }
    }
    CHECK(hits == total);
}

TEST_CASE("build_sio is permutation-covariant in object labels") {
    const auto scene = two_box_scene();
    const auto raster = simscene::render_scene(scene);
    core::Scanpath path;
    path.subject_id = "s";
    path.scene_id = scene.id;
    path.fixations = {fix_at(5, 5, 0.0, 0.1), fix_at(700, 400, 0.1, 0.2),
                      fix_at(6, 4, 0.3, 0.1)};

    core::Scene relabeled = scene;
    relabeled.objects[0].id = 7;  // 0 -> 7
    relabeled.objects[1].id = 3;  // 1 -> 3
    core::Scanpath path2 = path;

    const auto a = sio::build_sio(scene, raster, path, 8);
    const auto b = sio::build_sio(relabeled, raster, path2, 8);
    REQUIRE(a.items.size() == b.items.size());
    const std::map<int, int> relabel{{0, 7}, {1, 3}};
    for (std::size_t i = 0; i < a.items.size(); ++i) {
        CHECK(b.items[i].object_id == relabel.at(a.items[i].object_id));
        CHECK(b.items[i].t == a.items[i].t);
    }
}

TEST_CASE("reversed scanpath yields the reversed merged item sequence") {
    const auto scene = two_box_scene();
    const auto raster = simscene::render_scene(scene);
    core::Scanpath path;
    path.subject_id = "s";
    path.scene_id = scene.id;
    path.fixations = {fix_at(5, 5, 0.0, 0.1), fix_at(700, 400, 0.1, 0.2),
                      fix_at(650, 450, 0.3, 0.1)};
    core::Scanpath reversed = path;
    std::reverse(reversed.fixations.begin(), reversed.fixations.end());
    for (std::size_t i = 0; i < reversed.fixations.size(); ++i)
        reversed.fixations[i].t_start = path.fixations[i].t_start;

    const auto fwd = sio::build_sio(scene, raster, path, 8);
    const auto bwd = sio::build_sio(scene, raster, reversed, 8);
    REQUIRE(fwd.items.size() == bwd.items.size());
    const std::size_t m = fwd.items.size();
    for (std::size_t i = 0; i < m; ++i) {
        CHECK(bwd.items[i].object_id == fwd.items[m - 1 - i].object_id);
        CHECK(bwd.items[i].t == static_cast<int>(i) + 1);
    }
}

TEST_CASE("positional encoding: raw triple and scaled order index") {
    SioItem item;
    item.pos_x = 0.25;
    item.pos_y = 0.5;
    item.t = 3;
    const auto raw = sio::positional_encoding(item);
    CHECK(raw[0] == 0.25);
    CHECK(raw[1] == 0.5);
    CHECK(raw[2] == 3.0);
    const auto scaled = sio::scaled_positional_encoding(item, 3);
    CHECK(scaled[2] == doctest::Approx(1.0));

    SioItem first;
    first.t = 1;
    CHECK(sio::scaled_positional_encoding(first, 5)[2] == doctest::Approx(0.2));
    CHECK(sio::scaled_positional_encoding(first, 1)[2] == doctest::Approx(1.0));
}

TEST_CASE("patch_embed: zero patch, zero position, zero bias gives zero embedding") {
    tinynn::ParamStore store;
    core::RngStream rng(72, 0);
    sio::patch_embed_init(store, "embed", 4, 6, rng);
    SioItem item;
    item.patch = tinynn::Tensor2(4, 4, 0.0);
    item.pos_x = 0.0;
    item.pos_y = 0.0;
    item.t = 1;
    tinynn::Tape tape;
    tinynn::ParamBinder bind(tape, store, false);
    // zero the bias: weights may be anything, linearity does the rest
    store.param("embed.b") = tinynn::Tensor2(1, 6, 0.0);
    // t is scaled to 1/m; force the positional contribution to zero too
    store.param("embed.pos_w") = tinynn::Tensor2(3, 6, 0.0);
    const auto* out = sio::patch_embed(tape, bind, "embed", item, 4);
    for (int j = 0; j < 6; ++j) CHECK(out->value(0, j) == 0.0);
}

TEST_CASE("patch_embed: constructed 1x1 projection replicates the pixel") {
    tinynn::ParamStore store;
    core::RngStream rng(73, 0);
    sio::patch_embed_init(store, "embed", 1, 3, rng);
    store.param("embed.w") = tinynn::Tensor2(1, 3, {1.0, 1.0, 1.0});
    store.param("embed.b") = tinynn::Tensor2(1, 3, 0.0);
    store.param("embed.pos_w") = tinynn::Tensor2(3, 3, 0.0);
    SioItem item;
    item.patch = tinynn::Tensor2(1, 1, 0.625);
    item.t = 1;
    tinynn::Tape tape;
    tinynn::ParamBinder bind(tape, store, false);
    const auto* out = sio::patch_embed(tape, bind, "embed", item, 1);
    for (int j = 0; j < 3; ++j) CHECK(out->value(0, j) == doctest::Approx(0.625));
}

TEST_CASE("patch_embed: projection-weight gradients match finite differences") {
    core::RngStream rng(74, 0);
    const int d = 3, e = 4;
    tinynn::Tensor2 patch(1, d * d);
    for (std::size_t i = 0; i < patch.size(); ++i) patch[i] = rng.uniform(0.0, 1.0);
    const tinynn::Tensor2 pos(1, 3, {0.3, 0.7, 0.5});

    tinynn::Tensor2 w(d * d, e), pw(3, e), b(1, e);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = rng.uniform(-1, 1);
    for (std::size_t i = 0; i < pw.size(); ++i) pw[i] = rng.uniform(-1, 1);

    auto eval = [&](const tinynn::Tensor2& wv, const tinynn::Tensor2& pwv,
                    const tinynn::Tensor2& bv, tinynn::Tensor2* grads_w) {
        tinynn::Tape t;
        auto* wn = t.leaf(wv, grads_w != nullptr);
        auto* pwn = t.leaf(pwv, false);
        auto* bn = t.leaf(bv, false);
        auto* out = tinynn::add(
            t, tinynn::add_rowvec(t, tinynn::matmul(t, t.leaf(patch), wn), bn),
            tinynn::matmul(t, t.leaf(pos), pwn));
        auto* loss = tinynn::mean_all(t, tinynn::tanh_op(t, out));
        if (grads_w) {
            t.backward(loss);
            *grads_w = wn->grad;
        }
        return loss->scalar();
    };

    tinynn::Tensor2 analytic;
    eval(w, pw, b, &analytic);
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double h = 1e-5 * std::max(1.0, std::abs(w[i]));
        tinynn::Tensor2 plus = w, minus = w;
        plus[i] += h;
        minus[i] -= h;
        const double numeric = (eval(plus, pw, b, nullptr) - eval(minus, pw, b, nullptr)) /
                               (2.0 * h);
        CHECK(std::abs(numeric - analytic[i]) /
                  std::max({1.0, std::abs(numeric), std::abs(analytic[i])}) <
              1e-4);
    }
}

TEST_CASE("sio export records round-trip the item fields") {
    const auto scene = two_box_scene();
    const auto raster = simscene::render_scene(scene);
    core::Scanpath path;
    path.subject_id = "s";
    path.scene_id = scene.id;
    path.emotion = core::EmotionLabel::Happy;
    path.fixations = {fix_at(5, 5, 0.0, 0.1), fix_at(700, 400, 0.1, 0.2)};
    const auto seq = sio::build_sio(scene, raster, path, 8);
    const auto dir = std::filesystem::temp_directory_path() / "gazeforge_tests" / "sio";
    std::filesystem::create_directories(dir);
    sio::save_sio_records(dir / "sio.jsonl", {seq});
    std::ifstream in(dir / "sio.jsonl");
    std::string line;
    REQUIRE(std::getline(in, line));
    const auto j = nlohmann::ordered_json::parse(line);
    CHECK(j.at("emotion") == "Happy");
    CHECK(j.at("items").size() == 2);
    CHECK(j.at("items")[0].at("object_id") == 0);
    CHECK(j.at("items")[1].at("t") == 2);
}
