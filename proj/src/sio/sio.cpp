#include "gazeforge/sio/sio.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"

namespace gazeforge::sio {

void SioSequence::validate() const {
    if (items.empty()) throw EmptySioError("SioSequence: empty item list");
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (items[i].t != static_cast<int>(i) + 1)
            throw std::invalid_argument("SioSequence: t must run 1..m");
        if (items[i].pos_x < 0.0 || items[i].pos_x > 1.0 || items[i].pos_y < 0.0 ||
            items[i].pos_y > 1.0)
            throw std::invalid_argument("SioSequence: pos out of [0,1]^2");
    }
}

std::optional<int> map_gaze_to_object(const core::Scene& scene, const core::ErpPoint& p) {
    const core::SceneObject* best = nullptr;
    for (const auto& obj : scene.objects) {
        if (!obj.bbox.contains(p.u, p.v)) continue;
        if (!best || obj.bbox.area() < best->bbox.area() ||
            (obj.bbox.area() == best->bbox.area() && obj.id < best->id))
            best = &obj;
    }
    if (!best) return std::nullopt;
    return best->id;
}

tinynn::Tensor2 crop_patch(const core::Raster& raster, const core::BoundingBox& bbox, int d) {
    if (d < 1) throw std::invalid_argument("crop_patch: patch size must be >= 1");
    tinynn::Tensor2 patch(d, d);
    for (int j = 0; j < d; ++j) {
        const double sy = bbox.y_min + (j + 0.5) / d * bbox.height();
        const int py = std::clamp(static_cast<int>(std::floor(sy)), 0, raster.height() - 1);
        for (int i = 0; i < d; ++i) {
            const double sx = bbox.x_min + (i + 0.5) / d * bbox.width();
            const int px = std::clamp(static_cast<int>(std::floor(sx)), 0, raster.width() - 1);
            patch(j, i) = raster.gray(px, py);
        }
    }
    return patch;
}

SioSequence build_sio(const core::Scene& scene, const core::Raster& raster,
                      const core::Scanpath& scanpath, int patch_size) {
    scanpath.validate();
    SioSequence seq;
    seq.emotion = scanpath.emotion;
    seq.scene_id = scene.id;

    for (const auto& fix : scanpath.fixations) {
        seq.raw_coords.push_back({fix.point.u / scene.width, fix.point.v / scene.height});
        const auto mapped = map_gaze_to_object(scene, fix.point);
        if (!mapped) continue;
        if (!seq.items.empty() && seq.items.back().object_id == *mapped) {
            seq.items.back().duration += fix.duration;
            continue;
        }
        const core::SceneObject* obj = scene.find_object(*mapped);
        SioItem item;
        item.object_id = *mapped;
        item.patch = crop_patch(raster, obj->bbox, patch_size);
        item.pos_x = obj->bbox.centroid_x() / scene.width;
        item.pos_y = obj->bbox.centroid_y() / scene.height;
        item.t = static_cast<int>(seq.items.size()) + 1;
        item.duration = fix.duration;
        seq.items.push_back(std::move(item));
    }
    if (seq.items.empty())
        throw EmptySioError("build_sio: no fixation mapped to any object in scene " + scene.id);
    seq.validate();
    return seq;
}

std::array<double, 3> positional_encoding(const SioItem& item) {
    return {item.pos_x, item.pos_y, static_cast<double>(item.t)};
}

std::array<double, 3> scaled_positional_encoding(const SioItem& item, std::size_t m) {
    if (m == 0) throw std::invalid_argument("scaled_positional_encoding: m == 0");
    return {item.pos_x, item.pos_y, static_cast<double>(item.t) / static_cast<double>(m)};
}

void patch_embed_init(tinynn::ParamStore& store, const std::string& prefix, int patch_size,
                      int embed_dim, core::RngStream& rng) {
    store.add(prefix + ".w", tinynn::glorot_init(patch_size * patch_size, embed_dim, rng));
    store.add(prefix + ".b", tinynn::Tensor2(1, embed_dim, 0.0));
    store.add(prefix + ".pos_w", tinynn::glorot_init(3, embed_dim, rng));
}

namespace {
tinynn::Tensor2 flatten_patches(const SioSequence& seq) {
    const int m = static_cast<int>(seq.items.size());
    const auto& first = seq.items.front().patch;
    const int flat = first.rows() * first.cols();
    tinynn::Tensor2 out(m, flat);
    for (int i = 0; i < m; ++i) {
        const auto& patch = seq.items[i].patch;
        if (patch.rows() != first.rows() || patch.cols() != first.cols())
            throw std::invalid_argument("embed_sequence: inconsistent patch sizes");
        for (int j = 0; j < flat; ++j) out(i, j) = patch[j];
    }
    return out;
}

tinynn::Tensor2 scaled_positions(const SioSequence& seq) {
    const int m = static_cast<int>(seq.items.size());
    tinynn::Tensor2 out(m, 3);
    for (int i = 0; i < m; ++i) {
        const auto enc = scaled_positional_encoding(seq.items[i], seq.items.size());
        out(i, 0) = enc[0];
        out(i, 1) = enc[1];
        out(i, 2) = enc[2];
    }
    return out;
}
}  // namespace

tinynn::Node* patch_embed(tinynn::Tape& tape, tinynn::ParamBinder& bind, const std::string& prefix,
                          const SioItem& item, std::size_t m) {
    SioSequence one;
    one.items.push_back(item);
    one.items.back().t = 1;
    tinynn::Tensor2 flat = flatten_patches(one);
    const auto enc = scaled_positional_encoding(item, m);
    tinynn::Tensor2 pos(1, 3, {enc[0], enc[1], enc[2]});
    tinynn::Node* patches = tape.leaf(std::move(flat));
    tinynn::Node* positions = tape.leaf(std::move(pos));
    tinynn::Node* projected = tinynn::add_rowvec(
        tape, tinynn::matmul(tape, patches, bind(prefix + ".w")), bind(prefix + ".b"));
    return tinynn::add(tape, projected,
                       tinynn::matmul(tape, positions, bind(prefix + ".pos_w")));
}

tinynn::Node* embed_sequence(tinynn::Tape& tape, tinynn::ParamBinder& bind,
                             const std::string& prefix, const SioSequence& seq) {
    seq.validate();
    tinynn::Node* patches = tape.leaf(flatten_patches(seq));
    tinynn::Node* positions = tape.leaf(scaled_positions(seq));
    tinynn::Node* projected = tinynn::add_rowvec(
        tape, tinynn::matmul(tape, patches, bind(prefix + ".w")), bind(prefix + ".b"));
    return tinynn::add(tape, projected,
                       tinynn::matmul(tape, positions, bind(prefix + ".pos_w")));
}

void save_sio_records(const std::filesystem::path& path, const std::vector<SioSequence>& records) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_sio_records: cannot open " + path.string());
    for (const auto& seq : records) {
        nlohmann::ordered_json items = nlohmann::ordered_json::array();
        for (const auto& item : seq.items)
            items.push_back({{"object_id", item.object_id},
                             {"pos_x", item.pos_x},
                             {"pos_y", item.pos_y},
                             {"t", item.t},
                             {"duration", item.duration}});
        nlohmann::ordered_json j{{"type", "sio"},
                                 {"scene", seq.scene_id},
                                 {"emotion", core::to_string(seq.emotion)},
                                 {"items", std::move(items)}};
        out << j.dump() << '\n';
    }
}

}  // namespace gazeforge::sio
