#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gazeforge/core/raster.hpp"
#include "gazeforge/core/types.hpp"
#include "gazeforge/tinynn/blocks.hpp"

namespace gazeforge::sio {

class EmptySioError : public std::runtime_error {
public:
    explicit EmptySioError(const std::string& what) : std::runtime_error(what) {}
};

struct SioItem {
    int object_id = -1;
    tinynn::Tensor2 patch;  // D x D grayscale crop of the object box, values in [0,1]
    double pos_x = 0.0;     // normalized centroid
    double pos_y = 0.0;
    int t = 1;              // order index, 1-based
    double duration = 0.0;  // seconds (merged)
};

struct SioSequence {
    std::vector<SioItem> items;
    core::EmotionLabel emotion = core::EmotionLabel::Angry;
    std::string scene_id;
    // raw normalized fixation coordinates, one per original fixation
    std::vector<std::array<double, 2>> raw_coords;

    void validate() const;
};

// Eq. 1 membership with inclusive boundaries; among overlapping candidates
// the smallest-area box wins, then the lowest id. nullopt when no box
// contains the point.
std::optional<int> map_gaze_to_object(const core::Scene& scene, const core::ErpPoint& p);

// Fixations map to objects, consecutive duplicates merge (durations summed),
// unmapped fixations drop. Throws EmptySioError when nothing maps.
SioSequence build_sio(const core::Scene& scene, const core::Raster& raster,
                      const core::Scanpath& scanpath, int patch_size);

// Supp.-style spatial-temporal triple. The raw form keeps the integer order
// index; the scaled form divides t by the sequence length m.
std::array<double, 3> positional_encoding(const SioItem& item);
std::array<double, 3> scaled_positional_encoding(const SioItem& item, std::size_t m);

tinynn::Tensor2 crop_patch(const core::Raster& raster, const core::BoundingBox& bbox, int d);

// Patch embedding: flatten -> linear to E, plus a linear projection of the
// scaled positional triple added on top.
void patch_embed_init(tinynn::ParamStore& store, const std::string& prefix, int patch_size,
                      int embed_dim, core::RngStream& rng);
tinynn::Node* patch_embed(tinynn::Tape& tape, tinynn::ParamBinder& bind, const std::string& prefix,
                          const SioItem& item, std::size_t m);
// All items of a sequence as one m x E matrix.
tinynn::Node* embed_sequence(tinynn::Tape& tape, tinynn::ParamBinder& bind,
                             const std::string& prefix, const SioSequence& seq);

// Export record: patches are re-derivable from the scene seed, not stored.
void save_sio_records(const std::filesystem::path& path, const std::vector<SioSequence>& records);

}  // namespace gazeforge::sio
