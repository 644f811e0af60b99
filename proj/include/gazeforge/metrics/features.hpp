#pragma once

#include "gazeforge/core/raster.hpp"
#include "gazeforge/core/types.hpp"
#include "gazeforge/metrics/metrics.hpp"
#include "gazeforge/sio/sio.hpp"

namespace gazeforge::metrics {

// 48-bin color histogram (16 per channel) concatenated with mean gradient
// magnitude, L2-normalized. Local = window around the gaze point clipped to
// image bounds, global = whole raster.
struct FeaturePair {
    std::vector<double> local;
    std::vector<double> global;
};

FeaturePair extract_features(const core::Raster& raster, const core::ErpPoint& gaze,
                             const FccConfig& config);

// Render of what the model attended to: the SIO items' boxes copied from the
// scene raster onto a neutral background. Source of the v-features.
core::Raster render_attended(const core::Scene& scene, const core::Raster& scene_raster,
                             const sio::SioSequence& seq);

}  // namespace gazeforge::metrics
