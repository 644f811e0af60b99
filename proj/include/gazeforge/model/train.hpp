#pragma once

#include <filesystem>

#include "gazeforge/core/config.hpp"
#include "gazeforge/model/emogazenet.hpp"

namespace gazeforge::model {

struct TrainSample {
    sio::SioSequence sio;
    core::EmotionLabel label = core::EmotionLabel::Angry;
    AuxRegTarget target;
};

struct TrainConfig {
    ModelDims dims;
    LossWeights weights;
    double lr = 0.001;
    int batch = 16;
    int epochs = 80;
    double reg_weight = 1.0;
    double adv_weight = 1.0;
    double smooth_hi = 0.9;
    double smooth_lo = 0.02;
    std::uint64_t seed = 42;

    static TrainConfig from_config(const core::Config& cfg, std::uint64_t seed);
};

struct ModelState {
    tinynn::ParamStore generator;
    tinynn::ParamStore discriminator;
    ModelDims dims;

    static ModelState init(const ModelDims& dims, std::uint64_t seed);
    void save(const std::filesystem::path& dir) const;
    static ModelState load(const std::filesystem::path& dir);
    std::string digest() const;
};

struct EpochLog {
    int epoch = 0;
    LossReport report;
    double train_accuracy = 0.0;
};

struct TrainResult {
    ModelState state;
    std::vector<EpochLog> log;
};

// Alternating D/G updates with deterministic per-epoch shuffling. Real
// discriminator inputs are label-smoothed one-hots paired with the sample's
// SIO. Aborts with NonFiniteLossError when any loss term goes non-finite.
TrainResult train(const std::vector<TrainSample>& dataset, const TrainConfig& cfg);
// Continues from an existing state (used by checkpoint-restart tests).
std::vector<EpochLog> train_in_place(ModelState& state, const std::vector<TrainSample>& dataset,
                                     const TrainConfig& cfg, int first_epoch = 0);

core::EmotionLabel predict(ModelState& state, const sio::SioSequence& seq);
double accuracy_on(ModelState& state, const std::vector<TrainSample>& samples);

// Duration/dispersion regression target for one episode.
AuxRegTarget regression_target(const core::Scanpath& scanpath);

void write_train_log(const std::filesystem::path& path, const std::vector<EpochLog>& log);

}  // namespace gazeforge::model
