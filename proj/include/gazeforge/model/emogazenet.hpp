#pragma once

#include <filesystem>

#include "gazeforge/model/losses.hpp"
#include "gazeforge/sio/sio.hpp"
#include "gazeforge/tinynn/blocks.hpp"

namespace gazeforge::model {

struct ModelDims {
    int patch_size = 16;
    int embed_dim = 32;
    int blocks = 2;
    int mlp_hidden = 64;
    int rnn_hidden = 32;
};

// Generator: spatial-temporal patch embedding -> transformer encoder ->
// primary classification head plus duration/dispersion regression head.
void init_generator(tinynn::ParamStore& store, const ModelDims& dims, core::RngStream& rng);

// Discriminator: its own embedding/transformer with an auxiliary
// classification neck+head, an RNN scanpath branch with classifier and
// reconstruction decoder, and real/fake + categorical heads fed by pooled
// features concatenated with the candidate distribution.
void init_discriminator(tinynn::ParamStore& store, const ModelDims& dims, core::RngStream& rng);

struct GeneratorNodes {
    tinynn::Node* dist = nullptr;  // 1x6 probability row
    tinynn::Node* reg = nullptr;   // 1x2, softplus-clamped
};

GeneratorNodes generator_graph(tinynn::Tape& tape, tinynn::ParamBinder& bind,
                               const sio::SioSequence& seq, const ModelDims& dims);

struct DiscriminatorNodes {
    tinynn::Node* aux_dist = nullptr;   // 1x6
    tinynn::Node* traj_dist = nullptr;  // 1x6
    tinynn::Node* recon = nullptr;      // n x 2 reconstructed coordinates
    tinynn::Node* coords = nullptr;     // n x 2 input coordinates (leaf)
    tinynn::Node* aux_neck = nullptr;   // 1 x E features for the MI penalty
    tinynn::Node* traj_neck = nullptr;  // 1 x E
    tinynn::Node* pooled = nullptr;     // 1 x (E + H), candidate-independent
};

DiscriminatorNodes discriminator_graph(tinynn::Tape& tape, tinynn::ParamBinder& bind,
                                       const sio::SioSequence& seq, const ModelDims& dims);

// Heads on top of the candidate-independent pooled features.
tinynn::Node* real_fake_head(tinynn::Tape& tape, tinynn::ParamBinder& bind, tinynn::Node* pooled,
                             tinynn::Node* candidate);
tinynn::Node* categorical_head(tinynn::Tape& tape, tinynn::ParamBinder& bind, tinynn::Node* pooled,
                               tinynn::Node* candidate);

// Tape-free convenience wrappers for evaluation and the spec surface.
struct GeneratorOutput {
    EmotionDistribution dist;
    AuxRegTarget reg;
};
GeneratorOutput generator_forward(tinynn::ParamStore& store, const sio::SioSequence& seq,
                                  const ModelDims& dims);

struct DiscriminatorOutput {
    double real_fake_score = 0.5;
    EmotionDistribution aux_dist;
    EmotionDistribution traj_dist;
    EmotionDistribution cat_dist;
    std::vector<std::array<double, 2>> reconstruction;
};
DiscriminatorOutput discriminator_forward(tinynn::ParamStore& store, const sio::SioSequence& seq,
                                          const EmotionDistribution& candidate,
                                          const ModelDims& dims);

}  // namespace gazeforge::model
