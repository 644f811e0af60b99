#include "gazeforge/model/emogazenet.hpp"

namespace gazeforge::model {

using tinynn::Node;
using tinynn::ParamBinder;
using tinynn::Tape;
using tinynn::Tensor2;

void init_generator(tinynn::ParamStore& store, const ModelDims& dims, core::RngStream& rng) {
    sio::patch_embed_init(store, "g.embed", dims.patch_size, dims.embed_dim, rng);
    for (int b = 0; b < dims.blocks; ++b)
        tinynn::attention_block_init(store, "g.block" + std::to_string(b), dims.embed_dim,
                                     dims.mlp_hidden, rng);
    tinynn::dense_init(store, "g.head_cls", dims.embed_dim, core::kNumEmotions, rng);
    tinynn::dense_init(store, "g.head_reg", dims.embed_dim, 2, rng);
}

void init_discriminator(tinynn::ParamStore& store, const ModelDims& dims, core::RngStream& rng) {
    sio::patch_embed_init(store, "d.embed", dims.patch_size, dims.embed_dim, rng);
    for (int b = 0; b < dims.blocks; ++b)
        tinynn::attention_block_init(store, "d.block" + std::to_string(b), dims.embed_dim,
                                     dims.mlp_hidden, rng);
    tinynn::dense_init(store, "d.aux_neck", dims.embed_dim, dims.embed_dim, rng);
    tinynn::dense_init(store, "d.aux_head", dims.embed_dim, core::kNumEmotions, rng);
    tinynn::rnn_init(store, "d.rnn", 2, dims.rnn_hidden, rng);
    tinynn::dense_init(store, "d.dec", dims.rnn_hidden, 2, rng);
    tinynn::dense_init(store, "d.traj_neck", dims.rnn_hidden, dims.embed_dim, rng);
    tinynn::dense_init(store, "d.traj_head", dims.embed_dim, core::kNumEmotions, rng);
    const int pooled_dim = dims.embed_dim + dims.rnn_hidden + core::kNumEmotions;
    tinynn::dense_init(store, "d.rf", pooled_dim, 1, rng);
    tinynn::dense_init(store, "d.cat", pooled_dim, core::kNumEmotions, rng);
}

GeneratorNodes generator_graph(Tape& tape, ParamBinder& bind, const sio::SioSequence& seq,
                               const ModelDims& dims) {
    if (seq.items.empty()) throw sio::EmptySioError("generator_graph: empty sequence");
    Node* x = sio::embed_sequence(tape, bind, "g.embed", seq);
    for (int b = 0; b < dims.blocks; ++b)
        x = tinynn::attention_block(tape, bind, "g.block" + std::to_string(b), x);
    Node* pooled = tinynn::mean_rows(tape, x);
    GeneratorNodes out;
    out.dist = tinynn::row_softmax(tape, tinynn::dense_layer(tape, bind, "g.head_cls", pooled));
    out.reg = tinynn::softplus(tape, tinynn::dense_layer(tape, bind, "g.head_reg", pooled));
    return out;
}

DiscriminatorNodes discriminator_graph(Tape& tape, ParamBinder& bind, const sio::SioSequence& seq,
                                       const ModelDims& dims) {
    if (seq.items.empty()) throw sio::EmptySioError("discriminator_graph: empty sequence");
    DiscriminatorNodes out;

    Node* x = sio::embed_sequence(tape, bind, "d.embed", seq);
    for (int b = 0; b < dims.blocks; ++b)
        x = tinynn::attention_block(tape, bind, "d.block" + std::to_string(b), x);
    Node* pooled_t = tinynn::mean_rows(tape, x);
    out.aux_neck = tinynn::tanh_op(tape, tinynn::dense_layer(tape, bind, "d.aux_neck", pooled_t));
    out.aux_dist =
        tinynn::row_softmax(tape, tinynn::dense_layer(tape, bind, "d.aux_head", out.aux_neck));

    // scanpath branch over the raw normalized coordinates
    const int n = static_cast<int>(seq.raw_coords.size());
    if (n == 0) throw std::invalid_argument("discriminator_graph: sequence has no raw coordinates");
    Tensor2 coords(n, 2);
    for (int i = 0; i < n; ++i) {
        coords(i, 0) = seq.raw_coords[i][0];
        coords(i, 1) = seq.raw_coords[i][1];
    }
    out.coords = tape.leaf(std::move(coords));
    Node* h = tape.leaf(Tensor2(1, dims.rnn_hidden, 0.0));
    std::vector<Node*> recon_rows;
    recon_rows.reserve(n);
    for (int i = 0; i < n; ++i) {
        Node* x_t = tape.leaf(Tensor2(1, 2, {seq.raw_coords[i][0], seq.raw_coords[i][1]}));
        h = tinynn::rnn_step(tape, bind, "d.rnn", h, x_t);
        recon_rows.push_back(tinynn::dense_layer(tape, bind, "d.dec", h));
    }
    out.recon = tinynn::stack_rows(tape, recon_rows);
    out.traj_neck = tinynn::tanh_op(tape, tinynn::dense_layer(tape, bind, "d.traj_neck", h));
    out.traj_dist =
        tinynn::row_softmax(tape, tinynn::dense_layer(tape, bind, "d.traj_head", out.traj_neck));

    out.pooled = tinynn::concat_cols(tape, pooled_t, h);
    return out;
}

Node* real_fake_head(Tape& tape, ParamBinder& bind, Node* pooled, Node* candidate) {
    Node* input = tinynn::concat_cols(tape, pooled, candidate);
    return tinynn::sigmoid(tape, tinynn::dense_layer(tape, bind, "d.rf", input));
}

Node* categorical_head(Tape& tape, ParamBinder& bind, Node* pooled, Node* candidate) {
    Node* input = tinynn::concat_cols(tape, pooled, candidate);
    return tinynn::row_softmax(tape, tinynn::dense_layer(tape, bind, "d.cat", input));
}

GeneratorOutput generator_forward(tinynn::ParamStore& store, const sio::SioSequence& seq,
                                  const ModelDims& dims) {
    Tape tape;
    ParamBinder bind(tape, store, false);
    const GeneratorNodes nodes = generator_graph(tape, bind, seq, dims);
    GeneratorOutput out;
    out.dist = EmotionDistribution::from_tensor(nodes.dist->value);
    out.reg.duration = nodes.reg->value(0, 0);
    out.reg.dispersion = nodes.reg->value(0, 1);
    return out;
}

DiscriminatorOutput discriminator_forward(tinynn::ParamStore& store, const sio::SioSequence& seq,
                                          const EmotionDistribution& candidate,
                                          const ModelDims& dims) {
    candidate.validate();
    Tape tape;
    ParamBinder bind(tape, store, false);
    const DiscriminatorNodes nodes = discriminator_graph(tape, bind, seq, dims);
    Node* cand = tape.leaf(candidate.as_row());
    Node* rf = real_fake_head(tape, bind, nodes.pooled, cand);
    Node* cat = categorical_head(tape, bind, nodes.pooled, cand);
    DiscriminatorOutput out;
    out.real_fake_score = rf->value(0, 0);
    out.aux_dist = EmotionDistribution::from_tensor(nodes.aux_dist->value);
    out.traj_dist = EmotionDistribution::from_tensor(nodes.traj_dist->value);
    out.cat_dist = EmotionDistribution::from_tensor(cat->value);
    for (int i = 0; i < nodes.recon->value.rows(); ++i)
        out.reconstruction.push_back({nodes.recon->value(i, 0), nodes.recon->value(i, 1)});
    return out;
}

}  // namespace gazeforge::model
