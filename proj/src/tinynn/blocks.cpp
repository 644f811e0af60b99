#include "gazeforge/tinynn/blocks.hpp"

#include <cmath>

namespace gazeforge::tinynn {

Node* dense(Tape& t, Node* x, Node* w, Node* b) {
    return add_rowvec(t, matmul(t, x, w), b);
}

void dense_init(ParamStore& store, const std::string& prefix, int in_dim, int out_dim,
                core::RngStream& rng, bool zero) {
    store.add(prefix + ".w", zero ? Tensor2(in_dim, out_dim, 0.0)
                                  : glorot_init(in_dim, out_dim, rng));
    store.add(prefix + ".b", Tensor2(1, out_dim, 0.0));
}

Node* dense_layer(Tape& t, ParamBinder& bind, const std::string& prefix, Node* x) {
    return dense(t, x, bind(prefix + ".w"), bind(prefix + ".b"));
}

void attention_block_init(ParamStore& store, const std::string& prefix, int dim, int mlp_hidden,
                          core::RngStream& rng) {
    for (const char* head : {"wq", "wk", "wv", "wo"})
        store.add(prefix + "." + head, glorot_init(dim, dim, rng));
    for (const char* head : {"bq", "bk", "bv", "bo"})
        store.add(prefix + "." + head, Tensor2(1, dim, 0.0));
    store.add(prefix + ".mlp_w1", glorot_init(dim, mlp_hidden, rng));
    store.add(prefix + ".mlp_b1", Tensor2(1, mlp_hidden, 0.0));
    store.add(prefix + ".mlp_w2", glorot_init(mlp_hidden, dim, rng));
    store.add(prefix + ".mlp_b2", Tensor2(1, dim, 0.0));
    store.add(prefix + ".ln1_g", Tensor2(1, dim, 1.0));
    store.add(prefix + ".ln1_b", Tensor2(1, dim, 0.0));
    store.add(prefix + ".ln2_g", Tensor2(1, dim, 1.0));
    store.add(prefix + ".ln2_b", Tensor2(1, dim, 0.0));
}

Node* attention_block(Tape& t, ParamBinder& bind, const std::string& prefix, Node* x) {
    const int dim = x->value.cols();
    Node* q = dense(t, x, bind(prefix + ".wq"), bind(prefix + ".bq"));
    Node* k = dense(t, x, bind(prefix + ".wk"), bind(prefix + ".bk"));
    Node* v = dense(t, x, bind(prefix + ".wv"), bind(prefix + ".bv"));
    Node* scores = scale(t, matmul(t, q, transpose(t, k)), 1.0 / std::sqrt(double(dim)));
    Node* attn = row_softmax(t, scores);
    Node* ctx = dense(t, matmul(t, attn, v), bind(prefix + ".wo"), bind(prefix + ".bo"));
    Node* res1 = layer_norm_rows(t, add(t, x, ctx), bind(prefix + ".ln1_g"),
                                 bind(prefix + ".ln1_b"));
    Node* hidden = tanh_op(t, dense(t, res1, bind(prefix + ".mlp_w1"), bind(prefix + ".mlp_b1")));
    Node* mlp = dense(t, hidden, bind(prefix + ".mlp_w2"), bind(prefix + ".mlp_b2"));
    return layer_norm_rows(t, add(t, res1, mlp), bind(prefix + ".ln2_g"), bind(prefix + ".ln2_b"));
}

void rnn_init(ParamStore& store, const std::string& prefix, int in_dim, int hidden,
              core::RngStream& rng) {
    store.add(prefix + ".wx", glorot_init(in_dim, hidden, rng));
    store.add(prefix + ".wh", glorot_init(hidden, hidden, rng));
    store.add(prefix + ".b", Tensor2(1, hidden, 0.0));
}

Node* rnn_step(Tape& t, ParamBinder& bind, const std::string& prefix, Node* h, Node* x) {
    Node* pre = add_rowvec(t, add(t, matmul(t, h, bind(prefix + ".wh")),
                                  matmul(t, x, bind(prefix + ".wx"))),
                           bind(prefix + ".b"));
    return tanh_op(t, pre);
}

}  // namespace gazeforge::tinynn
