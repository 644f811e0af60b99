#pragma once

#include <map>
#include <string>

#include "gazeforge/tinynn/params.hpp"
#include "gazeforge/tinynn/tape.hpp"

namespace gazeforge::tinynn {

// Binds store parameters as tape leaves (one leaf per name per pass) and
// gathers their accumulated gradients after backward().
class ParamBinder {
public:
    ParamBinder(Tape& tape, ParamStore& store, bool requires_grad = true)
        : tape_(&tape), store_(&store), requires_grad_(requires_grad) {}

    Node* operator()(const std::string& name) {
        auto it = bound_.find(name);
        if (it != bound_.end()) return it->second;
        Node* leaf = tape_->leaf(store_->param(name), requires_grad_, name);
        bound_.emplace(name, leaf);
        return leaf;
    }

    std::map<std::string, Tensor2> collect_grads() const {
        std::map<std::string, Tensor2> grads;
        for (const auto& [name, node] : bound_) grads.emplace(name, node->grad);
        return grads;
    }

    ParamStore& store() { return *store_; }

private:
    Tape* tape_;
    ParamStore* store_;
    bool requires_grad_;
    std::map<std::string, Node*> bound_;
};

// y = x W + b
Node* dense(Tape& t, Node* x, Node* w, Node* b);

// Single-head self-attention + 2-layer tanh MLP with residuals and layer
// norm after each sublayer. Parameters live under `<prefix>.`.
void attention_block_init(ParamStore& store, const std::string& prefix, int dim, int mlp_hidden,
                          core::RngStream& rng);
Node* attention_block(Tape& t, ParamBinder& bind, const std::string& prefix, Node* x);

// h' = tanh(h W_h + x W_x + b)
void rnn_init(ParamStore& store, const std::string& prefix, int in_dim, int hidden,
              core::RngStream& rng);
Node* rnn_step(Tape& t, ParamBinder& bind, const std::string& prefix, Node* h, Node* x);

void dense_init(ParamStore& store, const std::string& prefix, int in_dim, int out_dim,
                core::RngStream& rng, bool zero = false);
Node* dense_layer(Tape& t, ParamBinder& bind, const std::string& prefix, Node* x);

}  // namespace gazeforge::tinynn
