#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "gazeforge/core/rng.hpp"
#include "gazeforge/tinynn/tensor.hpp"

namespace gazeforge::tinynn {

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Named parameter tensors plus their Adam moments. Iteration follows
// insertion order everywhere, so updates and checkpoints are deterministic.
class ParamStore {
public:
    Tensor2& add(const std::string& name, Tensor2 init);
    bool has(const std::string& name) const;
    Tensor2& param(const std::string& name);
    const Tensor2& param(const std::string& name) const;
    const std::vector<std::string>& names() const { return order_; }
    long step() const { return step_; }

    // Standard bias-corrected Adam over every named gradient.
    void adam_update(const std::map<std::string, Tensor2>& grads, const AdamConfig& cfg);

    // Text checkpoint: round-trips training state bit-exactly.
    void save(const std::filesystem::path& path) const;
    static ParamStore load(const std::filesystem::path& path);

    std::string digest() const;

private:
    struct Entry {
        Tensor2 value;
        Tensor2 m;
        Tensor2 v;
    };
    std::vector<std::string> order_;
    std::map<std::string, Entry> entries_;
    long step_ = 0;
};

// Uniform Xavier/Glorot init: U(-a, a), a = sqrt(6 / (fan_in + fan_out)).
Tensor2 glorot_init(int rows, int cols, core::RngStream& rng);

}  // namespace gazeforge::tinynn
