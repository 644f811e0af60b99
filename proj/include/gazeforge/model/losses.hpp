#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "gazeforge/core/types.hpp"
#include "gazeforge/tinynn/tensor.hpp"

namespace gazeforge::model {

class NonFiniteLossError : public std::runtime_error {
public:
    explicit NonFiniteLossError(const std::string& term)
        : std::runtime_error("non-finite loss term: " + term), term_(term) {}
    const std::string& term() const { return term_; }

private:
    std::string term_;
};

struct EmotionDistribution {
    std::array<double, core::kNumEmotions> p{};

    void validate() const;
    static EmotionDistribution from_tensor(const tinynn::Tensor2& row);
    static EmotionDistribution uniform();
    static EmotionDistribution smoothed_onehot(core::EmotionLabel label, double hi = 0.9,
                                               double lo = 0.02);
    int argmax() const;
    tinynn::Tensor2 as_row() const;
};

struct AuxRegTarget {
    double duration = 0.0;    // total fixation seconds over the episode span
    double dispersion = 0.0;  // RMS angular spread of fixations, radians

    void validate() const;
};

struct LossWeights {
    double lambda_sup = 0.1;  // adversarial-suppression weight
    double beta_sup = 0.1;    // reverse-suppression weight
    double alpha_rec = 0.5;   // MSE share of the reconstruction loss
    double beta_rec = 0.5;    // DTW share
    bool dedup = false;       // drop the terms the D total double-counts

    void validate() const;
};

// Raw per-batch scalars that everything else composes from.
struct LossComponents {
    double cls_aux = 0.0;
    double cls_traj = 0.0;
    double kl_pq = 0.0;  // KL(P||Q), P = auxiliary branch, Q = scanpath branch
    double kl_qp = 0.0;
    double mi = 0.0;
    double mse = 0.0;
    double dtw = 0.0;
    double cat_ce = 0.0;
    double adv = 0.0;  // generator-side (non-saturating) adversarial loss
    double reg = 0.0;
};

struct LossReport {
    // components
    double cls_aux = 0.0, cls_traj = 0.0, mi = 0.0, kl_pq = 0.0, kl_qp = 0.0;
    double mse = 0.0, dtw = 0.0, cat_ce = 0.0, adv = 0.0, reg = 0.0;
    // composites
    double rec = 0.0, aux_cls = 0.0, traj = 0.0, ars_total = 0.0;
    double g_total = 0.0, d_total = 0.0, total = 0.0;
};

// The full loss algebra. The default D total re-adds rec/dtw/mse already
// inside the scanpath-branch term, because that is how it is written;
// weights.dedup switches to ars_total + cat_ce. Throws NonFiniteLossError
// naming the first non-finite term.
LossReport compose_losses(const LossComponents& c, const LossWeights& weights,
                          double reg_weight = 1.0, double adv_weight = 1.0);

double kl_divergence(const EmotionDistribution& p, const EmotionDistribution& q);

// -(1/N) sum_i sum_c y_ic log p_ic with a 1e-12 probability floor.
double categorical_cross_entropy(const std::vector<int>& labels,
                                 const std::vector<EmotionDistribution>& dists);

struct AdvLosses {
    double d = 0.0;  // -mean log(real) - mean log(1 - fake)
    double g = 0.0;  // -mean log(fake), non-saturating
};

AdvLosses adv_losses(const std::vector<double>& real_scores,
                     const std::vector<double>& fake_scores);

}  // namespace gazeforge::model
