#include "gazeforge/model/losses.hpp"

#include <algorithm>
#include <cmath>

#include "gazeforge/tinynn/tape.hpp"

namespace gazeforge::model {

namespace {
constexpr double kProbFloor = 1e-12;
}

void EmotionDistribution::validate() const {
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= 0.0)) throw std::invalid_argument("EmotionDistribution: negative probability");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("EmotionDistribution: probabilities sum to " +
                                    std::to_string(sum));
}

EmotionDistribution EmotionDistribution::from_tensor(const tinynn::Tensor2& row) {
    if (row.rows() != 1 || row.cols() != core::kNumEmotions)
        throw std::invalid_argument("EmotionDistribution: expected a 1x6 row");
    EmotionDistribution d;
    for (int i = 0; i < core::kNumEmotions; ++i) d.p[i] = row(0, i);
    d.validate();
    return d;
}

EmotionDistribution EmotionDistribution::uniform() {
    EmotionDistribution d;
    d.p.fill(1.0 / core::kNumEmotions);
    return d;
}

EmotionDistribution EmotionDistribution::smoothed_onehot(core::EmotionLabel label, double hi,
                                                         double lo) {
    EmotionDistribution d;
    d.p.fill(lo);
    d.p[static_cast<int>(label)] = hi;
    d.validate();
    return d;
}

int EmotionDistribution::argmax() const {
    return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

tinynn::Tensor2 EmotionDistribution::as_row() const {
    tinynn::Tensor2 row(1, core::kNumEmotions);
    for (int i = 0; i < core::kNumEmotions; ++i) row(0, i) = p[i];
    return row;
}

void AuxRegTarget::validate() const {
    if (!(duration >= 0.0) || !(dispersion >= 0.0))
        throw std::invalid_argument("AuxRegTarget: values must be >= 0");
}

void LossWeights::validate() const {
    for (double w : {lambda_sup, beta_sup, alpha_rec, beta_rec})
        if (!(w >= 0.0)) throw std::invalid_argument("LossWeights: weights must be >= 0");
}

LossReport compose_losses(const LossComponents& c, const LossWeights& weights, double reg_weight,
                          double adv_weight) {
    weights.validate();
    const std::pair<const char*, double> named[] = {
        {"L_cls_aux", c.cls_aux}, {"L_cls_traj", c.cls_traj}, {"D_KL(P||Q)", c.kl_pq},
        {"D_KL(Q||P)", c.kl_qp},  {"L_mi", c.mi},             {"L_mse", c.mse},
        {"L_dtw", c.dtw},         {"L_cat_ce", c.cat_ce},     {"L_adv", c.adv},
        {"L_reg", c.reg},
    };
    for (const auto& [name, value] : named)
        if (!std::isfinite(value)) throw NonFiniteLossError(name);

    LossReport r;
    r.cls_aux = c.cls_aux;
    r.cls_traj = c.cls_traj;
    r.mi = c.mi;
    r.kl_pq = c.kl_pq;
    r.kl_qp = c.kl_qp;
    r.mse = c.mse;
    r.dtw = c.dtw;
    r.cat_ce = c.cat_ce;
    r.adv = c.adv;
    r.reg = c.reg;

    r.rec = weights.alpha_rec * c.mse + weights.beta_rec * c.dtw;
    r.aux_cls = c.cls_aux + weights.lambda_sup * c.kl_pq;
    r.traj = c.cls_traj + r.rec + weights.beta_sup * c.kl_qp;
    r.ars_total = r.traj + r.aux_cls + c.mi;
    r.d_total = weights.dedup ? r.ars_total + c.cat_ce
                              : r.ars_total + c.cat_ce + c.dtw + c.mse + r.rec;
    r.g_total = reg_weight * c.reg + adv_weight * c.adv;
    r.total = r.d_total + r.g_total;

    for (double v : {r.rec, r.aux_cls, r.traj, r.ars_total, r.d_total, r.g_total, r.total})
        if (!std::isfinite(v)) throw NonFiniteLossError("composite total");
    return r;
}

double kl_divergence(const EmotionDistribution& p, const EmotionDistribution& q) {
    return tinynn::kl_divergence(p.as_row(), q.as_row());
}

double categorical_cross_entropy(const std::vector<int>& labels,
                                 const std::vector<EmotionDistribution>& dists) {
    if (labels.size() != dists.size())
        throw std::invalid_argument("categorical_cross_entropy: length mismatch");
    if (labels.empty()) throw std::invalid_argument("categorical_cross_entropy: empty batch");
    double sum = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] >= core::kNumEmotions)
            throw std::invalid_argument("categorical_cross_entropy: label out of range");
        sum -= std::log(std::max(dists[i].p[labels[i]], kProbFloor));
    }
    return sum / static_cast<double>(labels.size());
}

AdvLosses adv_losses(const std::vector<double>& real_scores,
                     const std::vector<double>& fake_scores) {
    if (real_scores.empty() || fake_scores.empty())
        throw std::invalid_argument("adv_losses: empty score list");
    auto check = [](double s) {
        if (!(s > 0.0 && s < 1.0))
            throw std::invalid_argument("adv_losses: scores must lie in (0,1)");
    };
    AdvLosses out;
    double real_term = 0.0;
    for (double s : real_scores) {
        check(s);
        real_term += std::log(s);
    }
    double fake_term = 0.0, gen_term = 0.0;
    for (double s : fake_scores) {
        check(s);
        fake_term += std::log(1.0 - s);
        gen_term += std::log(s);
    }
    out.d = -real_term / real_scores.size() - fake_term / fake_scores.size();
    out.g = -gen_term / fake_scores.size();
    return out;
}

}  // namespace gazeforge::model
