#include "gazeforge/model/train.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "gazeforge/core/digest.hpp"
#include "gazeforge/core/records.hpp"
#include "gazeforge/geometry/erp.hpp"
#include "gazeforge/model/mutual_information.hpp"

namespace gazeforge::model {

using tinynn::Node;
using tinynn::ParamBinder;
using tinynn::Tape;
using tinynn::Tensor2;

TrainConfig TrainConfig::from_config(const core::Config& cfg, std::uint64_t seed) {
    TrainConfig tc;
    tc.dims.patch_size = cfg.get_int("sio.patch_size");
    tc.dims.embed_dim = cfg.get_int("model.embed_dim");
    tc.dims.blocks = cfg.get_int("model.blocks");
    tc.dims.mlp_hidden = cfg.get_int("model.mlp_hidden");
    tc.dims.rnn_hidden = cfg.get_int("model.rnn_hidden");
    tc.weights.lambda_sup = cfg.get_double("model.lambda");
    tc.weights.beta_sup = cfg.get_double("model.beta_sup");
    tc.weights.alpha_rec = cfg.get_double("model.alpha_rec");
    tc.weights.beta_rec = cfg.get_double("model.beta_rec");
    tc.weights.dedup = cfg.get_bool("model.dedup");
    tc.lr = cfg.get_double("model.lr");
    tc.batch = cfg.get_int("model.batch");
    tc.epochs = cfg.get_int("model.epochs");
    tc.reg_weight = cfg.get_double("model.reg_weight");
    tc.adv_weight = cfg.get_double("model.adv_weight");
    tc.smooth_hi = cfg.get_double("model.smooth_hi");
    tc.smooth_lo = cfg.get_double("model.smooth_lo");
    tc.seed = seed;
    return tc;
}

ModelState ModelState::init(const ModelDims& dims, std::uint64_t seed) {
    ModelState state;
    state.dims = dims;
    core::RngStream g_rng(seed, 10);
    core::RngStream d_rng(seed, 11);
    init_generator(state.generator, dims, g_rng);
    init_discriminator(state.discriminator, dims, d_rng);
    return state;
}

void ModelState::save(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    generator.save(dir / "generator.ckpt");
    discriminator.save(dir / "discriminator.ckpt");
    nlohmann::ordered_json j{{"patch_size", dims.patch_size},
                             {"embed_dim", dims.embed_dim},
                             {"blocks", dims.blocks},
                             {"mlp_hidden", dims.mlp_hidden},
                             {"rnn_hidden", dims.rnn_hidden}};
    std::ofstream out(dir / "model.json");
    out << j.dump(2) << '\n';
}

ModelState ModelState::load(const std::filesystem::path& dir) {
    ModelState state;
    state.generator = tinynn::ParamStore::load(dir / "generator.ckpt");
    state.discriminator = tinynn::ParamStore::load(dir / "discriminator.ckpt");
    std::ifstream in(dir / "model.json");
    if (!in) throw std::runtime_error("ModelState::load: missing model.json in " + dir.string());
    const auto j = nlohmann::ordered_json::parse(in);
    state.dims.patch_size = j.at("patch_size").get<int>();
    state.dims.embed_dim = j.at("embed_dim").get<int>();
    state.dims.blocks = j.at("blocks").get<int>();
    state.dims.mlp_hidden = j.at("mlp_hidden").get<int>();
    state.dims.rnn_hidden = j.at("rnn_hidden").get<int>();
    return state;
}

std::string ModelState::digest() const {
    core::Fnv1a64 h;
    h.update(generator.digest());
    h.update(discriminator.digest());
    return h.hex();
}

AuxRegTarget regression_target(const core::Scanpath& scanpath) {
    scanpath.validate();
    AuxRegTarget t;
    double total = 0.0;
    for (const auto& f : scanpath.fixations) total += f.duration;
    const auto& last = scanpath.fixations.back();
    const double span = last.t_start + last.duration - scanpath.fixations.front().t_start;
    t.duration = span > 0.0 ? total / span : 1.0;

    // RMS great-circle spread around the spherical centroid
    geometry::Vec3 mean{0, 0, 0};
    std::vector<geometry::SphereDir> dirs;
    for (const auto& f : scanpath.fixations) {
        dirs.push_back(geometry::erp_to_dir(f.point));
        mean = mean + dirs.back().d;
    }
    if (mean.norm() < 1e-12) {
        t.dispersion = M_PI / 2.0;
        return t;
    }
    const geometry::SphereDir center{mean.normalized()};
    double sq = 0.0;
    for (const auto& d : dirs) {
        const double a = center.angle_to(d);
        sq += a * a;
    }
    t.dispersion = std::sqrt(sq / dirs.size());
    return t;
}

namespace {

struct ScalarAccum {
    Node* node = nullptr;
    int count = 0;
};

void accumulate(Tape& tape, ScalarAccum& acc, Node* term) {
    acc.node = acc.node ? tinynn::add(tape, acc.node, term) : term;
    ++acc.count;
}

Node* mean_of(Tape& tape, ScalarAccum& acc) {
    if (!acc.node) throw std::logic_error("mean_of: empty accumulator");
    return tinynn::scale(tape, acc.node, 1.0 / acc.count);
}

void check_finite(const char* term, double v) {
    if (!std::isfinite(v)) throw NonFiniteLossError(term);
}

}  // namespace

std::vector<EpochLog> train_in_place(ModelState& state, const std::vector<TrainSample>& dataset,
                                     const TrainConfig& cfg, int first_epoch) {
    if (dataset.empty()) throw std::invalid_argument("train: empty dataset");
    {
        std::array<int, core::kNumEmotions> counts{};
        for (const auto& s : dataset) counts[static_cast<int>(s.label)]++;
        for (int c = 0; c < core::kNumEmotions; ++c)
            if (counts[c] == 0)
                throw std::invalid_argument(std::string("train: class missing from dataset: ") +
                                            core::to_string(static_cast<core::EmotionLabel>(c)));
    }
    cfg.weights.validate();
    const tinynn::AdamConfig adam{cfg.lr, 0.9, 0.999, 1e-8};

    std::vector<EpochLog> logs;
    std::vector<std::size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = first_epoch; epoch < first_epoch + cfg.epochs; ++epoch) {
        core::RngStream shuffle_rng(cfg.seed, 1000 + static_cast<std::uint64_t>(epoch));
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[shuffle_rng.index(i)]);

        LossComponents epoch_sum;
        int n_batches = 0;

        for (std::size_t start = 0; start < order.size(); start += cfg.batch) {
            const std::size_t end = std::min(order.size(), start + cfg.batch);
            const std::size_t bs = end - start;

            // ---- discriminator step ----
            LossComponents batch;
            {
                Tape tape;
                ParamBinder bind_d(tape, state.discriminator, true);
                ParamBinder bind_g(tape, state.generator, false);

                ScalarAccum cls_aux, cls_traj, kl_pq, kl_qp, mse_a, dtw_a, cat_ce, adv_d;
                std::vector<std::vector<double>> aux_feats, traj_feats;

                for (std::size_t bi = start; bi < end; ++bi) {
                    const TrainSample& sample = dataset[order[bi]];
                    const int y = static_cast<int>(sample.label);

                    const GeneratorNodes gen =
                        generator_graph(tape, bind_g, sample.sio, state.dims);
                    const DiscriminatorNodes d =
                        discriminator_graph(tape, bind_d, sample.sio, state.dims);

                    Node* real_cand = tape.leaf(
                        EmotionDistribution::smoothed_onehot(sample.label, cfg.smooth_hi,
                                                             cfg.smooth_lo)
                            .as_row());
                    Node* s_real = real_fake_head(tape, bind_d, d.pooled, real_cand);
                    Node* s_fake = real_fake_head(tape, bind_d, d.pooled, gen.dist);
                    Node* cat_real = categorical_head(tape, bind_d, d.pooled, real_cand);
                    Node* cat_fake = categorical_head(tape, bind_d, d.pooled, gen.dist);

                    accumulate(tape, cls_aux, tinynn::nll_of_row(tape, d.aux_dist, y));
                    accumulate(tape, cls_traj, tinynn::nll_of_row(tape, d.traj_dist, y));
                    accumulate(tape, kl_pq, tinynn::kl_divergence_op(tape, d.aux_dist, d.traj_dist));
                    accumulate(tape, kl_qp, tinynn::kl_divergence_op(tape, d.traj_dist, d.aux_dist));
                    accumulate(tape, mse_a, tinynn::mse_op(tape, d.recon, d.coords));
                    accumulate(tape, dtw_a, tinynn::dtw_op(tape, d.coords, d.recon));
                    Node* ce_pair = tinynn::scale(
                        tape,
                        tinynn::add(tape, tinynn::nll_of_row(tape, cat_real, y),
                                    tinynn::nll_of_row(tape, cat_fake, y)),
                        0.5);
                    accumulate(tape, cat_ce, ce_pair);
                    // -log(real) - log(1 - fake)
                    Node* one_minus_fake = tinynn::add_const(tape, tinynn::scale(tape, s_fake, -1.0), 1.0);
                    Node* adv_pair = tinynn::scale(
                        tape,
                        tinynn::add(tape, tinynn::log_op(tape, s_real),
                                    tinynn::log_op(tape, one_minus_fake)),
                        -1.0);
                    accumulate(tape, adv_d, adv_pair);

                    aux_feats.push_back(d.aux_neck->value.values());
                    traj_feats.push_back(d.traj_neck->value.values());
                }

                Node* m_cls_aux = mean_of(tape, cls_aux);
                Node* m_cls_traj = mean_of(tape, cls_traj);
                Node* m_kl_pq = mean_of(tape, kl_pq);
                Node* m_kl_qp = mean_of(tape, kl_qp);
                Node* m_mse = mean_of(tape, mse_a);
                Node* m_dtw = mean_of(tape, dtw_a);
                Node* m_cat = mean_of(tape, cat_ce);
                Node* m_adv_d = mean_of(tape, adv_d);

                // MI is a batch statistic with zero a.e. gradient; it enters
                // the objective as a constant offset.
                const double mi = bs >= 8 ? mutual_information_loss(aux_feats, traj_feats) : 0.0;

                Node* rec = tinynn::add(tape, tinynn::scale(tape, m_mse, cfg.weights.alpha_rec),
                                        tinynn::scale(tape, m_dtw, cfg.weights.beta_rec));
                Node* aux_cls = tinynn::add(tape, m_cls_aux,
                                            tinynn::scale(tape, m_kl_pq, cfg.weights.lambda_sup));
                Node* traj = tinynn::add(
                    tape, tinynn::add(tape, m_cls_traj, rec),
                    tinynn::scale(tape, m_kl_qp, cfg.weights.beta_sup));
                Node* ars = tinynn::add_const(tape, tinynn::add(tape, traj, aux_cls), mi);
                Node* d_total = tinynn::add(tape, ars, m_cat);
                if (!cfg.weights.dedup) {
                    d_total = tinynn::add(tape, d_total, m_dtw);
                    d_total = tinynn::add(tape, d_total, m_mse);
                    d_total = tinynn::add(tape, d_total, rec);
                }
                Node* objective = tinynn::add(tape, d_total, m_adv_d);
                check_finite("L_D_total", objective->scalar());
                tape.backward(objective);
                state.discriminator.adam_update(bind_d.collect_grads(), adam);

                batch.cls_aux = m_cls_aux->scalar();
                batch.cls_traj = m_cls_traj->scalar();
                batch.kl_pq = m_kl_pq->scalar();
                batch.kl_qp = m_kl_qp->scalar();
                batch.mi = mi;
                batch.mse = m_mse->scalar();
                batch.dtw = m_dtw->scalar();
                batch.cat_ce = m_cat->scalar();
            }

            // ---- generator step (against the updated discriminator) ----
            {
                Tape tape;
                ParamBinder bind_g(tape, state.generator, true);
                ParamBinder bind_d(tape, state.discriminator, false);

                ScalarAccum adv_g, reg;
                for (std::size_t bi = start; bi < end; ++bi) {
                    const TrainSample& sample = dataset[order[bi]];
                    const GeneratorNodes gen =
                        generator_graph(tape, bind_g, sample.sio, state.dims);
                    const DiscriminatorNodes d =
                        discriminator_graph(tape, bind_d, sample.sio, state.dims);
                    Node* s_fake = real_fake_head(tape, bind_d, d.pooled, gen.dist);
                    accumulate(tape, adv_g,
                               tinynn::scale(tape, tinynn::log_op(tape, s_fake), -1.0));
                    Node* target = tape.leaf(
                        Tensor2(1, 2, {sample.target.duration, sample.target.dispersion}));
                    accumulate(tape, reg, tinynn::mse_op(tape, gen.reg, target));
                }
                Node* m_adv_g = mean_of(tape, adv_g);
                Node* m_reg = mean_of(tape, reg);
                Node* objective = tinynn::add(tape, tinynn::scale(tape, m_reg, cfg.reg_weight),
                                              tinynn::scale(tape, m_adv_g, cfg.adv_weight));
                check_finite("L_G_total", objective->scalar());
                tape.backward(objective);
                state.generator.adam_update(bind_g.collect_grads(), adam);

                batch.adv = m_adv_g->scalar();
                batch.reg = m_reg->scalar();
            }

            compose_losses(batch, cfg.weights, cfg.reg_weight, cfg.adv_weight);  // finiteness gate
            epoch_sum.cls_aux += batch.cls_aux;
            epoch_sum.cls_traj += batch.cls_traj;
            epoch_sum.kl_pq += batch.kl_pq;
            epoch_sum.kl_qp += batch.kl_qp;
            epoch_sum.mi += batch.mi;
            epoch_sum.mse += batch.mse;
            epoch_sum.dtw += batch.dtw;
            epoch_sum.cat_ce += batch.cat_ce;
            epoch_sum.adv += batch.adv;
            epoch_sum.reg += batch.reg;
            ++n_batches;
        }

        LossComponents epoch_mean = epoch_sum;
        for (double* v : {&epoch_mean.cls_aux, &epoch_mean.cls_traj, &epoch_mean.kl_pq,
                          &epoch_mean.kl_qp, &epoch_mean.mi, &epoch_mean.mse, &epoch_mean.dtw,
                          &epoch_mean.cat_ce, &epoch_mean.adv, &epoch_mean.reg})
            *v /= n_batches;

        EpochLog log;
        log.epoch = epoch;
        log.report = compose_losses(epoch_mean, cfg.weights, cfg.reg_weight, cfg.adv_weight);
        log.train_accuracy = accuracy_on(state, dataset);
        logs.push_back(log);
    }
    return logs;
}

TrainResult train(const std::vector<TrainSample>& dataset, const TrainConfig& cfg) {
    TrainResult result{ModelState::init(cfg.dims, cfg.seed), {}};
    result.log = train_in_place(result.state, dataset, cfg);
    return result;
}

core::EmotionLabel predict(ModelState& state, const sio::SioSequence& seq) {
    const GeneratorOutput out = generator_forward(state.generator, seq, state.dims);
    return core::emotion_from_ordinal(out.dist.argmax());
}

double accuracy_on(ModelState& state, const std::vector<TrainSample>& samples) {
    if (samples.empty()) return 0.0;
    int correct = 0;
    for (const auto& s : samples)
        if (predict(state, s.sio) == s.label) ++correct;
    return static_cast<double>(correct) / samples.size();
}

void write_train_log(const std::filesystem::path& path, const std::vector<EpochLog>& log) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_train_log: cannot open " + path.string());
    for (const auto& e : log) {
        const LossReport& r = e.report;
        nlohmann::ordered_json j{
            {"epoch", e.epoch},         {"L_cls_aux", r.cls_aux}, {"L_cls_traj", r.cls_traj},
            {"L_mi", r.mi},             {"D_KL_PQ", r.kl_pq},     {"D_KL_QP", r.kl_qp},
            {"L_mse", r.mse},           {"L_dtw", r.dtw},         {"L_rec", r.rec},
            {"L_aux_cls", r.aux_cls},   {"L_traj", r.traj},       {"L_ars_total", r.ars_total},
            {"L_cat_ce", r.cat_ce},     {"L_adv", r.adv},         {"L_reg", r.reg},
            {"L_G_total", r.g_total},   {"L_D_total", r.d_total}, {"L_total", r.total},
            {"train_accuracy", e.train_accuracy}};
        out << j.dump() << '\n';
    }
}

}  // namespace gazeforge::model
