#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "gazeforge/core/config.hpp"
#include "gazeforge/core/digest.hpp"
#include "gazeforge/core/records.hpp"
#include "gazeforge/geometry/erp.hpp"
#include "gazeforge/metrics/features.hpp"
#include "gazeforge/pipeline/pipeline.hpp"
#include "gazeforge/pipeline/plots.hpp"
#include "gazeforge/simscene/scene_gen.hpp"

namespace gf = gazeforge;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitThreshold = 2;

std::uint64_t resolve_seed(const CLI::Option* seed_opt, std::uint64_t seed_flag) {
    if (seed_opt->count() > 0) return seed_flag;
    if (const char* env = std::getenv("GAZEFORGE_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw std::invalid_argument("GAZEFORGE_SEED is not an unsigned integer");
        }
    }
    return 42;
}

gf::core::Config build_config(const std::string& config_path,
                              const std::vector<std::string>& overrides) {
    auto cfg = gf::core::Config::defaults();
    if (!config_path.empty()) cfg.load_file(config_path);
    for (const auto& kv : overrides) cfg.apply_override(kv);
    return cfg;
}

void write_manifest(const fs::path& out_dir, std::uint64_t seed, const gf::core::Config& cfg) {
    gf::core::RunManifest manifest;
    manifest.seed = seed;
    manifest.config_digest = cfg.digest();
    manifest.tool_version = gf::core::kToolVersion;
    manifest.created_at = gf::core::now_iso8601();
    gf::core::write_run_manifest(out_dir / "manifest.json", manifest);
}

gf::pipeline::PipelineSpec make_spec(const gf::core::Config& cfg, std::uint64_t seed) {
    gf::pipeline::PipelineSpec spec;
    spec.config = cfg;
    spec.seed = seed;
    spec.split = cfg.get_double("pipeline.split");
    spec.workers = cfg.get_int("pipeline.workers");
    return spec;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gazeforge: synthetic contextual-gaze emotion recognition toolkit"};
    app.require_subcommand(1);

    std::uint64_t seed_flag = 42;
    std::string config_path;
    std::vector<std::string> overrides;
    auto* seed_opt = app.add_option("--seed", seed_flag, "global seed (env GAZEFORGE_SEED fallback)");
    app.add_option("--config", config_path, "JSON config file of dotted keys");
    app.add_option("--set", overrides, "override: key=value (repeatable)")->take_all();

    // ---- scene ----
    auto* scene_cmd = app.add_subcommand("scene", "generate procedural scenes");
    int scene_n = 10;
    std::string scene_out = "out/scenes";
    scene_cmd->add_option("--n", scene_n, "number of scenes");
    scene_cmd->add_option("--out", scene_out, "output directory");

    // ---- scanpaths ----
    auto* sp_cmd = app.add_subcommand("scanpaths", "generate emotion-conditioned scanpaths");
    int per_class = 50;
    std::string sp_out = "out/dataset";
    std::string policy_path;
    sp_cmd->add_option("--per-class", per_class, "episodes per emotion");
    sp_cmd->add_option("--out", sp_out, "output directory");
    sp_cmd->add_option("--policy", policy_path, "policy table file (default: builtin)");

    // ---- calibrate ----
    auto* cal_cmd = app.add_subcommand("calibrate", "run teacher-student calibration");
    std::string cal_out = "out/calibration";
    double min_improvement = -1.0;
    int cal_per_class = 20;
    cal_cmd->add_option("--out", cal_out, "output directory");
    cal_cmd->add_option("--per-class", cal_per_class, "episodes per emotion for the fit");
    cal_cmd->add_option("--min-improvement", min_improvement,
                        "exit 2 when the median improvement of biased subjects is below this");

    // ---- train ----
    auto* train_cmd = app.add_subcommand("train", "train the model on a synthetic dataset");
    std::string train_out = "out/train";
    train_cmd->add_option("--out", train_out, "output directory");

    // ---- eval ----
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint on fresh synthetic data");
    std::string eval_ckpt = "out/train/checkpoints";
    std::string eval_out = "out/eval";
    eval_cmd->add_option("--ckpt", eval_ckpt, "checkpoint directory");
    eval_cmd->add_option("--out", eval_out, "output directory");

    // ---- plot ----
    auto* plot_cmd = app.add_subcommand("plot", "emit SVG plots from dataset records");
    std::string plot_scenes, plot_scanpaths, plot_out = "out/plots";
    std::size_t plot_index = 0;
    plot_cmd->add_option("--scenes", plot_scenes, "scenes.jsonl")->required();
    plot_cmd->add_option("--scanpaths", plot_scanpaths, "scanpaths jsonl")->required();
    plot_cmd->add_option("--index", plot_index, "episode index to draw");
    plot_cmd->add_option("--out", plot_out, "output directory");

    // ---- pipeline ----
    auto* pipe_cmd = app.add_subcommand("pipeline", "run the full end-to-end pipeline");
    std::string pipe_out = "out/run";
    std::string spec_path;
    pipe_cmd->add_option("--out", pipe_out, "run directory");
    pipe_cmd->add_option("--spec", spec_path, "pipeline spec JSON (overrides --config/--set)");

    // ---- ablate ----
    auto* abl_cmd = app.add_subcommand("ablate", "sweep one pipeline axis");
    std::string abl_axis = "camera_count";
    std::vector<double> abl_values;
    std::string abl_out = "out/ablation";
    abl_cmd->add_option("--axis", abl_axis, "camera_count | projection_interval | fov_deg");
    abl_cmd->add_option("--values", abl_values, "axis values")->required()->take_all();
    abl_cmd->add_option("--out", abl_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        const std::uint64_t seed = resolve_seed(seed_opt, seed_flag);
        auto cfg = build_config(config_path, overrides);

        if (scene_cmd->parsed()) {
            gf::simscene::SceneGenOptions opts;
            opts.n_objects = cfg.get_int("scene.objects");
            opts.width = cfg.get_double("scene.width");
            opts.height = cfg.get_double("scene.height");
            opts.dynamic_fraction = cfg.get_double("scene.dynamic_fraction");
            const auto lighting = gf::core::lighting_from_string(cfg.get("scene.lighting"));
            if (!lighting) throw std::invalid_argument("bad scene.lighting");
            opts.lighting = *lighting;
            std::vector<gf::core::Scene> scenes;
            for (int i = 0; i < scene_n; ++i) {
                gf::core::RngStream r(seed, 2000 + static_cast<std::uint64_t>(i));
                scenes.push_back(gf::simscene::gen_scene(r.next_u64(), opts));
            }
            gf::core::save_dataset(fs::path(scene_out) / "scenes.jsonl", scenes);
            write_manifest(scene_out, seed, cfg);
            std::cout << "scenes: " << scenes.size() << "\n";
            return kExitOk;
        }

        if (sp_cmd->parsed()) {
            if (!policy_path.empty()) {
                // parse errors surface with file/line context
                gf::simscene::PolicyTable::load(policy_path);
                std::ifstream in(policy_path);
                std::ostringstream buf;
                buf << in.rdbuf();
            }
            auto spec = make_spec(cfg, seed);
            auto data = gf::pipeline::generate_dataset(cfg, seed, spec.workers, per_class,
                                                       spec.split);
            gf::core::save_dataset(fs::path(sp_out) / "scenes" / "scenes.jsonl", data.scenes);
            std::vector<gf::core::Scanpath> truths, observed;
            for (const auto& ep : data.episodes) {
                truths.push_back(ep.truth);
                observed.push_back(ep.observed);
            }
            gf::core::save_dataset(fs::path(sp_out) / "scanpaths" / "true.jsonl", truths);
            gf::core::save_dataset(fs::path(sp_out) / "scanpaths" / "observed.jsonl", observed);
            write_manifest(sp_out, seed, cfg);
            std::array<int, gf::core::kNumEmotions> counts{};
            for (const auto& sp : truths) counts[static_cast<int>(sp.emotion)]++;
            for (int c = 0; c < gf::core::kNumEmotions; ++c)
                std::cout << gf::core::to_string(static_cast<gf::core::EmotionLabel>(c)) << ": "
                          << counts[c] << "\n";
            return kExitOk;
        }

        if (cal_cmd->parsed()) {
            auto spec = make_spec(cfg, seed);
            auto data = gf::pipeline::generate_dataset(cfg, seed, spec.workers, cal_per_class,
                                                       spec.split);
            const auto reports = gf::pipeline::run_calibration(data, cfg);
            gf::pipeline::write_calibration_report(fs::path(cal_out) / "calibration_report.csv",
                                                   reports);
            write_manifest(cal_out, seed, cfg);
            std::vector<double> improvements;
            for (const auto& r : reports) {
                std::cout << r.subject_id << ": pre=" << r.pre_median_rad
                          << " rad post=" << r.post_median_rad
                          << " rad improvement=" << r.improvement << "\n";
                if (r.subject_id.find("identity") == std::string::npos)
                    improvements.push_back(r.improvement);
            }
            std::sort(improvements.begin(), improvements.end());
            const double med = improvements.empty()
                                   ? 0.0
                                   : improvements[improvements.size() / 2];
            std::cout << "median improvement (biased subjects): " << med << "\n";
            if (min_improvement >= 0.0 && med < min_improvement) {
                std::cerr << "median improvement " << med << " below threshold "
                          << min_improvement << "\n";
                return kExitThreshold;
            }
            return kExitOk;
        }

        if (train_cmd->parsed() || eval_cmd->parsed() || pipe_cmd->parsed()) {
            gf::pipeline::PipelineSpec spec =
                (pipe_cmd->parsed() && !spec_path.empty())
                    ? gf::pipeline::PipelineSpec::load(spec_path)
                    : make_spec(cfg, seed);
            std::string out = pipe_cmd->parsed() ? pipe_out
                              : train_cmd->parsed() ? train_out
                                                    : eval_out;
            if (eval_cmd->parsed()) {
                // reuse the trained checkpoint: rebuild the dataset, evaluate only
                gf::model::ModelState state = gf::model::ModelState::load(eval_ckpt);
                auto data = gf::pipeline::generate_dataset(spec.config, spec.seed, spec.workers,
                                                           spec.config.get_int("pipeline.per_class"),
                                                           spec.split);
                const auto cal = gf::pipeline::run_calibration(data, spec.config);
                const auto corrected = gf::pipeline::corrected_scanpaths(data, cal);
                std::vector<int> truth, predicted;
                for (std::size_t e : data.test_indices) {
                    const auto& ep = data.episodes[e];
                    try {
                        const auto s = gf::sio::build_sio(
                            data.scenes[ep.scene_index], data.rasters[ep.scene_index],
                            corrected[e], spec.config.get_int("sio.patch_size"));
                        truth.push_back(static_cast<int>(ep.truth.emotion));
                        predicted.push_back(static_cast<int>(gf::model::predict(state, s)));
                    } catch (const gf::sio::EmptySioError&) {
                    }
                }
                const auto report = gf::metrics::classification_report(truth, predicted);
                gf::metrics::write_metrics_csv(fs::path(out) / "metrics.csv", report, 0.0, 0.0);
                write_manifest(out, spec.seed, spec.config);
                std::cout << "accuracy: " << report.accuracy << "\nmacro_f1: " << report.macro_f1
                          << "\n";
                return kExitOk;
            }
            const auto result = gf::pipeline::run_pipeline(spec, out);
            std::cout << "run: " << result.run_dir.string() << "\n"
                      << "accuracy: " << result.accuracy << "\n"
                      << "macro_f1: " << result.macro_f1 << "\n"
                      << "cawf1: " << result.cawf1 << "\n"
                      << "calibration median improvement: "
                      << result.calibration_median_improvement << "\n"
                      << "run digest: " << result.run_digest << "\n";
            return kExitOk;
        }

        if (plot_cmd->parsed()) {
            const auto scenes = gf::core::load_scenes(plot_scenes);
            const auto paths = gf::core::load_scanpaths(plot_scanpaths);
            if (paths.empty()) throw std::invalid_argument("plot: no scanpaths in input");
            if (plot_index >= paths.size())
                throw std::invalid_argument("plot: --index out of range");
            const auto& sp = paths[plot_index];
            const gf::core::Scene* scene = nullptr;
            for (const auto& s : scenes)
                if (s.id == sp.scene_id) scene = &s;
            if (!scene) throw std::invalid_argument("plot: scene " + sp.scene_id + " not found");
            gf::pipeline::write_text_file(fs::path(plot_out) / "scanpath.svg",
                                          gf::pipeline::svg_scanpath(*scene, sp));
            write_manifest(plot_out, seed, cfg);
            std::cout << "wrote " << (fs::path(plot_out) / "scanpath.svg").string() << "\n";
            return kExitOk;
        }

        if (abl_cmd->parsed()) {
            auto spec = make_spec(cfg, seed);
            const auto rows = gf::pipeline::ablation_sweep(spec, abl_axis, abl_values, abl_out);
            for (const auto& r : rows)
                std::cout << r.axis << "=" << r.value
                          << " tri_median=" << r.result.triangulation_median_m
                          << " gaze_acc=" << r.result.sampled_gaze_accuracy
                          << " accuracy=" << r.result.accuracy << "\n";
            write_manifest(abl_out, seed, cfg);
            return kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}
