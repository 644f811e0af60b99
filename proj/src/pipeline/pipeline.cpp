#include "gazeforge/pipeline/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <thread>

#include "gazeforge/calib/teacher.hpp"
#include "gazeforge/core/digest.hpp"
#include "gazeforge/core/records.hpp"
#include "gazeforge/geometry/erp.hpp"
#include "gazeforge/metrics/features.hpp"
#include "gazeforge/pipeline/plots.hpp"
#include "gazeforge/simscene/multicam.hpp"
#include "gazeforge/simscene/scene_gen.hpp"

namespace gazeforge::pipeline {

const std::vector<std::string> kPipelineStages = {
    "rig",  "multicam", "fov",  "dataset", "calibration",
    "sio",  "train",    "eval", "plots",   "manifest"};

void PipelineSpec::validate() const {
    if (stages != kPipelineStages)
        throw std::invalid_argument("PipelineSpec: stages must be the fixed canonical order");
    if (!(split > 0.0 && split < 1.0))
        throw std::invalid_argument("PipelineSpec: split must lie in (0,1)");
    if (workers < 1) throw std::invalid_argument("PipelineSpec: workers must be >= 1");
}

PipelineSpec PipelineSpec::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("PipelineSpec: cannot open " + path.string());
    const auto j = nlohmann::ordered_json::parse(in);
    PipelineSpec spec;
    if (j.contains("stages")) spec.stages = j.at("stages").get<std::vector<std::string>>();
    if (j.contains("split")) spec.split = j.at("split").get<double>();
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("workers")) spec.workers = j.at("workers").get<int>();
    if (j.contains("config"))
        for (auto it = j.at("config").begin(); it != j.at("config").end(); ++it)
            spec.config.set(it.key(), it.value().is_string() ? it.value().get<std::string>()
                                                             : it.value().dump());
    spec.validate();
    return spec;
}

void PipelineSpec::save(const std::filesystem::path& path) const {
    nlohmann::ordered_json j{{"stages", stages},
                             {"split", split},
                             {"seed", seed},
                             {"workers", workers},
                             {"config", config.to_json()}};
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    out << j.dump(2) << '\n';
}

SyntheticDataset generate_dataset(const core::Config& cfg, std::uint64_t seed, int workers,
                                  int per_class, double split) {
    SyntheticDataset data;

    const int n_scenes = cfg.get_int("pipeline.scenes");
    simscene::SceneGenOptions scene_opts;
    scene_opts.n_objects = cfg.get_int("scene.objects");
    scene_opts.width = cfg.get_double("scene.width");
    scene_opts.height = cfg.get_double("scene.height");
    scene_opts.dynamic_fraction = cfg.get_double("scene.dynamic_fraction");
    const auto lighting = core::lighting_from_string(cfg.get("scene.lighting"));
    if (!lighting) throw std::invalid_argument("generate_dataset: bad scene.lighting");
    scene_opts.lighting = *lighting;
    for (int i = 0; i < n_scenes; ++i) {
        core::RngStream scene_seed_rng(seed, 2000 + static_cast<std::uint64_t>(i));
        data.scenes.push_back(simscene::gen_scene(scene_seed_rng.next_u64(), scene_opts));
        data.rasters.push_back(simscene::render_scene(data.scenes.back()));
    }

    const int n_subjects = cfg.get_int("pipeline.subjects");
    const double bias_deg = cfg.get_double("subject.bias_deg");
    const double noise_deg = cfg.get_double("subject.noise_deg");
    for (int s = 0; s < n_subjects; ++s) {
        if (s == 0) {
            auto p = simscene::SubjectProfile::identity("subject-0-identity");
            p.noise_sigma = noise_deg * M_PI / 180.0;
            p.tags = {"identity"};
            data.subjects.push_back(p);
        } else {
            core::RngStream sub_rng(seed, 500 + static_cast<std::uint64_t>(s));
            auto p = simscene::SubjectProfile::seeded("subject-" + std::to_string(s),
                                                      sub_rng.next_u64(), bias_deg, noise_deg);
            p.tags = {"biased"};
            data.subjects.push_back(p);
        }
    }

    const auto table = simscene::PolicyTable::builtin_default();
    simscene::ScanpathGenOptions gen_opts;
    gen_opts.n_fix = cfg.get_int("scanpath.n_fix");
    gen_opts.interval = cfg.get_double("scanpath.interval");
    gen_opts.temperature = cfg.get_double("scanpath.temperature");
    gen_opts.jitter = cfg.get_double("scanpath.jitter");
    gen_opts.gap_prob = cfg.get_double("scanpath.gap_prob");

    const std::size_t total = static_cast<std::size_t>(core::kNumEmotions) * per_class;
    data.episodes.resize(total);
    auto generate_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t e = begin; e < end; ++e) {
            const auto label = static_cast<core::EmotionLabel>(e / per_class);
            Episode ep;
            ep.scene_index = e % data.scenes.size();
            ep.subject_index = e % data.subjects.size();
            core::RngStream gen_rng(seed, 3000 + static_cast<std::uint64_t>(e));
            ep.truth = simscene::gen_scanpath(data.scenes[ep.scene_index], label,
                                              table.for_emotion(label),
                                              data.subjects[ep.subject_index], gen_opts, gen_rng);
            core::RngStream bias_rng(seed, 4000 + static_cast<std::uint64_t>(e));
            ep.observed = simscene::apply_bias(ep.truth, data.subjects[ep.subject_index], bias_rng);
            data.episodes[e] = std::move(ep);
        }
    };
    if (workers <= 1) {
        generate_range(0, total);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (total + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const std::size_t begin = std::min(total, w * chunk);
            const std::size_t end = std::min(total, begin + chunk);
            if (begin < end) pool.emplace_back(generate_range, begin, end);
        }
        for (auto& t : pool) t.join();
    }

    // stratified split: contiguous per-class blocks make it exact
    const int n_train = static_cast<int>(std::lround(per_class * split));
    for (int c = 0; c < core::kNumEmotions; ++c)
        for (int q = 0; q < per_class; ++q) {
            const std::size_t e = static_cast<std::size_t>(c) * per_class + q;
            (q < n_train ? data.train_indices : data.test_indices).push_back(e);
        }
    return data;
}

namespace {

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double angular_error(const core::ErpPoint& a, const core::ErpPoint& b) {
    return geometry::erp_to_dir(a).angle_to(geometry::erp_to_dir(b));
}

}  // namespace

std::vector<CalibrationSubjectReport> run_calibration(const SyntheticDataset& data,
                                                      const core::Config& cfg) {
    const double hint_radius = cfg.get_double("calib.hint_radius_deg") * M_PI / 180.0;
    const double window_s = cfg.get_double("calib.window_s");
    const double window_weight = cfg.get_double("calib.window_weight");

    std::vector<CalibrationSubjectReport> reports;
    for (std::size_t s = 0; s < data.subjects.size(); ++s) {
        std::vector<calib::CalibrationPair> pairs;
        for (std::size_t e : data.train_indices) {
            const Episode& ep = data.episodes[e];
            if (ep.subject_index != s) continue;
            const core::Scene& scene = data.scenes[ep.scene_index];
            const auto window =
                calib::scene_transition_window(ep.truth.fixations.front().t_start, window_s);
            for (std::size_t j = 0; j < ep.truth.fixations.size(); ++j) {
                // head direction tracks gaze at movement boundaries
                const auto gt_dir = geometry::erp_to_dir(ep.truth.fixations[j].point);
                const calib::HintRegion hint{gt_dir, hint_radius};
                const core::ErpPoint teacher_pt = calib::teacher_fixation(scene, hint);
                const auto teacher_dir = geometry::erp_to_dir(teacher_pt);
                const auto obs_dir = geometry::erp_to_dir(ep.observed.fixations[j].point);
                calib::CalibrationPair pair;
                // unwrap the observed longitude into the teacher's window so
                // the seam never fabricates a 2-pi outlier
                pair.observed = {teacher_dir.lon() +
                                     geometry::wrap_longitude(obs_dir.lon() - teacher_dir.lon()),
                                 obs_dir.lat()};
                pair.teacher = {teacher_dir.lon(), teacher_dir.lat()};
                pair.weight =
                    calib::in_transition_window(ep.truth.fixations[j].t_start, window)
                        ? window_weight
                        : 1.0;
                pairs.push_back(pair);
            }
        }

        CalibrationSubjectReport report;
        report.subject_id = data.subjects[s].id;
        report.n_pairs = pairs.size();
        report.model = calib::calibrate_student(pairs);

        std::vector<double> pre, post;
        for (std::size_t e : data.test_indices) {
            const Episode& ep = data.episodes[e];
            if (ep.subject_index != s) continue;
            for (std::size_t j = 0; j < ep.truth.fixations.size(); ++j) {
                const auto& truth_pt = ep.truth.fixations[j].point;
                const auto& obs_pt = ep.observed.fixations[j].point;
                pre.push_back(angular_error(obs_pt, truth_pt));
                const auto obs_dir = geometry::erp_to_dir(obs_pt);
                const auto corrected =
                    report.model.apply(obs_dir.lon(), obs_dir.lat());
                const auto corrected_dir = geometry::SphereDir::from_angles(
                    geometry::wrap_longitude(corrected[0]),
                    std::clamp(corrected[1], -M_PI / 2 + 1e-9, M_PI / 2 - 1e-9));
                post.push_back(geometry::erp_to_dir(truth_pt).angle_to(corrected_dir));
            }
        }
        report.pre_median_rad = median(pre);
        report.post_median_rad = median(post);
        report.improvement = report.pre_median_rad > 0.0
                                 ? (report.pre_median_rad - report.post_median_rad) /
                                       report.pre_median_rad
                                 : 0.0;
        reports.push_back(std::move(report));
    }
    return reports;
}

void write_calibration_report(const std::filesystem::path& path,
                              const std::vector<CalibrationSubjectReport>& reports) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_calibration_report: cannot open " + path.string());
    out << "subject,n_pairs,pre_median_rad,post_median_rad,improvement,a00,a01,a10,a11,b0,b1,"
           "residual_rms\n";
    char buf[320];
    for (const auto& r : reports) {
        std::snprintf(buf, sizeof(buf),
                      "%s,%zu,%.9f,%.9f,%.6f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f\n",
                      r.subject_id.c_str(), r.n_pairs, r.pre_median_rad, r.post_median_rad,
                      r.improvement, r.model.a[0][0], r.model.a[0][1], r.model.a[1][0],
                      r.model.a[1][1], r.model.b[0], r.model.b[1], r.model.residual_rms);
        out << buf;
    }
}

std::vector<core::Scanpath> corrected_scanpaths(const SyntheticDataset& data,
                                                const std::vector<CalibrationSubjectReport>& cal) {
    std::vector<core::Scanpath> out;
    out.reserve(data.episodes.size());
    for (const auto& ep : data.episodes) {
        const auto& model = cal.at(ep.subject_index).model;
        core::Scanpath corrected = ep.observed;
        for (auto& f : corrected.fixations) {
            const auto dir = geometry::erp_to_dir(f.point);
            const auto angles = model.apply(dir.lon(), dir.lat());
            const auto clamped_lat = std::clamp(angles[1], -M_PI / 2 + 1e-9, M_PI / 2 - 1e-9);
            f.point = geometry::dir_to_erp(
                geometry::SphereDir::from_angles(geometry::wrap_longitude(angles[0]), clamped_lat),
                f.point.width, f.point.height);
        }
        out.push_back(std::move(corrected));
    }
    return out;
}

double sampled_gaze_accuracy(const SyntheticDataset& data, double interval) {
    if (!(interval > 0.0)) throw std::invalid_argument("sampled_gaze_accuracy: bad interval");
    long hits = 0, total = 0;
    for (const auto& ep : data.episodes) {
        const core::Scene& scene = data.scenes[ep.scene_index];
        for (std::size_t j = 0; j < ep.truth.fixations.size(); ++j) {
            const auto& gt = ep.truth.fixations[j];
            ++total;
            // first sampling tick inside the fixation span, if any
            const long k = static_cast<long>(std::ceil(gt.t_start / interval - 1e-9));
            const double t = k * interval;
            if (t >= gt.t_start + gt.duration - 1e-9) continue;  // fixation missed entirely
            const auto* obj = scene.find_object(gt.target_object);
            if (!obj) continue;
            const auto& observed_pt = ep.observed.fixations[j].point;
            if (obj->bbox.contains(observed_pt.u, observed_pt.v)) ++hits;
        }
    }
    return total > 0 ? static_cast<double>(hits) / total : 0.0;
}

PipelineResult run_pipeline(const PipelineSpec& spec, const std::filesystem::path& run_dir) {
    spec.validate();
    const core::Config& cfg = spec.config;
    std::filesystem::create_directories(run_dir);

    PipelineResult result;
    result.run_dir = run_dir;
    std::string stage = "rig";
    try {
        // --- rig ---
        geometry::CameraRig rig = geometry::make_ring_rig(
            cfg.get_int("rig.cameras"), cfg.get_double("rig.radius"), cfg.get_double("rig.height"),
            cfg.get_double("rig.fx"), cfg.get_double("rig.fy"), cfg.get_double("rig.cx"),
            cfg.get_double("rig.cy"), cfg.get_double("rig.k"), cfg.get_double("rig.rate"));
        geometry::save_rig(run_dir / "rig.txt", rig);

        // --- multicam: triangulated subject positions ---
        stage = "multicam";
        {
            std::ofstream tri(run_dir / "triangulation.csv", std::ios::binary);
            tri << "point,error_m,rms_px,status\n";
            std::vector<double> errors;
            int coverage_errors = 0;
            core::RngStream pos_rng(spec.seed, 600);
            const double height = cfg.get_double("rig.height");
            const double noise = cfg.get_double("rig.pixel_noise");
            for (int k = 0; k < 32; ++k) {
                const geometry::Vec3 head{pos_rng.uniform(-0.5, 0.5), pos_rng.uniform(-0.5, 0.5),
                                          height + pos_rng.uniform(-0.2, 0.2)};
                core::RngStream noise_rng(spec.seed, 700 + static_cast<std::uint64_t>(k));
                char line[160];
                try {
                    const auto obs = simscene::simulate_multicam(rig, head, noise, noise_rng);
                    std::vector<std::pair<geometry::CameraModel, geometry::Vec2>> tri_obs;
                    for (const auto& o : obs)
                        tri_obs.emplace_back(rig.cameras[o.camera_index], o.pixel);
                    const auto sol = geometry::triangulate(tri_obs);
                    const double err = (sol.point - head).norm();
                    errors.push_back(err);
                    std::snprintf(line, sizeof(line), "%d,%.9f,%.6f,ok\n", k, err,
                                  sol.rms_reprojection_px);
                } catch (const simscene::CoverageError&) {
                    ++coverage_errors;
                    std::snprintf(line, sizeof(line), "%d,,,coverage_error\n", k);
                } catch (const geometry::DegenerateGeometryError&) {
                    ++coverage_errors;
                    std::snprintf(line, sizeof(line), "%d,,,degenerate\n", k);
                }
                tri << line;
            }
            tri << "coverage_errors," << coverage_errors << ",,\n";
            result.triangulation_median_m = errors.empty()
                                                ? std::numeric_limits<double>::infinity()
                                                : median(errors);
        }

        // --- dataset ---
        stage = "dataset";
        SyntheticDataset data = generate_dataset(cfg, spec.seed, spec.workers,
                                                 cfg.get_int("pipeline.per_class"), spec.split);
        core::save_dataset(run_dir / "scenes" / "scenes.jsonl", data.scenes);
        {
            std::vector<core::Scanpath> truths, observed;
            for (const auto& ep : data.episodes) {
                truths.push_back(ep.truth);
                observed.push_back(ep.observed);
            }
            core::save_dataset(run_dir / "scanpaths" / "true.jsonl", truths);
            core::save_dataset(run_dir / "scanpaths" / "observed.jsonl", observed);
            nlohmann::ordered_json split_j{{"train", data.train_indices},
                                           {"test", data.test_indices}};
            std::ofstream split_out(run_dir / "split.json");
            split_out << split_j.dump(2) << '\n';
        }
        result.sampled_gaze_accuracy =
            sampled_gaze_accuracy(data, cfg.get_double("pipeline.sample_interval"));

        // --- fov demo patch on the first episode's first fixation ---
        stage = "fov";
        {
            const Episode& ep = data.episodes.front();
            const auto dir = geometry::erp_to_dir(ep.truth.fixations.front().point);
            const auto patch =
                geometry::extract_fov(data.rasters[ep.scene_index], dir, cfg.get_double("fov.deg"),
                                      cfg.get_int("fov.out"), cfg.get_int("fov.out"));
            patch.patch.save_ppm(run_dir / "fov_patch.ppm");
        }

        // --- calibration ---
        stage = "calibration";
        const auto cal_reports = run_calibration(data, cfg);
        write_calibration_report(run_dir / "calibration_report.csv", cal_reports);
        {
            std::vector<double> improvements;
            for (const auto& r : cal_reports)
                if (r.subject_id.find("identity") == std::string::npos)
                    improvements.push_back(r.improvement);
            result.calibration_median_improvement = median(improvements);
        }
        const auto corrected = corrected_scanpaths(data, cal_reports);
        core::save_dataset(run_dir / "scanpaths" / "corrected.jsonl", corrected);

        // --- sio ---
        stage = "sio";
        const int patch_size = cfg.get_int("sio.patch_size");
        std::vector<model::TrainSample> train_samples, test_samples;
        std::vector<sio::SioSequence> train_sios, test_sios;
        std::vector<std::size_t> test_episode_of_sample;
        int dropped = 0;
        auto build_samples = [&](const std::vector<std::size_t>& indices,
                                 std::vector<model::TrainSample>& out,
                                 std::vector<sio::SioSequence>& sio_out, bool remember) {
            for (std::size_t e : indices) {
                const Episode& ep = data.episodes[e];
                try {
                    model::TrainSample sample;
                    sample.sio = sio::build_sio(data.scenes[ep.scene_index],
                                                data.rasters[ep.scene_index], corrected[e],
                                                patch_size);
                    sample.label = ep.truth.emotion;
                    sample.target = model::regression_target(corrected[e]);
                    sio_out.push_back(sample.sio);
                    out.push_back(std::move(sample));
                    if (remember) test_episode_of_sample.push_back(e);
                } catch (const sio::EmptySioError&) {
                    ++dropped;
                }
            }
        };
        build_samples(data.train_indices, train_samples, train_sios, false);
        build_samples(data.test_indices, test_samples, test_sios, true);
        sio::save_sio_records(run_dir / "sio" / "train.jsonl", train_sios);
        sio::save_sio_records(run_dir / "sio" / "test.jsonl", test_sios);

        // --- train ---
        stage = "train";
        model::TrainConfig tc = model::TrainConfig::from_config(cfg, spec.seed);
        model::TrainResult trained = model::train(train_samples, tc);
        trained.state.save(run_dir / "checkpoints");
        model::write_train_log(run_dir / "train_log.jsonl", trained.log);

        // --- eval ---
        stage = "eval";
        {
            std::vector<int> truth, predicted;
            std::vector<metrics::EvalRecord> records;
            metrics::FccConfig fcc_cfg;
            fcc_cfg.alpha = cfg.get_double("metrics.alpha_fcc");
            fcc_cfg.beta = cfg.get_double("metrics.beta_fcc");
            fcc_cfg.window_radius = cfg.get_int("metrics.window");
            fcc_cfg.extractor = cfg.get("metrics.extractor");

            std::map<std::size_t, metrics::FeaturePair> scene_env_cache;
            for (std::size_t i = 0; i < test_samples.size(); ++i) {
                const auto& sample = test_samples[i];
                const std::size_t e = test_episode_of_sample[i];
                const Episode& ep = data.episodes[e];
                const auto gen_out =
                    model::generator_forward(trained.state.generator, sample.sio,
                                             trained.state.dims);
                truth.push_back(static_cast<int>(sample.label));
                predicted.push_back(gen_out.dist.argmax());

                metrics::EvalRecord rec;
                rec.true_label = sample.label;
                rec.pred_dist = gen_out.dist;
                rec.gaze_point = corrected[e].fixations.front().point;
                rec.scene_id = sample.sio.scene_id;
                const auto attended = metrics::render_attended(
                    data.scenes[ep.scene_index], data.rasters[ep.scene_index], sample.sio);
                const auto v = metrics::extract_features(attended, rec.gaze_point, fcc_cfg);
                rec.v_local = v.local;
                rec.v_global = v.global;
                const auto e_feat = metrics::extract_features(data.rasters[ep.scene_index],
                                                              rec.gaze_point, fcc_cfg);
                rec.e_local = e_feat.local;
                rec.e_global = e_feat.global;
                records.push_back(std::move(rec));
            }

            const auto report = metrics::classification_report(truth, predicted);
            const auto fcc_res = metrics::fcc(records, fcc_cfg);
            std::map<core::EmotionLabel, double> class_f1;
            for (int c = 0; c < core::kNumEmotions; ++c)
                class_f1[static_cast<core::EmotionLabel>(c)] = report.f1[c];
            const double caw = metrics::cawf1(records, class_f1, fcc_res.per_record);
            metrics::write_metrics_csv(run_dir / "metrics.csv", report, caw, fcc_res.mean);

            std::map<std::string, std::vector<metrics::PrPoint>> curves;
            for (int c = 0; c < core::kNumEmotions; ++c) {
                std::vector<int> binary;
                std::vector<double> scores;
                for (std::size_t i = 0; i < records.size(); ++i) {
                    binary.push_back(truth[i] == c ? 1 : 0);
                    scores.push_back(records[i].pred_dist.p[c]);
                }
                if (std::count(binary.begin(), binary.end(), 1) > 0)
                    curves[core::to_string(static_cast<core::EmotionLabel>(c))] =
                        metrics::pr_curve(binary, scores);
            }
            metrics::write_pr_csv(run_dir / "pr.csv", curves);

            result.accuracy = report.accuracy;
            result.macro_f1 = report.macro_f1;
            result.cawf1 = caw;

            // --- plots ---
            stage = "plots";
            if (!test_episode_of_sample.empty()) {
                const std::size_t e = test_episode_of_sample.front();
                write_text_file(run_dir / "plots" / "scanpath.svg",
                                svg_scanpath(data.scenes[data.episodes[e].scene_index],
                                             corrected[e]));
            }
            write_text_file(run_dir / "plots" / "confusion.svg", svg_confusion(report));
            write_text_file(run_dir / "plots" / "pr.svg", svg_pr(curves));

            nlohmann::ordered_json summary{
                {"dropped_empty_sio", dropped},
                {"triangulation_median_m", result.triangulation_median_m},
                {"calibration_median_improvement", result.calibration_median_improvement},
                {"sampled_gaze_accuracy", result.sampled_gaze_accuracy},
                {"accuracy", result.accuracy},
                {"macro_f1", result.macro_f1},
                {"cawf1", result.cawf1}};
            std::ofstream sum_out(run_dir / "summary.json");
            sum_out << summary.dump(2) << '\n';
        }

        // --- manifest ---
        stage = "manifest";
        result.run_digest = core::digest_directory(run_dir, {"manifest.json"});
        core::RunManifest manifest;
        manifest.seed = spec.seed;
        manifest.config_digest = cfg.digest();
        manifest.tool_version = core::kToolVersion;
        manifest.created_at = core::now_iso8601();
        core::write_run_manifest(run_dir / "manifest.json", manifest,
                                 {{"run_digest", result.run_digest}});
    } catch (const PipelineStageError&) {
        throw;
    } catch (const std::exception& e) {
        throw PipelineStageError(stage, e.what());
    }
    return result;
}

std::vector<AblationRow> ablation_sweep(const PipelineSpec& base, const std::string& axis,
                                        const std::vector<double>& values,
                                        const std::filesystem::path& out_dir) {
    if (values.empty()) throw std::invalid_argument("ablation_sweep: no axis values");
    std::string key;
    if (axis == "camera_count") key = "rig.cameras";
    else if (axis == "projection_interval") key = "pipeline.sample_interval";
    else if (axis == "fov_deg") key = "fov.deg";
    else throw std::invalid_argument("ablation_sweep: unknown axis '" + axis + "'");

    std::vector<AblationRow> rows;
    for (double value : values) {
        if (axis == "camera_count" &&
            (value < 2 || value != std::floor(value)))
            throw std::invalid_argument("ablation_sweep: camera_count values must be integers >= 2");
        if (axis == "projection_interval" && !(value > 0.0))
            throw std::invalid_argument("ablation_sweep: projection_interval must be > 0");
        if (axis == "fov_deg" && !(value > 0.0 && value < 180.0))
            throw std::invalid_argument("ablation_sweep: fov_deg must lie in (0,180)");
        PipelineSpec spec = base;
        char formatted[32];
        std::snprintf(formatted, sizeof(formatted), "%g", value);
        spec.config.set(key, formatted);
        AblationRow row;
        row.axis = axis;
        row.value = value;
        row.result = run_pipeline(spec, out_dir / (axis + "-" + formatted));
        rows.push_back(std::move(row));
    }
    write_ablation_table(out_dir / "ablation.csv", rows);
    return rows;
}

void write_ablation_table(const std::filesystem::path& path,
                          const std::vector<AblationRow>& rows) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_ablation_table: cannot open " + path.string());
    out << "axis,value,triangulation_median_m,sampled_gaze_accuracy,accuracy,macro_f1,cawf1\n";
    char line[256];
    for (const auto& r : rows) {
        std::snprintf(line, sizeof(line), "%s,%g,%.9f,%.6f,%.6f,%.6f,%.6f\n", r.axis.c_str(),
                      r.value, r.result.triangulation_median_m, r.result.sampled_gaze_accuracy,
                      r.result.accuracy, r.result.macro_f1, r.result.cawf1);
        out << line;
    }
}

}  // namespace gazeforge::pipeline
