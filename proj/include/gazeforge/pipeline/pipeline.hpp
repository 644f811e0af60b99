#pragma once

#include <filesystem>
#include <map>
#include <vector>

#include "gazeforge/calib/student.hpp"
#include "gazeforge/core/config.hpp"
#include "gazeforge/core/types.hpp"
#include "gazeforge/model/train.hpp"
#include "gazeforge/simscene/scanpath_gen.hpp"

namespace gazeforge::pipeline {

class PipelineStageError : public std::runtime_error {
public:
    PipelineStageError(const std::string& stage, const std::string& what)
        : std::runtime_error("stage " + stage + ": " + what), stage_(stage) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

extern const std::vector<std::string> kPipelineStages;

struct PipelineSpec {
    std::vector<std::string> stages = kPipelineStages;
    double split = 0.7;  // train fraction
    core::Config config = core::Config::defaults();
    std::uint64_t seed = 42;
    int workers = 1;

    void validate() const;
    static PipelineSpec load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;
};

// One episode: ground-truth scanpath, biased observation, owning scene.
struct Episode {
    core::Scanpath truth;
    core::Scanpath observed;
    std::size_t scene_index = 0;
    std::size_t subject_index = 0;
};

struct SyntheticDataset {
    std::vector<core::Scene> scenes;
    std::vector<core::Raster> rasters;
    std::vector<simscene::SubjectProfile> subjects;
    std::vector<Episode> episodes;
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
};

// Deterministic in (config, seed) and in the worker count: episode i always
// draws from rng_stream(seed, episode-derived ids).
SyntheticDataset generate_dataset(const core::Config& cfg, std::uint64_t seed, int workers,
                                  int per_class, double split);

struct CalibrationSubjectReport {
    std::string subject_id;
    std::size_t n_pairs = 0;
    double pre_median_rad = 0.0;
    double post_median_rad = 0.0;
    double improvement = 0.0;  // (pre - post) / pre
    calib::StudentModel model;
};

// Teacher-student calibration per subject: pairs from train episodes,
// held-out error from test episodes.
std::vector<CalibrationSubjectReport> run_calibration(const SyntheticDataset& data,
                                                      const core::Config& cfg);

void write_calibration_report(const std::filesystem::path& path,
                              const std::vector<CalibrationSubjectReport>& reports);

// Observed scanpaths with the per-subject student correction applied.
std::vector<core::Scanpath> corrected_scanpaths(const SyntheticDataset& data,
                                                const std::vector<CalibrationSubjectReport>& cal);

struct PipelineResult {
    std::filesystem::path run_dir;
    double triangulation_median_m = 0.0;
    double calibration_median_improvement = 0.0;
    double sampled_gaze_accuracy = 0.0;
    double accuracy = 0.0;
    double macro_f1 = 0.0;
    double cawf1 = 0.0;
    std::string run_digest;
};

// Executes every stage into run_dir; any failure halts with the stage name.
PipelineResult run_pipeline(const PipelineSpec& spec, const std::filesystem::path& run_dir);

// Fraction of ground-truth fixations that a gaze trace sampled every
// `interval` seconds recovers inside the target object's box.
double sampled_gaze_accuracy(const SyntheticDataset& data, double interval);

struct AblationRow {
    std::string axis;
    double value = 0.0;
    PipelineResult result;
};

// One reduced pipeline run per axis value, shared seed, merged table.
std::vector<AblationRow> ablation_sweep(const PipelineSpec& base, const std::string& axis,
                                        const std::vector<double>& values,
                                        const std::filesystem::path& out_dir);

void write_ablation_table(const std::filesystem::path& path, const std::vector<AblationRow>& rows);

}  // namespace gazeforge::pipeline
