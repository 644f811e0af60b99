#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <vector>

#include "gazeforge/core/types.hpp"
#include "gazeforge/model/losses.hpp"

namespace gazeforge::metrics {

// Per-sample bundle consumed by FCC / cawF1.
struct EvalRecord {
    core::EmotionLabel true_label = core::EmotionLabel::Angry;
    model::EmotionDistribution pred_dist;
    core::ErpPoint gaze_point;
    std::string scene_id;
    std::vector<double> v_local, v_global;  // model-attended features
    std::vector<double> e_local, e_global;  // environment features
};

struct FccConfig {
    double alpha = 0.5;
    double beta = 0.5;
    int window_radius = 48;  // pixels
    std::string extractor = "hist48";

    void validate() const;  // alpha + beta = 1, both >= 0
};

// Eq. 3 indicator: 1 iff some box contains the point (boundaries inclusive).
int gaze_accuracy(const core::ErpPoint& p, const std::vector<core::BoundingBox>& boxes);

// zero vectors read as similarity 0
double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

struct FccResult {
    std::vector<double> per_record;
    double mean = 0.0;
};

FccResult fcc(const std::vector<EvalRecord>& records, const FccConfig& config);

// cawF1 = sum FCC_i * bF1_i / sum FCC_i where bF1_i is the one-vs-rest F1 of
// record i's true class over the whole set. `strict` switches bF1_i to the
// 0/1 correctness indicator instead.
double cawf1(const std::vector<EvalRecord>& records,
             const std::map<core::EmotionLabel, double>& per_class_f1,
             const std::vector<double>& fcc_scores);
double cawf1_strict(const std::vector<EvalRecord>& records, const std::vector<double>& fcc_scores);

struct ClassificationReport {
    double accuracy = 0.0;
    std::array<double, core::kNumEmotions> precision{};
    std::array<double, core::kNumEmotions> recall{};
    std::array<double, core::kNumEmotions> f1{};
    double macro_f1 = 0.0;
    // rows = true class, cols = predicted
    std::array<std::array<int, core::kNumEmotions>, core::kNumEmotions> confusion{};
    std::array<std::array<double, core::kNumEmotions>, core::kNumEmotions> confusion_rows{};
};

ClassificationReport classification_report(const std::vector<int>& truth,
                                           const std::vector<int>& predicted);

struct PrPoint {
    double threshold = 0.0;
    double recall = 0.0;
    double precision = 0.0;
};

// One point per distinct score threshold, recall non-decreasing.
std::vector<PrPoint> pr_curve(const std::vector<int>& truth_binary,
                              const std::vector<double>& scores);

// CSV emitters: (metric, class, value) rows plus a confusion block.
void write_metrics_csv(const std::filesystem::path& path, const ClassificationReport& report,
                       double cawf1_value, double mean_fcc);
void write_pr_csv(const std::filesystem::path& path,
                  const std::map<std::string, std::vector<PrPoint>>& curves);

}  // namespace gazeforge::metrics
