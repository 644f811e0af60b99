#include "gazeforge/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace gazeforge::metrics {

void FccConfig::validate() const {
    if (!(alpha >= 0.0) || !(beta >= 0.0))
        throw std::invalid_argument("FccConfig: weights must be >= 0");
    if (std::abs(alpha + beta - 1.0) > 1e-9)
        throw std::invalid_argument("FccConfig: alpha + beta must equal 1");
    if (window_radius < 1) throw std::invalid_argument("FccConfig: window radius must be >= 1");
}

int gaze_accuracy(const core::ErpPoint& p, const std::vector<core::BoundingBox>& boxes) {
    for (const auto& box : boxes)
        if (box.contains(p.u, p.v)) return 1;
    return 0;
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("cosine_similarity: dim mismatch");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na <= 0.0 || nb <= 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

FccResult fcc(const std::vector<EvalRecord>& records, const FccConfig& config) {
    config.validate();
    FccResult out;
    out.per_record.reserve(records.size());
    double sum = 0.0;
    for (const auto& r : records) {
        const double score = config.alpha * cosine_similarity(r.v_local, r.e_local) +
                             config.beta * cosine_similarity(r.v_global, r.e_global);
        out.per_record.push_back(score);
        sum += score;
    }
    out.mean = records.empty() ? 0.0 : sum / records.size();
    return out;
}

double cawf1(const std::vector<EvalRecord>& records,
             const std::map<core::EmotionLabel, double>& per_class_f1,
             const std::vector<double>& fcc_scores) {
    if (records.size() != fcc_scores.size())
        throw std::invalid_argument("cawf1: record/FCC length mismatch");
    if (records.empty()) throw std::invalid_argument("cawf1: empty input");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto it = per_class_f1.find(records[i].true_label);
        if (it == per_class_f1.end())
            throw std::invalid_argument("cawf1: missing per-class F1 for a true label");
        num += fcc_scores[i] * it->second;
        den += fcc_scores[i];
    }
    if (!(den > 0.0)) throw std::invalid_argument("cawf1: all-zero FCC weights are undefined");
    return num / den;
}

double cawf1_strict(const std::vector<EvalRecord>& records, const std::vector<double>& fcc_scores) {
    if (records.size() != fcc_scores.size())
        throw std::invalid_argument("cawf1_strict: record/FCC length mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const double correct =
            records[i].pred_dist.argmax() == static_cast<int>(records[i].true_label) ? 1.0 : 0.0;
        num += fcc_scores[i] * correct;
        den += fcc_scores[i];
    }
    if (!(den > 0.0)) throw std::invalid_argument("cawf1_strict: all-zero FCC weights");
    return num / den;
}

ClassificationReport classification_report(const std::vector<int>& truth,
                                           const std::vector<int>& predicted) {
    if (truth.size() != predicted.size())
        throw std::invalid_argument("classification_report: length mismatch");
    if (truth.empty()) throw std::invalid_argument("classification_report: empty input");

    ClassificationReport rep;
    int correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] < 0 || truth[i] >= core::kNumEmotions || predicted[i] < 0 ||
            predicted[i] >= core::kNumEmotions)
            throw std::invalid_argument("classification_report: label out of range");
        rep.confusion[truth[i]][predicted[i]]++;
        if (truth[i] == predicted[i]) ++correct;
    }
    rep.accuracy = static_cast<double>(correct) / truth.size();

    double f1_sum = 0.0;
    for (int c = 0; c < core::kNumEmotions; ++c) {
        int tp = rep.confusion[c][c];
        int fp = 0, fn = 0, row_total = 0;
        for (int o = 0; o < core::kNumEmotions; ++o) {
            if (o != c) {
                fp += rep.confusion[o][c];
                fn += rep.confusion[c][o];
            }
            row_total += rep.confusion[c][o];
        }
        rep.precision[c] = (tp + fp) > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
        rep.recall[c] = (tp + fn) > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
        rep.f1[c] = (rep.precision[c] + rep.recall[c]) > 0.0
                        ? 2.0 * rep.precision[c] * rep.recall[c] /
                              (rep.precision[c] + rep.recall[c])
                        : 0.0;
        f1_sum += rep.f1[c];
        for (int o = 0; o < core::kNumEmotions; ++o)
            rep.confusion_rows[c][o] =
                row_total > 0 ? static_cast<double>(rep.confusion[c][o]) / row_total : 0.0;
    }
    rep.macro_f1 = f1_sum / core::kNumEmotions;
    return rep;
}

std::vector<PrPoint> pr_curve(const std::vector<int>& truth_binary,
                              const std::vector<double>& scores) {
    if (truth_binary.size() != scores.size()) throw std::invalid_argument("pr_curve: length mismatch");
    int positives = 0;
    for (int t : truth_binary) positives += t ? 1 : 0;
    if (positives == 0) throw std::invalid_argument("pr_curve: no positive samples");

    std::vector<double> thresholds = scores;
    std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

    std::vector<PrPoint> out;
    for (double tau : thresholds) {
        int tp = 0, fp = 0;
        for (std::size_t i = 0; i < scores.size(); ++i) {
            if (scores[i] >= tau) {
                if (truth_binary[i]) ++tp;
                else ++fp;
            }
        }
        PrPoint pt;
        pt.threshold = tau;
        pt.recall = static_cast<double>(tp) / positives;
        pt.precision = (tp + fp) > 0 ? static_cast<double>(tp) / (tp + fp) : 1.0;
        out.push_back(pt);
    }
    return out;
}

void write_metrics_csv(const std::filesystem::path& path, const ClassificationReport& report,
                       double cawf1_value, double mean_fcc) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_metrics_csv: cannot open " + path.string());
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.6f", v);
        return std::string(buf);
    };
    out << "metric,class,value\n";
    out << "accuracy,all," << num(report.accuracy) << "\n";
    out << "macro_f1,all," << num(report.macro_f1) << "\n";
    out << "cawf1,all," << num(cawf1_value) << "\n";
    out << "fcc_mean,all," << num(mean_fcc) << "\n";
    for (int c = 0; c < core::kNumEmotions; ++c) {
        const char* name = core::to_string(static_cast<core::EmotionLabel>(c));
        out << "precision," << name << "," << num(report.precision[c]) << "\n";
        out << "recall," << name << "," << num(report.recall[c]) << "\n";
        out << "f1," << name << "," << num(report.f1[c]) << "\n";
    }
    out << "confusion\n";
    for (int r = 0; r < core::kNumEmotions; ++r) {
        out << core::to_string(static_cast<core::EmotionLabel>(r));
        for (int c = 0; c < core::kNumEmotions; ++c) out << "," << report.confusion[r][c];
        out << "\n";
    }
    out << "confusion_row_normalized\n";
    for (int r = 0; r < core::kNumEmotions; ++r) {
        out << core::to_string(static_cast<core::EmotionLabel>(r));
        for (int c = 0; c < core::kNumEmotions; ++c) out << "," << num(report.confusion_rows[r][c]);
        out << "\n";
    }
}

void write_pr_csv(const std::filesystem::path& path,
                  const std::map<std::string, std::vector<PrPoint>>& curves) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_pr_csv: cannot open " + path.string());
    char buf[64];
    out << "class,threshold,recall,precision\n";
    for (const auto& [name, points] : curves)
        for (const auto& p : points) {
            std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%.6f", name.c_str(), p.threshold,
                          p.recall, p.precision);
            out << buf << "\n";
        }
}

}  // namespace gazeforge::metrics
