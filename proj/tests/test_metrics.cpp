#include "doctest.h"

#include <cmath>
#include <fstream>

#include "gazeforge/core/rng.hpp"
#include "gazeforge/metrics/features.hpp"
#include "gazeforge/metrics/metrics.hpp"

using namespace gazeforge;
using metrics::EvalRecord;
using metrics::FccConfig;

namespace {

EvalRecord record_with(core::EmotionLabel label, std::vector<double> vl, std::vector<double> el,
                       std::vector<double> vg, std::vector<double> eg) {
    EvalRecord r;
    r.true_label = label;
    r.pred_dist = model::EmotionDistribution::uniform();
    r.gaze_point = core::ErpPoint(10, 10);
    r.v_local = std::move(vl);
    r.e_local = std::move(el);
    r.v_global = std::move(vg);
    r.e_global = std::move(eg);
    return r;
}

}  // namespace

TEST_CASE("gaze_accuracy: interior, inclusive boundary, exterior") {
    const std::vector<core::BoundingBox> boxes{{100.0, 100.0, 200.0, 200.0}};
    CHECK(metrics::gaze_accuracy(core::ErpPoint(150, 150), boxes) == 1);
    CHECK(metrics::gaze_accuracy(core::ErpPoint(200, 150), boxes) == 1);  // x_p = x_max
    CHECK(metrics::gaze_accuracy(core::ErpPoint(100, 100), boxes) == 1);  // min corner
    CHECK(metrics::gaze_accuracy(core::ErpPoint(201, 150), boxes) == 0);
    CHECK(metrics::gaze_accuracy(core::ErpPoint(150, 150), {}) == 0);
}

TEST_CASE("gaze_accuracy: matches per-pixel brute force on 1000 random cases") {
    core::RngStream rng(91, 0);
    const int W = 64, H = 32;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<core::BoundingBox> boxes;
        const int n = static_cast<int>(rng.index(4)) + (trial % 2);  // sometimes zero boxes
        for (int b = 0; b < n; ++b) {
            const double x0 = rng.index(W - 2), y0 = rng.index(H - 2);
            boxes.push_back({x0, y0, x0 + 1.0 + rng.index(W - 1 - static_cast<int>(x0)),
                             y0 + 1.0 + rng.index(H - 1 - static_cast<int>(y0))});
        }
        // rasterize inclusive membership over the integer grid
        std::vector<char> mask(W * H, 0);
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x)
                for (const auto& box : boxes)
                    if (box.contains(x, y)) mask[y * W + x] = 1;
        const int px = static_cast<int>(rng.index(W));
        const int py = static_cast<int>(rng.index(H));
        CHECK(metrics::gaze_accuracy(core::ErpPoint(px, py, W, H), boxes) == mask[py * W + px]);
    }
}

TEST_CASE("cosine similarity: zero vectors read as 0; bounded in [-1, 1]") {
    CHECK(metrics::cosine_similarity({0, 0, 0}, {1, 2, 3}) == 0.0);
    CHECK(metrics::cosine_similarity({0, 0}, {0, 0}) == 0.0);
    core::RngStream rng(92, 0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> a(5), b(5);
        for (int i = 0; i < 5; ++i) {
            a[i] = rng.uniform(-2, 2);
            b[i] = rng.uniform(-2, 2);
        }
        const double c = metrics::cosine_similarity(a, b);
        CHECK(c >= -1.0 - 1e-12);
        CHECK(c <= 1.0 + 1e-12);
    }
    CHECK(metrics::cosine_similarity({1, 1}, {2, 2}) == doctest::Approx(1.0));
}

TEST_CASE("extract_features: identical rasters give cosine similarity 1") {
    core::Raster raster(64, 32);
    core::RngStream rng(93, 0);
    for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 64; ++x)
            raster.at(x, y) = {static_cast<std::uint8_t>(rng.index(256)),
                               static_cast<std::uint8_t>(rng.index(256)),
                               static_cast<std::uint8_t>(rng.index(256))};
    FccConfig cfg;
    cfg.window_radius = 8;
    const auto a = metrics::extract_features(raster, core::ErpPoint(32, 16, 64, 32), cfg);
    const auto b = metrics::extract_features(raster, core::ErpPoint(32, 16, 64, 32), cfg);
    CHECK(metrics::cosine_similarity(a.local, b.local) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(metrics::cosine_similarity(a.global, b.global) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.local.size() == 49);
}

TEST_CASE("extract_features: flat colors compare by hand-computed histograms") {
    // flat rasters occupy one bin per channel with zero gradient, so the
    // normalized features are 1/sqrt(3) on three bins
    core::Raster red(16, 8, {200, 0, 0});     // bins {R12, G0, B0}
    core::Raster green(16, 8, {0, 200, 0});   // bins {R0, G12, B0}
    core::Raster cyan(16, 8, {0, 200, 200});  // bins {R0, G12, B12}
    FccConfig cfg;
    cfg.window_radius = 4;
    const auto fr = metrics::extract_features(red, core::ErpPoint(8, 4, 16, 8), cfg);
    const auto fg = metrics::extract_features(green, core::ErpPoint(8, 4, 16, 8), cfg);
    const auto fc = metrics::extract_features(cyan, core::ErpPoint(8, 4, 16, 8), cfg);
    CHECK(fr.global[12] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
    CHECK(fr.global[16] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
    CHECK(fr.global[32] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
    // red and green share only the B=0 bin: (1/sqrt3)^2 = 1/3
    CHECK(metrics::cosine_similarity(fr.global, fg.global) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    // red and cyan occupy disjoint bins: similarity 0
    CHECK(metrics::cosine_similarity(fr.global, fc.global) ==
          doctest::Approx(0.0).epsilon(1e-12));
    // flat windows match the flat global features
    CHECK(metrics::cosine_similarity(fr.local, fr.global) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fcc: identical features give 1, boundary weights isolate scales") {
    FccConfig cfg;
    std::vector<EvalRecord> records{record_with(core::EmotionLabel::Happy, {1, 0}, {1, 0},
                                                {0, 1}, {0, 1})};
    const auto res = metrics::fcc(records, cfg);
    CHECK(res.per_record[0] == doctest::Approx(1.0));

    FccConfig local_only;
    local_only.alpha = 1.0;
    local_only.beta = 0.0;
    std::vector<EvalRecord> mixed{record_with(core::EmotionLabel::Happy, {1, 0}, {1, 0},
                                              {1, 0}, {0, 1})};
    CHECK(metrics::fcc(mixed, local_only).per_record[0] == doctest::Approx(1.0));

    // orthogonal local, identical global, equal weights -> 0.5
    std::vector<EvalRecord> half{record_with(core::EmotionLabel::Happy, {1, 0}, {0, 1},
                                             {1, 1}, {1, 1})};
    CHECK(metrics::fcc(half, cfg).per_record[0] == doctest::Approx(0.5));

    FccConfig bad;
    bad.alpha = 0.7;
    bad.beta = 0.7;
    CHECK_THROWS(metrics::fcc(records, bad));
}

TEST_CASE("cawf1: constant weights reduce to the mean of per-record F1") {
    std::vector<EvalRecord> records{
        record_with(core::EmotionLabel::Angry, {1}, {1}, {1}, {1}),
        record_with(core::EmotionLabel::Happy, {1}, {1}, {1}, {1}),
    };
    std::map<core::EmotionLabel, double> f1{{core::EmotionLabel::Angry, 0.4},
                                            {core::EmotionLabel::Happy, 0.8}};
    CHECK(metrics::cawf1(records, f1, {0.7, 0.7}) == doctest::Approx(0.6));
    CHECK(metrics::cawf1(records, f1, {1.0, 1.0}) == doctest::Approx(0.6));
}

TEST_CASE("cawf1: formula evaluation and weighted-mean bounds") {
    std::vector<EvalRecord> records{
        record_with(core::EmotionLabel::Angry, {1}, {1}, {1}, {1}),
        record_with(core::EmotionLabel::Happy, {1}, {1}, {1}, {1}),
    };
    std::map<core::EmotionLabel, double> f1{{core::EmotionLabel::Angry, 0.5},
                                            {core::EmotionLabel::Happy, 0.9}};
    CHECK(metrics::cawf1(records, f1, {1.0, 0.0}) == doctest::Approx(0.5));

    core::RngStream rng(94, 0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::vector<double> fcc{rng.uniform(0.01, 1.0), rng.uniform(0.01, 1.0)};
        const double v = metrics::cawf1(records, f1, fcc);
        CHECK(v >= 0.5 - 1e-12);
        CHECK(v <= 0.9 + 1e-12);
        // invariance to positive rescaling of the weights
        const double scale = rng.uniform(0.1, 10.0);
        CHECK(metrics::cawf1(records, f1, {fcc[0] * scale, fcc[1] * scale}) ==
              doctest::Approx(v).epsilon(1e-12));
    }
    CHECK_THROWS(metrics::cawf1(records, f1, {0.0, 0.0}));
}

TEST_CASE("classification_report: perfect predictions") {
    std::vector<int> truth{0, 1, 2, 3, 4, 5, 0, 3};
    const auto rep = metrics::classification_report(truth, truth);
    CHECK(rep.accuracy == 1.0);
    CHECK(rep.macro_f1 == 1.0);
    for (int c = 0; c < 6; ++c) {
        CHECK(rep.f1[c] == 1.0);
        for (int o = 0; o < 6; ++o)
            if (c != o) CHECK(rep.confusion[c][o] == 0);
    }
}

TEST_CASE("classification_report: a class predicted wrong has F1 zero") {
    const auto rep = metrics::classification_report({2, 2}, {3, 3});
    CHECK(rep.f1[2] == 0.0);
    CHECK(rep.accuracy == 0.0);
}

TEST_CASE("classification_report: hand-worked 3-sample case") {
    // truth: A A H, predicted: A H H -> class A: tp=1 fp=0 fn=1,
    // precision 1, recall 0.5, F1 2/3; class H: tp=1 fp=1 fn=0,
    // precision 0.5, recall 1, F1 2/3
    const int A = 0, H = 3;
    const auto rep = metrics::classification_report({A, A, H}, {A, H, H});
    CHECK(rep.accuracy == doctest::Approx(2.0 / 3.0));
    CHECK(rep.precision[A] == doctest::Approx(1.0));
    CHECK(rep.recall[A] == doctest::Approx(0.5));
    CHECK(rep.f1[A] == doctest::Approx(2.0 / 3.0));
    CHECK(rep.precision[H] == doctest::Approx(0.5));
    CHECK(rep.recall[H] == doctest::Approx(1.0));
    CHECK(rep.f1[H] == doctest::Approx(2.0 / 3.0));
    CHECK(rep.confusion_rows[A][H] == doctest::Approx(0.5));
}

TEST_CASE("pr_curve: perfect separation passes through (1, 1)") {
    const auto points = metrics::pr_curve({0, 0, 1, 1}, {0.1, 0.2, 0.8, 0.9});
    bool found = false;
    for (const auto& p : points)
        if (p.recall == doctest::Approx(1.0) && p.precision == doctest::Approx(1.0)) found = true;
    CHECK(found);
    // recall is non-decreasing along the output
    for (std::size_t i = 1; i < points.size(); ++i) CHECK(points[i].recall >= points[i - 1].recall);
}

TEST_CASE("pr_curve: matches the exhaustive threshold sweep") {
    core::RngStream rng(95, 0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<int> truth{1, 0, 1, 0};
        std::vector<double> scores;
        for (int i = 0; i < 4; ++i) scores.push_back(rng.uniform(0.0, 1.0));
        const auto points = metrics::pr_curve(truth, scores);
        for (const auto& p : points) {
            int tp = 0, fp = 0, positives = 0;
            for (int i = 0; i < 4; ++i) {
                positives += truth[i];
                if (scores[i] >= p.threshold) {
                    if (truth[i]) ++tp;
                    else ++fp;
                }
            }
            CHECK(p.recall == doctest::Approx(static_cast<double>(tp) / positives));
            CHECK(p.precision == doctest::Approx(static_cast<double>(tp) / (tp + fp)));
        }
    }
}

TEST_CASE("pr_curve: degenerate cases") {
    const auto flat = metrics::pr_curve({1, 0, 1, 0}, {0.5, 0.5, 0.5, 0.5});
    REQUIRE(flat.size() == 1);
    CHECK(flat[0].recall == doctest::Approx(1.0));
    CHECK(flat[0].precision == doctest::Approx(0.5));  // prevalence
    CHECK_THROWS(metrics::pr_curve({0, 0}, {0.2, 0.4}));
}

TEST_CASE("metrics csv emitter writes the table and confusion blocks") {
    const auto rep = metrics::classification_report({0, 1, 2}, {0, 1, 2});
    const auto dir = std::filesystem::temp_directory_path() / "gazeforge_tests" / "metrics";
    std::filesystem::create_directories(dir);
    metrics::write_metrics_csv(dir / "metrics.csv", rep, 0.5, 0.8);
    std::ifstream in(dir / "metrics.csv");
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content.find("metric,class,value") != std::string::npos);
    CHECK(content.find("cawf1,all,0.500000") != std::string::npos);
    CHECK(content.find("confusion") != std::string::npos);
    CHECK(content.find("Angry") != std::string::npos);
}
