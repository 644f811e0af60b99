#include "doctest.h"

#include <cmath>
#include <functional>

#include "gazeforge/calib/student.hpp"
#include "gazeforge/calib/teacher.hpp"
#include "gazeforge/core/rng.hpp"
#include "gazeforge/geometry/erp.hpp"

using namespace gazeforge;
using calib::CalibrationPair;
using calib::GazeSample;
using calib::GazeState;
using calib::HeadEvent;
using calib::HeadEventKind;
using calib::PoseSample;

namespace {

std::vector<PoseSample> pose_trace(double rate_hz, double seconds,
                                   const std::function<double(double)>& yaw_of_t) {
    std::vector<PoseSample> out;
    const double dt = 1.0 / rate_hz;
    for (double t = 0.0; t < seconds; t += dt)
        out.push_back({t, geometry::HeadPose{0.0, yaw_of_t(t), 0.0}});
    return out;
}

// oracle: per-interval speed thresholding without the event state machine
std::vector<double> interval_speeds(const std::vector<PoseSample>& series) {
    std::vector<double> speeds;
    for (std::size_t i = 1; i < series.size(); ++i) {
        const double dt = series[i].time - series[i - 1].time;
        speeds.push_back(geometry::head_to_dir(series[i - 1].pose)
                             .angle_to(geometry::head_to_dir(series[i].pose)) /
                         dt);
    }
    return speeds;
}

}  // namespace

TEST_CASE("detect_head_events: constant pose yields no events") {
    const auto series = pose_trace(100.0, 1.0, [](double) { return 0.3; });
    CHECK(calib::detect_head_events(series, 0.5, 0.05).empty());
}

TEST_CASE("detect_head_events: ramp transition produces one start and one stop") {
    // yaw steps from 0 to 0.8 rad between t=2 and t=2.4 (speed 2 rad/s)
    auto yaw = [](double t) {
        if (t < 2.0) return 0.0;
        if (t < 2.4) return 2.0 * (t - 2.0);
        return 0.8;
    };
    const auto series = pose_trace(100.0, 5.0, yaw);
    const auto events = calib::detect_head_events(series, 0.5, 0.05);
    REQUIRE(events.size() == 2);
    CHECK(events[0].kind == HeadEventKind::MovementStart);
    CHECK(events[1].kind == HeadEventKind::MovementStop);
    CHECK(events[0].time == doctest::Approx(2.0).epsilon(0.02));
    CHECK(events[1].time == doctest::Approx(2.4).epsilon(0.02));

    // oracle agreement: the speeds really do cross the threshold exactly once
    const auto speeds = interval_speeds(series);
    int crossings = 0;
    for (std::size_t i = 1; i < speeds.size(); ++i)
        if ((speeds[i] > 0.5) != (speeds[i - 1] > 0.5)) ++crossings;
    CHECK(crossings == 2);
}

TEST_CASE("detect_head_events: alternation holds for any series") {
    core::RngStream rng(61, 0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<PoseSample> series;
        double t = 0.0, yaw = 0.0;
        for (int i = 0; i < 300; ++i) {
            t += 0.01;
            yaw += rng.uniform(-0.05, 0.05);
            yaw = std::clamp(yaw, -3.0, 3.0);
            series.push_back({t, geometry::HeadPose{0.0, yaw, 0.0}});
        }
        const auto events = calib::detect_head_events(series, rng.uniform(0.5, 3.0), 0.03);
        for (std::size_t i = 1; i < events.size(); ++i) CHECK(events[i].kind != events[i - 1].kind);
        if (!events.empty()) CHECK(events[0].kind == HeadEventKind::MovementStart);
    }
}

TEST_CASE("detect_head_events: speeds exactly at the threshold never fire") {
    // oscillation tuned so every interval speed equals the threshold exactly
    std::vector<PoseSample> series;
    double yaw = 0.0;
    for (int i = 0; i < 100; ++i) {
        series.push_back({i * 0.01, geometry::HeadPose{0.0, yaw, 0.0}});
        yaw += (i % 2 ? 0.005 : -0.005);
    }
    const auto events = calib::detect_head_events(series, 0.5, 0.02);
    CHECK(events.empty());
    std::vector<PoseSample> unordered{{0.0, {}}, {0.0, {}}};
    CHECK_THROWS(calib::detect_head_events(unordered, 0.5, 0.02));
}

TEST_CASE("classify_gaze_state: static gaze is all fixation") {
    std::vector<GazeSample> series;
    for (int i = 0; i < 50; ++i)
        series.push_back({i * 0.01, geometry::SphereDir::from_angles(0.3, 0.1)});
    for (const auto state : calib::classify_gaze_state(series, 1.0))
        CHECK(state == GazeState::Fixation);
}

TEST_CASE("classify_gaze_state: saccade between two fixations segments the trace") {
    std::vector<GazeSample> series;
    double t = 0.0;
    for (int i = 0; i < 20; ++i, t += 0.01)
        series.push_back({t, geometry::SphereDir::from_angles(0.0, 0.0)});
    for (int i = 0; i < 5; ++i, t += 0.01)
        series.push_back({t, geometry::SphereDir::from_angles(0.08 * (i + 1), 0.0)});
    for (int i = 0; i < 20; ++i, t += 0.01)
        series.push_back({t, geometry::SphereDir::from_angles(0.4, 0.0)});
    const auto labels = calib::classify_gaze_state(series, 1.0);

    // oracle: recompute per-sample speeds directly
    for (std::size_t i = 1; i < series.size(); ++i) {
        const double speed = series[i - 1].dir.angle_to(series[i].dir) /
                             (series[i].time - series[i - 1].time);
        CHECK(labels[i] == (speed > 1.0 ? GazeState::Scanning : GazeState::Fixation));
    }
    CHECK(labels[5] == GazeState::Fixation);
    CHECK(labels[22] == GazeState::Scanning);
    CHECK(labels[series.size() - 1] == GazeState::Fixation);
}

TEST_CASE("classify_gaze_state: all samples above threshold read as scanning") {
    std::vector<GazeSample> series;
    for (int i = 0; i < 10; ++i)
        series.push_back({i * 0.01, geometry::SphereDir::from_angles(0.05 * i, 0.0)});
    const auto labels = calib::classify_gaze_state(series, 1.0);
    for (const auto state : labels) CHECK(state == GazeState::Scanning);
}

TEST_CASE("classify_gaze_state: labels are invariant to uniform time rescaling") {
    core::RngStream rng(62, 0);
    std::vector<GazeSample> series, slowed;
    double lon = 0.0;
    for (int i = 0; i < 100; ++i) {
        lon += rng.uniform(-0.03, 0.03);
        const auto dir = geometry::SphereDir::from_angles(lon, 0.0);
        series.push_back({i * 0.01, dir});
        slowed.push_back({i * 0.03, dir});
    }
    const auto a = calib::classify_gaze_state(series, 1.5);
    const auto b = calib::classify_gaze_state(slowed, 0.5);
    CHECK(a == b);
}

TEST_CASE("strong_hint: centers on the head direction with the configured radius") {
    HeadEvent event{HeadEventKind::MovementStart, 1.0, geometry::HeadPose{0, 0, 0}};
    const auto region = calib::strong_hint(event, 10.0 * M_PI / 180.0);
    CHECK(region.center.d.x == doctest::Approx(1.0));
    CHECK(region.radius == doctest::Approx(10.0 * M_PI / 180.0));
}

TEST_CASE("strong_hint: candidates outside the cone are projected onto its boundary") {
    HeadEvent event{HeadEventKind::MovementStop, 2.0, geometry::HeadPose{0, 0, 0}};
    const auto region = calib::strong_hint(event, 10.0 * M_PI / 180.0);
    const auto candidate = geometry::SphereDir::from_angles(25.0 * M_PI / 180.0, 0.0);
    const auto clamped = region.clamp(candidate);
    CHECK(region.center.angle_to(clamped) == doctest::Approx(region.radius).epsilon(1e-9));
    // clamp keeps the great-circle direction toward the candidate
    CHECK(clamped.lon() == doctest::Approx(10.0 * M_PI / 180.0).epsilon(1e-9));
    // in-cone candidates pass through untouched
    const auto inside = geometry::SphereDir::from_angles(0.05, 0.0);
    CHECK(region.clamp(inside).angle_to(inside) < 1e-15);
}

namespace {
core::Scene teacher_scene() {
    core::Scene scene;
    scene.id = "teacher";
    scene.background_seed = 0;
    core::SceneObject a;
    a.id = 0;
    a.bbox = {900.0, 430.0, 1020.0, 530.0};  // near image center
    a.category = "table";
    a.saliency = 0.2;
    a.brightness = 0.5;
    core::SceneObject b = a;
    b.id = 1;
    b.bbox = {1060.0, 430.0, 1180.0, 530.0};
    b.saliency = 0.9;
    scene.objects = {a, b};
    return scene;
}
}  // namespace

TEST_CASE("teacher_fixation: single static object returns its centroid") {
    auto scene = teacher_scene();
    scene.objects.pop_back();
    const calib::HintRegion wide{geometry::SphereDir::from_angles(0, 0), M_PI};
    const auto pt = calib::teacher_fixation(scene, wide);
    CHECK(pt.u == doctest::Approx(960.0));
    CHECK(pt.v == doctest::Approx(480.0));
}

TEST_CASE("teacher_fixation: argmax saliency wins among static candidates") {
    const auto scene = teacher_scene();
    const calib::HintRegion wide{geometry::SphereDir::from_angles(0, 0), M_PI};
    const auto pt = calib::teacher_fixation(scene, wide);
    CHECK(pt.u == doctest::Approx(1120.0));
}

TEST_CASE("teacher_fixation: dynamic motion start beats higher static saliency") {
    auto scene = teacher_scene();
    core::SceneObject dyn;
    dyn.id = 2;
    dyn.bbox = {800.0, 300.0, 900.0, 420.0};
    dyn.category = "person";
    dyn.saliency = 0.1;
    dyn.brightness = 0.4;
    dyn.dynamic = true;
    dyn.motion_start = core::ErpPoint(820.0, 410.0);
    scene.objects.push_back(dyn);
    scene.dynamic = true;
    const calib::HintRegion wide{geometry::SphereDir::from_angles(0, 0), M_PI};
    const auto pt = calib::teacher_fixation(scene, wide);
    CHECK(pt.u == doctest::Approx(820.0));
    CHECK(pt.v == doctest::Approx(410.0));
}

TEST_CASE("teacher_fixation: hint region filters candidates before the saliency argmax") {
    const auto scene = teacher_scene();
    // cone tight around object 0's centroid: the less salient one wins
    const auto center = geometry::erp_to_dir(core::ErpPoint(960.0, 480.0));
    const calib::HintRegion tight{center, 2.0 * M_PI / 180.0};
    const auto pt = calib::teacher_fixation(scene, tight);
    CHECK(pt.u == doctest::Approx(960.0));
}

TEST_CASE("teacher_fixation: always lands inside some object box") {
    core::RngStream rng(63, 0);
    const auto scene = teacher_scene();
    for (int trial = 0; trial < 200; ++trial) {
        const calib::HintRegion region{
            geometry::SphereDir::from_angles(rng.uniform(-3.0, 3.0), rng.uniform(-1.3, 1.3)),
            rng.uniform(0.02, 1.0)};
        const auto pt = calib::teacher_fixation(scene, region);
        bool inside = false;
        for (const auto& obj : scene.objects) inside = inside || obj.bbox.contains(pt.u, pt.v);
        CHECK(inside);
    }
}

TEST_CASE("scene_transition_window spans 300 ms and tags pairs") {
    const auto window = calib::scene_transition_window(5.0);
    CHECK(window.first == doctest::Approx(5.0));
    CHECK(window.second == doctest::Approx(5.3));
    CHECK(calib::in_transition_window(5.25, window));
    CHECK(!calib::in_transition_window(5.35, window));
}

TEST_CASE("calibrate_student: exact affine pairs are recovered to 1e-9") {
    core::RngStream rng(64, 0);
    const std::array<std::array<double, 2>, 2> a{{{1.04, 0.03}, {-0.02, 0.97}}};
    const std::array<double, 2> b{0.05, -0.04};
    std::vector<CalibrationPair> pairs;
    for (int i = 0; i < 24; ++i) {
        const double lon = rng.uniform(-1.5, 1.5), lat = rng.uniform(-0.8, 0.8);
        CalibrationPair pair;
        pair.observed = {lon, lat};
        pair.teacher = {a[0][0] * lon + a[0][1] * lat + b[0], a[1][0] * lon + a[1][1] * lat + b[1]};
        pairs.push_back(pair);
    }
    const auto model = calib::calibrate_student(pairs);
    CHECK(model.a[0][0] == doctest::Approx(a[0][0]).epsilon(1e-9));
    CHECK(model.a[0][1] == doctest::Approx(a[0][1]).epsilon(1e-9));
    CHECK(model.a[1][0] == doctest::Approx(a[1][0]).epsilon(1e-9));
    CHECK(model.a[1][1] == doctest::Approx(a[1][1]).epsilon(1e-9));
    CHECK(model.b[0] == doctest::Approx(b[0]).epsilon(1e-9));
    CHECK(model.b[1] == doctest::Approx(b[1]).epsilon(1e-9));
    CHECK(model.residual_rms < 1e-9);
}

TEST_CASE("calibrate_student: identity pairs give the identity model") {
    std::vector<CalibrationPair> pairs;
    core::RngStream rng(65, 0);
    for (int i = 0; i < 10; ++i) {
        const double lon = rng.uniform(-1, 1), lat = rng.uniform(-0.5, 0.5);
        pairs.push_back({{lon, lat}, {lon, lat}, 1.0});
    }
    const auto model = calib::calibrate_student(pairs);
    CHECK(model.a[0][0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(model.a[1][1] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(model.a[0][1]) < 1e-9);
    CHECK(std::abs(model.b[0]) < 1e-9);
}

TEST_CASE("calibrate_student: noisy pairs keep residual under the recorded bound") {
    // Monte-Carlo baseline from the oracle run: residual RMS for sigma = 0.01
    // rad on 50 pairs settles near 0.013; bound at 0.02 per the contract
    core::RngStream rng(66, 0);
    std::vector<CalibrationPair> pairs;
    for (int i = 0; i < 50; ++i) {
        const double lon = rng.uniform(-1.5, 1.5), lat = rng.uniform(-0.8, 0.8);
        pairs.push_back({{lon + rng.normal(0.0, 0.01), lat + rng.normal(0.0, 0.01)},
                         {lon, lat},
                         1.0});
    }
    const auto model = calib::calibrate_student(pairs);
    CHECK(model.residual_rms <= 0.02);
}

TEST_CASE("calibrate_student: degenerate designs raise") {
    std::vector<CalibrationPair> two{{{0, 0}, {0, 0}, 1.0}, {{1, 1}, {1, 1}, 1.0}};
    CHECK_THROWS_AS(calib::calibrate_student(two), calib::DegenerateFitError);
    // collinear observations are rank deficient
    std::vector<CalibrationPair> collinear;
    for (int i = 0; i < 8; ++i)
        collinear.push_back({{static_cast<double>(i), 2.0 * i}, {0.1 * i, 0.2 * i}, 1.0});
    CHECK_THROWS_AS(calib::calibrate_student(collinear), calib::DegenerateFitError);
}

TEST_CASE("calibrate_student: fitted residual never exceeds the identity model's") {
    core::RngStream rng(67, 0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<CalibrationPair> pairs;
        for (int i = 0; i < 12; ++i) {
            pairs.push_back({{rng.uniform(-1, 1), rng.uniform(-0.6, 0.6)},
                             {rng.uniform(-1, 1), rng.uniform(-0.6, 0.6)},
                             1.0});
        }
        const auto model = calib::calibrate_student(pairs);
        double identity_sq = 0.0;
        for (const auto& p : pairs) {
            const double dl = p.observed[0] - p.teacher[0];
            const double db = p.observed[1] - p.teacher[1];
            identity_sq += dl * dl + db * db;
        }
        const double identity_rms = std::sqrt(identity_sq / pairs.size());
        CHECK(model.residual_rms <= identity_rms + 1e-12);
    }
}

TEST_CASE("apply_student: identity and offset models behave as affine maps") {
    const auto identity = calib::StudentModel::identity();
    const auto same = calib::apply_student(identity, 0.4, -0.2);
    CHECK(same[0] == 0.4);
    CHECK(same[1] == -0.2);

    calib::StudentModel offset = calib::StudentModel::identity();
    offset.b = {0.1, -0.05};
    const auto moved = calib::apply_student(offset, 0.4, -0.2);
    CHECK(moved[0] == doctest::Approx(0.5));
    CHECK(moved[1] == doctest::Approx(-0.25));
}
