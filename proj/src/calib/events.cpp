#include "gazeforge/calib/events.hpp"

#include <cmath>
#include <stdexcept>

#include "gazeforge/geometry/erp.hpp"

namespace gazeforge::calib {

namespace {
void check_ordered(double prev, double cur, const char* who) {
    if (!(cur > prev)) throw std::invalid_argument(std::string(who) + ": series not time-ordered");
}
}  // namespace

std::vector<HeadEvent> detect_head_events(const std::vector<PoseSample>& series,
                                          double omega_threshold, double hold) {
    if (series.size() < 2) throw std::invalid_argument("detect_head_events: need >= 2 samples");
    if (!(omega_threshold > 0.0) || !(hold >= 0.0))
        throw std::invalid_argument("detect_head_events: bad thresholds");

    std::vector<HeadEvent> events;
    bool moving = false;
    bool streak_active = false;  // candidate state change accumulating
    double streak_start = 0.0;
    std::size_t streak_index = 0;

    for (std::size_t i = 1; i < series.size(); ++i) {
        check_ordered(series[i - 1].time, series[i].time, "detect_head_events");
        const double dt = series[i].time - series[i - 1].time;
        const double angle = geometry::head_to_dir(series[i - 1].pose)
                                 .angle_to(geometry::head_to_dir(series[i].pose));
        const double speed = angle / dt;
        const bool above = speed > omega_threshold;

        if (above != moving) {
            if (!streak_active) {
                streak_active = true;
                streak_start = series[i - 1].time;
                streak_index = i - 1;
            }
            if (series[i].time - streak_start >= hold) {
                moving = above;
                events.push_back({moving ? HeadEventKind::MovementStart
                                         : HeadEventKind::MovementStop,
                                  streak_start, series[streak_index].pose});
                streak_active = false;
            }
        } else {
            streak_active = false;
        }
    }
    return events;
}

std::vector<GazeState> classify_gaze_state(const std::vector<GazeSample>& series,
                                           double v_threshold) {
    if (series.empty()) return {};
    std::vector<GazeState> labels(series.size(), GazeState::Fixation);
    for (std::size_t i = 1; i < series.size(); ++i) {
        check_ordered(series[i - 1].time, series[i].time, "classify_gaze_state");
        const double dt = series[i].time - series[i - 1].time;
        const double speed = series[i - 1].dir.angle_to(series[i].dir) / dt;
        labels[i] = speed > v_threshold ? GazeState::Scanning : GazeState::Fixation;
    }
    if (series.size() > 1) labels[0] = labels[1];
    return labels;
}

}  // namespace gazeforge::calib
