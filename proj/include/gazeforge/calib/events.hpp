#pragma once

#include <vector>

#include "gazeforge/geometry/camera.hpp"

namespace gazeforge::calib {

enum class HeadEventKind { MovementStart, MovementStop };

struct HeadEvent {
    HeadEventKind kind = HeadEventKind::MovementStart;
    double time = 0.0;
    geometry::HeadPose pose;
};

struct PoseSample {
    double time = 0.0;
    geometry::HeadPose pose;
};

// Hysteresis detector: movement_start once angular speed stays above
// omega_threshold for >= hold seconds, movement_stop once it stays at or
// below for >= hold. Events alternate by construction.
std::vector<HeadEvent> detect_head_events(const std::vector<PoseSample>& series,
                                          double omega_threshold, double hold);

enum class GazeState { Scanning, Fixation };

struct GazeSample {
    double time = 0.0;
    geometry::SphereDir dir;
};

// I-VT style per-sample labeling: angular speed above v_threshold reads as
// scanning, otherwise fixation. The first sample inherits the label of the
// first interval.
std::vector<GazeState> classify_gaze_state(const std::vector<GazeSample>& series,
                                           double v_threshold);

}  // namespace gazeforge::calib
