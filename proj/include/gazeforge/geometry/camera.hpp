#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gazeforge/geometry/linalg.hpp"

namespace gazeforge::geometry {

class DegenerateGeometryError : public std::runtime_error {
public:
    explicit DegenerateGeometryError(const std::string& what) : std::runtime_error(what) {}
};

// Pinhole camera with a single radial distortion term on normalized
// coordinates. R, t map world points into the camera frame: pc = R p + t.
struct CameraModel {
    double fx = 1000.0, fy = 1000.0;
    double cx = 500.0, cy = 500.0;
    double k = 0.0;
    Mat3 R;
    Vec3 t;

    void validate() const;
    Vec3 center() const { return -(R.transpose() * t); }
};

struct CameraRig {
    std::vector<CameraModel> cameras;
    double capture_rate = 10.0;  // Hz

    void validate() const;
};

struct HeadPose {
    double pitch = 0.0;  // [-pi/2, pi/2]
    double yaw = 0.0;    // [-pi, pi)
    double roll = 0.0;   // [-pi, pi)

    void validate() const;
};

struct SphereDir {
    Vec3 d{1.0, 0.0, 0.0};

    static SphereDir from_vector(const Vec3& v);
    // longitude from +X toward +Y, latitude toward +Z
    static SphereDir from_angles(double lon, double lat);
    double lon() const { return std::atan2(d.y, d.x); }
    double lat() const { return std::asin(std::clamp(d.z, -1.0, 1.0)); }
    double angle_to(const SphereDir& o) const {
        return std::acos(std::clamp(d.dot(o.d), -1.0, 1.0));
    }
};

// Returns std::nullopt when the point has non-positive camera-frame depth.
std::optional<Vec2> project_point(const CameraModel& cam, const Vec3& p);

struct TriangulationResult {
    Vec3 point;
    double rms_reprojection_px = 0.0;
};

// Linear least-squares (DLT on undistorted normalized coordinates) over all
// observations. Throws DegenerateGeometryError when the normal system is
// ill-conditioned (rays parallel or fewer than 2 observations).
TriangulationResult triangulate(const std::vector<std::pair<CameraModel, Vec2>>& observations,
                                double condition_threshold = 1e12);

// Invert xd = xn (1 + k r^2) for the undistorted normalized coordinates.
Vec2 undistort_normalized(const Vec2& distorted, double k);

// Camera rig file: one record per camera. See External Interfaces.
void save_rig(const std::filesystem::path& path, const CameraRig& rig);
CameraRig load_rig(const std::filesystem::path& path);

// Evenly spaced inward-looking ring of cameras at the given radius/height.
CameraRig make_ring_rig(int camera_count, double radius_m, double height_m, double fx, double fy,
                        double cx, double cy, double k = 0.0, double capture_rate = 10.0);

}  // namespace gazeforge::geometry
