#include "gazeforge/geometry/camera.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace gazeforge::geometry {

void CameraModel::validate() const {
    if (!(fx > 0.0) || !(fy > 0.0)) throw std::invalid_argument("CameraModel: fx, fy must be > 0");
    const Mat3 rtr = R.transpose() * R;
    const Mat3 eye = Mat3::identity();
    for (int i = 0; i < 9; ++i)
        if (std::abs(rtr.m[i] - eye.m[i]) > 1e-9)
            throw std::invalid_argument("CameraModel: R not orthonormal");
    if (std::abs(R.det() - 1.0) > 1e-9)
        throw std::invalid_argument("CameraModel: det(R) != +1");
}

void CameraRig::validate() const {
    if (cameras.size() < 2)
        throw std::invalid_argument("CameraRig: at least 2 cameras required for triangulation");
    if (!(capture_rate > 0.0)) throw std::invalid_argument("CameraRig: capture_rate must be > 0");
    for (const auto& c : cameras) c.validate();
}

void HeadPose::validate() const {
    if (pitch < -M_PI / 2 || pitch > M_PI / 2)
        throw std::invalid_argument("HeadPose: pitch out of [-pi/2, pi/2]");
    if (yaw < -M_PI || yaw >= M_PI) throw std::invalid_argument("HeadPose: yaw out of [-pi, pi)");
    if (roll < -M_PI || roll >= M_PI) throw std::invalid_argument("HeadPose: roll out of [-pi, pi)");
}

SphereDir SphereDir::from_vector(const Vec3& v) {
    const double n = v.norm();
    if (!(n > 0.0)) throw std::invalid_argument("SphereDir: zero vector");
    return SphereDir{v * (1.0 / n)};
}

SphereDir SphereDir::from_angles(double lon, double lat) {
    return SphereDir{{std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)}};
}

std::optional<Vec2> project_point(const CameraModel& cam, const Vec3& p) {
    const Vec3 pc = cam.R * p + cam.t;
    if (!(pc.z > 0.0)) return std::nullopt;
    const double xn = pc.x / pc.z;
    const double yn = pc.y / pc.z;
    const double r2 = xn * xn + yn * yn;
    const double s = 1.0 + cam.k * r2;
    return Vec2{cam.fx * xn * s + cam.cx, cam.fy * yn * s + cam.cy};
}

Vec2 undistort_normalized(const Vec2& distorted, double k) {
    if (k == 0.0) return distorted;
    const double rd = std::sqrt(distorted.x * distorted.x + distorted.y * distorted.y);
    if (rd == 0.0) return distorted;
    // Newton on r (1 + k r^2) = rd
    double r = rd;
    for (int i = 0; i < 50; ++i) {
        const double f = r * (1.0 + k * r * r) - rd;
        const double fp = 1.0 + 3.0 * k * r * r;
        if (fp == 0.0) break;
        const double step = f / fp;
        r -= step;
        if (std::abs(step) < 1e-16 * (1.0 + r)) break;
    }
    const double scale = r / rd;
    return Vec2{distorted.x * scale, distorted.y * scale};
}

TriangulationResult triangulate(const std::vector<std::pair<CameraModel, Vec2>>& observations,
                                double condition_threshold) {
    if (observations.size() < 2)
        throw DegenerateGeometryError("triangulate: need at least 2 observations");

    Mat3 ata;
    ata.m = {0, 0, 0, 0, 0, 0, 0, 0, 0};
    Vec3 atb{0, 0, 0};
    auto add_row = [&](const Vec3& a, double b) {
        ata(0, 0) += a.x * a.x;
        ata(0, 1) += a.x * a.y;
        ata(0, 2) += a.x * a.z;
        ata(1, 0) += a.y * a.x;
        ata(1, 1) += a.y * a.y;
        ata(1, 2) += a.y * a.z;
        ata(2, 0) += a.z * a.x;
        ata(2, 1) += a.z * a.y;
        ata(2, 2) += a.z * a.z;
        atb = atb + a * b;
    };

    for (const auto& [cam, px] : observations) {
        const Vec2 n = undistort_normalized({(px.x - cam.cx) / cam.fx, (px.y - cam.cy) / cam.fy},
                                            cam.k);
        const Vec3 r1 = cam.R.row(0), r2 = cam.R.row(1), r3 = cam.R.row(2);
        // xn (r3 . P + t3) = r1 . P + t1, same for yn
        add_row(r3 * n.x - r1, cam.t.x - n.x * cam.t.z);
        add_row(r3 * n.y - r2, cam.t.y - n.y * cam.t.z);
    }

    const auto ev = symmetric_eigenvalues(ata);
    if (!(ev[0] > 0.0) || ev[2] / ev[0] > condition_threshold)
        throw DegenerateGeometryError("triangulate: degenerate configuration (condition " +
                                      std::to_string(ev[0] > 0.0 ? ev[2] / ev[0] : 0.0) + ")");

    TriangulationResult result;
    result.point = solve3(ata, atb);

    double sq_sum = 0.0;
    std::size_t n_reproj = 0;
    for (const auto& [cam, px] : observations) {
        const auto proj = project_point(cam, result.point);
        if (!proj) continue;
        const double dx = proj->x - px.x, dy = proj->y - px.y;
        sq_sum += dx * dx + dy * dy;
        ++n_reproj;
    }
    result.rms_reprojection_px = n_reproj ? std::sqrt(sq_sum / n_reproj) : 0.0;
    return result;
}

void save_rig(const std::filesystem::path& path, const CameraRig& rig) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_rig: cannot open " + path.string());
    out.precision(17);
    out << "capture_rate " << rig.capture_rate << "\n";
    for (const auto& c : rig.cameras) {
        out << c.fx << ' ' << c.fy << ' ' << c.cx << ' ' << c.cy << ' ' << c.k;
        for (double v : c.R.m) out << ' ' << v;
        out << ' ' << c.t.x << ' ' << c.t.y << ' ' << c.t.z << "\n";
    }
}

CameraRig load_rig(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_rig: cannot open " + path.string());
    CameraRig rig;
    std::string tag;
    in >> tag >> rig.capture_rate;
    if (tag != "capture_rate") throw std::runtime_error("load_rig: bad header in " + path.string());
    while (true) {
        CameraModel c;
        in >> c.fx;
        if (!in) break;
        in >> c.fy >> c.cx >> c.cy >> c.k;
        for (double& v : c.R.m) in >> v;
        in >> c.t.x >> c.t.y >> c.t.z;
        if (!in) throw std::runtime_error("load_rig: truncated camera record");
        rig.cameras.push_back(c);
    }
    rig.validate();
    return rig;
}

CameraRig make_ring_rig(int camera_count, double radius_m, double height_m, double fx, double fy,
                        double cx, double cy, double k, double capture_rate) {
    if (camera_count < 2) throw std::invalid_argument("make_ring_rig: camera_count < 2");
    CameraRig rig;
    rig.capture_rate = capture_rate;
    const Vec3 target{0.0, 0.0, height_m};
    for (int i = 0; i < camera_count; ++i) {
        const double angle = 2.0 * M_PI * i / camera_count;
        const Vec3 pos{radius_m * std::cos(angle), radius_m * std::sin(angle), height_m};
        const Vec3 forward = (target - pos).normalized();
        Vec3 up_ref{0.0, 0.0, 1.0};
        if (std::abs(forward.dot(up_ref)) > 0.999999) up_ref = Vec3{1.0, 0.0, 0.0};
        const Vec3 right = forward.cross(up_ref).normalized();
        const Vec3 down = forward.cross(right);
        CameraModel c;
        c.fx = fx;
        c.fy = fy;
        c.cx = cx;
        c.cy = cy;
        c.k = k;
        c.R.m = {right.x, right.y, right.z, down.x, down.y, down.z, forward.x, forward.y, forward.z};
        c.t = -(c.R * pos);
        rig.cameras.push_back(c);
    }
    rig.validate();
    return rig;
}

}  // namespace gazeforge::geometry
