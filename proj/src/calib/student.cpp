#include "gazeforge/calib/student.hpp"

#include <cmath>

#include "gazeforge/geometry/linalg.hpp"

namespace gazeforge::calib {

StudentModel calibrate_student(const std::vector<CalibrationPair>& pairs) {
    if (pairs.size() < 3)
        throw DegenerateFitError("calibrate_student: need >= 3 pairs, got " +
                                 std::to_string(pairs.size()));

    geometry::Mat3 xtx;
    xtx.m = {0, 0, 0, 0, 0, 0, 0, 0, 0};
    geometry::Vec3 xty_lon{0, 0, 0}, xty_lat{0, 0, 0};
    double weight_sum = 0.0;
    for (const auto& p : pairs) {
        if (!(p.weight > 0.0)) throw std::invalid_argument("calibrate_student: weight must be > 0");
        const geometry::Vec3 row{p.observed[0], p.observed[1], 1.0};
        const double w = p.weight;
        xtx(0, 0) += w * row.x * row.x;
        xtx(0, 1) += w * row.x * row.y;
        xtx(0, 2) += w * row.x * row.z;
        xtx(1, 0) += w * row.y * row.x;
        xtx(1, 1) += w * row.y * row.y;
        xtx(1, 2) += w * row.y * row.z;
        xtx(2, 0) += w * row.z * row.x;
        xtx(2, 1) += w * row.z * row.y;
        xtx(2, 2) += w * row.z * row.z;
        xty_lon = xty_lon + row * (w * p.teacher[0]);
        xty_lat = xty_lat + row * (w * p.teacher[1]);
        weight_sum += w;
    }

    const auto ev = geometry::symmetric_eigenvalues(xtx);
    if (!(ev[0] > 0.0) || ev[2] / ev[0] > 1e12)
        throw DegenerateFitError("calibrate_student: rank-deficient design (collinear pairs)");

    const geometry::Vec3 theta_lon = geometry::solve3(xtx, xty_lon);
    const geometry::Vec3 theta_lat = geometry::solve3(xtx, xty_lat);

    StudentModel model;
    model.a = {{{theta_lon.x, theta_lon.y}, {theta_lat.x, theta_lat.y}}};
    model.b = {theta_lon.z, theta_lat.z};
    model.n_pairs = pairs.size();

    double sq = 0.0;
    for (const auto& p : pairs) {
        const auto fitted = model.apply(p.observed[0], p.observed[1]);
        const double dl = fitted[0] - p.teacher[0];
        const double db = fitted[1] - p.teacher[1];
        sq += p.weight * (dl * dl + db * db);
    }
    model.residual_rms = std::sqrt(sq / weight_sum);
    return model;
}

}  // namespace gazeforge::calib
