#include "gazeforge/geometry/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace gazeforge::geometry {

Mat3 Mat3::rotation_x(double a) {
    const double c = std::cos(a), s = std::sin(a);
    Mat3 r;
    r.m = {1, 0, 0, 0, c, -s, 0, s, c};
    return r;
}

Mat3 Mat3::rotation_y(double a) {
    const double c = std::cos(a), s = std::sin(a);
    Mat3 r;
    r.m = {c, 0, s, 0, 1, 0, -s, 0, c};
    return r;
}

Mat3 Mat3::rotation_z(double a) {
    const double c = std::cos(a), s = std::sin(a);
    Mat3 r;
    r.m = {c, -s, 0, s, c, 0, 0, 0, 1};
    return r;
}

Vec3 solve3(const Mat3& a, const Vec3& b) {
    const double d = a.det();
    if (d == 0.0) throw std::runtime_error("solve3: singular matrix");
    auto replace_col = [&](int col) {
        Mat3 t = a;
        t(0, col) = b.x;
        t(1, col) = b.y;
        t(2, col) = b.z;
        return t.det();
    };
    return {replace_col(0) / d, replace_col(1) / d, replace_col(2) / d};
}

std::array<double, 3> symmetric_eigenvalues(const Mat3& input) {
    Mat3 a = input;
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = std::abs(a(0, 1)) + std::abs(a(0, 2)) + std::abs(a(1, 2));
        if (off < 1e-15 * (std::abs(a(0, 0)) + std::abs(a(1, 1)) + std::abs(a(2, 2)) + 1e-300))
            break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                Mat3 j = Mat3::identity();
                j(p, p) = c;
                j(q, q) = c;
                j(p, q) = s;
                j(q, p) = -s;
                a = j.transpose() * a * j;
            }
        }
    }
    std::array<double, 3> ev = {a(0, 0), a(1, 1), a(2, 2)};
    std::sort(ev.begin(), ev.end());
    return ev;
}

}  // namespace gazeforge::geometry
