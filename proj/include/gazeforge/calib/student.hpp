#pragma once

#include <array>
#include <stdexcept>
#include <vector>

namespace gazeforge::calib {

class DegenerateFitError : public std::runtime_error {
public:
    explicit DegenerateFitError(const std::string& what) : std::runtime_error(what) {}
};

// (observed, teacher) angle pair in radians; in-window pairs carry weight 2.
struct CalibrationPair {
    std::array<double, 2> observed{0.0, 0.0};  // (lon, lat)
    std::array<double, 2> teacher{0.0, 0.0};
    double weight = 1.0;
};

// Affine correction observed -> corrected angles.
struct StudentModel {
    std::array<std::array<double, 2>, 2> a{{{1.0, 0.0}, {0.0, 1.0}}};
    std::array<double, 2> b{0.0, 0.0};
    std::size_t n_pairs = 0;
    double residual_rms = 0.0;

    static StudentModel identity() { return StudentModel{}; }
    std::array<double, 2> apply(double lon, double lat) const {
        return {a[0][0] * lon + a[0][1] * lat + b[0], a[1][0] * lon + a[1][1] * lat + b[1]};
    }
};

// Weighted least squares over >= 3 non-collinear pairs. Throws
// DegenerateFitError for rank-deficient designs.
StudentModel calibrate_student(const std::vector<CalibrationPair>& pairs);

inline std::array<double, 2> apply_student(const StudentModel& model, double lon, double lat) {
    return model.apply(lon, lat);
}

}  // namespace gazeforge::calib
