#pragma once

#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace gazeforge::tinynn {

// Dense row-major matrix of doubles. Shape is fixed at construction.
class Tensor2 {
public:
    Tensor2() = default;
    Tensor2(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(check_size(rows, cols), fill) {}
    Tensor2(int rows, int cols, std::vector<double> values)
        : rows_(rows), cols_(cols), data_(std::move(values)) {
        if (data_.size() != check_size(rows, cols))
            throw std::invalid_argument("Tensor2: value count does not match shape");
    }

    static Tensor2 row(std::initializer_list<double> values) {
        return Tensor2(1, static_cast<int>(values.size()), std::vector<double>(values));
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    double operator[](std::size_t i) const { return data_[i]; }
    double& operator[](std::size_t i) { return data_[i]; }

    const std::vector<double>& values() const { return data_; }
    std::vector<double>& values() { return data_; }

    bool same_shape(const Tensor2& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    bool all_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

private:
    static std::size_t check_size(int rows, int cols) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("Tensor2: negative shape");
        return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

}  // namespace gazeforge::tinynn
