#include "gazeforge/model/mutual_information.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gazeforge::model {

namespace {

// First principal coordinate via power iteration on the (uncentered-free)
// covariance; empty/constant batches report degeneracy through the flag.
std::vector<double> principal_coordinate(const std::vector<std::vector<double>>& feats,
                                         bool& degenerate) {
    const std::size_t n = feats.size();
    const std::size_t d = feats.front().size();
    for (const auto& f : feats)
        if (f.size() != d) throw std::invalid_argument("mi_estimate: ragged feature batch");

    std::vector<double> mean(d, 0.0);
    for (const auto& f : feats)
        for (std::size_t j = 0; j < d; ++j) mean[j] += f[j];
    for (double& m : mean) m /= static_cast<double>(n);

    if (d == 1) {
        std::vector<double> z(n);
        for (std::size_t i = 0; i < n; ++i) z[i] = feats[i][0] - mean[0];
        double lo = z[0], hi = z[0];
        for (double v : z) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        degenerate = (hi - lo) < 1e-12;
        return z;
    }

    std::vector<double> v(d, 1.0 / std::sqrt(static_cast<double>(d)));
    std::vector<double> cv(d, 0.0);
    for (int iter = 0; iter < 100; ++iter) {
        std::fill(cv.begin(), cv.end(), 0.0);
        for (const auto& f : feats) {
            double proj = 0.0;
            for (std::size_t j = 0; j < d; ++j) proj += (f[j] - mean[j]) * v[j];
            for (std::size_t j = 0; j < d; ++j) cv[j] += proj * (f[j] - mean[j]);
        }
        double norm = 0.0;
        for (double c : cv) norm += c * c;
        norm = std::sqrt(norm);
        if (norm < 1e-30) {
            degenerate = true;
            return std::vector<double>(n, 0.0);
        }
        for (std::size_t j = 0; j < d; ++j) v[j] = cv[j] / norm;
    }

    std::vector<double> z(n);
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double proj = 0.0;
        for (std::size_t j = 0; j < d; ++j) proj += (feats[i][j] - mean[j]) * v[j];
        z[i] = proj;
        if (i == 0) lo = hi = proj;
        lo = std::min(lo, proj);
        hi = std::max(hi, proj);
    }
    degenerate = (hi - lo) < 1e-12;
    return z;
}

// equal-mass rank binning; stable ties by index keep identical batches aligned
std::vector<int> rank_bins(const std::vector<double>& z, int bins) {
    const std::size_t n = z.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return z[a] < z[b]; });
    std::vector<int> bin(n, 0);
    for (std::size_t rank = 0; rank < n; ++rank)
        bin[order[rank]] = static_cast<int>(rank * static_cast<std::size_t>(bins) / n);
    return bin;
}

}  // namespace

double mi_estimate(const std::vector<std::vector<double>>& x,
                   const std::vector<std::vector<double>>& y, int bins) {
    if (x.size() != y.size()) throw std::invalid_argument("mi_estimate: batch size mismatch");
    if (x.size() < 8) throw std::invalid_argument("mi_estimate: batch must be >= 8");
    if (bins < 2) throw std::invalid_argument("mi_estimate: bins must be >= 2");

    bool deg_x = false, deg_y = false;
    const std::vector<double> zx = principal_coordinate(x, deg_x);
    const std::vector<double> zy = principal_coordinate(y, deg_y);
    if (deg_x || deg_y) return 0.0;

    const std::vector<int> bx = rank_bins(zx, bins);
    const std::vector<int> by = rank_bins(zy, bins);

    const std::size_t n = x.size();
    std::vector<double> joint(static_cast<std::size_t>(bins) * bins, 0.0);
    std::vector<double> px(bins, 0.0), py(bins, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        joint[static_cast<std::size_t>(bx[i]) * bins + by[i]] += 1.0;
        px[bx[i]] += 1.0;
        py[by[i]] += 1.0;
    }
    double mi = 0.0;
    for (int a = 0; a < bins; ++a)
        for (int b = 0; b < bins; ++b) {
            const double pab = joint[static_cast<std::size_t>(a) * bins + b] / n;
            if (pab <= 0.0) continue;
            mi += pab * std::log(pab / ((px[a] / n) * (py[b] / n)));
        }
    return mi;
}

double mutual_information_loss(const std::vector<std::vector<double>>& x,
                               const std::vector<std::vector<double>>& y, int bins) {
    return -mi_estimate(x, y, bins);
}

}  // namespace gazeforge::model
