#pragma once

#include <vector>

namespace gazeforge::model {

// Histogram plug-in estimate of I(X;Y): each feature batch is reduced to its
// first principal coordinate, split into `bins` equal-mass (rank) bins, and
// the discrete MI of the joint histogram is returned (nats). Degenerate
// (constant) features give 0 by convention. Requires batch >= 8.
double mi_estimate(const std::vector<std::vector<double>>& x,
                   const std::vector<std::vector<double>>& y, int bins = 4);

// L_mi = -I(X;Y)
double mutual_information_loss(const std::vector<std::vector<double>>& x,
                               const std::vector<std::vector<double>>& y, int bins = 4);

}  // namespace gazeforge::model
