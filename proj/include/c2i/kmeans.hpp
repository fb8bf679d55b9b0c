#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "c2i/common.hpp"

namespace c2i {

struct ClusterModel {
    Eigen::MatrixXd centroids;        // k x d, in the normalized feature space
    std::vector<int> assignments;     // point index -> cluster id
    double inertia = 0.0;             // sum of squared distances to assigned centroids
    std::vector<double> inertia_history;  // per Lloyd iteration, non-increasing
    int iterations = 0;
};

// Lloyd's algorithm with k-means++ seeding driven by a splitmix64 stream:
//   - per-dimension z-score normalization first (zero-variance dims left unscaled)
//   - first seed index = next_u64 % n
//   - each further seed drawn proportionally to squared distance via a [0,1) draw
//   - assignment ties break toward the lower cluster id
// Stops when the max centroid shift drops below tol or after max_iter rounds.
ClusterModel kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed, int max_iter = 100,
                    double tol = 1e-7);

}  // namespace c2i
