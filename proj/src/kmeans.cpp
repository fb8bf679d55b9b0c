#include "c2i/kmeans.hpp"

#include <cmath>
#include <limits>

namespace c2i {
namespace {

int nearest_centroid(const Eigen::MatrixXd& centroids, const Eigen::RowVectorXd& p,
                     double* dist2_out = nullptr) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
        double d = (centroids.row(c) - p).squaredNorm();
        if (d < best_d) {  // strict: ties stay with the lower id
            best_d = d;
            best = int(c);
        }
    }
    if (dist2_out) *dist2_out = best_d;
    return best;
}

}  // namespace

ClusterModel kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed, int max_iter,
                    double tol) {
    Eigen::Index n = points.rows(), d = points.cols();
    if (k < 1 || n < k) throw PipelineError("kmeans: need at least k points");
    if (d < 1) throw PipelineError("kmeans: dimensionality must be >= 1");
    if (!points.allFinite()) throw PipelineError("kmeans: non-finite feature values");

    // z-score normalization, zero-variance dimensions unscaled
    Eigen::RowVectorXd mean = points.colwise().mean();
    Eigen::MatrixXd x = points.rowwise() - mean;
    Eigen::RowVectorXd stddev = (x.array().square().colwise().sum() / double(n)).sqrt();
    for (Eigen::Index j = 0; j < d; ++j)
        if (stddev[j] > 0.0) x.col(j) /= stddev[j];

    // k-means++ seeding
    std::uint64_t rng = seed;
    Eigen::MatrixXd centroids(k, d);
    centroids.row(0) = x.row(Eigen::Index(splitmix64(rng) % std::uint64_t(n)));
    Eigen::VectorXd dist2(n);
    for (int c = 1; c < k; ++c) {
        for (Eigen::Index i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (int j = 0; j < c; ++j)
                best = std::min(best, (x.row(i) - centroids.row(j)).squaredNorm());
            dist2[i] = best;
        }
        double total = dist2.sum();
        Eigen::Index pick = 0;
        if (total > 0.0) {
            double r = splitmix_unit(rng) * total;
            double cum = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                cum += dist2[i];
                if (cum >= r) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = Eigen::Index(splitmix64(rng) % std::uint64_t(n));
        }
        centroids.row(c) = x.row(pick);
    }

    ClusterModel model;
    model.assignments.assign(std::size_t(n), 0);
    for (int iter = 0; iter < max_iter; ++iter) {
        double inertia = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            double d2;
            model.assignments[std::size_t(i)] = nearest_centroid(centroids, x.row(i), &d2);
            inertia += d2;
        }
        model.inertia_history.push_back(inertia);
        model.inertia = inertia;
        model.iterations = iter + 1;

        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, d);
        Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
        for (Eigen::Index i = 0; i < n; ++i) {
            sums.row(model.assignments[std::size_t(i)]) += x.row(i);
            counts[model.assignments[std::size_t(i)]] += 1.0;
        }
        double shift = 0.0;
        for (int c = 0; c < k; ++c) {
            if (counts[c] == 0.0) continue;  // empty cluster keeps its centroid
            Eigen::RowVectorXd updated = sums.row(c) / counts[c];
            shift = std::max(shift, (updated - centroids.row(c)).norm());
            centroids.row(c) = updated;
        }
        if (shift < tol) break;
    }

    // final assignment/inertia against the last centroids
    double inertia = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double d2;
        model.assignments[std::size_t(i)] = nearest_centroid(centroids, x.row(i), &d2);
        inertia += d2;
    }
    model.inertia = inertia;
    model.centroids = std::move(centroids);
    return model;
}

}  // namespace c2i
