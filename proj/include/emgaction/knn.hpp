#pragma once

#include <algorithm>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "emgaction/errors.hpp"

namespace emgaction {

struct KnnModel {
    Eigen::MatrixXd points;
    std::vector<int> labels;
    int k = 1;
    int n_classes = 0;
};

inline KnnModel knn_train(const Eigen::MatrixXd& X, const std::vector<int>& y, int k, int n_classes) {
    if (X.rows() == 0) throw EmptyModelError("knn_train: empty training set");
    if (static_cast<std::size_t>(X.rows()) != y.size())
        throw DimError("knn_train: rows and labels disagree");
    if (k < 1 || k > static_cast<int>(X.rows()))
        throw ConfigError("knn_train: k must be in [1, rows]");
    return KnnModel{X, y, k, n_classes};
}

// Euclidean majority vote among the k nearest training rows. Vote ties go to
// the tied class with the nearest neighbor; exact distance ties fall back to
// the lowest class index.
inline int knn_predict(const KnnModel& model, const Eigen::RowVectorXd& x) {
    if (model.points.rows() == 0) throw EmptyModelError("knn_predict: empty model");
    if (x.size() != model.points.cols()) throw DimError("knn_predict: dimension mismatch");

    const Eigen::Index n = model.points.rows();
    std::vector<std::pair<double, int>> dist(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        dist[static_cast<std::size_t>(i)] = {(model.points.row(i) - x).squaredNorm(), static_cast<int>(i)};
    const int k = model.k;
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());

    std::vector<int> votes(static_cast<std::size_t>(model.n_classes), 0);
    std::vector<double> nearest(static_cast<std::size_t>(model.n_classes),
                                std::numeric_limits<double>::infinity());
    for (int i = 0; i < k; ++i) {
        const int cls = model.labels[static_cast<std::size_t>(dist[static_cast<std::size_t>(i)].second)];
        ++votes[static_cast<std::size_t>(cls)];
        nearest[static_cast<std::size_t>(cls)] =
            std::min(nearest[static_cast<std::size_t>(cls)], dist[static_cast<std::size_t>(i)].first);
    }
    const int best_votes = *std::max_element(votes.begin(), votes.end());

    // Among vote-tied classes the one with the nearest neighbor wins; exact
    // distance ties fall back to the lowest class index.
    int winner = -1;
    for (int cls = 0; cls < model.n_classes; ++cls) {
        if (votes[static_cast<std::size_t>(cls)] != best_votes) continue;
        if (winner < 0 || nearest[static_cast<std::size_t>(cls)] < nearest[static_cast<std::size_t>(winner)])
            winner = cls;
    }
    return winner;
}

inline std::vector<int> knn_predict_batch(const KnnModel& model, const Eigen::MatrixXd& X) {
    std::vector<int> out(static_cast<std::size_t>(X.rows()));
    for (Eigen::Index i = 0; i < X.rows(); ++i) out[static_cast<std::size_t>(i)] = knn_predict(model, X.row(i));
    return out;
}

} // namespace emgaction
