#include "conformap/knn.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace conformap {

void Dataset::validate() const {
    if (points.rows() < 2) {
        throw DataError("dataset needs at least 2 points, got " + std::to_string(points.rows()));
    }
    if (points.cols() < 1) {
        throw DataError("dataset needs at least 1 feature column");
    }
    if (!points.allFinite()) {
        throw DataError("dataset contains non-finite coordinates");
    }
    if (!labels.empty() && labels.size() != static_cast<std::size_t>(points.rows())) {
        throw DataError("label count " + std::to_string(labels.size()) +
                        " does not match point count " + std::to_string(points.rows()));
    }
    if (!ids.empty() && ids.size() != static_cast<std::size_t>(points.rows())) {
        throw DataError("id count does not match point count");
    }
}

double euclidean_distance(const Eigen::Ref<const Eigen::VectorXd>& u,
                          const Eigen::Ref<const Eigen::VectorXd>& v) {
    if (u.size() != v.size()) {
        throw UsageError("euclidean_distance: length mismatch (" + std::to_string(u.size()) +
                         " vs " + std::to_string(v.size()) + ")");
    }
    return (u - v).norm();
}

KnnGraph build_knn(const Dataset& data, int k) {
    data.validate();
    const int n = static_cast<int>(data.n_points());
    if (k < 1 || k >= n) {
        throw UsageError("build_knn: k must satisfy 1 <= k < N (k=" + std::to_string(k) +
                         ", N=" + std::to_string(n) + ")");
    }

    KnnGraph graph;
    graph.k = k;
    graph.neighbors.assign(n, {});
    graph.distances.assign(n, {});

    // Exact search over all pairs, rows independent so the loop parallelizes
    // without affecting the result.
#pragma omp parallel for schedule(dynamic, 16)
    for (int i = 0; i < n; ++i) {
        std::vector<std::pair<double, int>> candidates;
        candidates.reserve(n - 1);
        for (int j = 0; j < n; ++j) {
            if (j == i) {
                continue;
            }
            const double d = (data.points.row(i) - data.points.row(j)).norm();
            candidates.emplace_back(d, j);
        }
        // Ties resolve to the smaller index.
        std::partial_sort(candidates.begin(), candidates.begin() + k, candidates.end());
        auto& nbr = graph.neighbors[i];
        auto& dst = graph.distances[i];
        nbr.reserve(k);
        dst.reserve(k);
        for (int t = 0; t < k; ++t) {
            dst.push_back(candidates[t].first);
            nbr.push_back(candidates[t].second);
        }
    }
    return graph;
}

} // namespace conformap
