#ifndef CONFORMAP_TYPES_HPP
#define CONFORMAP_TYPES_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace conformap {

// Dense row-major coordinate matrix: one row per point.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Error taxonomy mapped to CLI exit codes: usage = 1, data = 2, numeric = 3.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// High-dimensional sample: N points in R^m, optional integer class labels.
struct Dataset {
    Matrix points;                      // N x m
    std::vector<int> labels;            // empty, or exactly N entries
    std::vector<std::string> ids;       // empty, or exactly N entries

    Eigen::Index n_points() const { return points.rows(); }
    Eigen::Index n_features() const { return points.cols(); }
    bool has_labels() const { return !labels.empty(); }

    // Enforces N >= 2, m >= 1, finite coordinates, label/id counts.
    void validate() const;
};

// Exact k-nearest-neighbor lists, distances sorted ascending per point.
struct KnnGraph {
    int k = 0;
    std::vector<std::vector<int>> neighbors;      // N lists of k indices
    std::vector<std::vector<double>> distances;   // matching distances

    std::size_t n_points() const { return neighbors.size(); }
};

struct FuzzyEdge {
    int i = 0;      // i < j
    int j = 0;
    double weight = 0.0;
};

// Symmetric weighted graph, edges sorted lexicographically by (i, j).
struct FuzzyGraph {
    std::size_t n_vertices = 0;
    std::vector<FuzzyEdge> edges;
};

// Low-dimensional state: coordinates plus the weight-curve parameters.
struct Embedding {
    Matrix coords;          // N x n
    double curve_a = 1.0;
    double curve_b = 1.0;
    double min_dist = 0.1;

    Eigen::Index n_points() const { return coords.rows(); }
    Eigen::Index n_components() const { return coords.cols(); }
};

} // namespace conformap

#endif
