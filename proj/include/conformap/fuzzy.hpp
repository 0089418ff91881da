#ifndef CONFORMAP_FUZZY_HPP
#define CONFORMAP_FUZZY_HPP

#include "conformap/kernels.hpp"
#include "conformap/types.hpp"

#include <cstdint>
#include <vector>

namespace conformap {

// Bisection bracket and tolerance for the per-point scale search.
struct SigmaOptions {
    double sigma_min = 1e-6;
    double sigma_max = 1e3;
    int max_iterations = 100;
    double tolerance = 1e-5;
};

// Per-point conformal rescaling state. A point is flagged when the neighbor
// sum cannot reach the log2(k) target inside the bisection bracket.
struct LocalScale {
    std::vector<double> rho;        // distance to nearest neighbor
    std::vector<double> sigma;      // rescaling factor, within the bracket
    std::vector<std::uint8_t> flagged;
    double target = 0.0;            // log2(k)

    std::size_t flagged_count() const;
};

// Solves sum_j kernel(max(d_ij - rho_i, 0), sigma) = log2(k) for sigma by
// bisection. Returns the nearer bracket endpoint and sets *flagged when the
// target is unreachable. The constant kernel is pinned at sum == k, so the
// search is skipped and sigma = 1 is returned flagged.
double solve_sigma(const KnnGraph& knn, KernelId kernel, int i,
                   const SigmaOptions& opts, bool* flagged);

// rho, sigma and flags for every point.
LocalScale compute_local_scales(const KnnGraph& knn, KernelId kernel,
                                const SigmaOptions& opts = {});

// Directed probability p_{i|j} for a neighbor at distance d of a point with
// local scale (rho, sigma).
double directed_probability(KernelId kernel, double d, double rho, double sigma);

// Probabilistic OR of two directed beliefs: p + q - pq.
// Inputs outside [0, 1] raise UsageError.
double symmetrize(double p, double q);

// Achieved neighbor sums sum_j p_{i|j}, one per point.
std::vector<double> neighbor_probability_sums(const KnnGraph& knn, KernelId kernel,
                                              const LocalScale& scales);

// Full pipeline: scales, directed probabilities over kNN edges (missing
// directions contribute 0), OR-symmetrization into an undirected graph.
FuzzyGraph build_fuzzy_graph(const KnnGraph& knn, KernelId kernel,
                             const LocalScale& scales);
FuzzyGraph build_fuzzy_graph(const KnnGraph& knn, KernelId kernel,
                             const SigmaOptions& opts = {});

} // namespace conformap

#endif
