#include "conformap/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <unordered_map>
#include <utility>

namespace conformap {

std::size_t LocalScale::flagged_count() const {
    return static_cast<std::size_t>(std::count(flagged.begin(), flagged.end(), std::uint8_t{1}));
}

namespace {

// Shifted distances x_j = max(d_ij - rho_i, 0) for one point.
std::vector<double> shifted_distances(const KnnGraph& knn, int i) {
    const auto& dist = knn.distances[i];
    const double rho = dist.front();
    std::vector<double> x(dist.size());
    for (std::size_t t = 0; t < dist.size(); ++t) {
        x[t] = std::max(dist[t] - rho, 0.0);
    }
    return x;
}

double neighbor_sum(KernelId kernel, const std::vector<double>& x, double sigma) {
    double sum = 0.0;
    for (double xi : x) {
        sum += kernel_eval(kernel, xi, sigma);
    }
    return sum;
}

} // namespace

double solve_sigma(const KnnGraph& knn, KernelId kernel, int i,
                   const SigmaOptions& opts, bool* flagged) {
    bool local_flag = false;
    double sigma = 1.0;

    if (kernel == KernelId::constant) {
        // The sum is k identically; nothing to solve.
        local_flag = true;
    } else {
        const std::vector<double> x = shifted_distances(knn, i);
        const double target = std::log2(static_cast<double>(knn.k));

        double lo = opts.sigma_min;
        double hi = opts.sigma_max;
        const double sum_lo = neighbor_sum(kernel, x, lo);
        const double sum_hi = neighbor_sum(kernel, x, hi);

        if (std::abs(sum_lo - target) <= opts.tolerance) {
            sigma = lo;
        } else if (std::abs(sum_hi - target) <= opts.tolerance) {
            sigma = hi;
        } else if (sum_lo > target) {
            // Already above the target at the smallest scale (e.g. several
            // neighbors at distance rho pin their terms at 1).
            sigma = lo;
            local_flag = true;
        } else if (sum_hi < target) {
            sigma = hi;
            local_flag = true;
        } else {
            // The sum is non-decreasing in sigma, so bisection converges.
            double mid = 0.5 * (lo + hi);
            bool converged = false;
            for (int iter = 0; iter < opts.max_iterations; ++iter) {
                mid = 0.5 * (lo + hi);
                const double sum = neighbor_sum(kernel, x, mid);
                if (std::abs(sum - target) <= opts.tolerance) {
                    converged = true;
                    break;
                }
                if (sum > target) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            sigma = mid;
            local_flag = !converged;
        }
    }

    if (flagged != nullptr) {
        *flagged = local_flag;
    }
    return sigma;
}

LocalScale compute_local_scales(const KnnGraph& knn, KernelId kernel,
                                const SigmaOptions& opts) {
    const int n = static_cast<int>(knn.n_points());
    LocalScale scales;
    scales.rho.resize(n);
    scales.sigma.resize(n);
    scales.flagged.assign(n, 0);
    scales.target = std::log2(static_cast<double>(knn.k));

#pragma omp parallel for schedule(dynamic, 64)
    for (int i = 0; i < n; ++i) {
        scales.rho[i] = knn.distances[i].front();
        bool flag = false;
        scales.sigma[i] = solve_sigma(knn, kernel, i, opts, &flag);
        scales.flagged[i] = flag ? 1 : 0;
    }
    return scales;
}

double directed_probability(KernelId kernel, double d, double rho, double sigma) {
    return kernel_eval(kernel, std::max(d - rho, 0.0), sigma);
}

double symmetrize(double p, double q) {
    if (p < 0.0 || p > 1.0 || q < 0.0 || q > 1.0) {
        throw UsageError("symmetrize: probabilities must lie in [0, 1]");
    }
    // identity and absorbing elements hold exactly
    if (p == 0.0) {
        return q;
    }
    if (q == 0.0) {
        return p;
    }
    if (p == 1.0 || q == 1.0) {
        return 1.0;
    }
    // the max keeps OR dominance exact even when the subtraction rounds down
    return std::max({p, q, std::min(p + q - p * q, 1.0)});
}

std::vector<double> neighbor_probability_sums(const KnnGraph& knn, KernelId kernel,
                                              const LocalScale& scales) {
    const std::size_t n = knn.n_points();
    std::vector<double> sums(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t t = 0; t < knn.distances[i].size(); ++t) {
            sum += directed_probability(kernel, knn.distances[i][t], scales.rho[i],
                                        scales.sigma[i]);
        }
        sums[i] = sum;
    }
    return sums;
}

FuzzyGraph build_fuzzy_graph(const KnnGraph& knn, KernelId kernel,
                             const LocalScale& scales) {
    const int n = static_cast<int>(knn.n_points());

    // Directed probabilities keyed by the unordered pair; one slot per
    // direction, missing direction stays 0.
    struct Directed {
        double forward = 0.0;   // p_{a|b} with a < b
        double backward = 0.0;  // p_{b|a}
    };
    std::unordered_map<std::uint64_t, Directed> pairs;
    pairs.reserve(knn.n_points() * knn.k);

    const auto pack = [](int a, int b) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
               static_cast<std::uint32_t>(b);
    };

    for (int i = 0; i < n; ++i) {
        for (std::size_t t = 0; t < knn.neighbors[i].size(); ++t) {
            const int j = knn.neighbors[i][t];
            const double p = directed_probability(kernel, knn.distances[i][t],
                                                  scales.rho[i], scales.sigma[i]);
            const int a = std::min(i, j);
            const int b = std::max(i, j);
            auto& slot = pairs[pack(a, b)];
            if (i == a) {
                slot.forward = p;
            } else {
                slot.backward = p;
            }
        }
    }

    FuzzyGraph graph;
    graph.n_vertices = static_cast<std::size_t>(n);
    graph.edges.reserve(pairs.size());
    for (const auto& [key, slot] : pairs) {
        FuzzyEdge edge;
        edge.i = static_cast<int>(key >> 32);
        edge.j = static_cast<int>(key & 0xffffffffu);
        edge.weight = symmetrize(slot.forward, slot.backward);
        graph.edges.push_back(edge);
    }
    std::sort(graph.edges.begin(), graph.edges.end(), [](const FuzzyEdge& a, const FuzzyEdge& b) {
        return std::pair(a.i, a.j) < std::pair(b.i, b.j);
    });
    return graph;
}

FuzzyGraph build_fuzzy_graph(const KnnGraph& knn, KernelId kernel,
                             const SigmaOptions& opts) {
    return build_fuzzy_graph(knn, kernel, compute_local_scales(knn, kernel, opts));
}

} // namespace conformap
