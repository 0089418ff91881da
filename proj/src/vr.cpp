#include "conformap/vr.hpp"

#include "conformap/knn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace conformap {

double fuzzy_or(double x, double y) {
    if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0) {
        throw UsageError("fuzzy_or: inputs must lie in [0, 1]");
    }
    // identity and absorbing elements hold exactly
    if (x == 0.0) {
        return y;
    }
    if (y == 0.0) {
        return x;
    }
    if (x == 1.0 || y == 1.0) {
        return 1.0;
    }
    // the max keeps OR dominance exact even when the subtraction rounds down
    return std::max({x, y, std::min(x + y - x * y, 1.0)});
}

std::vector<std::pair<int, int>> build_delta_graph(const Dataset& data, double delta) {
    if (delta <= 0.0) {
        throw UsageError("delta must be positive");
    }
    data.validate();
    const int n = static_cast<int>(data.n_points());
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if ((data.points.row(i) - data.points.row(j)).norm() <= delta) {
                edges.emplace_back(i, j);
            }
        }
    }
    return edges;
}

namespace {

struct CliqueEnumerator {
    const std::vector<std::vector<int>>& adjacency;   // sorted neighbor lists
    std::size_t max_size;
    std::size_t budget;
    std::vector<std::vector<int>>& out;

    void emit(const std::vector<int>& clique) {
        if (out.size() >= budget) {
            throw NumericError("simplex budget exceeded (" + std::to_string(budget) +
                               "); lower --vr-delta or --vr-max-dim, or raise --vr-budget");
        }
        out.push_back(clique);
    }

    // Extends the current clique by candidates, all greater than its last
    // vertex and adjacent to every member. DFS in ascending order emits the
    // list already lexicographically sorted.
    void extend(std::vector<int>& clique, const std::vector<int>& candidates) {
        for (std::size_t idx = 0; idx < candidates.size(); ++idx) {
            const int v = candidates[idx];
            clique.push_back(v);
            if (clique.size() >= 2) {
                emit(clique);
            }
            if (clique.size() < max_size) {
                std::vector<int> next;
                const auto& nbr = adjacency[v];
                for (std::size_t t = idx + 1; t < candidates.size(); ++t) {
                    if (std::binary_search(nbr.begin(), nbr.end(), candidates[t])) {
                        next.push_back(candidates[t]);
                    }
                }
                if (!next.empty()) {
                    extend(clique, next);
                }
            }
            clique.pop_back();
        }
    }
};

} // namespace

std::vector<std::vector<int>> enumerate_cliques(int n_vertices,
                                                const std::vector<std::pair<int, int>>& edges,
                                                const CliqueOptions& opts) {
    if (opts.max_dim < 1) {
        throw UsageError("max_dim must be at least 1");
    }
    std::vector<std::vector<int>> adjacency(n_vertices);
    for (const auto& [i, j] : edges) {
        if (i == j || i < 0 || j < 0 || i >= n_vertices || j >= n_vertices) {
            throw UsageError("enumerate_cliques: invalid edge (" + std::to_string(i) + ", " +
                             std::to_string(j) + ")");
        }
        adjacency[i].push_back(j);
        adjacency[j].push_back(i);
    }
    for (auto& nbr : adjacency) {
        std::sort(nbr.begin(), nbr.end());
        nbr.erase(std::unique(nbr.begin(), nbr.end()), nbr.end());
    }

    std::vector<std::vector<int>> simplices;
    CliqueEnumerator enumerator{adjacency, static_cast<std::size_t>(opts.max_dim) + 1,
                                opts.budget, simplices};
    std::vector<int> clique;
    for (int v = 0; v < n_vertices; ++v) {
        clique.assign(1, v);
        std::vector<int> candidates;
        for (int u : adjacency[v]) {
            if (u > v) {
                candidates.push_back(u);
            }
        }
        if (!candidates.empty()) {
            enumerator.extend(clique, candidates);
        }
    }
    return simplices;
}

double simplex_belief(const std::vector<int>& simplex, const DirectedProbabilities& probs,
                      FoldMode mode) {
    std::vector<int> vertices(simplex);
    std::sort(vertices.begin(), vertices.end());

    double belief = 0.0;   // identity of the OR fold
    for (std::size_t s = 0; s < vertices.size(); ++s) {
        for (std::size_t t = s + 1; t < vertices.size(); ++t) {
            const int a = vertices[s];
            const int b = vertices[t];
            if (mode == FoldMode::both_directed) {
                belief = fuzzy_or(belief, probs.get(a, b));
                belief = fuzzy_or(belief, probs.get(b, a));
            } else {
                belief = fuzzy_or(belief, symmetrize(probs.get(a, b), probs.get(b, a)));
            }
        }
    }
    return belief;
}

VrComplex build_vr_complex(const Dataset& data, const KnnGraph& knn, KernelId kernel,
                           double delta, const CliqueOptions& opts, FoldMode mode,
                           const SigmaOptions& sigma_opts) {
    const auto edges = build_delta_graph(data, delta);
    const LocalScale scales = compute_local_scales(knn, kernel, sigma_opts);

    DirectedProbabilities probs;
    for (const auto& [i, j] : edges) {
        const double d = (data.points.row(i) - data.points.row(j)).norm();
        probs.set(i, j, directed_probability(kernel, d, scales.rho[i], scales.sigma[i]));
        probs.set(j, i, directed_probability(kernel, d, scales.rho[j], scales.sigma[j]));
    }

    VrComplex complex;
    complex.n_vertices = static_cast<int>(data.n_points());
    complex.delta = delta;
    complex.max_dim = opts.max_dim;
    complex.simplices = enumerate_cliques(static_cast<int>(data.n_points()), edges, opts);
    complex.beliefs.resize(complex.simplices.size());

#pragma omp parallel for schedule(dynamic, 256)
    for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(complex.simplices.size()); ++s) {
        complex.beliefs[s] = simplex_belief(complex.simplices[s], probs, mode);
    }
    return complex;
}

FuzzyGraph aggregate_edge_weights(const VrComplex& complex) {
    struct Accumulator {
        double log_sum = 0.0;
        std::size_t count = 0;
        bool zero = false;
    };
    std::unordered_map<std::uint64_t, Accumulator> acc;
    const auto pack = [](int a, int b) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
               static_cast<std::uint32_t>(b);
    };

    for (std::size_t s = 0; s < complex.simplices.size(); ++s) {
        const auto& simplex = complex.simplices[s];
        const double belief = complex.beliefs[s];
        for (std::size_t a = 0; a < simplex.size(); ++a) {
            for (std::size_t b = a + 1; b < simplex.size(); ++b) {
                auto& slot = acc[pack(simplex[a], simplex[b])];
                if (belief <= 0.0) {
                    slot.zero = true;
                } else {
                    slot.log_sum += std::log(belief);
                }
                ++slot.count;
            }
        }
    }

    FuzzyGraph graph;
    graph.n_vertices = static_cast<std::size_t>(complex.n_vertices);
    graph.edges.reserve(acc.size());
    for (const auto& [key, slot] : acc) {
        FuzzyEdge edge;
        edge.i = static_cast<int>(key >> 32);
        edge.j = static_cast<int>(key & 0xffffffffu);
        edge.weight = slot.zero ? 0.0
                                : std::min(1.0, std::exp(slot.log_sum /
                                                         static_cast<double>(slot.count)));
        graph.edges.push_back(edge);
    }
    std::sort(graph.edges.begin(), graph.edges.end(), [](const FuzzyEdge& a, const FuzzyEdge& b) {
        return std::pair(a.i, a.j) < std::pair(b.i, b.j);
    });
    return graph;
}

} // namespace conformap
