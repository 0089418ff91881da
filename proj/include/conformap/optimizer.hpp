#ifndef CONFORMAP_OPTIMIZER_HPP
#define CONFORMAP_OPTIMIZER_HPP

#include "conformap/curve.hpp"
#include "conformap/types.hpp"

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace conformap {

enum class InitMethod { random, pca };

InitMethod parse_init(std::string_view name);
std::string init_name(InitMethod init);

struct OptimizerConfig {
    int n_components = 2;
    int n_epochs = 500;
    double learning_rate = 1.0;       // decays linearly to 0
    double alpha_repulsion = 1.0;
    int negative_sample_rate = 5;
    double min_dist = 0.001;
    std::uint64_t seed = 42;
    InitMethod init = InitMethod::pca;
};

// Clamp inside every log argument; keeps the loss and its gradient finite.
inline constexpr double kEpsLog = 1e-9;

// Per-coordinate cap on repulsion updates near coincident points.
inline constexpr double kRepulsionClip = 4.0;

// Full cross-entropy loss: attraction over fuzzy edges plus alpha times the
// repulsion term over all non-edges.
double loss(const FuzzyGraph& fuzzy, const Embedding& emb, double alpha);

// Exact analytic gradient of loss() with respect to every embedded point.
Matrix loss_gradient(const FuzzyGraph& fuzzy, const Embedding& emb, double alpha);

// Gradient coefficients c such that grad_{y_i} term = c * (y_i - y_j), for
// squared distance dist_sq > 0. Attraction differentiates -log w_l;
// repulsion differentiates -alpha * log(1 - w_l) and is negative.
double attraction_grad_coeff(double dist_sq, const CurveParams& curve);
double repulsion_grad_coeff(double dist_sq, const CurveParams& curve, double alpha);

enum class SampleKind { attraction, repulsion };

// Deterministic per-epoch sampling schedule. Each edge fires every
// ceil(max_w / w) epochs; a firing edge contributes one attraction sample and
// negative_sample_rate uniform vertex draws per endpoint, kept only when the
// draw is neither the head nor one of its fuzzy neighbors. Vertices with no
// incident edge draw their own negatives each epoch so repulsion-only
// configurations still separate.
class EpochSchedule {
public:
    EpochSchedule(const FuzzyGraph& graph, int negative_sample_rate);

    bool edge_fires(std::size_t edge_index, int epoch) const;
    bool is_neighbor(int u, int v) const;
    const std::vector<int>& isolated_vertices() const { return isolated_; }
    std::size_t n_vertices() const { return n_vertices_; }

    // Calls visit(kind, head, other) for every sample of one epoch, consuming
    // RNG draws in a fixed order. Attraction samples carry the edge weight's
    // endpoints (head = i, other = j); repulsion samples carry the moving
    // head and the sampled vertex.
    template <typename Visitor>
    void run_epoch(int epoch, std::mt19937_64& rng, Visitor&& visit) const {
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            if (!edge_fires(e, epoch)) {
                continue;
            }
            const auto& edge = edges_[e];
            visit(SampleKind::attraction, edge.i, edge.j);
            draw_negatives(edge.i, rng, visit);
            draw_negatives(edge.j, rng, visit);
        }
        for (int v : isolated_) {
            draw_negatives(v, rng, visit);
        }
    }

private:
    template <typename Visitor>
    void draw_negatives(int head, std::mt19937_64& rng, Visitor&& visit) const {
        for (int s = 0; s < negative_sample_rate_; ++s) {
            int other = static_cast<int>(rng() % n_vertices_);
            if (other == head || is_neighbor(head, other)) {
                continue;
            }
            visit(SampleKind::repulsion, head, other);
        }
    }

    std::vector<FuzzyEdge> edges_;
    std::vector<long long> periods_;            // <= 0 means never fires
    std::vector<std::vector<int>> adjacency_;   // sorted neighbor lists
    std::vector<int> isolated_;
    std::size_t n_vertices_ = 0;
    int negative_sample_rate_ = 0;
};

// Initial coordinates per the configured method: uniform random in
// [-10, 10]^n, or the PCA projection rescaled to the same range.
Matrix initialize_embedding(const Dataset& data, const OptimizerConfig& cfg);

// Stochastic gradient descent on the attraction + repulsion cross-entropy.
// Single-threaded, bit-reproducible from cfg.seed.
Embedding optimize(const FuzzyGraph& fuzzy, const Dataset& data, const OptimizerConfig& cfg);

// Variant starting from caller-supplied coordinates.
Embedding optimize_from(Matrix initial, const FuzzyGraph& fuzzy, const OptimizerConfig& cfg);

} // namespace conformap

#endif
