#ifndef CONFORMAP_EVAL_HPP
#define CONFORMAP_EVAL_HPP

#include "conformap/kernels.hpp"
#include "conformap/types.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace conformap {

// Edge universe for the divergence sums: just the fuzzy edges, or every
// vertex pair with missing edges read as weight 0.
enum class EdgeSet { fuzzy_edges, all_pairs };

// Bernoulli cross-entropy between the high- and low-dimensional weights.
double cross_entropy(const FuzzyGraph& fuzzy, const Embedding& emb, EdgeSet edge_set);

// Per-edge Bernoulli KL divergence, >= 0, zero iff the weight fields match.
double kl_divergence(const FuzzyGraph& fuzzy, const Embedding& emb, EdgeSet edge_set);

// Bernoulli entropy of the high-dimensional weights (0 log 0 = 0).
double entropy(const FuzzyGraph& fuzzy, EdgeSet edge_set);

// Density clustering on the embedding; returns one label per point with -1
// for noise. Deterministic given the point order.
std::vector<int> cluster_dbscan(const Embedding& emb, double eps, int min_pts);

// Adjusted Rand index under the permutation model.
double adjusted_rand(std::span<const int> labels_true, std::span<const int> labels_pred);

// Adjusted mutual information with the hypergeometric expected-MI correction
// and max-entropy normalization.
double adjusted_mutual_info(std::span<const int> labels_true, std::span<const int> labels_pred);

// Mean silhouette over non-noise points; singleton clusters score 0. Fewer
// than two clusters after noise removal raises UsageError.
double silhouette(const Embedding& emb, std::span<const int> labels);

struct ScoreReport {
    KernelId kernel = KernelId::membership;
    double ars = 0.0;
    double amis = 0.0;
    double silhouette = 0.0;
    int n_clusters_found = 0;
    std::uint64_t seed = 0;
};

} // namespace conformap

#endif
