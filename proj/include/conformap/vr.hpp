#ifndef CONFORMAP_VR_HPP
#define CONFORMAP_VR_HPP

#include "conformap/fuzzy.hpp"
#include "conformap/types.hpp"

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

namespace conformap {

// Associative OR used to fold edge beliefs over a simplex.
double fuzzy_or(double x, double y);

// All pairs (i, j), i < j, at Euclidean distance <= delta, sorted.
std::vector<std::pair<int, int>> build_delta_graph(const Dataset& data, double delta);

struct CliqueOptions {
    int max_dim = 2;                       // emit cliques of size 2 .. max_dim + 1
    std::size_t budget = 10'000'000;       // abort past this many simplices
};

// Every clique of size 2 .. max_dim+1, vertices ascending, list sorted
// lexicographically. Exceeding the simplex budget raises NumericError.
std::vector<std::vector<int>> enumerate_cliques(int n_vertices,
                                                const std::vector<std::pair<int, int>>& edges,
                                                const CliqueOptions& opts = {});

// Directed edge probabilities keyed by ordered pair; absent pairs read as 0.
class DirectedProbabilities {
public:
    void set(int i, int j, double p) { map_[key(i, j)] = p; }
    double get(int i, int j) const {
        auto it = map_.find(key(i, j));
        return it == map_.end() ? 0.0 : it->second;
    }
    std::size_t size() const { return map_.size(); }

private:
    static std::uint64_t key(int i, int j) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
               static_cast<std::uint32_t>(j);
    }
    std::unordered_map<std::uint64_t, double> map_;
};

// Which probabilities feed the per-simplex fold: both directed values of each
// unordered edge, or the OR-symmetrized value once per edge.
enum class FoldMode { both_directed, symmetrized_once };

// Fold of fuzzy_or over the constituent edge probabilities of a simplex;
// equals 1 - prod(1 - p) over the folded values.
double simplex_belief(const std::vector<int>& simplex, const DirectedProbabilities& probs,
                      FoldMode mode = FoldMode::both_directed);

struct VrComplex {
    int n_vertices = 0;
    double delta = 0.0;
    int max_dim = 2;
    std::vector<std::vector<int>> simplices;   // sizes 2 .. max_dim + 1
    std::vector<double> beliefs;               // one per simplex
};

// Delta graph -> clique complex -> per-simplex beliefs. rho/sigma come from
// the kNN structure exactly as in the kNN pipeline.
VrComplex build_vr_complex(const Dataset& data, const KnnGraph& knn, KernelId kernel,
                           double delta, const CliqueOptions& opts = {},
                           FoldMode mode = FoldMode::both_directed,
                           const SigmaOptions& sigma_opts = {});

// Per-edge geometric mean of the beliefs of every simplex containing the
// edge (the edge itself included).
FuzzyGraph aggregate_edge_weights(const VrComplex& complex);

} // namespace conformap

#endif
