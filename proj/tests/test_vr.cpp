#include "conformap/vr.hpp"

#include "conformap/knn.hpp"
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

using namespace conformap;

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

Dataset grid_dataset(const std::vector<std::pair<double, double>>& pts) {
    Dataset data;
    data.points.resize(static_cast<Eigen::Index>(pts.size()), 2);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        data.points(static_cast<Eigen::Index>(i), 0) = pts[i].first;
        data.points(static_cast<Eigen::Index>(i), 1) = pts[i].second;
    }
    return data;
}

// Subset-checking oracle: every vertex subset of size 2..max_dim+1 whose
// pairs are all edges.
std::vector<std::vector<int>> brute_force_cliques(int n,
                                                  const std::vector<std::pair<int, int>>& edges,
                                                  int max_dim) {
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (const auto& [i, j] : edges) {
        adj[i][j] = adj[j][i] = true;
    }
    std::vector<std::vector<int>> result;
    const int cap = max_dim + 1;
    std::vector<int> subset;
    const auto is_clique = [&](const std::vector<int>& vs) {
        for (std::size_t a = 0; a < vs.size(); ++a) {
            for (std::size_t b = a + 1; b < vs.size(); ++b) {
                if (!adj[vs[a]][vs[b]]) {
                    return false;
                }
            }
        }
        return true;
    };
    // enumerate subsets in lexicographic order by recursion
    std::function<void(int)> recurse = [&](int start) {
        if (static_cast<int>(subset.size()) >= 2 && is_clique(subset)) {
            result.push_back(subset);
        } else if (subset.size() >= 2) {
            return;   // supersets of a non-clique are not cliques
        }
        if (static_cast<int>(subset.size()) == cap) {
            return;
        }
        for (int v = start; v < n; ++v) {
            subset.push_back(v);
            recurse(v + 1);
            subset.pop_back();
        }
    };
    recurse(0);
    std::sort(result.begin(), result.end());
    return result;
}

} // namespace

TEST_CASE("fuzzy_or algebra") {
    CHECK(fuzzy_or(0.3, 0.0) == doctest::Approx(0.3));
    CHECK(fuzzy_or(0.7, 1.0) == 1.0);
    CHECK_THROWS_AS(fuzzy_or(1.5, 0.2), UsageError);

    std::mt19937_64 rng(17);
    for (int t = 0; t < 2000; ++t) {
        const double a = uniform(rng, 0.0, 1.0);
        const double b = uniform(rng, 0.0, 1.0);
        const double c = uniform(rng, 0.0, 1.0);
        CHECK(std::abs(fuzzy_or(fuzzy_or(a, b), c) - fuzzy_or(a, fuzzy_or(b, c))) <= 1e-12);
        CHECK(fuzzy_or(a, b) == fuzzy_or(b, a));
    }

    // fold over {0.5, 0.5, 0.5} = 1 - 0.5^3
    double p = 0.0;
    for (int t = 0; t < 3; ++t) {
        p = fuzzy_or(p, 0.5);
    }
    CHECK(p == doctest::Approx(0.875));
}

TEST_CASE("build_delta_graph boundaries") {
    const Dataset line = grid_dataset({{0, 0}, {1, 0}, {10, 0}});
    // inclusive at distance exactly delta
    CHECK(build_delta_graph(line, 1.0) == std::vector<std::pair<int, int>>{{0, 1}});
    // delta >= diameter -> complete graph
    CHECK(build_delta_graph(line, 10.0).size() == 3);
    // delta below the minimum pairwise distance -> empty
    CHECK(build_delta_graph(line, 0.5).empty());
    CHECK_THROWS_AS(build_delta_graph(line, 0.0), UsageError);
}

TEST_CASE("enumerate_cliques small shapes") {
    // triangle: 3 edges + 1 triangle
    const std::vector<std::pair<int, int>> triangle = {{0, 1}, {0, 2}, {1, 2}};
    auto simplices = enumerate_cliques(3, triangle, {2, 1000});
    CHECK(simplices.size() == 4);

    // 4-clique capped at dim 2: C(4,2) edges + C(4,3) triangles
    std::vector<std::pair<int, int>> k4;
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            k4.emplace_back(i, j);
        }
    }
    simplices = enumerate_cliques(4, k4, {2, 1000});
    CHECK(simplices.size() == 10);

    // path graph has no triangles
    simplices = enumerate_cliques(3, {{0, 1}, {1, 2}}, {2, 1000});
    CHECK(simplices.size() == 2);

    // outputs sorted lexicographically with ascending vertices
    simplices = enumerate_cliques(4, k4, {3, 1000});
    CHECK(std::is_sorted(simplices.begin(), simplices.end()));
    for (const auto& s : simplices) {
        CHECK(std::is_sorted(s.begin(), s.end()));
    }
}

TEST_CASE("enumerate_cliques tolerates duplicate edges and rejects bad ones") {
    // duplicated edge must not duplicate the clique
    const auto simplices = enumerate_cliques(3, {{0, 1}, {0, 1}, {1, 2}}, {2, 1000});
    CHECK(simplices.size() == 2);
    CHECK_THROWS_AS(enumerate_cliques(3, {{0, 0}}, {2, 1000}), UsageError);
    CHECK_THROWS_AS(enumerate_cliques(3, {{0, 5}}, {2, 1000}), UsageError);
}

TEST_CASE("enumerate_cliques budget error") {
    std::vector<std::pair<int, int>> k6;
    for (int i = 0; i < 6; ++i) {
        for (int j = i + 1; j < 6; ++j) {
            k6.emplace_back(i, j);
        }
    }
    CHECK_THROWS_AS(enumerate_cliques(6, k6, {2, 10}), NumericError);
}

TEST_CASE("enumerate_cliques matches the subset oracle on random graphs") {
    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 8; ++trial) {
        const int n = 8 + static_cast<int>(rng() % 23);   // up to 30
        const double p_edge = 0.15 + 0.5 * uniform(rng, 0.0, 1.0);
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (uniform(rng, 0.0, 1.0) < p_edge) {
                    edges.emplace_back(i, j);
                }
            }
        }
        const int max_dim = 2 + static_cast<int>(rng() % 2);
        const auto got = enumerate_cliques(n, edges, {max_dim, 10'000'000});
        const auto want = brute_force_cliques(n, edges, max_dim);
        CHECK(got == want);
    }
}

TEST_CASE("simplex_belief folds directed probabilities") {
    DirectedProbabilities probs;

    SUBCASE("single directed value") {
        probs.set(0, 1, 0.4);
        CHECK(simplex_belief({0, 1}, probs) == doctest::Approx(0.4));
    }

    SUBCASE("triangle with one directed value of 0.5 per edge") {
        probs.set(0, 1, 0.5);
        probs.set(1, 2, 0.5);
        probs.set(0, 2, 0.5);
        CHECK(simplex_belief({0, 1, 2}, probs) == doctest::Approx(0.875));
    }

    SUBCASE("absorbing certain edge") {
        probs.set(0, 1, 1.0);
        probs.set(1, 2, 0.1);
        CHECK(simplex_belief({0, 1, 2}, probs) == 1.0);
    }

    SUBCASE("vertex order does not matter") {
        probs.set(0, 1, 0.3);
        probs.set(1, 0, 0.6);
        probs.set(2, 1, 0.2);
        const double canonical = simplex_belief({0, 1, 2}, probs);
        CHECK(simplex_belief({2, 0, 1}, probs) == canonical);
        CHECK(simplex_belief({1, 2, 0}, probs) == canonical);
    }
}

TEST_CASE("simplex_belief equals 1 - prod(1 - p) under any fold order") {
    std::mt19937_64 rng(7777);
    for (int trial = 0; trial < 200; ++trial) {
        const int size = 2 + static_cast<int>(rng() % 3);
        DirectedProbabilities probs;
        std::vector<int> simplex(size);
        for (int v = 0; v < size; ++v) {
            simplex[v] = v;
        }
        std::vector<double> values;
        for (int a = 0; a < size; ++a) {
            for (int b = 0; b < size; ++b) {
                if (a != b) {
                    const double p = uniform(rng, 0.0, 1.0);
                    probs.set(a, b, p);
                    values.push_back(p);
                }
            }
        }
        double prod = 1.0;
        for (double v : values) {
            prod *= 1.0 - v;
        }
        const double expected = 1.0 - prod;
        const double got = simplex_belief(simplex, probs);
        CHECK(got == doctest::Approx(expected).epsilon(1e-12));

        // arbitrary fold orders agree within 1e-12
        std::shuffle(values.begin(), values.end(), rng);
        double shuffled = 0.0;
        for (double v : values) {
            shuffled = fuzzy_or(shuffled, v);
        }
        CHECK(std::abs(shuffled - got) <= 1e-12);
    }
}

TEST_CASE("belief monotone under added probability") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 1000; ++t) {
        const double base = uniform(rng, 0.0, 1.0);
        const double extra = uniform(rng, 0.0, 1.0);
        CHECK(fuzzy_or(base, extra) >= base - 1e-15);
    }
}

TEST_CASE("aggregate_edge_weights geometric means") {
    VrComplex complex;
    complex.n_vertices = 3;
    complex.max_dim = 2;

    SUBCASE("edge in no higher simplex keeps its own belief") {
        complex.simplices = {{0, 1}};
        complex.beliefs = {0.4};
        const FuzzyGraph graph = aggregate_edge_weights(complex);
        REQUIRE(graph.edges.size() == 1);
        CHECK(graph.edges[0].weight == doctest::Approx(0.4));
    }

    SUBCASE("edge averaged with a containing triangle") {
        complex.simplices = {{0, 1}, {0, 2}, {1, 2}, {0, 1, 2}};
        complex.beliefs = {0.5, 0.5, 0.5, 0.875};
        const FuzzyGraph graph = aggregate_edge_weights(complex);
        REQUIRE(graph.edges.size() == 3);
        for (const auto& e : graph.edges) {
            CHECK(e.weight == doctest::Approx(std::sqrt(0.5 * 0.875)).epsilon(1e-12));
        }
        CHECK(graph.edges[0].weight == doctest::Approx(0.6614378).epsilon(1e-6));
    }

    SUBCASE("zero belief annihilates the mean") {
        complex.simplices = {{0, 1}, {0, 1, 2}};
        complex.beliefs = {0.7, 0.0};
        const FuzzyGraph graph = aggregate_edge_weights(complex);
        for (const auto& e : graph.edges) {
            if (e.i == 0 && e.j == 1) {
                CHECK(e.weight == 0.0);
            }
        }
    }
}

TEST_CASE("VR pipeline at max_dim 1 on a mutual kNN graph matches the kNN weights") {
    // two tight, far-apart pairs: kNN with k = 1 is mutual and the delta
    // graph with delta = 0.95 has exactly the same edge set
    const Dataset data = grid_dataset({{0.0, 0.0}, {0.9, 0.0}, {10.0, 0.0}, {10.9, 0.0}});
    const KnnGraph knn = build_knn(data, 1);
    const FuzzyGraph direct = build_fuzzy_graph(knn, KernelId::membership);

    const VrComplex complex =
        build_vr_complex(data, knn, KernelId::membership, 0.95, {1, 1000});
    const FuzzyGraph vr = aggregate_edge_weights(complex);

    REQUIRE(vr.edges.size() == direct.edges.size());
    for (std::size_t e = 0; e < vr.edges.size(); ++e) {
        CHECK(vr.edges[e].i == direct.edges[e].i);
        CHECK(vr.edges[e].j == direct.edges[e].j);
        CHECK(vr.edges[e].weight == doctest::Approx(direct.edges[e].weight).epsilon(1e-12));
    }
}
