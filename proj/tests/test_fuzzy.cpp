#include "conformap/fuzzy.hpp"

#include "conformap/knn.hpp"
#include "doctest.h"

#include <cmath>
#include <random>

using namespace conformap;

namespace {

KnnGraph synthetic_knn(int k, std::vector<std::vector<int>> neighbors,
                       std::vector<std::vector<double>> distances) {
    KnnGraph graph;
    graph.k = k;
    graph.neighbors = std::move(neighbors);
    graph.distances = std::move(distances);
    return graph;
}

Dataset line_dataset(const std::vector<double>& xs) {
    Dataset data;
    data.points.resize(static_cast<Eigen::Index>(xs.size()), 1);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        data.points(static_cast<Eigen::Index>(i), 0) = xs[i];
    }
    return data;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

} // namespace

TEST_CASE("solve_sigma recovers the closed-form scale") {
    // Distances (rho, rho+1, rho+1, rho+1) with the membership kernel give
    // 1 + 3 exp(-1/sigma) = log2(4) = 2, hence sigma = 1/ln 3.
    const auto knn = synthetic_knn(4, {{1, 2, 3, 4}}, {{1.0, 2.0, 2.0, 2.0}});
    bool flagged = true;
    const double sigma = solve_sigma(knn, KernelId::membership, 0, {}, &flagged);
    CHECK_FALSE(flagged);
    CHECK(sigma == doctest::Approx(1.0 / std::log(3.0)).epsilon(1e-4));

    const double sum = 1.0 + 3.0 * std::exp(-1.0 / sigma);
    CHECK(std::abs(sum - 2.0) <= 1e-5);
}

TEST_CASE("solve_sigma constant kernel is skipped and flagged") {
    const auto knn = synthetic_knn(3, {{1, 2, 3}}, {{0.5, 1.0, 2.0}});
    bool flagged = false;
    const double sigma = solve_sigma(knn, KernelId::constant, 0, {}, &flagged);
    CHECK(flagged);
    CHECK(sigma == 1.0);
}

TEST_CASE("solve_sigma flags a point whose sum is pinned above the target") {
    // k = 2, both neighbors exactly at rho: x = 0 forces p = 1, sum = 2 > 1.
    const auto knn = synthetic_knn(2, {{1, 2}}, {{1.0, 1.0}});
    bool flagged = false;
    const SigmaOptions opts;
    const double sigma = solve_sigma(knn, KernelId::membership, 0, opts, &flagged);
    CHECK(flagged);
    CHECK(sigma == opts.sigma_min);
}

TEST_CASE("neighbor sum is non-decreasing in sigma") {
    std::mt19937_64 rng(99);
    for (KernelId kernel : {KernelId::membership, KernelId::gaussian, KernelId::quadratic}) {
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> x(8);
            for (auto& v : x) {
                v = uniform(rng, 0.0, 5.0);
            }
            double previous = -1.0;
            for (double sigma = 1e-4; sigma <= 1e3; sigma *= 3.0) {
                double sum = 0.0;
                for (double xi : x) {
                    sum += kernel_eval(kernel, xi, sigma);
                }
                CHECK(sum >= previous - 1e-12);
                previous = sum;
            }
        }
    }
}

TEST_CASE("symmetrize formula and properties") {
    CHECK(symmetrize(0.5, 0.5) == doctest::Approx(0.75));
    CHECK_THROWS_AS(symmetrize(-0.1, 0.5), UsageError);
    CHECK_THROWS_AS(symmetrize(0.5, 1.2), UsageError);

    std::mt19937_64 rng(2024);
    for (int t = 0; t < 10'000; ++t) {
        const double p = uniform(rng, 0.0, 1.0);
        const double q = uniform(rng, 0.0, 1.0);
        const double pq = symmetrize(p, q);
        CHECK(pq == symmetrize(q, p));
        CHECK(pq >= std::max(p, q));          // OR dominance
        CHECK(pq >= 0.0);
        CHECK(pq <= 1.0);
        CHECK(symmetrize(p, 0.0) == p);
        CHECK(symmetrize(p, 1.0) == 1.0);
    }
}

TEST_CASE("build_fuzzy_graph hand trace on three collinear points") {
    const Dataset data = line_dataset({0.0, 1.0, 10.0});
    const KnnGraph knn = build_knn(data, 1);
    const FuzzyGraph graph = build_fuzzy_graph(knn, KernelId::membership);

    REQUIRE(graph.edges.size() == 2);
    CHECK(graph.edges[0].i == 0);
    CHECK(graph.edges[0].j == 1);
    CHECK(graph.edges[0].weight == doctest::Approx(1.0));
    CHECK(graph.edges[1].i == 1);
    CHECK(graph.edges[1].j == 2);
    // 2 is not 1's neighbor, so p_{1|2} = 0; p_{2|1} = 1 because x = 0.
    CHECK(graph.edges[1].weight == doctest::Approx(1.0));
}

TEST_CASE("constant kernel gives weight 1 on every edge") {
    std::mt19937_64 rng(5);
    Dataset data;
    data.points.resize(18, 2);
    for (Eigen::Index i = 0; i < 18; ++i) {
        data.points(i, 0) = uniform(rng, 0.0, 10.0);
        data.points(i, 1) = uniform(rng, 0.0, 10.0);
    }
    const KnnGraph knn = build_knn(data, 4);
    const LocalScale scales = compute_local_scales(knn, KernelId::constant);
    CHECK(scales.flagged_count() == 18);   // sum pinned at k for every point

    const FuzzyGraph graph = build_fuzzy_graph(knn, KernelId::constant, scales);
    for (const auto& e : graph.edges) {
        CHECK(e.weight == 1.0);
    }
}

TEST_CASE("symmetric zero-distance pair yields a single weight-1 edge") {
    Dataset data;
    data.points.resize(2, 2);
    data.points << 3.0, 3.0, 3.0, 3.0;
    const KnnGraph knn = build_knn(data, 1);
    const FuzzyGraph graph = build_fuzzy_graph(knn, KernelId::membership);
    REQUIRE(graph.edges.size() == 1);
    CHECK(graph.edges[0].weight == 1.0);
}

TEST_CASE("normalization holds for every unflagged point") {
    std::mt19937_64 rng(314);
    Dataset data;
    data.points.resize(60, 3);
    for (Eigen::Index i = 0; i < 60; ++i) {
        for (Eigen::Index j = 0; j < 3; ++j) {
            data.points(i, j) = uniform(rng, -5.0, 5.0);
        }
    }
    const KnnGraph knn = build_knn(data, 8);
    const double target = std::log2(8.0);

    for (KernelId kernel : all_kernels()) {
        const LocalScale scales = compute_local_scales(knn, kernel);
        const auto sums = neighbor_probability_sums(knn, kernel, scales);
        CHECK(scales.target == target);
        for (std::size_t i = 0; i < sums.size(); ++i) {
            if (!scales.flagged[i]) {
                CHECK(std::abs(sums[i] - target) <= 1e-5);
            }
        }
        // rho is the first sorted distance, exactly
        for (std::size_t i = 0; i < sums.size(); ++i) {
            CHECK(scales.rho[i] == knn.distances[i][0]);
        }
    }
}

TEST_CASE("fuzzy graph edges are sorted, unique and in range") {
    std::mt19937_64 rng(8);
    Dataset data;
    data.points.resize(25, 2);
    for (Eigen::Index i = 0; i < 25; ++i) {
        data.points(i, 0) = uniform(rng, 0.0, 4.0);
        data.points(i, 1) = uniform(rng, 0.0, 4.0);
    }
    const FuzzyGraph graph = build_fuzzy_graph(build_knn(data, 5), KernelId::gaussian);
    for (std::size_t e = 0; e < graph.edges.size(); ++e) {
        CHECK(graph.edges[e].i < graph.edges[e].j);
        CHECK(graph.edges[e].weight >= 0.0);
        CHECK(graph.edges[e].weight <= 1.0);
        if (e > 0) {
            const auto& prev = graph.edges[e - 1];
            const auto& cur = graph.edges[e];
            CHECK(std::pair(prev.i, prev.j) < std::pair(cur.i, cur.j));
        }
    }
}
