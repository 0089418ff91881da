#include "conformap/eval.hpp"

#include "conformap/curve.hpp"
#include "conformap/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <vector>

namespace conformap {

namespace {

std::uint64_t pack_pair(int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
}

double guarded_log(double value) {
    return std::log(std::max(value, kEpsLog));
}

// Per-pair accumulation over the chosen edge universe: visit(w_h, dist_sq)
// for each pair, with missing edges as w_h = 0 in all-pairs mode.
template <typename Visitor>
void for_each_pair(const FuzzyGraph& fuzzy, const Embedding& emb, EdgeSet edge_set,
                   Visitor&& visit) {
    const CurveParams curve{emb.curve_a, emb.curve_b};
    if (edge_set == EdgeSet::fuzzy_edges) {
        for (const auto& e : fuzzy.edges) {
            const double s = (emb.coords.row(e.i) - emb.coords.row(e.j)).squaredNorm();
            visit(e.weight, low_dim_weight(s, curve));
        }
        return;
    }
    std::unordered_map<std::uint64_t, double> weights;
    weights.reserve(fuzzy.edges.size());
    for (const auto& e : fuzzy.edges) {
        weights[pack_pair(std::min(e.i, e.j), std::max(e.i, e.j))] = e.weight;
    }
    const int n = static_cast<int>(emb.n_points());
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const auto it = weights.find(pack_pair(i, j));
            const double w = it == weights.end() ? 0.0 : it->second;
            const double s = (emb.coords.row(i) - emb.coords.row(j)).squaredNorm();
            visit(w, low_dim_weight(s, curve));
        }
    }
}

double bernoulli_entropy(double w) {
    double h = 0.0;
    if (w > 0.0) {
        h -= w * std::log(w);
    }
    if (w < 1.0) {
        h -= (1.0 - w) * std::log(1.0 - w);
    }
    return h;
}

} // namespace

double cross_entropy(const FuzzyGraph& fuzzy, const Embedding& emb, EdgeSet edge_set) {
    double total = 0.0;
    for_each_pair(fuzzy, emb, edge_set, [&](double w, double q) {
        total -= w * guarded_log(q) + (1.0 - w) * guarded_log(1.0 - q);
    });
    return total;
}

double kl_divergence(const FuzzyGraph& fuzzy, const Embedding& emb, EdgeSet edge_set) {
    double total = 0.0;
    for_each_pair(fuzzy, emb, edge_set, [&](double w, double q) {
        if (w > 0.0) {
            total += w * (std::log(w) - guarded_log(q));
        }
        if (w < 1.0) {
            total += (1.0 - w) * (std::log(1.0 - w) - guarded_log(1.0 - q));
        }
    });
    return total;
}

double entropy(const FuzzyGraph& fuzzy, EdgeSet edge_set) {
    // Non-edges carry w_h = 0 and zero entropy, so both universes sum the
    // same terms.
    (void)edge_set;
    double total = 0.0;
    for (const auto& e : fuzzy.edges) {
        total += bernoulli_entropy(e.weight);
    }
    return total;
}

std::vector<int> cluster_dbscan(const Embedding& emb, double eps, int min_pts) {
    if (eps <= 0.0) {
        throw UsageError("eps must be positive");
    }
    if (min_pts < 1) {
        throw UsageError("min_pts must be at least 1");
    }
    const int n = static_cast<int>(emb.n_points());

    // Neighborhood query includes the point itself.
    const auto region_query = [&](int p) {
        std::vector<int> hits;
        for (int q = 0; q < n; ++q) {
            if ((emb.coords.row(p) - emb.coords.row(q)).norm() <= eps) {
                hits.push_back(q);
            }
        }
        return hits;
    };

    constexpr int kUnvisited = -2;
    constexpr int kNoise = -1;
    std::vector<int> labels(n, kUnvisited);
    int cluster_id = 0;

    for (int p = 0; p < n; ++p) {
        if (labels[p] != kUnvisited) {
            continue;
        }
        std::vector<int> seeds = region_query(p);
        if (static_cast<int>(seeds.size()) < min_pts) {
            labels[p] = kNoise;
            continue;
        }
        labels[p] = cluster_id;
        for (std::size_t idx = 0; idx < seeds.size(); ++idx) {
            const int q = seeds[idx];
            if (labels[q] == kNoise) {
                labels[q] = cluster_id;   // border point
            }
            if (labels[q] != kUnvisited) {
                continue;
            }
            labels[q] = cluster_id;
            std::vector<int> reachable = region_query(q);
            if (static_cast<int>(reachable.size()) >= min_pts) {
                seeds.insert(seeds.end(), reachable.begin(), reachable.end());
            }
        }
        ++cluster_id;
    }
    return labels;
}

namespace {

struct Contingency {
    std::vector<std::vector<double>> counts;   // R x C
    std::vector<double> row_sums;
    std::vector<double> col_sums;
    double n = 0.0;
};

Contingency build_contingency(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size()) {
        throw UsageError("label vectors differ in length");
    }
    if (a.size() < 2) {
        throw UsageError("need at least 2 labeled points");
    }
    std::unordered_map<int, int> ids_a;
    std::unordered_map<int, int> ids_b;
    std::vector<std::pair<int, int>> cells(a.size());
    for (std::size_t t = 0; t < a.size(); ++t) {
        const auto ra = ids_a.try_emplace(a[t], static_cast<int>(ids_a.size()));
        const auto rb = ids_b.try_emplace(b[t], static_cast<int>(ids_b.size()));
        cells[t] = {ra.first->second, rb.first->second};
    }
    Contingency c;
    c.counts.assign(ids_a.size(), std::vector<double>(ids_b.size(), 0.0));
    c.row_sums.assign(ids_a.size(), 0.0);
    c.col_sums.assign(ids_b.size(), 0.0);
    c.n = static_cast<double>(a.size());
    for (const auto& [ra, rb] : cells) {
        c.counts[ra][rb] += 1.0;
        c.row_sums[ra] += 1.0;
        c.col_sums[rb] += 1.0;
    }
    return c;
}

double comb2(double x) {
    return 0.5 * x * (x - 1.0);
}

// Expected mutual information under the permutation model, natural logs.
double expected_mutual_info(const Contingency& c) {
    const double n = c.n;
    double emi = 0.0;
    for (double ai : c.row_sums) {
        for (double bj : c.col_sums) {
            const double lo = std::max(1.0, ai + bj - n);
            const double hi = std::min(ai, bj);
            const double log_const = std::lgamma(ai + 1.0) + std::lgamma(bj + 1.0) +
                                     std::lgamma(n - ai + 1.0) + std::lgamma(n - bj + 1.0) -
                                     std::lgamma(n + 1.0);
            for (double nij = lo; nij <= hi; nij += 1.0) {
                const double log_pmf = log_const - std::lgamma(nij + 1.0) -
                                       std::lgamma(ai - nij + 1.0) -
                                       std::lgamma(bj - nij + 1.0) -
                                       std::lgamma(n - ai - bj + nij + 1.0);
                emi += (nij / n) * (std::log(n * nij) - std::log(ai * bj)) * std::exp(log_pmf);
            }
        }
    }
    return emi;
}

double partition_entropy(const std::vector<double>& sums, double n) {
    double h = 0.0;
    for (double s : sums) {
        if (s > 0.0) {
            h -= (s / n) * std::log(s / n);
        }
    }
    return h;
}

} // namespace

double adjusted_rand(std::span<const int> labels_true, std::span<const int> labels_pred) {
    const Contingency c = build_contingency(labels_true, labels_pred);

    double sum_cells = 0.0;
    for (const auto& row : c.counts) {
        for (double v : row) {
            sum_cells += comb2(v);
        }
    }
    double sum_rows = 0.0;
    for (double v : c.row_sums) {
        sum_rows += comb2(v);
    }
    double sum_cols = 0.0;
    for (double v : c.col_sums) {
        sum_cols += comb2(v);
    }

    const double expected = sum_rows * sum_cols / comb2(c.n);
    const double numerator = sum_cells - expected;
    const double denominator = 0.5 * (sum_rows + sum_cols) - expected;
    if (denominator == 0.0) {
        // Both partitions are trivial in the same way, hence identical.
        return 1.0;
    }
    return numerator / denominator;
}

double adjusted_mutual_info(std::span<const int> labels_true, std::span<const int> labels_pred) {
    const Contingency c = build_contingency(labels_true, labels_pred);
    const std::size_t rows = c.row_sums.size();
    const std::size_t cols = c.col_sums.size();
    if (rows == 1 && cols == 1) {
        return 1.0;   // identical single-cluster partitions
    }

    double mi = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            const double nij = c.counts[i][j];
            if (nij > 0.0) {
                mi += (nij / c.n) *
                      (std::log(c.n * nij) - std::log(c.row_sums[i] * c.col_sums[j]));
            }
        }
    }

    const double emi = expected_mutual_info(c);
    const double h_true = partition_entropy(c.row_sums, c.n);
    const double h_pred = partition_entropy(c.col_sums, c.n);
    const double denominator = std::max(h_true, h_pred) - emi;
    if (std::abs(denominator) < 1e-12) {
        return 0.0;
    }
    return std::min(1.0, (mi - emi) / denominator);
}

double silhouette(const Embedding& emb, std::span<const int> labels) {
    const int n = static_cast<int>(emb.n_points());
    if (labels.size() != static_cast<std::size_t>(n)) {
        throw UsageError("label count does not match the embedding");
    }

    // Noise points (-1) are excluded from both the mean and the references.
    std::unordered_map<int, std::vector<int>> clusters;
    for (int i = 0; i < n; ++i) {
        if (labels[i] >= 0) {
            clusters[labels[i]].push_back(i);
        }
    }
    if (clusters.size() < 2) {
        throw UsageError("silhouette undefined for fewer than 2 clusters");
    }

    double total = 0.0;
    std::size_t counted = 0;
    for (const auto& [own_label, members] : clusters) {
        for (int i : members) {
            if (members.size() == 1) {
                ++counted;   // singleton scores 0
                continue;
            }
            double a = 0.0;
            for (int j : members) {
                if (j != i) {
                    a += (emb.coords.row(i) - emb.coords.row(j)).norm();
                }
            }
            a /= static_cast<double>(members.size() - 1);

            double b = std::numeric_limits<double>::infinity();
            for (const auto& [other_label, other_members] : clusters) {
                if (other_label == own_label) {
                    continue;
                }
                double mean = 0.0;
                for (int j : other_members) {
                    mean += (emb.coords.row(i) - emb.coords.row(j)).norm();
                }
                b = std::min(b, mean / static_cast<double>(other_members.size()));
            }

            const double denom = std::max(a, b);
            total += denom > 0.0 ? (b - a) / denom : 0.0;
            ++counted;
        }
    }
    return total / static_cast<double>(counted);
}

} // namespace conformap
