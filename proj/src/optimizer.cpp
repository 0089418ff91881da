#include "conformap/optimizer.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

namespace conformap {

InitMethod parse_init(std::string_view name) {
    if (name == "random") {
        return InitMethod::random;
    }
    if (name == "pca") {
        return InitMethod::pca;
    }
    throw UsageError("unknown init \"" + std::string(name) + "\" (expected random|pca)");
}

std::string init_name(InitMethod init) {
    return init == InitMethod::random ? "random" : "pca";
}

namespace {

std::uint64_t pack_pair(int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
}

std::unordered_map<std::uint64_t, double> edge_weight_map(const FuzzyGraph& fuzzy) {
    std::unordered_map<std::uint64_t, double> map;
    map.reserve(fuzzy.edges.size());
    for (const auto& e : fuzzy.edges) {
        map[pack_pair(std::min(e.i, e.j), std::max(e.i, e.j))] = e.weight;
    }
    return map;
}

double guarded_log(double value) {
    return std::log(std::max(value, kEpsLog));
}

// Uniform double in [0, 1) from the top 53 bits; portable across standard
// library implementations, unlike std::uniform_real_distribution.
double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

double loss(const FuzzyGraph& fuzzy, const Embedding& emb, double alpha) {
    const int n = static_cast<int>(emb.n_points());
    const CurveParams curve{emb.curve_a, emb.curve_b};
    const auto weights = edge_weight_map(fuzzy);

    double attraction = 0.0;
    double repulsion = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double s = (emb.coords.row(i) - emb.coords.row(j)).squaredNorm();
            const double q = low_dim_weight(s, curve);
            const auto it = weights.find(pack_pair(i, j));
            if (it != weights.end()) {
                const double w = it->second;
                attraction -= w * guarded_log(q) + (1.0 - w) * guarded_log(1.0 - q);
            } else {
                repulsion -= guarded_log(1.0 - q);
            }
        }
    }
    return attraction + alpha * repulsion;
}

Matrix loss_gradient(const FuzzyGraph& fuzzy, const Embedding& emb, double alpha) {
    const int n = static_cast<int>(emb.n_points());
    const CurveParams curve{emb.curve_a, emb.curve_b};
    const auto weights = edge_weight_map(fuzzy);

    Matrix grad = Matrix::Zero(n, emb.n_components());
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const Eigen::RowVectorXd diff = emb.coords.row(i) - emb.coords.row(j);
            const double s = diff.squaredNorm();
            if (s <= 0.0) {
                // Coincident points sit at the attraction optimum and the
                // clamped repulsion plateau; both contribute zero gradient.
                continue;
            }
            const double q = low_dim_weight(s, curve);
            const double dq_ds = -curve.a * curve.b * std::pow(s, curve.b - 1.0) * q * q;

            // Derivative of the clamped loss: terms whose log argument is
            // pinned at eps_log do not move.
            double dl_dq = 0.0;
            const auto it = weights.find(pack_pair(i, j));
            if (it != weights.end()) {
                const double w = it->second;
                if (q > kEpsLog) {
                    dl_dq -= w / q;
                }
                if (1.0 - q > kEpsLog) {
                    dl_dq += (1.0 - w) / (1.0 - q);
                }
            } else if (1.0 - q > kEpsLog) {
                dl_dq = alpha / (1.0 - q);
            }

            const double coeff = 2.0 * dl_dq * dq_ds;
            grad.row(i) += coeff * diff;
            grad.row(j) -= coeff * diff;
        }
    }
    return grad;
}

double attraction_grad_coeff(double dist_sq, const CurveParams& curve) {
    const double t = curve.a * std::pow(dist_sq, curve.b);
    return 2.0 * curve.b * t / (dist_sq * (1.0 + t));
}

double repulsion_grad_coeff(double dist_sq, const CurveParams& curve, double alpha) {
    return -2.0 * alpha * curve.b / (dist_sq * (1.0 + curve.a * std::pow(dist_sq, curve.b)));
}

EpochSchedule::EpochSchedule(const FuzzyGraph& graph, int negative_sample_rate)
    : n_vertices_(graph.n_vertices), negative_sample_rate_(negative_sample_rate) {
    if (negative_sample_rate < 0) {
        throw UsageError("negative_sample_rate must be non-negative");
    }

    double max_weight = 0.0;
    for (const auto& e : graph.edges) {
        max_weight = std::max(max_weight, e.weight);
    }

    adjacency_.assign(n_vertices_, {});
    for (const auto& e : graph.edges) {
        // Weight 0 means the edge carries no belief; it neither attracts nor
        // blocks a vertex from being drawn as a negative.
        if (e.weight <= 0.0) {
            continue;
        }
        edges_.push_back(e);
        adjacency_[e.i].push_back(e.j);
        adjacency_[e.j].push_back(e.i);

        const double ratio = max_weight / e.weight;
        periods_.push_back(ratio > 1e18 ? std::numeric_limits<long long>::max()
                                        : static_cast<long long>(std::ceil(ratio)));
    }
    for (auto& nbr : adjacency_) {
        std::sort(nbr.begin(), nbr.end());
    }
    for (std::size_t v = 0; v < n_vertices_; ++v) {
        if (adjacency_[v].empty()) {
            isolated_.push_back(static_cast<int>(v));
        }
    }
}

bool EpochSchedule::edge_fires(std::size_t edge_index, int epoch) const {
    const long long period = periods_[edge_index];
    return period > 0 && epoch % period == 0;
}

bool EpochSchedule::is_neighbor(int u, int v) const {
    const auto& nbr = adjacency_[u];
    return std::binary_search(nbr.begin(), nbr.end(), v);
}

Matrix initialize_embedding(const Dataset& data, const OptimizerConfig& cfg) {
    const int n_out = cfg.n_components;
    const Eigen::Index n = data.n_points();
    const Eigen::Index m = data.n_features();
    if (n_out < 1) {
        throw UsageError("n_components must be at least 1");
    }
    if (n_out > m) {
        throw UsageError("n_components " + std::to_string(n_out) +
                         " exceeds input dimension " + std::to_string(m));
    }

    if (cfg.init == InitMethod::random) {
        std::mt19937_64 rng(cfg.seed);
        Matrix coords(n, n_out);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (int d = 0; d < n_out; ++d) {
                coords(i, d) = 20.0 * uniform_unit(rng) - 10.0;
            }
        }
        return coords;
    }

    // PCA projection onto the leading components, rescaled into the same
    // [-10, 10] box as the random init.
    const Eigen::RowVectorXd mean = data.points.colwise().mean();
    const Matrix centered = data.points.rowwise() - mean;
    const Eigen::MatrixXd cov =
        (centered.transpose() * centered) / static_cast<double>(std::max<Eigen::Index>(n - 1, 1));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) {
        throw NumericError("PCA eigendecomposition failed");
    }

    Eigen::MatrixXd components(m, n_out);
    for (int d = 0; d < n_out; ++d) {
        Eigen::VectorXd v = solver.eigenvectors().col(m - 1 - d);
        // Canonical sign: largest-magnitude entry positive.
        Eigen::Index arg_max = 0;
        v.cwiseAbs().maxCoeff(&arg_max);
        if (v(arg_max) < 0.0) {
            v = -v;
        }
        components.col(d) = v;
    }

    Matrix coords = centered * components;
    const double max_abs = coords.cwiseAbs().maxCoeff();
    if (max_abs > 0.0) {
        coords *= 10.0 / max_abs;
    }
    return coords;
}

Embedding optimize_from(Matrix initial, const FuzzyGraph& fuzzy, const OptimizerConfig& cfg) {
    if (static_cast<std::size_t>(initial.rows()) != fuzzy.n_vertices) {
        throw UsageError("initial coordinates do not match the fuzzy graph vertex count");
    }
    if (cfg.n_epochs < 1) {
        throw UsageError("n_epochs must be positive");
    }
    if (cfg.learning_rate <= 0.0) {
        throw UsageError("learning_rate must be positive");
    }
    if (cfg.alpha_repulsion <= 0.0) {
        throw UsageError("alpha_repulsion must be positive");
    }

    const CurveParams curve = fit_curve(cfg.min_dist);
    const EpochSchedule schedule(fuzzy, cfg.negative_sample_rate);
    std::mt19937_64 rng(cfg.seed);

    Matrix coords = std::move(initial);
    const int n_dim = static_cast<int>(coords.cols());

    for (int epoch = 0; epoch < cfg.n_epochs; ++epoch) {
        const double lr =
            cfg.learning_rate * (1.0 - static_cast<double>(epoch) / cfg.n_epochs);

        schedule.run_epoch(epoch, rng, [&](SampleKind kind, int head, int other) {
            const Eigen::RowVectorXd diff = coords.row(head) - coords.row(other);
            const double s = diff.squaredNorm();

            if (kind == SampleKind::attraction) {
                if (s <= 0.0) {
                    return;
                }
                const Eigen::RowVectorXd step =
                    (lr * attraction_grad_coeff(s, curve)) * diff;
                coords.row(head) -= step;
                coords.row(other) += step;
                return;
            }

            // Repulsion moves only the head, per-coordinate capped.
            if (s <= 0.0) {
                for (int d = 0; d < n_dim; ++d) {
                    coords(head, d) += lr * kRepulsionClip;
                }
                return;
            }
            const double coeff = repulsion_grad_coeff(s, curve, cfg.alpha_repulsion);
            for (int d = 0; d < n_dim; ++d) {
                const double g = std::clamp(coeff * diff(d), -kRepulsionClip, kRepulsionClip);
                coords(head, d) -= lr * g;
            }
        });

        if (!coords.allFinite()) {
            throw NumericError("non-finite coordinates after epoch " + std::to_string(epoch) +
                               "; try a lower learning rate");
        }
    }

    Embedding emb;
    emb.coords = std::move(coords);
    emb.curve_a = curve.a;
    emb.curve_b = curve.b;
    emb.min_dist = cfg.min_dist;
    return emb;
}

Embedding optimize(const FuzzyGraph& fuzzy, const Dataset& data, const OptimizerConfig& cfg) {
    if (fuzzy.n_vertices != static_cast<std::size_t>(data.n_points())) {
        throw UsageError("fuzzy graph and dataset disagree on the point count");
    }
    return optimize_from(initialize_embedding(data, cfg), fuzzy, cfg);
}

} // namespace conformap
