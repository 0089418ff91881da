#include "conformap/curve.hpp"
#include "conformap/eval.hpp"
#include "conformap/fuzzy.hpp"
#include "conformap/knn.hpp"
#include "conformap/pipeline.hpp"
#include "conformap/vr.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <utility>

namespace py = pybind11;

namespace {

using namespace conformap;

Dataset make_dataset(Matrix points) {
    Dataset data;
    data.points = std::move(points);
    return data;
}

std::pair<Eigen::MatrixX2i, Eigen::VectorXd> graph_arrays(const FuzzyGraph& graph) {
    Eigen::MatrixX2i edges(static_cast<Eigen::Index>(graph.edges.size()), 2);
    Eigen::VectorXd weights(static_cast<Eigen::Index>(graph.edges.size()));
    for (Eigen::Index e = 0; e < edges.rows(); ++e) {
        edges(e, 0) = graph.edges[e].i;
        edges(e, 1) = graph.edges[e].j;
        weights(e) = graph.edges[e].weight;
    }
    return {std::move(edges), std::move(weights)};
}

RunConfig build_config(const std::string& mode, const std::string& kernel, int k,
                       double vr_delta, int vr_max_dim, std::uint64_t vr_budget,
                       bool vr_fold_symmetrized, int n_components, int n_epochs,
                       double learning_rate, double alpha, int negative_sample_rate,
                       double min_dist, std::uint64_t seed, const std::string& init) {
    RunConfig cfg;
    cfg.mode = mode;
    cfg.kernel = kernel;
    cfg.k = k;
    cfg.vr_delta = vr_delta;
    cfg.vr_max_dim = vr_max_dim;
    cfg.vr_budget = vr_budget;
    cfg.vr_fold_symmetrized = vr_fold_symmetrized;
    cfg.opt.n_components = n_components;
    cfg.opt.n_epochs = n_epochs;
    cfg.opt.learning_rate = learning_rate;
    cfg.opt.alpha_repulsion = alpha;
    cfg.opt.negative_sample_rate = negative_sample_rate;
    cfg.opt.min_dist = min_dist;
    cfg.opt.seed = seed;
    cfg.opt.init = parse_init(init);
    return cfg;
}

Embedding wrap_coords(Matrix coords) {
    Embedding emb;
    emb.coords = std::move(coords);
    return emb;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Conformal kNN rescaling, fuzzy graph weights and cross-entropy embedding";

    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_RuntimeError);

    m.def(
        "embed",
        [](Matrix points, int k, const std::string& kernel, const std::string& mode,
           double vr_delta, int vr_max_dim, std::uint64_t vr_budget, bool vr_fold_symmetrized,
           int n_components, int n_epochs, double learning_rate, double alpha,
           int negative_sample_rate, double min_dist, std::uint64_t seed,
           const std::string& init) {
            const RunConfig cfg = build_config(mode, kernel, k, vr_delta, vr_max_dim, vr_budget,
                                               vr_fold_symmetrized, n_components, n_epochs,
                                               learning_rate, alpha, negative_sample_rate,
                                               min_dist, seed, init);
            const Dataset data = make_dataset(std::move(points));
            return embed_dataset(data, cfg).embedding.coords;
        },
        py::arg("points"), py::arg("k") = 15, py::arg("kernel") = "membership",
        py::arg("mode") = "knn", py::arg("vr_delta") = 0.0, py::arg("vr_max_dim") = 2,
        py::arg("vr_budget") = 10'000'000, py::arg("vr_fold_symmetrized") = false,
        py::arg("n_components") = 2, py::arg("n_epochs") = 500, py::arg("learning_rate") = 1.0,
        py::arg("alpha") = 1.0, py::arg("negative_sample_rate") = 5, py::arg("min_dist") = 0.001,
        py::arg("seed") = 42, py::arg("init") = "pca",
        py::call_guard<py::gil_scoped_release>(),
        "Run the full pipeline and return the N x n_components embedding");

    m.def(
        "fuzzy_weights",
        [](Matrix points, int k, const std::string& kernel) {
            const Dataset data = make_dataset(std::move(points));
            const KnnGraph knn = build_knn(data, k);
            return graph_arrays(build_fuzzy_graph(knn, parse_kernel(kernel)));
        },
        py::arg("points"), py::arg("k") = 15, py::arg("kernel") = "membership",
        py::call_guard<py::gil_scoped_release>(),
        "Symmetrized kNN edge weights as (edges, weights) arrays");

    m.def(
        "vr_weights",
        [](Matrix points, double delta, int k, const std::string& kernel, int max_dim,
           std::uint64_t budget, bool fold_symmetrized) {
            const Dataset data = make_dataset(std::move(points));
            const KnnGraph knn = build_knn(data, k);
            CliqueOptions opts;
            opts.max_dim = max_dim;
            opts.budget = budget;
            const VrComplex complex = build_vr_complex(
                data, knn, parse_kernel(kernel), delta, opts,
                fold_symmetrized ? FoldMode::symmetrized_once : FoldMode::both_directed);
            return graph_arrays(aggregate_edge_weights(complex));
        },
        py::arg("points"), py::arg("delta"), py::arg("k") = 15,
        py::arg("kernel") = "membership", py::arg("max_dim") = 2,
        py::arg("budget") = 10'000'000, py::arg("fold_symmetrized") = false,
        py::call_guard<py::gil_scoped_release>(),
        "Vietoris-Rips edge weights as (edges, weights) arrays");

    m.def(
        "fit_curve",
        [](double min_dist) {
            const CurveParams curve = fit_curve(min_dist);
            return std::make_pair(curve.a, curve.b);
        },
        py::arg("min_dist"), "Fit the low-dimensional weight curve, returns (a, b)");

    m.def(
        "low_dim_weight",
        [](double dist_sq, double a, double b) {
            return low_dim_weight(dist_sq, CurveParams{a, b});
        },
        py::arg("dist_sq"), py::arg("a"), py::arg("b"));

    m.def(
        "kernel_eval",
        [](const std::string& kernel, double x, double y) {
            return kernel_eval(parse_kernel(kernel), x, y);
        },
        py::arg("kernel"), py::arg("x"), py::arg("y"));

    m.def(
        "dbscan",
        [](Matrix points, double eps, int min_pts) {
            return cluster_dbscan(wrap_coords(std::move(points)), eps, min_pts);
        },
        py::arg("points"), py::arg("eps"), py::arg("min_pts") = 5,
        py::call_guard<py::gil_scoped_release>(),
        "Density clustering; returns labels with -1 for noise");

    m.def(
        "adjusted_rand",
        [](const std::vector<int>& a, const std::vector<int>& b) {
            return adjusted_rand(a, b);
        },
        py::arg("labels_true"), py::arg("labels_pred"));

    m.def(
        "adjusted_mutual_info",
        [](const std::vector<int>& a, const std::vector<int>& b) {
            return adjusted_mutual_info(a, b);
        },
        py::arg("labels_true"), py::arg("labels_pred"));

    m.def(
        "silhouette",
        [](Matrix points, const std::vector<int>& labels) {
            return silhouette(wrap_coords(std::move(points)), labels);
        },
        py::arg("points"), py::arg("labels"),
        py::call_guard<py::gil_scoped_release>());
}
