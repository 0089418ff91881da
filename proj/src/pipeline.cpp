#include "conformap/pipeline.hpp"

#include "conformap/io.hpp"
#include "conformap/knn.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

namespace conformap {

namespace {

using nlohmann::json;

double round5(double value) {
    return std::round(value * 1e5) / 1e5;
}

json config_to_json(const RunConfig& cfg) {
    json j;
    j["input"] = {{"path", cfg.input_path},
                  {"format", cfg.format},
                  {"label_column", cfg.label_column},
                  {"labels_path", cfg.labels_path},
                  {"max_points", cfg.max_points}};
    j["mode"] = cfg.mode;
    j["kernel"] = cfg.kernel;
    j["k"] = cfg.k;
    j["vr"] = {{"delta", cfg.vr_delta},
               {"max_dim", cfg.vr_max_dim},
               {"budget", cfg.vr_budget},
               {"fold_symmetrized", cfg.vr_fold_symmetrized}};
    j["optimizer"] = {{"n_components", cfg.opt.n_components},
                      {"n_epochs", cfg.opt.n_epochs},
                      {"learning_rate", cfg.opt.learning_rate},
                      {"alpha_repulsion", cfg.opt.alpha_repulsion},
                      {"negative_sample_rate", cfg.opt.negative_sample_rate},
                      {"min_dist", cfg.opt.min_dist},
                      {"seed", cfg.opt.seed},
                      {"init", init_name(cfg.opt.init)}};
    j["output_dir"] = cfg.output_dir;
    j["plot"] = cfg.plot;
    j["dbscan"] = {{"eps", cfg.dbscan_eps}, {"min_pts", cfg.dbscan_min_pts}};
    return j;
}

void validate_mode(const RunConfig& cfg) {
    if (cfg.mode != "knn" && cfg.mode != "vr") {
        throw UsageError("mode must be knn or vr, got \"" + cfg.mode + "\"");
    }
    if (cfg.mode == "vr" && !(cfg.vr_delta > 0.0)) {
        throw UsageError("vr mode requires --vr-delta > 0");
    }
    parse_kernel(cfg.kernel);
}

} // namespace

Dataset load_input(const RunConfig& cfg) {
    Dataset data;
    if (cfg.format == "csv") {
        data = load_csv(cfg.input_path,
                        cfg.label_column.empty()
                            ? std::nullopt
                            : std::optional<std::string>(cfg.label_column));
    } else if (cfg.format == "idx") {
        data = load_idx(cfg.input_path,
                        cfg.labels_path.empty()
                            ? std::nullopt
                            : std::optional<std::string>(cfg.labels_path));
    } else {
        throw UsageError("format must be csv or idx, got \"" + cfg.format + "\"");
    }
    return subsample(data, cfg.max_points, cfg.opt.seed);
}

FuzzyGraph build_weights(const Dataset& data, const RunConfig& cfg, LocalScale* scales_out) {
    validate_mode(cfg);
    const KernelId kernel = parse_kernel(cfg.kernel);
    const KnnGraph knn = build_knn(data, cfg.k);
    const LocalScale scales = compute_local_scales(knn, kernel);

    FuzzyGraph fuzzy;
    if (cfg.mode == "knn") {
        fuzzy = build_fuzzy_graph(knn, kernel, scales);
    } else {
        CliqueOptions clique_opts;
        clique_opts.max_dim = cfg.vr_max_dim;
        clique_opts.budget = cfg.vr_budget;
        const FoldMode fold = cfg.vr_fold_symmetrized ? FoldMode::symmetrized_once
                                                      : FoldMode::both_directed;
        const VrComplex complex =
            build_vr_complex(data, knn, kernel, cfg.vr_delta, clique_opts, fold);
        fuzzy = aggregate_edge_weights(complex);
    }

    if (scales_out != nullptr) {
        // Normalization residuals need the kNN sums alongside the scales.
        *scales_out = scales;
    }
    return fuzzy;
}

EmbedResult embed_dataset(const Dataset& data, const RunConfig& cfg) {
    validate_mode(cfg);
    const KernelId kernel = parse_kernel(cfg.kernel);
    const KnnGraph knn = build_knn(data, cfg.k);

    EmbedResult result;
    result.scales = compute_local_scales(knn, kernel);

    if (cfg.mode == "knn") {
        result.fuzzy = build_fuzzy_graph(knn, kernel, result.scales);
    } else {
        CliqueOptions clique_opts;
        clique_opts.max_dim = cfg.vr_max_dim;
        clique_opts.budget = cfg.vr_budget;
        const FoldMode fold = cfg.vr_fold_symmetrized ? FoldMode::symmetrized_once
                                                      : FoldMode::both_directed;
        const VrComplex complex =
            build_vr_complex(data, knn, kernel, cfg.vr_delta, clique_opts, fold);
        result.fuzzy = aggregate_edge_weights(complex);
    }

    const auto sums = neighbor_probability_sums(knn, kernel, result.scales);
    double max_residual = 0.0;
    for (std::size_t i = 0; i < sums.size(); ++i) {
        if (!result.scales.flagged[i]) {
            max_residual = std::max(max_residual, std::abs(sums[i] - result.scales.target));
        }
    }
    result.max_normalization_residual = max_residual;

    result.embedding = optimize(result.fuzzy, data, cfg.opt);
    result.final_loss = loss(result.fuzzy, result.embedding, cfg.opt.alpha_repulsion);
    return result;
}

void run_embed(const RunConfig& cfg) {
    validate_mode(cfg);   // usage errors surface before any computation
    const Dataset data = load_input(cfg);
    const EmbedResult result = embed_dataset(data, cfg);

    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    const fs::path out_dir(cfg.output_dir);

    write_embedding_csv((out_dir / "embedding.csv").string(), data, result.embedding);

    json meta = config_to_json(cfg);
    meta["results"] = {
        {"n_points", data.n_points()},
        {"n_features", data.n_features()},
        {"n_edges", result.fuzzy.edges.size()},
        {"flagged_points", result.scales.flagged_count()},
        {"normalization_target", result.scales.target},
        {"max_normalization_residual", result.max_normalization_residual},
        {"curve_a", result.embedding.curve_a},
        {"curve_b", result.embedding.curve_b},
        {"final_loss", result.final_loss},
        {"non_finite_values",
         result.embedding.coords.allFinite() ? 0 : 1}};
    std::ofstream meta_file(out_dir / "run_meta.json");
    if (!meta_file) {
        throw DataError("cannot write run_meta.json under " + cfg.output_dir);
    }
    meta_file << meta.dump(2) << "\n";
    if (!meta_file) {
        throw DataError("write failed for run_meta.json");
    }

    if (cfg.plot) {
        if (cfg.opt.n_components > 2) {
            std::cerr << "warning: plotting only the first two of " << cfg.opt.n_components
                      << " components\n";
        }
        write_embedding_svg((out_dir / "embedding.svg").string(), data, result.embedding);
    }
}

ScoreReport score_embedding(const Dataset& data, const Embedding& emb, KernelId kernel,
                            std::uint64_t seed, double eps, int min_pts) {
    ScoreReport report;
    report.kernel = kernel;
    report.seed = seed;

    const std::vector<int> predicted = cluster_dbscan(emb, eps, min_pts);
    std::set<int> distinct;
    for (int label : predicted) {
        if (label >= 0) {
            distinct.insert(label);
        }
    }
    report.n_clusters_found = static_cast<int>(distinct.size());
    report.ars = adjusted_rand(data.labels, predicted);
    report.amis = adjusted_mutual_info(data.labels, predicted);
    try {
        report.silhouette = silhouette(emb, predicted);
    } catch (const UsageError&) {
        std::cerr << "warning: silhouette undefined (" << report.n_clusters_found
                  << " clusters found); reporting 0\n";
        report.silhouette = 0.0;
    }
    return report;
}

std::string score_report_json(const ScoreReport& report) {
    json j = {{"kernel", kernel_name(report.kernel)},
              {"ars", round5(report.ars)},
              {"amis", round5(report.amis)},
              {"silhouette", round5(report.silhouette)},
              {"n_clusters_found", report.n_clusters_found},
              {"seed", report.seed}};
    return j.dump();
}

std::string score_report_csv_row(const ScoreReport& report) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s,%.5f,%.5f,%.5f,%llu", kernel_name(report.kernel).c_str(),
                  report.ars, report.amis, report.silhouette,
                  static_cast<unsigned long long>(report.seed));
    return buf;
}

std::vector<ScoreReport> run_bench(const RunConfig& cfg,
                                   const std::vector<std::string>& kernels,
                                   const std::vector<std::uint64_t>& seeds) {
    if (kernels.empty() || seeds.empty()) {
        throw UsageError("bench needs at least one kernel and one seed");
    }
    validate_mode(cfg);
    for (const auto& kernel_str : kernels) {
        parse_kernel(kernel_str);
    }
    const Dataset data = load_input(cfg);
    if (!data.has_labels()) {
        throw UsageError("bench requires ground-truth labels (--label-column or --labels-path)");
    }

    std::vector<ScoreReport> reports;
    for (const auto& kernel_str : kernels) {
        const KernelId kernel = parse_kernel(kernel_str);
        for (std::uint64_t seed : seeds) {
            RunConfig run = cfg;
            run.kernel = kernel_str;
            run.opt.seed = seed;
            const EmbedResult result = embed_dataset(data, run);
            reports.push_back(score_embedding(data, result.embedding, kernel, seed,
                                              cfg.dbscan_eps, cfg.dbscan_min_pts));
        }
    }

    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    const fs::path out_dir(cfg.output_dir);

    std::ofstream csv(out_dir / "scores.csv");
    if (!csv) {
        throw DataError("cannot write scores.csv under " + cfg.output_dir);
    }
    csv << "kernel,ars,amis,silhouette,seed\n";
    for (const auto& report : reports) {
        csv << score_report_csv_row(report) << "\n";
    }

    std::ofstream jsonl(out_dir / "scores.jsonl");
    for (const auto& report : reports) {
        jsonl << score_report_json(report) << "\n";
    }
    return reports;
}

void run_vr_weights(const RunConfig& cfg) {
    RunConfig vr_cfg = cfg;
    vr_cfg.mode = "vr";
    validate_mode(vr_cfg);
    const Dataset data = load_input(vr_cfg);
    const FuzzyGraph fuzzy = build_weights(data, vr_cfg, nullptr);

    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);

    std::ofstream file(fs::path(cfg.output_dir) / "vr_weights.csv");
    if (!file) {
        throw DataError("cannot write vr_weights.csv under " + cfg.output_dir);
    }
    file << "i,j,weight\n";
    char buf[64];
    for (const auto& e : fuzzy.edges) {
        std::snprintf(buf, sizeof buf, "%.17g", e.weight);
        file << e.i << ',' << e.j << ',' << buf << "\n";
    }
}

} // namespace conformap
