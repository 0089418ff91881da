#include "conformap/pipeline.hpp"

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

using conformap::RunConfig;
using nlohmann::json;

// Handles to the bound options so the JSON config can fill in anything the
// command line left untouched (precedence: flags > config file > defaults).
struct OptionRefs {
    std::vector<std::pair<std::string, CLI::Option*>> entries;
    void track(const std::string& key, CLI::Option* opt) { entries.emplace_back(key, opt); }
};

struct CliState {
    RunConfig cfg;
    std::string init = "pca";
    std::string config_path;
    std::vector<std::string> kernels;
    std::vector<std::uint64_t> seeds;
    OptionRefs refs;
};

void add_dataset_options(CLI::App* cmd, CliState& s) {
    s.refs.track("input", cmd->add_option("--input,-i", s.cfg.input_path, "Input dataset path")
                              ->required());
    s.refs.track("format",
                 cmd->add_option("--format", s.cfg.format, "Input format: csv or idx")
                     ->check(CLI::IsMember({"csv", "idx"})));
    s.refs.track("label_column", cmd->add_option("--label-column", s.cfg.label_column,
                                                 "Label column name or 0-based index"));
    s.refs.track("labels_path", cmd->add_option("--labels-path", s.cfg.labels_path,
                                                "idx label file (with --format idx)"));
    s.refs.track("max_points", cmd->add_option("--max-points", s.cfg.max_points,
                                               "Seeded uniform subsample cap (-1 = all)"));
    s.refs.track("output_dir",
                 cmd->add_option("--output-dir,-o", s.cfg.output_dir, "Output directory"));
    cmd->add_option("--config", s.config_path, "JSON config file (flags take precedence)");
}

void add_graph_options(CLI::App* cmd, CliState& s) {
    s.refs.track("mode", cmd->add_option("--mode", s.cfg.mode, "High-dimensional stage: knn or vr")
                             ->check(CLI::IsMember({"knn", "vr"})));
    s.refs.track("kernel", cmd->add_option("--kernel", s.cfg.kernel, "Probability kernel"));
    s.refs.track("k", cmd->add_option("--k,-k", s.cfg.k, "Neighbor count"));
    s.refs.track("vr_delta",
                 cmd->add_option("--vr-delta", s.cfg.vr_delta, "VR scale (required in vr mode)"));
    s.refs.track("vr_max_dim",
                 cmd->add_option("--vr-max-dim", s.cfg.vr_max_dim, "Simplex dimension cap"));
    s.refs.track("vr_budget",
                 cmd->add_option("--vr-budget", s.cfg.vr_budget, "Simplex count budget"));
    s.refs.track("vr_fold_symmetrized",
                 cmd->add_flag("--vr-fold-symmetrized", s.cfg.vr_fold_symmetrized,
                               "Fold each simplex edge once with symmetrized probability"));
}

void add_optimizer_options(CLI::App* cmd, CliState& s) {
    auto& opt = s.cfg.opt;
    s.refs.track("n_components",
                 cmd->add_option("--n-components,-n", opt.n_components, "Embedding dimension"));
    s.refs.track("n_epochs", cmd->add_option("--epochs", opt.n_epochs, "SGD epochs"));
    s.refs.track("learning_rate", cmd->add_option("--learning-rate", opt.learning_rate,
                                                  "Initial learning rate (linear decay)"));
    s.refs.track("alpha", cmd->add_option("--alpha", opt.alpha_repulsion,
                                          "Repulsion coefficient"));
    s.refs.track("negative_sample_rate",
                 cmd->add_option("--negative-sample-rate", opt.negative_sample_rate,
                                 "Negative draws per positive sample"));
    s.refs.track("min_dist", cmd->add_option("--min-dist", opt.min_dist,
                                             "Target minimum embedding distance"));
    s.refs.track("seed", cmd->add_option("--seed", opt.seed, "RNG seed"));
    s.refs.track("init", cmd->add_option("--init", s.init, "Initialization: pca or random")
                             ->check(CLI::IsMember({"pca", "random"})));
}

void apply_json_config(CliState& s) {
    if (s.config_path.empty()) {
        return;
    }
    std::ifstream file(s.config_path);
    if (!file) {
        throw conformap::DataError("cannot open config " + s.config_path);
    }
    json j;
    try {
        j = json::parse(file);
    } catch (const json::parse_error& e) {
        throw conformap::DataError("config " + s.config_path + ": " + e.what());
    }

    auto& cfg = s.cfg;
    const auto assign = [&](const std::string& key, auto& target) {
        if (j.contains(key)) {
            j.at(key).get_to(target);
        }
    };
    for (const auto& [key, opt] : s.refs.entries) {
        if (opt->count() > 0) {
            continue;   // command line wins
        }
        if (key == "input") assign(key, cfg.input_path);
        else if (key == "format") assign(key, cfg.format);
        else if (key == "label_column") assign(key, cfg.label_column);
        else if (key == "labels_path") assign(key, cfg.labels_path);
        else if (key == "max_points") assign(key, cfg.max_points);
        else if (key == "output_dir") assign(key, cfg.output_dir);
        else if (key == "mode") assign(key, cfg.mode);
        else if (key == "kernel") assign(key, cfg.kernel);
        else if (key == "k") assign(key, cfg.k);
        else if (key == "vr_delta") assign(key, cfg.vr_delta);
        else if (key == "vr_max_dim") assign(key, cfg.vr_max_dim);
        else if (key == "vr_budget") assign(key, cfg.vr_budget);
        else if (key == "vr_fold_symmetrized") assign(key, cfg.vr_fold_symmetrized);
        else if (key == "n_components") assign(key, cfg.opt.n_components);
        else if (key == "n_epochs") assign(key, cfg.opt.n_epochs);
        else if (key == "learning_rate") assign(key, cfg.opt.learning_rate);
        else if (key == "alpha") assign(key, cfg.opt.alpha_repulsion);
        else if (key == "negative_sample_rate") assign(key, cfg.opt.negative_sample_rate);
        else if (key == "min_dist") assign(key, cfg.opt.min_dist);
        else if (key == "seed") assign(key, cfg.opt.seed);
        else if (key == "init") assign(key, s.init);
        else if (key == "plot") assign(key, cfg.plot);
        else if (key == "dbscan_eps") assign(key, cfg.dbscan_eps);
        else if (key == "dbscan_min_pts") assign(key, cfg.dbscan_min_pts);
        else if (key == "kernels") assign(key, s.kernels);
        else if (key == "seeds") assign(key, s.seeds);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"conformal kNN rescaling, fuzzy graph weights and cross-entropy embedding"};
    app.require_subcommand(1);

    CliState embed_state;
    CLI::App* embed = app.add_subcommand("embed", "Embed a dataset and write artifacts");
    add_dataset_options(embed, embed_state);
    add_graph_options(embed, embed_state);
    add_optimizer_options(embed, embed_state);
    embed_state.refs.track("plot", embed->add_flag("--plot", embed_state.cfg.plot,
                                                   "Write embedding.svg scatter plot"));

    CliState bench_state;
    CLI::App* bench = app.add_subcommand(
        "bench", "Embed with several kernels and seeds, cluster, score against labels");
    add_dataset_options(bench, bench_state);
    add_graph_options(bench, bench_state);
    add_optimizer_options(bench, bench_state);
    bench->add_option("--kernels", bench_state.kernels,
                      "Comma-separated kernel list (default: all six)")
        ->delimiter(',');
    bench->add_option("--seeds", bench_state.seeds, "Comma-separated seed list")
        ->delimiter(',')
        ->required();
    bench_state.refs.track("dbscan_eps", bench->add_option("--dbscan-eps", bench_state.cfg.dbscan_eps,
                                                           "DBSCAN radius for scoring"));
    bench_state.refs.track("dbscan_min_pts",
                           bench->add_option("--dbscan-min-pts", bench_state.cfg.dbscan_min_pts,
                                             "DBSCAN core threshold for scoring"));

    CliState vr_state;
    CLI::App* vr = app.add_subcommand("vr-weights",
                                      "Write the Vietoris-Rips fuzzy graph as CSV, no embedding");
    add_dataset_options(vr, vr_state);
    add_graph_options(vr, vr_state);
    vr_state.refs.track("seed", vr->add_option("--seed", vr_state.cfg.opt.seed,
                                               "Seed for --max-points subsampling"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (embed->parsed()) {
            apply_json_config(embed_state);
            embed_state.cfg.opt.init = conformap::parse_init(embed_state.init);
            conformap::run_embed(embed_state.cfg);
        } else if (bench->parsed()) {
            apply_json_config(bench_state);
            bench_state.cfg.opt.init = conformap::parse_init(bench_state.init);
            if (bench_state.kernels.empty()) {
                for (conformap::KernelId k : conformap::all_kernels()) {
                    bench_state.kernels.push_back(conformap::kernel_name(k));
                }
            }
            const auto reports =
                conformap::run_bench(bench_state.cfg, bench_state.kernels, bench_state.seeds);
            std::cout << "kernel,ars,amis,silhouette,seed\n";
            for (const auto& report : reports) {
                std::cout << conformap::score_report_csv_row(report) << "\n";
            }
        } else if (vr->parsed()) {
            apply_json_config(vr_state);
            if (!(vr_state.cfg.vr_delta > 0.0)) {
                throw conformap::UsageError("vr-weights requires --vr-delta > 0");
            }
            conformap::run_vr_weights(vr_state.cfg);
        }
    } catch (const conformap::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const conformap::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const conformap::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
