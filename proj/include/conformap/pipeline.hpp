#ifndef CONFORMAP_PIPELINE_HPP
#define CONFORMAP_PIPELINE_HPP

#include "conformap/eval.hpp"
#include "conformap/fuzzy.hpp"
#include "conformap/optimizer.hpp"
#include "conformap/types.hpp"
#include "conformap/vr.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace conformap {

// Effective configuration of one run; every field has a default so runs are
// reconstructible from the echoed config alone.
struct RunConfig {
    std::string input_path;
    std::string format = "csv";            // csv | idx
    std::string label_column;              // empty = no labels
    std::string labels_path;               // idx label file
    long max_points = -1;                  // subsample cap, -1 = all

    std::string mode = "knn";              // knn | vr
    std::string kernel = "membership";
    int k = 15;

    double vr_delta = 0.0;                 // required in vr mode
    int vr_max_dim = 2;
    std::uint64_t vr_budget = 10'000'000;
    bool vr_fold_symmetrized = false;      // fold each edge once, symmetrized

    OptimizerConfig opt;

    std::string output_dir = ".";
    bool plot = false;

    double dbscan_eps = 0.5;               // bench scoring
    int dbscan_min_pts = 5;
};

// Intermediate products of one embedding run, for reporting and scoring.
struct EmbedResult {
    Embedding embedding;
    FuzzyGraph fuzzy;
    LocalScale scales;
    double final_loss = 0.0;
    double max_normalization_residual = 0.0;   // over unflagged points
};

// High-dimensional stage only: kNN or VR weights per cfg.mode.
FuzzyGraph build_weights(const Dataset& data, const RunConfig& cfg, LocalScale* scales_out);

// Full pipeline in memory: weights -> curve fit -> optimization.
EmbedResult embed_dataset(const Dataset& data, const RunConfig& cfg);

// Loads the dataset named by cfg (format, label column, subsampling).
Dataset load_input(const RunConfig& cfg);

// embed subcommand: writes embedding.csv, run_meta.json and optionally
// embedding.svg under cfg.output_dir.
void run_embed(const RunConfig& cfg);

// bench subcommand: for each (kernel, seed) embeds, clusters with DBSCAN and
// scores against the dataset labels; writes scores.csv and scores.jsonl.
std::vector<ScoreReport> run_bench(const RunConfig& cfg,
                                   const std::vector<std::string>& kernels,
                                   const std::vector<std::uint64_t>& seeds);

// vr-weights subcommand: writes the VR fuzzy graph as vr_weights.csv.
void run_vr_weights(const RunConfig& cfg);

ScoreReport score_embedding(const Dataset& data, const Embedding& emb, KernelId kernel,
                            std::uint64_t seed, double eps, int min_pts);

std::string score_report_json(const ScoreReport& report);
std::string score_report_csv_row(const ScoreReport& report);

} // namespace conformap

#endif
