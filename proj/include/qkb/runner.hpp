#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qkb/dataset.hpp"
#include "qkb/featsel.hpp"
#include "qkb/qkernel.hpp"
#include "qkb/stats.hpp"

namespace qkb::runner {

struct RunConfig {
    std::string dataset_path;
    std::string label_column = "label";
    std::string positive_class = "1";
    std::string dataset_name; // defaults to the file stem

    std::vector<int> feature_indices; // empty = all columns
    int select_k = 0;                 // > 0: QUBO-select k features first
    featsel::FeatSelSettings featsel_settings;

    std::vector<enc::MapKind> encodings; // empty = all five maps
    kernel::KernelMode kernel_mode = kernel::KernelMode::Exact;
    int shots = 1024;

    int n_splits = 50;            // 50 splits is the reference protocol
    double train_fraction = 0.7;  // 70/30, train size = floor
    std::uint64_t master_seed = 0;

    double svc_c = 1.0;
    double svc_tol = 1e-3;

    std::string output_dir = "qkbench-out";
    std::string baseline_path; // optional external predictions (split,accuracy,f1,auc)
    std::string baseline_name = "baseline";
    bool dump_grams = false;
    bool emit_plots = true;
};

struct MetricRecord {
    std::string dataset;
    std::string encoding;
    int split = 0;
    double accuracy = 0.0;
    double f1 = 0.0;
    double auc = 0.0;
};

/// ANOVA + Tukey for one metric across encoding groups; `skipped` carries the
/// reason when the comparison is not applicable (fewer than 2 groups/values).
struct StatsBlock {
    bool computed = false;
    std::string skip_reason;
    stats::AnovaResult anova;
    stats::TukeyResult tukey;
};

struct BaselineGroup {
    std::string name;
    std::vector<double> accuracy, f1, auc; // indexed by split
};

struct RunReport {
    std::vector<MetricRecord> records;
    std::vector<std::string> group_names; // encodings, then baseline when present
    std::map<std::string, StatsBlock> metric_stats; // keys: accuracy, f1, auc
    std::optional<featsel::SelectionResult> selection;
    std::map<std::string, double> stage_seconds;
    std::string config_echo;
};

/// Full protocol: per (encoding, split) fit scaler on train, Gram(train),
/// train SVC, Gram(test, train), score; then ANOVA + Tukey per metric across
/// encoding groups plus any imported baseline. Artifacts are written to
/// config.output_dir (atomic write-then-rename); on error, completed records
/// are flushed before the stage-tagged diagnostic propagates.
RunReport run_benchmark(const RunConfig &config);

/// Reads a baseline metrics CSV (columns split,accuracy,f1,auc). Throws
/// ImportError when a column is missing or the split count mismatches.
BaselineGroup import_baseline(const std::string &path, int expected_splits,
                              const std::string &name = "baseline");

void write_results_csv(const std::vector<MetricRecord> &records, const std::string &path);
std::vector<MetricRecord> read_results_csv(const std::string &path);

/// stats.json: the full ANOVA + pairwise Tukey tables for every metric.
void write_stats_json(const RunReport &report, const std::string &path);

/// Groups a record list by encoding for one metric, split-ordered.
std::map<std::string, std::vector<double>> metric_groups(const std::vector<MetricRecord> &records,
                                                         const std::string &metric);

/// Recomputes the ANOVA/Tukey blocks from records (+ optional baseline).
std::map<std::string, StatsBlock> compute_stats(const std::vector<MetricRecord> &records,
                                                const BaselineGroup *baseline,
                                                std::vector<std::string> *group_names_out);

} // namespace qkb::runner
