#include "qkb/runner.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qkb/errors.hpp"
#include "qkb/plots.hpp"
#include "qkb/rng.hpp"
#include "qkb/svc.hpp"

namespace qkb::runner {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kKernelSeedTag = 1000003;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void atomic_write(const std::string &path, const std::string &content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os)
            throw ArgumentError("cannot open '" + tmp + "' for writing");
        os << content;
    }
    fs::rename(tmp, path);
}

std::string config_echo_text(const RunConfig &c, const std::vector<enc::MapKind> &encodings) {
    std::ostringstream os;
    os.precision(17);
    os << "dataset = " << c.dataset_path << "\n";
    os << "dataset_name = " << c.dataset_name << "\n";
    os << "label_column = " << c.label_column << "\n";
    os << "positive_class = " << c.positive_class << "\n";
    os << "features = ";
    for (std::size_t i = 0; i < c.feature_indices.size(); ++i)
        os << (i ? "," : "") << c.feature_indices[i];
    if (c.feature_indices.empty())
        os << "all";
    os << "\n";
    os << "select_k = " << c.select_k << "\n";
    os << "encodings = ";
    for (std::size_t i = 0; i < encodings.size(); ++i)
        os << (i ? "," : "") << enc::map_name(encodings[i]);
    os << "\n";
    os << "kernel = " << (c.kernel_mode == kernel::KernelMode::Exact ? "exact" : "shots") << "\n";
    os << "shots = " << c.shots << "\n";
    os << "splits = " << c.n_splits << "\n";
    os << "train_fraction = " << c.train_fraction << "\n";
    os << "seed = " << c.master_seed << "\n";
    os << "svc_c = " << c.svc_c << "\n";
    os << "svc_tol = " << c.svc_tol << "\n";
    if (!c.baseline_path.empty())
        os << "baseline = " << c.baseline_path << "\n";
    return os.str();
}

struct TaskResult {
    MetricRecord record;
    kernel::GramMatrix train_gram;
    kernel::GramMatrix test_block;
};

} // namespace

std::map<std::string, std::vector<double>> metric_groups(const std::vector<MetricRecord> &records,
                                                         const std::string &metric) {
    std::map<std::string, std::vector<double>> groups;
    std::vector<MetricRecord> sorted = records;
    std::sort(sorted.begin(), sorted.end(), [](const MetricRecord &a, const MetricRecord &b) {
        return a.encoding != b.encoding ? a.encoding < b.encoding : a.split < b.split;
    });
    for (const MetricRecord &r : sorted) {
        double v = r.accuracy;
        if (metric == "f1")
            v = r.f1;
        else if (metric == "auc")
            v = r.auc;
        groups[r.encoding].push_back(v);
    }
    return groups;
}

std::map<std::string, StatsBlock> compute_stats(const std::vector<MetricRecord> &records,
                                                const BaselineGroup *baseline,
                                                std::vector<std::string> *group_names_out) {
    std::map<std::string, StatsBlock> out;
    for (const std::string metric : {"accuracy", "f1", "auc"}) {
        auto grouped = metric_groups(records, metric);
        std::vector<std::string> names;
        std::vector<std::vector<double>> groups;
        for (auto &[name, values] : grouped) {
            names.push_back(name);
            groups.push_back(values);
        }
        if (baseline) {
            names.push_back(baseline->name);
            if (metric == "accuracy")
                groups.push_back(baseline->accuracy);
            else if (metric == "f1")
                groups.push_back(baseline->f1);
            else
                groups.push_back(baseline->auc);
        }
        StatsBlock block;
        if (groups.size() < 2) {
            block.skip_reason = "needs >= 2 groups to compare";
        } else if (std::any_of(groups.begin(), groups.end(),
                               [](const auto &g) { return g.size() < 2; })) {
            block.skip_reason = "needs >= 2 values per group";
        } else {
            block.anova = stats::one_way_anova(groups);
            block.tukey = stats::tukey_hsd(groups);
            block.computed = true;
        }
        out[metric] = block;
        if (group_names_out && metric == std::string("accuracy"))
            *group_names_out = names;
    }
    return out;
}

BaselineGroup import_baseline(const std::string &path, int expected_splits,
                              const std::string &name) {
    std::ifstream is(path);
    if (!is)
        throw ImportError("import_baseline: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(is, line))
        throw ImportError("import_baseline: '" + path + "' is empty");

    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ','))
            header.push_back(f);
    }
    int idx_split = -1, idx_acc = -1, idx_f1 = -1, idx_auc = -1;
    for (int i = 0; i < static_cast<int>(header.size()); ++i) {
        if (header[i] == "split")
            idx_split = i;
        else if (header[i] == "accuracy")
            idx_acc = i;
        else if (header[i] == "f1")
            idx_f1 = i;
        else if (header[i] == "auc")
            idx_auc = i;
    }
    for (const auto &[idx, col] : {std::pair{idx_split, "split"}, {idx_acc, "accuracy"},
                                   {idx_f1, "f1"}, {idx_auc, "auc"}})
        if (idx < 0)
            throw ImportError("import_baseline: missing column '" + std::string(col) + "'");

    BaselineGroup g;
    g.name = name;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ','))
            fields.push_back(f);
        if (static_cast<int>(fields.size()) < static_cast<int>(header.size()))
            throw ImportError("import_baseline: short row in '" + path + "'");
        g.accuracy.push_back(std::stod(fields[idx_acc]));
        g.f1.push_back(std::stod(fields[idx_f1]));
        g.auc.push_back(std::stod(fields[idx_auc]));
    }
    if (static_cast<int>(g.accuracy.size()) != expected_splits)
        throw ImportError("import_baseline: expected " + std::to_string(expected_splits) +
                          " splits, file has " + std::to_string(g.accuracy.size()));
    return g;
}

void write_results_csv(const std::vector<MetricRecord> &records, const std::string &path) {
    std::vector<MetricRecord> sorted = records;
    std::sort(sorted.begin(), sorted.end(), [](const MetricRecord &a, const MetricRecord &b) {
        return a.encoding != b.encoding ? a.encoding < b.encoding : a.split < b.split;
    });
    std::ostringstream os;
    os.precision(17);
    os << "dataset,encoding,split,accuracy,f1,auc\n";
    for (const MetricRecord &r : sorted)
        os << r.dataset << ',' << r.encoding << ',' << r.split << ',' << r.accuracy << ','
           << r.f1 << ',' << r.auc << "\n";
    atomic_write(path, os.str());
}

std::vector<MetricRecord> read_results_csv(const std::string &path) {
    std::ifstream is(path);
    if (!is)
        throw ArgumentError("read_results_csv: cannot open '" + path + "'");
    std::string line;
    std::getline(is, line); // header
    std::vector<MetricRecord> out;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::stringstream ss(line);
        MetricRecord r;
        std::string field;
        std::getline(ss, r.dataset, ',');
        std::getline(ss, r.encoding, ',');
        std::getline(ss, field, ',');
        r.split = std::stoi(field);
        std::getline(ss, field, ',');
        r.accuracy = std::stod(field);
        std::getline(ss, field, ',');
        r.f1 = std::stod(field);
        std::getline(ss, field, ',');
        r.auc = std::stod(field);
        out.push_back(r);
    }
    return out;
}

void write_stats_json(const RunReport &report, const std::string &path) {
    json root;
    root["groups"] = report.group_names;
    for (const auto &[metric, block] : report.metric_stats) {
        json m;
        m["computed"] = block.computed;
        if (!block.computed) {
            m["skip_reason"] = block.skip_reason;
        } else {
            m["anova"] = {{"f", block.anova.f_stat},
                          {"df_between", block.anova.df_between},
                          {"df_within", block.anova.df_within},
                          {"p", block.anova.p_value},
                          {"degenerate", block.anova.degenerate}};
            json pairs = json::array();
            for (const auto &p : block.tukey.pairs)
                pairs.push_back({{"group_i", report.group_names[p.group_i]},
                                 {"group_j", report.group_names[p.group_j]},
                                 {"mean_diff", p.mean_diff},
                                 {"q", p.q_stat},
                                 {"p", p.p_value}});
            m["tukey"] = {{"ms_within", block.tukey.ms_within},
                          {"df_within", block.tukey.df_within},
                          {"degenerate", block.tukey.degenerate},
                          {"pairs", pairs}};
        }
        root[metric] = m;
    }
    atomic_write(path, root.dump(2) + "\n");
}

RunReport run_benchmark(const RunConfig &config_in) {
    RunConfig config = config_in;
    if (config.dataset_name.empty())
        config.dataset_name = fs::path(config.dataset_path).stem().string();
    std::vector<enc::MapKind> encodings = config.encodings;
    if (encodings.empty())
        encodings = {enc::MapKind::Angle, enc::MapKind::EntAngle, enc::MapKind::Amplitude,
                     enc::MapKind::IQP, enc::MapKind::AltIQP};

    fs::create_directories(config.output_dir);
    RunReport report;
    report.config_echo = config_echo_text(config, encodings);

    auto t0 = std::chrono::steady_clock::now();
    data::Dataset ds;
    try {
        ds = data::load_dataset(config.dataset_path, config.label_column, config.positive_class);
    } catch (const std::exception &e) {
        throw IngestError("[stage:load] " + std::string(e.what()));
    }
    report.stage_seconds["load"] = seconds_since(t0);

    // feature subset: explicit indices, or QUBO selection, or all columns
    t0 = std::chrono::steady_clock::now();
    Matrix features = ds.features;
    try {
        if (!config.feature_indices.empty()) {
            features = ds.features.select_cols(config.feature_indices);
        } else if (config.select_k > 0) {
            std::vector<int> target01(ds.labels.size());
            for (std::size_t i = 0; i < ds.labels.size(); ++i)
                target01[i] = ds.labels[i] == 1 ? 1 : 0;
            featsel::FeatSelSettings fss = config.featsel_settings;
            if (fss.anneal.seed == 0)
                fss.anneal.seed = rng::derive_seed(config.master_seed, 2000003);
            report.selection =
                featsel::select_k_features(ds.features, target01, config.select_k, fss);
            features = ds.features.select_cols(report.selection->chosen);
        }
    } catch (const std::exception &e) {
        throw std::runtime_error("[stage:featsel] " + std::string(e.what()));
    }
    report.stage_seconds["featsel"] = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const auto splits = data::make_splits(features.rows, ds.labels, config.n_splits,
                                          config.train_fraction, config.master_seed);

    const std::size_t n_tasks = encodings.size() * splits.size();
    std::vector<MetricRecord> records(n_tasks);
    std::vector<char> done(n_tasks, 0);
    std::exception_ptr first_error = nullptr;

#pragma omp parallel for schedule(dynamic)
    for (long long task = 0; task < static_cast<long long>(n_tasks); ++task) {
        try {
            const std::size_t e = static_cast<std::size_t>(task) / splits.size();
            const std::size_t s = static_cast<std::size_t>(task) % splits.size();
            const enc::MapKind map = encodings[e];
            const data::Split &split = splits[s];

            const Matrix train_rows = features.select_rows(split.train);
            const Matrix test_rows = features.select_rows(split.test);
            std::vector<int> train_y(split.train.size()), test_y(split.test.size());
            for (std::size_t i = 0; i < split.train.size(); ++i)
                train_y[i] = ds.labels[split.train[i]];
            for (std::size_t i = 0; i < split.test.size(); ++i)
                test_y[i] = ds.labels[split.test[i]];

            enc::EncodingSpec spec = enc::EncodingSpec::make(map, static_cast<int>(features.cols));
            const enc::ScalerParams scaler = enc::fit_scaler(train_rows, spec); // train rows only

            kernel::KernelConfig kc;
            kc.mode = config.kernel_mode;
            kc.shots = config.shots;
            kc.base_seed = rng::derive_seed(config.master_seed, kKernelSeedTag + s, e);

            const kernel::GramMatrix train_gram = kernel::gram_matrix(train_rows, spec, scaler, kc);
            const svc::SvcModel model = svc::train(train_gram, train_y, config.svc_c,
                                                   config.svc_tol);
            const kernel::GramMatrix test_block =
                kernel::gram_matrix(test_rows, train_rows, spec, scaler, kc);
            const std::vector<double> scores = svc::decision_scores(model, test_block);
            const std::vector<int> preds = svc::predict(model, test_block);

            MetricRecord rec;
            rec.dataset = config.dataset_name;
            rec.encoding = enc::map_name(map);
            rec.split = static_cast<int>(s);
            rec.accuracy = stats::accuracy(test_y, preds);
            rec.f1 = stats::f1_score(test_y, preds, 1);
            rec.auc = stats::auc_score(test_y, scores);
            records[task] = rec;
            done[task] = 1;

            if (config.dump_grams) {
                std::ostringstream base;
                base << config.output_dir << "/gram_" << enc::map_name(map) << "_split" << s;
                train_gram.write_csv(base.str() + "_train.csv");
                test_block.write_csv(base.str() + "_test.csv");
            }
        } catch (...) {
#pragma omp critical(qkb_runner_error)
            if (!first_error)
                first_error = std::current_exception();
        }
    }

    for (std::size_t t = 0; t < n_tasks; ++t)
        if (done[t])
            report.records.push_back(records[t]);
    report.stage_seconds["benchmark"] = seconds_since(t0);

    if (first_error) {
        // flush what completed, then surface the stage-tagged diagnostic
        write_results_csv(report.records, config.output_dir + "/results.csv");
        try {
            std::rethrow_exception(first_error);
        } catch (const std::exception &e) {
            throw std::runtime_error("[stage:benchmark] " + std::string(e.what()));
        }
    }

    t0 = std::chrono::steady_clock::now();
    BaselineGroup baseline;
    const BaselineGroup *baseline_ptr = nullptr;
    if (!config.baseline_path.empty()) {
        baseline = import_baseline(config.baseline_path, config.n_splits, config.baseline_name);
        baseline_ptr = &baseline;
    }
    report.metric_stats = compute_stats(report.records, baseline_ptr, &report.group_names);
    report.stage_seconds["stats"] = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    write_results_csv(report.records, config.output_dir + "/results.csv");
    write_stats_json(report, config.output_dir + "/stats.json");
    atomic_write(config.output_dir + "/run_config.txt", report.config_echo);
    if (report.selection)
        featsel::write_selection_csv(*report.selection, config.output_dir + "/selection.csv");
    if (config.emit_plots)
        plots::emit_metric_box_plots(report.records, baseline_ptr, config.output_dir);
    report.stage_seconds["emit"] = seconds_since(t0);
    return report;
}

} // namespace qkb::runner
