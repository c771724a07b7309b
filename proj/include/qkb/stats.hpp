#pragma once

#include <string>
#include <vector>

namespace qkb::stats {

/// Fraction of correct +-1 predictions.
double accuracy(const std::vector<int> &truth, const std::vector<int> &predictions);

/// F1 on the declared positive class; 0 when precision + recall is 0.
double f1_score(const std::vector<int> &truth, const std::vector<int> &predictions,
                int positive = 1);

/// AUC by the Mann-Whitney rank statistic; tied scores credited 0.5.
/// Throws MetricError when only one class is present.
double auc_score(const std::vector<int> &truth, const std::vector<double> &scores);

struct AnovaResult {
    double f_stat = 0.0;
    int df_between = 0;
    int df_within = 0;
    double p_value = 1.0;
    bool degenerate = false; // MS_within = 0 with MS_between > 0
};

/// One-way ANOVA; every group needs >= 2 values.
AnovaResult one_way_anova(const std::vector<std::vector<double>> &groups);

struct TukeyPair {
    int group_i = 0;
    int group_j = 0;
    double mean_diff = 0.0; // |mean_i - mean_j|
    double q_stat = 0.0;
    double p_value = 1.0;
};

struct TukeyResult {
    std::vector<TukeyPair> pairs;
    double ms_within = 0.0;
    int df_within = 0;
    bool degenerate = false;
};

/// Post hoc Tukey HSD. Requires equal group sizes.
TukeyResult tukey_hsd(const std::vector<std::vector<double>> &groups);

} // namespace qkb::stats
