#include "qkb/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qkb/errors.hpp"
#include "qkb/special.hpp"

namespace qkb::stats {

double accuracy(const std::vector<int> &truth, const std::vector<int> &predictions) {
    if (truth.empty() || truth.size() != predictions.size())
        throw ArgumentError("accuracy: empty or misaligned inputs");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i)
        if (truth[i] == predictions[i])
            ++correct;
    return static_cast<double>(correct) / static_cast<double>(truth.size());
}

double f1_score(const std::vector<int> &truth, const std::vector<int> &predictions, int positive) {
    if (truth.empty() || truth.size() != predictions.size())
        throw ArgumentError("f1_score: empty or misaligned inputs");
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool t = truth[i] == positive;
        const bool p = predictions[i] == positive;
        if (t && p)
            ++tp;
        else if (!t && p)
            ++fp;
        else if (t && !p)
            ++fn;
    }
    const double denom = 2.0 * tp + fp + fn;
    if (denom == 0.0)
        return 0.0;
    return 2.0 * tp / denom;
}

double auc_score(const std::vector<int> &truth, const std::vector<double> &scores) {
    if (truth.empty() || truth.size() != scores.size())
        throw ArgumentError("auc_score: empty or misaligned inputs");
    const std::size_t n = truth.size();
    std::size_t n_pos = 0;
    for (int t : truth)
        if (t == 1)
            ++n_pos;
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0)
        throw MetricError("auc_score: both classes must be present");

    // midranks handle ties with 0.5 credit
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    std::vector<double> rank(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]])
            ++j;
        const double mid = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t t = i; t <= j; ++t)
            rank[order[t]] = mid;
        i = j + 1;
    }
    double rank_sum_pos = 0.0;
    for (std::size_t t = 0; t < n; ++t)
        if (truth[t] == 1)
            rank_sum_pos += rank[t];
    const double u = rank_sum_pos - 0.5 * n_pos * (n_pos + 1);
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

namespace {

struct GroupStats {
    std::vector<double> means;
    double grand_mean = 0.0;
    double ss_between = 0.0;
    double ss_within = 0.0;
    std::size_t total = 0;
};

GroupStats group_stats(const std::vector<std::vector<double>> &groups) {
    GroupStats s;
    double grand_sum = 0.0;
    for (const auto &g : groups) {
        double sum = 0.0;
        for (double v : g)
            sum += v;
        s.means.push_back(sum / static_cast<double>(g.size()));
        grand_sum += sum;
        s.total += g.size();
    }
    s.grand_mean = grand_sum / static_cast<double>(s.total);
    for (std::size_t k = 0; k < groups.size(); ++k) {
        const double d = s.means[k] - s.grand_mean;
        s.ss_between += static_cast<double>(groups[k].size()) * d * d;
        for (double v : groups[k]) {
            const double w = v - s.means[k];
            s.ss_within += w * w;
        }
    }
    return s;
}

void check_groups(const std::vector<std::vector<double>> &groups, const char *what) {
    if (groups.size() < 2)
        throw ArgumentError(std::string(what) + ": need at least 2 groups");
    for (const auto &g : groups)
        if (g.size() < 2)
            throw ArgumentError(std::string(what) + ": every group needs at least 2 values");
}

} // namespace

AnovaResult one_way_anova(const std::vector<std::vector<double>> &groups) {
    check_groups(groups, "one_way_anova");
    const GroupStats s = group_stats(groups);
    AnovaResult r;
    r.df_between = static_cast<int>(groups.size()) - 1;
    r.df_within = static_cast<int>(s.total) - static_cast<int>(groups.size());
    const double ms_between = s.ss_between / r.df_between;
    const double ms_within = s.ss_within / r.df_within;
    if (ms_within <= 0.0) {
        if (ms_between > 0.0) {
            r.f_stat = std::numeric_limits<double>::infinity();
            r.p_value = 0.0;
            r.degenerate = true;
        } else {
            r.f_stat = 0.0;
            r.p_value = 1.0;
        }
        return r;
    }
    r.f_stat = ms_between / ms_within;
    r.p_value = special::f_survival(r.f_stat, r.df_between, r.df_within);
    return r;
}

TukeyResult tukey_hsd(const std::vector<std::vector<double>> &groups) {
    check_groups(groups, "tukey_hsd");
    const std::size_t n_per = groups[0].size();
    for (const auto &g : groups)
        if (g.size() != n_per)
            throw ArgumentError("tukey_hsd: groups must have equal sizes");

    const GroupStats s = group_stats(groups);
    TukeyResult r;
    r.df_within = static_cast<int>(s.total) - static_cast<int>(groups.size());
    r.ms_within = s.ss_within / r.df_within;
    const int k = static_cast<int>(groups.size());
    const double stderr_q = r.ms_within > 0.0
                                ? std::sqrt(r.ms_within / static_cast<double>(n_per))
                                : 0.0;
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            TukeyPair p;
            p.group_i = i;
            p.group_j = j;
            p.mean_diff = std::abs(s.means[i] - s.means[j]);
            if (stderr_q > 0.0) {
                p.q_stat = p.mean_diff / stderr_q;
                p.p_value = 1.0 - special::studentized_range_cdf(p.q_stat, k, r.df_within);
            } else if (p.mean_diff > 0.0) {
                p.q_stat = std::numeric_limits<double>::infinity();
                p.p_value = 0.0;
                r.degenerate = true;
            } else {
                p.q_stat = 0.0;
                p.p_value = 1.0;
            }
            r.pairs.push_back(p);
        }
    }
    return r;
}

} // namespace qkb::stats
