#pragma once

#include <string>
#include <vector>

#include "qkb/expressibility.hpp"

namespace qkb::runner {
struct MetricRecord;
struct BaselineGroup;
} // namespace qkb::runner

namespace qkb::plots {

/// Linear-interpolation quantile of sorted data (the common "R-7" rule):
/// q(p) = x[(n-1)p] with fractional indices interpolated.
double quantile_sorted(const std::vector<double> &sorted_values, double p);

struct BoxStats {
    double median, q1, q3, whisker_lo, whisker_hi;
    std::vector<double> outliers; // beyond 1.5 IQR from the box
};

BoxStats box_stats(std::vector<double> values);

/// One box per named group; median line, quartile box, 1.5-IQR whiskers,
/// outlier dots. Pure file emission.
void write_box_plot_svg(const std::string &path, const std::string &title,
                        const std::vector<std::string> &names,
                        const std::vector<std::vector<double>> &groups);

/// Per-metric box plots for a benchmark run: box_<dataset>_<metric>.svg.
/// Empty metric groups are skipped with a warning on stderr.
void emit_metric_box_plots(const std::vector<runner::MetricRecord> &records,
                           const runner::BaselineGroup *baseline, const std::string &out_dir);

/// PQC vs Haar histogram overlay for an expressibility report.
void write_expressibility_overlay_svg(const express::ExpressibilityReport &report,
                                      const std::string &path);

} // namespace qkb::plots
