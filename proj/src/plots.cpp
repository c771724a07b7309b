#include "qkb/plots.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qkb/errors.hpp"
#include "qkb/runner.hpp"

namespace qkb::plots {

double quantile_sorted(const std::vector<double> &v, double p) {
    if (v.empty())
        throw ArgumentError("quantile: empty data");
    if (v.size() == 1)
        return v[0];
    const double h = p * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return v[lo] + frac * (v[hi] - v[lo]);
}

BoxStats box_stats(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    BoxStats b{};
    b.q1 = quantile_sorted(values, 0.25);
    b.median = quantile_sorted(values, 0.5);
    b.q3 = quantile_sorted(values, 0.75);
    const double iqr = b.q3 - b.q1;
    const double lo_fence = b.q1 - 1.5 * iqr;
    const double hi_fence = b.q3 + 1.5 * iqr;
    b.whisker_lo = b.q3;
    b.whisker_hi = b.q1;
    bool any_in = false;
    for (double v : values) {
        if (v < lo_fence || v > hi_fence) {
            b.outliers.push_back(v);
        } else {
            if (!any_in) {
                b.whisker_lo = b.whisker_hi = v;
                any_in = true;
            }
            b.whisker_lo = std::min(b.whisker_lo, v);
            b.whisker_hi = std::max(b.whisker_hi, v);
        }
    }
    if (!any_in) { // everything outlying can only happen with zero IQR anomalies
        b.whisker_lo = b.q1;
        b.whisker_hi = b.q3;
    }
    return b;
}

namespace {

std::string escape_xml(const std::string &s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

constexpr double kWidth = 640.0, kHeight = 420.0;
constexpr double kMarginL = 60.0, kMarginR = 20.0, kMarginT = 40.0, kMarginB = 50.0;

} // namespace

void write_box_plot_svg(const std::string &path, const std::string &title,
                        const std::vector<std::string> &names,
                        const std::vector<std::vector<double>> &groups) {
    if (names.size() != groups.size() || groups.empty())
        throw ArgumentError("write_box_plot_svg: names/groups mismatch or empty");

    double lo = groups[0][0], hi = groups[0][0];
    for (const auto &g : groups)
        for (double v : g) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (hi <= lo) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;

    const double plot_w = kWidth - kMarginL - kMarginR;
    const double plot_h = kHeight - kMarginT - kMarginB;
    auto ypix = [&](double v) { return kMarginT + plot_h * (1.0 - (v - lo) / (hi - lo)); };

    std::ostringstream os;
    os.precision(6);
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
       << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
          "font-family=\"sans-serif\">"
       << escape_xml(title) << "</text>\n";

    // y axis with 5 ticks
    os << "<line x1=\"" << kMarginL << "\" y1=\"" << kMarginT << "\" x2=\"" << kMarginL
       << "\" y2=\"" << kMarginT + plot_h << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 5; ++t) {
        const double v = lo + (hi - lo) * t / 5.0;
        const double y = ypix(v);
        os << "<line x1=\"" << kMarginL - 4 << "\" y1=\"" << y << "\" x2=\"" << kMarginL
           << "\" y2=\"" << y << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << kMarginL - 8 << "\" y=\"" << y + 4
           << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">";
        std::ostringstream lab;
        lab.precision(3);
        lab << v;
        os << lab.str() << "</text>\n";
    }

    const double slot = plot_w / static_cast<double>(groups.size());
    const double box_w = 0.45 * slot;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const BoxStats b = box_stats(groups[g]);
        const double cx = kMarginL + slot * (static_cast<double>(g) + 0.5);
        const double x0 = cx - box_w / 2, x1 = cx + box_w / 2;
        os << "<line x1=\"" << cx << "\" y1=\"" << ypix(b.whisker_lo) << "\" x2=\"" << cx
           << "\" y2=\"" << ypix(b.q1) << "\" stroke=\"black\"/>\n";
        os << "<line x1=\"" << cx << "\" y1=\"" << ypix(b.q3) << "\" x2=\"" << cx << "\" y2=\""
           << ypix(b.whisker_hi) << "\" stroke=\"black\"/>\n";
        for (double w : {b.whisker_lo, b.whisker_hi})
            os << "<line x1=\"" << cx - box_w / 4 << "\" y1=\"" << ypix(w) << "\" x2=\""
               << cx + box_w / 4 << "\" y2=\"" << ypix(w) << "\" stroke=\"black\"/>\n";
        os << "<rect x=\"" << x0 << "\" y=\"" << ypix(b.q3) << "\" width=\"" << box_w
           << "\" height=\"" << std::max(0.5, ypix(b.q1) - ypix(b.q3))
           << "\" fill=\"#a6cee3\" stroke=\"black\"/>\n";
        os << "<line x1=\"" << x0 << "\" y1=\"" << ypix(b.median) << "\" x2=\"" << x1
           << "\" y2=\"" << ypix(b.median) << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
        for (double o : b.outliers)
            os << "<circle cx=\"" << cx << "\" cy=\"" << ypix(o)
               << "\" r=\"2.5\" fill=\"none\" stroke=\"black\"/>\n";
        os << "<text x=\"" << cx << "\" y=\"" << kHeight - kMarginB + 18
           << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">"
           << escape_xml(names[g]) << "</text>\n";
    }
    os << "</svg>\n";

    std::ofstream f(path);
    if (!f)
        throw ArgumentError("write_box_plot_svg: cannot open '" + path + "'");
    f << os.str();
}

void emit_metric_box_plots(const std::vector<runner::MetricRecord> &records,
                           const runner::BaselineGroup *baseline, const std::string &out_dir) {
    if (records.empty())
        throw ArgumentError("emit_metric_box_plots: empty report");
    const std::string dataset = records[0].dataset;
    for (const std::string metric : {"accuracy", "f1", "auc"}) {
        auto grouped = runner::metric_groups(records, metric);
        std::vector<std::string> names;
        std::vector<std::vector<double>> groups;
        for (auto &[name, values] : grouped) {
            if (values.empty()) {
                std::cerr << "plot: skipping empty group '" << name << "' for " << metric << "\n";
                continue;
            }
            names.push_back(name);
            groups.push_back(values);
        }
        if (baseline) {
            const auto &vals = metric == "accuracy" ? baseline->accuracy
                               : metric == "f1"     ? baseline->f1
                                                    : baseline->auc;
            if (!vals.empty()) {
                names.push_back(baseline->name);
                groups.push_back(vals);
            }
        }
        if (groups.empty()) {
            std::cerr << "plot: no groups for metric " << metric << ", skipped\n";
            continue;
        }
        write_box_plot_svg(out_dir + "/box_" + dataset + "_" + metric + ".svg",
                           dataset + " " + metric, names, groups);
    }
}

void write_expressibility_overlay_svg(const express::ExpressibilityReport &report,
                                      const std::string &path) {
    const double plot_w = kWidth - kMarginL - kMarginR;
    const double plot_h = kHeight - kMarginT - kMarginB;
    double max_mass = 0.0;
    for (int b = 0; b < express::kBins; ++b)
        max_mass = std::max({max_mass, report.pqc_hist[b], report.haar_hist[b]});
    if (max_mass <= 0.0)
        max_mass = 1.0;

    std::ostringstream os;
    os.precision(6);
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
       << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::ostringstream title;
    title.precision(4);
    title << enc::map_name(report.map) << " expressibility (KL=" << report.score << ")";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
          "font-family=\"sans-serif\">"
       << escape_xml(title.str()) << "</text>\n";

    const double bar_w = plot_w / express::kBins;
    for (int b = 0; b < express::kBins; ++b) {
        const double x = kMarginL + b * bar_w;
        const double hp = plot_h * report.pqc_hist[b] / max_mass;
        if (hp > 0)
            os << "<rect x=\"" << x << "\" y=\"" << kMarginT + plot_h - hp << "\" width=\""
               << bar_w << "\" height=\"" << hp << "\" fill=\"#1f78b4\" fill-opacity=\"0.6\"/>\n";
    }
    os << "<polyline fill=\"none\" stroke=\"#e31a1c\" stroke-width=\"1.5\" points=\"";
    for (int b = 0; b < express::kBins; ++b) {
        const double x = kMarginL + (b + 0.5) * bar_w;
        const double y = kMarginT + plot_h * (1.0 - report.haar_hist[b] / max_mass);
        os << x << ',' << y << ' ';
    }
    os << "\"/>\n";
    os << "<line x1=\"" << kMarginL << "\" y1=\"" << kMarginT + plot_h << "\" x2=\""
       << kWidth - kMarginR << "\" y2=\"" << kMarginT + plot_h << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << kMarginL << "\" y=\"" << kHeight - 14
       << "\" font-size=\"11\" font-family=\"sans-serif\">fidelity 0..1; bars: PQC, line: "
          "Haar</text>\n";
    os << "</svg>\n";

    std::ofstream f(path);
    if (!f)
        throw ArgumentError("write_expressibility_overlay_svg: cannot open '" + path + "'");
    f << os.str();
}

} // namespace qkb::plots
