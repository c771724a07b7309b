#include "qkb/qkernel.hpp"

#include "qkernel_detail.hpp"

// Plain-loop reference for the OpenMP Gram fill. Tests assert the two paths
// agree bit-for-bit; the benchmark tool compares their wall times.

namespace qkb::kernel::serial {

GramMatrix gram_matrix(const Matrix &rows, const enc::EncodingSpec &spec,
                       const enc::ScalerParams &scaler, const KernelConfig &config) {
    detail::check_rows(rows, spec, "gram_matrix");
    const std::size_t m = rows.rows;
    GramMatrix g(m, m, config, true);
    for (std::size_t i = 0; i < m; ++i)
        g.at(i, i) = 1.0;
    if (config.mode == KernelMode::Exact) {
        const auto states = detail::encode_rows(rows, spec, scaler);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j) {
                const double f = detail::exact_pair(states[i], states[j]);
                g.at(i, j) = f;
                g.at(j, i) = f;
            }
    } else {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j) {
                const double f = detail::shot_pair(rows.row(i), rows.row(j), spec, scaler,
                                                   config.shots, detail::pair_seed(config, i, j));
                g.at(i, j) = f;
                g.at(j, i) = f;
            }
    }
    return g;
}

GramMatrix gram_matrix(const Matrix &rows_a, const Matrix &rows_b, const enc::EncodingSpec &spec,
                       const enc::ScalerParams &scaler, const KernelConfig &config) {
    detail::check_rows(rows_a, spec, "gram_matrix block");
    detail::check_rows(rows_b, spec, "gram_matrix block");
    GramMatrix g(rows_a.rows, rows_b.rows, config, false);
    if (config.mode == KernelMode::Exact) {
        const auto sa = detail::encode_rows(rows_a, spec, scaler);
        const auto sb = detail::encode_rows(rows_b, spec, scaler);
        for (std::size_t i = 0; i < g.rows; ++i)
            for (std::size_t j = 0; j < g.cols; ++j)
                g.at(i, j) = detail::exact_pair(sa[i], sb[j]);
    } else {
        for (std::size_t i = 0; i < g.rows; ++i)
            for (std::size_t j = 0; j < g.cols; ++j)
                g.at(i, j) = detail::shot_pair(rows_a.row(i), rows_b.row(j), spec, scaler,
                                               config.shots, detail::pair_seed(config, i, j));
    }
    return g;
}

} // namespace qkb::kernel::serial
