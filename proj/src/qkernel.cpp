#include "qkb/qkernel.hpp"

#include <exception>
#include <fstream>
#include <sstream>

#include "qkernel_detail.hpp"

namespace qkb::kernel {

namespace {

const char *mode_name(KernelMode m) { return m == KernelMode::Exact ? "exact" : "shots"; }

// Exceptions must not escape an OpenMP region; capture the first one.
struct ErrorCollector {
    std::exception_ptr first = nullptr;

    template <class F> void run(F &&f) noexcept {
        try {
            f();
        } catch (...) {
#pragma omp critical(qkb_error_collector)
            if (!first)
                first = std::current_exception();
        }
    }
    void rethrow_if_any() const {
        if (first)
            std::rethrow_exception(first);
    }
};

} // namespace

void GramMatrix::write_csv(std::ostream &os) const {
    os << "# rows=" << rows << ",cols=" << cols << ",mode=" << mode_name(config.mode)
       << ",shots=" << (config.mode == KernelMode::Shots ? config.shots : 0)
       << ",seed=" << config.base_seed << "\n";
    std::ostringstream line;
    line.precision(17);
    for (std::size_t i = 0; i < rows; ++i) {
        line.str("");
        for (std::size_t j = 0; j < cols; ++j) {
            if (j)
                line << ',';
            line << at(i, j);
        }
        os << line.str() << "\n";
    }
}

void GramMatrix::write_csv(const std::string &path) const {
    std::ofstream os(path);
    if (!os)
        throw ArgumentError("gram csv: cannot open '" + path + "' for writing");
    write_csv(os);
}

double fidelity(std::span<const double> row_i, std::span<const double> row_j,
                const enc::EncodingSpec &spec, const enc::ScalerParams &scaler,
                const KernelConfig &config, std::uint64_t pair_seed) {
    if (row_i.size() != row_j.size())
        throw ArgumentError("fidelity: rows have different lengths");
    if (config.mode == KernelMode::Shots && config.shots < 1)
        throw ArgumentError("fidelity: shots must be >= 1 in shot mode");
    if (config.mode == KernelMode::Exact) {
        const sim::StateVector a = enc::encode(row_i, spec, scaler);
        const sim::StateVector b = enc::encode(row_j, spec, scaler);
        return detail::exact_pair(a, b);
    }
    return detail::shot_pair(row_i, row_j, spec, scaler, config.shots, pair_seed);
}

double fidelity(std::span<const double> row_i, std::span<const double> row_j,
                const enc::EncodingSpec &spec, const enc::ScalerParams &scaler,
                const KernelConfig &config) {
    return fidelity(row_i, row_j, spec, scaler, config, detail::pair_seed(config, 0, 1));
}

GramMatrix gram_matrix(const Matrix &rows, const enc::EncodingSpec &spec,
                       const enc::ScalerParams &scaler, const KernelConfig &config) {
    detail::check_rows(rows, spec, "gram_matrix");
    const std::size_t m = rows.rows;
    GramMatrix g(m, m, config, true);
    for (std::size_t i = 0; i < m; ++i)
        g.at(i, i) = 1.0; // U(d)^dagger U(d) = I: the all-zeros outcome is certain

    // flat list of unordered pairs for a balanced parallel loop
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(m * (m - 1) / 2);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            pairs.emplace_back(i, j);

    ErrorCollector errors;
    if (config.mode == KernelMode::Exact) {
        std::vector<sim::StateVector> states(m, sim::StateVector(spec.n_qubits()));
#pragma omp parallel for schedule(dynamic)
        for (long long r = 0; r < static_cast<long long>(m); ++r)
            errors.run([&, r] { states[r] = enc::encode(rows.row(r), spec, scaler); });
        errors.rethrow_if_any();
#pragma omp parallel for schedule(dynamic, 16)
        for (long long p = 0; p < static_cast<long long>(pairs.size()); ++p)
            errors.run([&, p] {
                const auto [i, j] = pairs[p];
                const double f = detail::exact_pair(states[i], states[j]);
                g.at(i, j) = f;
                g.at(j, i) = f;
            });
    } else {
#pragma omp parallel for schedule(dynamic)
        for (long long p = 0; p < static_cast<long long>(pairs.size()); ++p)
            errors.run([&, p] {
                const auto [i, j] = pairs[p];
                const double f = detail::shot_pair(rows.row(i), rows.row(j), spec, scaler,
                                                   config.shots, detail::pair_seed(config, i, j));
                g.at(i, j) = f;
                g.at(j, i) = f;
            });
    }
    errors.rethrow_if_any();
    return g;
}

GramMatrix gram_matrix(const Matrix &rows_a, const Matrix &rows_b, const enc::EncodingSpec &spec,
                       const enc::ScalerParams &scaler, const KernelConfig &config) {
    detail::check_rows(rows_a, spec, "gram_matrix block");
    detail::check_rows(rows_b, spec, "gram_matrix block");
    GramMatrix g(rows_a.rows, rows_b.rows, config, false);
    ErrorCollector errors;
    if (config.mode == KernelMode::Exact) {
        std::vector<sim::StateVector> sa(rows_a.rows, sim::StateVector(spec.n_qubits()));
        std::vector<sim::StateVector> sb(rows_b.rows, sim::StateVector(spec.n_qubits()));
#pragma omp parallel for schedule(dynamic)
        for (long long r = 0; r < static_cast<long long>(rows_a.rows + rows_b.rows); ++r)
            errors.run([&, r] {
                const std::size_t u = static_cast<std::size_t>(r);
                if (u < rows_a.rows)
                    sa[u] = enc::encode(rows_a.row(u), spec, scaler);
                else
                    sb[u - rows_a.rows] = enc::encode(rows_b.row(u - rows_a.rows), spec, scaler);
            });
        errors.rethrow_if_any();
#pragma omp parallel for schedule(dynamic, 16)
        for (long long t = 0; t < static_cast<long long>(g.rows * g.cols); ++t)
            errors.run([&, t] {
                const std::size_t i = static_cast<std::size_t>(t) / g.cols;
                const std::size_t j = static_cast<std::size_t>(t) % g.cols;
                g.at(i, j) = detail::exact_pair(sa[i], sb[j]);
            });
    } else {
#pragma omp parallel for schedule(dynamic)
        for (long long t = 0; t < static_cast<long long>(g.rows * g.cols); ++t)
            errors.run([&, t] {
                const std::size_t i = static_cast<std::size_t>(t) / g.cols;
                const std::size_t j = static_cast<std::size_t>(t) % g.cols;
                g.at(i, j) = detail::shot_pair(rows_a.row(i), rows_b.row(j), spec, scaler,
                                               config.shots, detail::pair_seed(config, i, j));
            });
    }
    errors.rethrow_if_any();
    return g;
}

} // namespace qkb::kernel
