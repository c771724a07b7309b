#include "qkb/expressibility.hpp"

#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <numbers>

#include "qkb/errors.hpp"
#include "qkb/rng.hpp"
#include "qkb/special.hpp"
#include "qkernel_detail.hpp"

namespace qkb::express {

namespace {

std::vector<std::pair<std::size_t, std::size_t>> unordered_pairs(std::size_t m) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(m * (m - 1) / 2);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            pairs.emplace_back(i, j);
    return pairs;
}

double pair_value(const Matrix &rows, std::size_t i, std::size_t j,
                  const std::vector<sim::StateVector> *states, const enc::EncodingSpec &spec,
                  const enc::ScalerParams &scaler, const kernel::KernelConfig &config) {
    if (config.mode == kernel::KernelMode::Exact)
        return kernel::detail::exact_pair((*states)[i], (*states)[j]);
    return kernel::detail::shot_pair(rows.row(i), rows.row(j), spec, scaler, config.shots,
                                     kernel::detail::pair_seed(config, i, j));
}

} // namespace

FidelitySample pairwise_fidelities(const Matrix &rows, const enc::EncodingSpec &spec,
                                   const enc::ScalerParams &scaler,
                                   const kernel::KernelConfig &config) {
    if (rows.rows < 2)
        throw ArgumentError("pairwise_fidelities: need at least 2 rows");
    const auto pairs = unordered_pairs(rows.rows);
    FidelitySample sample;
    sample.shots = config.mode == kernel::KernelMode::Shots ? config.shots : 0;
    sample.values.assign(pairs.size(), 0.0);

    std::vector<sim::StateVector> states;
    std::exception_ptr first_error = nullptr;
    if (config.mode == kernel::KernelMode::Exact) {
        states.assign(rows.rows, sim::StateVector(spec.n_qubits()));
#pragma omp parallel for schedule(dynamic)
        for (long long r = 0; r < static_cast<long long>(rows.rows); ++r) {
            try {
                states[r] = enc::encode(rows.row(r), spec, scaler);
            } catch (...) {
#pragma omp critical(qkb_express_error)
                if (!first_error)
                    first_error = std::current_exception();
            }
        }
        if (first_error)
            std::rethrow_exception(first_error);
    }
#pragma omp parallel for schedule(dynamic, 16)
    for (long long p = 0; p < static_cast<long long>(pairs.size()); ++p) {
        try {
            const auto [i, j] = pairs[p];
            sample.values[p] = pair_value(rows, i, j, &states, spec, scaler, config);
        } catch (...) {
#pragma omp critical(qkb_express_error)
            if (!first_error)
                first_error = std::current_exception();
        }
    }
    if (first_error)
        std::rethrow_exception(first_error);
    return sample;
}

namespace serial {
FidelitySample pairwise_fidelities(const Matrix &rows, const enc::EncodingSpec &spec,
                                   const enc::ScalerParams &scaler,
                                   const kernel::KernelConfig &config) {
    if (rows.rows < 2)
        throw ArgumentError("pairwise_fidelities: need at least 2 rows");
    const auto pairs = unordered_pairs(rows.rows);
    FidelitySample sample;
    sample.shots = config.mode == kernel::KernelMode::Shots ? config.shots : 0;
    sample.values.reserve(pairs.size());
    std::vector<sim::StateVector> states;
    if (config.mode == kernel::KernelMode::Exact)
        states = kernel::detail::encode_rows(rows, spec, scaler);
    for (const auto &[i, j] : pairs)
        sample.values.push_back(pair_value(rows, i, j, &states, spec, scaler, config));
    return sample;
}
} // namespace serial

std::array<double, kBins> haar_bin_masses(const HaarReference &ref) {
    if (ref.n_dim < 2)
        throw ArgumentError("haar_bin_masses: N must be >= 2");
    std::array<double, kBins> masses{};
    if (ref.kind == HaarReference::Kind::Independent) {
        // survival form S(f) = (1-f)^(N-1); mass = S(lo) - S(hi)
        const double e = static_cast<double>(ref.n_dim) - 1.0;
        double surv_lo = 1.0;
        for (int b = 0; b < kBins; ++b) {
            const double hi = static_cast<double>(b + 1) / kBins;
            const double surv_hi = b + 1 == kBins ? 0.0 : std::pow(1.0 - hi, e);
            masses[b] = surv_lo - surv_hi;
            surv_lo = surv_hi;
        }
        return masses;
    }
    if (ref.k_param < 1)
        throw ArgumentError("haar_bin_masses: K must be >= 1 for the dependent reference");
    const double a = static_cast<double>(ref.k_param);
    const double b_par = a * (static_cast<double>(ref.n_dim) - 1.0);
    // lower tail from I_x(a,b), upper tail from the complement I_{1-x}(b,a)
    // so neither end loses precision to cancellation
    std::array<double, kBins + 1> cdf_lo{}, cdf_hi{};
    for (int b = 0; b <= kBins; ++b) {
        const double x = static_cast<double>(b) / kBins;
        cdf_lo[b] = special::reg_inc_beta(a, b_par, x);
        cdf_hi[b] = special::reg_inc_beta(b_par, a, 1.0 - x); // survival
    }
    for (int b = 0; b < kBins; ++b) {
        if (cdf_lo[b] <= 0.5)
            masses[b] = cdf_lo[b + 1] - cdf_lo[b];
        else
            masses[b] = cdf_hi[b] - cdf_hi[b + 1];
        if (masses[b] < 0.0)
            masses[b] = 0.0;
    }
    return masses;
}

std::array<double, kBins> fidelity_histogram(const FidelitySample &sample) {
    if (sample.values.empty())
        throw ArgumentError("fidelity_histogram: empty sample");
    std::array<double, kBins> hist{};
    for (double f : sample.values) {
        int b = static_cast<int>(f * kBins);
        if (b < 0)
            b = 0;
        if (b >= kBins)
            b = kBins - 1; // f = 1 goes to the top bin
        hist[b] += 1.0;
    }
    const double total = static_cast<double>(sample.values.size());
    for (double &h : hist)
        h /= total;
    return hist;
}

double expressibility_score(const FidelitySample &sample, const HaarReference &ref) {
    const auto pqc = fidelity_histogram(sample);
    const auto haar = haar_bin_masses(ref);
    double score = 0.0;
    for (int b = 0; b < kBins; ++b) {
        if (pqc[b] <= 0.0)
            continue;
        if (haar[b] <= 0.0)
            return std::numeric_limits<double>::infinity();
        score += pqc[b] * std::log(pqc[b] / haar[b]);
    }
    return score;
}

namespace {

ExpressibilityReport build_report(const FidelitySample &sample, const HaarReference &ref,
                                  const enc::EncodingSpec &spec) {
    ExpressibilityReport rep;
    rep.pqc_hist = fidelity_histogram(sample);
    rep.haar_hist = haar_bin_masses(ref);
    rep.score = expressibility_score(sample, ref);
    rep.map = spec.map;
    rep.n_qubits = spec.n_qubits();
    rep.reference = ref.kind;
    rep.k_param = ref.k_param;
    rep.shots = sample.shots;
    rep.source = sample.source == FidelitySample::Source::DatasetPairs ? "dataset" : "uniform";
    return rep;
}

} // namespace

ExpressibilityReport dataset_expressibility(const Matrix &rows, const enc::EncodingSpec &spec,
                                            const enc::ScalerParams &scaler,
                                            const kernel::KernelConfig &config) {
    FidelitySample sample = pairwise_fidelities(rows, spec, scaler, config);
    sample.source = FidelitySample::Source::DatasetPairs;
    HaarReference ref;
    ref.kind = HaarReference::Kind::Dependent;
    const int n = spec.n_qubits();
    ref.n_dim = std::uint64_t{1} << n;
    ref.k_param = std::uint64_t{1} << (n / 2); // K = 2^floor(n/2)
    ExpressibilityReport rep = build_report(sample, ref, spec);
    rep.seed = config.base_seed;
    return rep;
}

ExpressibilityReport uniform_expressibility(const enc::EncodingSpec &spec, int n_samples,
                                            std::uint64_t seed,
                                            const kernel::KernelConfig &config) {
    if (n_samples < 2)
        throw ArgumentError("uniform_expressibility: n_samples must be >= 2");
    rng::Engine eng(seed);
    Matrix rows(n_samples, spec.n_features);
    for (auto &v : rows.data)
        v = eng.uniform() * 2.0 * std::numbers::pi;

    enc::EncodingSpec uspec = spec;
    uspec.scaling = enc::ScalingMode::None;
    const enc::ScalerParams scaler = enc::identity_scaler(spec.n_features);

    FidelitySample sample = pairwise_fidelities(rows, uspec, scaler, config);
    sample.source = FidelitySample::Source::UniformRandom;
    HaarReference ref;
    ref.kind = HaarReference::Kind::Independent;
    ref.n_dim = std::uint64_t{1} << uspec.n_qubits();
    ref.k_param = 1;
    ExpressibilityReport rep = build_report(sample, ref, uspec);
    rep.seed = seed;
    return rep;
}

void write_report_csv(const ExpressibilityReport &report, const std::string &path) {
    std::ofstream os(path);
    if (!os)
        throw ArgumentError("write_report_csv: cannot open '" + path + "'");
    os.precision(17);
    os << "bin_lo,bin_hi,pqc_mass,haar_mass\n";
    for (int b = 0; b < kBins; ++b)
        os << static_cast<double>(b) / kBins << ',' << static_cast<double>(b + 1) / kBins << ','
           << report.pqc_hist[b] << ',' << report.haar_hist[b] << "\n";
    os << "# map=" << enc::map_name(report.map) << ",n_qubits=" << report.n_qubits
       << ",reference="
       << (report.reference == HaarReference::Kind::Independent ? "independent" : "dependent")
       << ",K=" << report.k_param << ",shots=" << report.shots << ",seed=" << report.seed
       << ",source=" << report.source << ",score=" << report.score << "\n";
}

} // namespace qkb::express
