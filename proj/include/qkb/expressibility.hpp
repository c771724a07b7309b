#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qkb/qkernel.hpp"

namespace qkb::express {

constexpr int kBins = 100;

struct FidelitySample {
    enum class Source { DatasetPairs, UniformRandom };
    std::vector<double> values; // one per unordered pair, all in [0,1]
    Source source = Source::DatasetPairs;
    int shots = 0; // 0 = exact
};

/// Haar fidelity reference over 100 uniform bins on [0,1].
///   Independent: P(f) = (N-1)(1-f)^(N-2)           (independent sampling)
///   Dependent:   Beta(K, K(N-1))                   (data-dependent sampling)
struct HaarReference {
    enum class Kind { Independent, Dependent };
    Kind kind = Kind::Independent;
    std::uint64_t n_dim = 2; // N = 2^n_qubits
    std::uint64_t k_param = 1; // K (Dependent only)
};

struct ExpressibilityReport {
    double score = 0.0; // KL(PQC || Haar) in nats, may be +infinity
    std::array<double, kBins> pqc_hist{};
    std::array<double, kBins> haar_hist{};
    enc::MapKind map = enc::MapKind::Angle;
    int n_qubits = 0;
    HaarReference::Kind reference = HaarReference::Kind::Independent;
    std::uint64_t k_param = 0;
    int shots = 0;
    std::uint64_t seed = 0;
    std::string source;
};

/// One fidelity per unordered pair of distinct rows (m rows -> m(m-1)/2
/// values). Parallel over pairs; bit-identical to the serial reference.
FidelitySample pairwise_fidelities(const Matrix &rows, const enc::EncodingSpec &spec,
                                   const enc::ScalerParams &scaler,
                                   const kernel::KernelConfig &config);

namespace serial {
FidelitySample pairwise_fidelities(const Matrix &rows, const enc::EncodingSpec &spec,
                                   const enc::ScalerParams &scaler,
                                   const kernel::KernelConfig &config);
} // namespace serial

/// Bin masses as CDF differences, evaluated in survival/complement form so the
/// upper tail never cancels to zero spuriously.
std::array<double, kBins> haar_bin_masses(const HaarReference &ref);

/// Normalized 100-bin histogram of the sample.
std::array<double, kBins> fidelity_histogram(const FidelitySample &sample);

/// KL(PQC || Haar) in nats. Empty PQC bins contribute 0; PQC mass on a bin
/// whose Haar mass underflows to 0 yields +infinity.
double expressibility_score(const FidelitySample &sample, const HaarReference &ref);

/// Dataset protocol: fidelities over all row pairs, Dependent reference with
/// K = 2^floor(n/2).
ExpressibilityReport dataset_expressibility(const Matrix &rows, const enc::EncodingSpec &spec,
                                            const enc::ScalerParams &scaler,
                                            const kernel::KernelConfig &config);

/// Uniform protocol: n_samples rows drawn uniformly from [0,2pi]^n_features
/// (scaling None), Independent reference.
ExpressibilityReport uniform_expressibility(const enc::EncodingSpec &spec, int n_samples,
                                            std::uint64_t seed,
                                            const kernel::KernelConfig &config);

/// CSV emission: bin index, PQC mass, Haar mass, plus a metadata/score footer.
void write_report_csv(const ExpressibilityReport &report, const std::string &path);

} // namespace qkb::express
