#pragma once

// Shared per-pair kernel computations used by both the OpenMP fill and the
// serial reference. Keeping one definition guarantees the two paths produce
// bit-identical entries.

#include <cmath>

#include "qkb/errors.hpp"
#include "qkb/qkernel.hpp"
#include "qkb/rng.hpp"
#include "qkb/simcore.hpp"

namespace qkb::kernel::detail {

inline double exact_pair(const sim::StateVector &a, const sim::StateVector &b) {
    const sim::cx ip = sim::inner_product(a, b);
    return std::norm(ip);
}

inline double shot_pair(std::span<const double> row_i, std::span<const double> row_j,
                        const enc::EncodingSpec &spec, const enc::ScalerParams &scaler,
                        int shots, std::uint64_t seed) {
    sim::Circuit c = enc::encoding_circuit(row_i, spec, scaler);
    const sim::Circuit adj = enc::encoding_adjoint(row_j, spec, scaler);
    c.gates.insert(c.gates.end(), adj.gates.begin(), adj.gates.end());
    const sim::StateVector final_state = sim::run_circuit(c, sim::StateVector(c.n_qubits));
    const auto counts = sim::sample_counts(final_state, shots, seed);
    const auto it = counts.find(0);
    const double zeros = it == counts.end() ? 0.0 : static_cast<double>(it->second);
    return zeros / static_cast<double>(shots);
}

inline std::uint64_t pair_seed(const KernelConfig &config, std::size_t i, std::size_t j) {
    return rng::derive_seed(config.base_seed, i, j);
}

inline std::vector<sim::StateVector> encode_rows(const Matrix &rows,
                                                 const enc::EncodingSpec &spec,
                                                 const enc::ScalerParams &scaler) {
    std::vector<sim::StateVector> states;
    states.reserve(rows.rows);
    for (std::size_t r = 0; r < rows.rows; ++r)
        states.push_back(enc::encode(rows.row(r), spec, scaler));
    return states;
}

inline void check_rows(const Matrix &rows, const enc::EncodingSpec &spec, const char *what) {
    if (rows.rows == 0)
        throw ArgumentError(std::string(what) + ": empty row set");
    if (rows.cols != static_cast<std::size_t>(spec.n_features))
        throw ArgumentError(std::string(what) + ": column count does not match spec");
}

} // namespace qkb::kernel::detail
