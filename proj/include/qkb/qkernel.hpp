#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qkb/encoders.hpp"
#include "qkb/matrix.hpp"

namespace qkb::kernel {

enum class KernelMode { Exact, Shots };

struct KernelConfig {
    KernelMode mode = KernelMode::Exact;
    int shots = 1024;
    std::uint64_t base_seed = 0;
};

/// Fidelity-kernel matrix with provenance. Square matrices built from one row
/// set are symmetric with unit diagonal (exact mode); rectangular blocks hold
/// fidelity(a_i, b_j).
struct GramMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;
    KernelConfig config;
    bool symmetric = false;

    GramMatrix() = default;
    GramMatrix(std::size_t r, std::size_t c, KernelConfig cfg, bool sym)
        : rows(r), cols(c), values(r * c, 0.0), config(cfg), symmetric(sym) {}

    double &at(std::size_t i, std::size_t j) { return values[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }

    void write_csv(std::ostream &os) const;
    void write_csv(const std::string &path) const;
};

/// Fidelity of the encoded states of two rows. Exact mode computes
/// |<psi_i|psi_j>|^2; shot mode runs encode(row_i) then the adjoint encoding of
/// row_j and returns count(all zeros)/shots with the given sampling seed.
double fidelity(std::span<const double> row_i, std::span<const double> row_j,
                const enc::EncodingSpec &spec, const enc::ScalerParams &scaler,
                const KernelConfig &config, std::uint64_t pair_seed);

/// Convenience overload seeding from config.base_seed alone.
double fidelity(std::span<const double> row_i, std::span<const double> row_j,
                const enc::EncodingSpec &spec, const enc::ScalerParams &scaler,
                const KernelConfig &config);

/// Square symmetric Gram matrix over one row set; each unordered pair is
/// computed once (seed derived from (base_seed, i, j), i < j) and mirrored.
/// Parallel over pairs; bit-identical to the serial reference.
GramMatrix gram_matrix(const Matrix &rows, const enc::EncodingSpec &spec,
                       const enc::ScalerParams &scaler, const KernelConfig &config);

/// Rectangular kernel block: entry (i, j) = fidelity(a_i, b_j).
GramMatrix gram_matrix(const Matrix &rows_a, const Matrix &rows_b, const enc::EncodingSpec &spec,
                       const enc::ScalerParams &scaler, const KernelConfig &config);

/// Serial reference implementations, kept for testing and benchmarking.
namespace serial {
GramMatrix gram_matrix(const Matrix &rows, const enc::EncodingSpec &spec,
                       const enc::ScalerParams &scaler, const KernelConfig &config);
GramMatrix gram_matrix(const Matrix &rows_a, const Matrix &rows_b, const enc::EncodingSpec &spec,
                       const enc::ScalerParams &scaler, const KernelConfig &config);
} // namespace serial

} // namespace qkb::kernel
