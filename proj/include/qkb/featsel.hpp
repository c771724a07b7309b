#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qkb/matrix.hpp"

namespace qkb::featsel {

/// QUBO over binary feature-selection variables, minimized:
///   E(x) = -alpha * sum_i linear_i x_i + (1-alpha) * sum_{i<j} quadratic_ij x_i x_j
struct QuboInstance {
    int n_vars = 0;
    std::vector<double> linear;  // importance terms
    Matrix quadratic;            // redundancy terms, symmetric, zero diagonal
    double alpha = 0.5;

    double energy(std::span<const int> x) const;
};

enum class SolverKind { Exhaustive, Annealing };

struct SelectionResult {
    std::vector<int> chosen; // sorted feature indices
    double alpha = 0.0;
    double energy = 0.0;
    SolverKind solver = SolverKind::Exhaustive;
    bool adjusted = false; // true when select_k had to trim/extend to reach k
};

struct AnnealSettings {
    int sweeps = 2000;
    int restarts = 10;
    std::uint64_t seed = 0;
};

struct FeatSelSettings {
    SolverKind solver = SolverKind::Annealing;
    AnnealSettings anneal;
};

/// linear_i = |Pearson(feature_i, target)|, quadratic_ij = |Pearson(f_i, f_j)|.
/// Constant columns get correlation 0. Target values must be 0/1.
QuboInstance build_qubo(const Matrix &features, const std::vector<int> &target, double alpha);

/// Global minimum by Gray-code enumeration (n_vars <= 20). Ties broken by
/// lexicographically smallest chosen-index set.
SelectionResult solve_exhaustive(const QuboInstance &q);

/// Best-of-restarts single-spin-flip Metropolis annealing with a geometric
/// temperature schedule. Restarts run in parallel; the merge is deterministic
/// (best energy, then lexicographic tie-break), so results do not depend on
/// thread count.
SelectionResult solve_annealing(const QuboInstance &q, const AnnealSettings &settings);

namespace serial {
/// Plain-loop restart reference for testing/benchmarking.
SelectionResult solve_annealing(const QuboInstance &q, const AnnealSettings &settings);
} // namespace serial

/// Binary search on alpha for a subset of exactly k features; falls back to
/// trimming/extending by marginal energy (flagged `adjusted`) when no alpha
/// yields exactly k.
SelectionResult select_k_features(const Matrix &features, const std::vector<int> &target, int k,
                                  const FeatSelSettings &settings);

/// CSV/JSON emission of a selection result.
void write_selection_csv(const SelectionResult &r, const std::string &path);
std::string selection_to_json(const SelectionResult &r);

} // namespace qkb::featsel
