#pragma once

#include <string>
#include <vector>

#include "qkb/qkernel.hpp"

namespace qkb::svc {

/// Binary C-SVC over a precomputed kernel, trained by SMO.
struct SvcModel {
    std::vector<int> support;       // training indices with alpha_i > 0
    std::vector<double> dual_coef;  // alpha_i * y_i at the support indices
    double bias = 0.0;
    double c = 1.0;
    std::vector<int> labels;        // full +-1 training label vector

    std::size_t n_train() const { return labels.size(); }
};

/// Trains on a square kernel matrix. Shot-mode kernels get a diagonal jitter
/// of max(0, -lambda_min + 1e-8) before solving so the dual stays concave.
/// Throws TrainingError on single-class labels or non-convergence,
/// ArgumentError on shape problems.
SvcModel train(const kernel::GramMatrix &gram, const std::vector<int> &labels, double c = 1.0,
               double tol = 1e-3, std::vector<double> *objective_trace = nullptr);

/// score(x) = sum_i alpha_i y_i K(x_i, x) + b for each row of the block
/// (rows = points to score, columns aligned with training indices).
std::vector<double> decision_scores(const SvcModel &model, const kernel::GramMatrix &block);

/// sign(score); ties go to +1.
std::vector<int> predict(const SvcModel &model, const kernel::GramMatrix &block);

/// Flat text serialization for inspection.
void save_model(const SvcModel &model, const std::string &path);
SvcModel load_model(const std::string &path);

} // namespace qkb::svc
