#include "qkb/svc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "qkb/errors.hpp"
#include "qkb/numeric.hpp"

namespace qkb::svc {

namespace {

constexpr double kTau = 1e-12;        // curvature floor for degenerate pairs
constexpr long kMaxIterations = 1000000;

struct Problem {
    std::size_t n;
    const std::vector<double> *kernel; // row-major n x n, jitter already applied
    std::vector<int> y;

    double k(std::size_t i, std::size_t j) const { return (*kernel)[i * n + j]; }
    double q(std::size_t i, std::size_t j) const { return y[i] * y[j] * k(i, j); }
};

} // namespace

SvcModel train(const kernel::GramMatrix &gram, const std::vector<int> &labels, double c,
               double tol, std::vector<double> *objective_trace) {
    const std::size_t n = gram.rows;
    if (gram.rows != gram.cols)
        throw ArgumentError("svc::train: kernel matrix is not square");
    if (labels.size() != n)
        throw ArgumentError("svc::train: label count does not match kernel size");
    if (c <= 0.0)
        throw ArgumentError("svc::train: C must be positive");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (gram.at(i, j) != gram.at(j, i))
                throw ArgumentError("svc::train: kernel matrix is not symmetric");
    bool has_pos = false, has_neg = false;
    for (int v : labels) {
        if (v == 1)
            has_pos = true;
        else if (v == -1)
            has_neg = true;
        else
            throw ArgumentError("svc::train: labels must be +1 or -1");
    }
    if (!has_pos || !has_neg)
        throw TrainingError("svc::train: both classes must be present");

    std::vector<double> k = gram.values;
    if (gram.config.mode == kernel::KernelMode::Shots) {
        // measured kernels may be slightly non-PSD; shift the spectrum up
        const double lambda_min = numeric::min_symmetric_eigenvalue(k, n);
        const double jitter = std::max(0.0, -lambda_min + 1e-8);
        if (jitter > 0.0)
            for (std::size_t i = 0; i < n; ++i)
                k[i * n + i] += jitter;
    }

    Problem prob{n, &k, labels};
    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0); // G = Q alpha - e, alpha = 0 initially

    auto in_up = [&](std::size_t i) {
        return (labels[i] == 1 && alpha[i] < c) || (labels[i] == -1 && alpha[i] > 0.0);
    };
    auto in_low = [&](std::size_t i) {
        return (labels[i] == 1 && alpha[i] > 0.0) || (labels[i] == -1 && alpha[i] < c);
    };

    double m_up = 0.0, m_low = 0.0;
    long iter = 0;
    for (; iter < kMaxIterations; ++iter) {
        // maximal violating pair
        std::size_t i = n, j = n;
        m_up = -std::numeric_limits<double>::infinity();
        m_low = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < n; ++t) {
            const double v = -labels[t] * grad[t];
            if (in_up(t) && v > m_up) {
                m_up = v;
                i = t;
            }
            if (in_low(t) && v < m_low) {
                m_low = v;
                j = t;
            }
        }
        if (i == n || j == n || m_up - m_low <= tol)
            break;

        const double old_ai = alpha[i], old_aj = alpha[j];
        if (labels[i] != labels[j]) {
            double quad = prob.q(i, i) + prob.q(j, j) + 2.0 * prob.q(i, j);
            if (quad <= 0.0)
                quad = kTau;
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0 && alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = diff;
            } else if (diff <= 0.0 && alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if (diff > 0.0 && alpha[i] > c) {
                alpha[i] = c;
                alpha[j] = c - diff;
            } else if (diff <= 0.0 && alpha[j] > c) {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            double quad = prob.q(i, i) + prob.q(j, j) - 2.0 * prob.q(i, j);
            if (quad <= 0.0)
                quad = kTau;
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > c && alpha[i] > c) {
                alpha[i] = c;
                alpha[j] = sum - c;
            } else if (sum <= c && alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if (sum > c && alpha[j] > c) {
                alpha[j] = c;
                alpha[i] = sum - c;
            } else if (sum <= c && alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        const double d_i = alpha[i] - old_ai;
        const double d_j = alpha[j] - old_aj;
        for (std::size_t t = 0; t < n; ++t)
            grad[t] += prob.q(t, i) * d_i + prob.q(t, j) * d_j;

        if (objective_trace) {
            double f = 0.0;
            for (std::size_t t = 0; t < n; ++t)
                f += 0.5 * alpha[t] * (grad[t] - 1.0);
            objective_trace->push_back(-f); // dual objective being maximized
        }
    }
    if (iter >= kMaxIterations)
        throw TrainingError("svc::train: SMO did not converge within the iteration cap");

    // bias from free support vectors, else the midpoint of the KKT bounds
    double b_sum = 0.0;
    std::size_t b_count = 0;
    for (std::size_t t = 0; t < n; ++t)
        if (alpha[t] > 0.0 && alpha[t] < c) {
            b_sum += -labels[t] * grad[t];
            ++b_count;
        }
    const double bias = b_count > 0 ? b_sum / static_cast<double>(b_count)
                                    : 0.5 * (m_up + m_low);

    SvcModel model;
    model.bias = bias;
    model.c = c;
    model.labels = labels;
    for (std::size_t t = 0; t < n; ++t)
        if (alpha[t] > 0.0) {
            model.support.push_back(static_cast<int>(t));
            model.dual_coef.push_back(alpha[t] * labels[t]);
        }
    return model;
}

std::vector<double> decision_scores(const SvcModel &model, const kernel::GramMatrix &block) {
    if (block.cols != model.n_train())
        throw ArgumentError("svc::decision_scores: block columns must align with training indices");
    std::vector<double> scores(block.rows, model.bias);
    for (std::size_t r = 0; r < block.rows; ++r) {
        double s = 0.0;
        for (std::size_t t = 0; t < model.support.size(); ++t)
            s += model.dual_coef[t] * block.at(r, static_cast<std::size_t>(model.support[t]));
        scores[r] += s;
    }
    return scores;
}

std::vector<int> predict(const SvcModel &model, const kernel::GramMatrix &block) {
    const std::vector<double> scores = decision_scores(model, block);
    std::vector<int> out(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i)
        out[i] = scores[i] >= 0.0 ? 1 : -1; // ties -> +1
    return out;
}

void save_model(const SvcModel &model, const std::string &path) {
    std::ofstream os(path);
    if (!os)
        throw ArgumentError("save_model: cannot open '" + path + "'");
    os.precision(17);
    os << "qkb-svc-model v1\n";
    os << "c " << model.c << "\n";
    os << "bias " << model.bias << "\n";
    os << "n_train " << model.labels.size() << "\n";
    os << "labels";
    for (int y : model.labels)
        os << ' ' << y;
    os << "\n";
    os << "n_support " << model.support.size() << "\n";
    for (std::size_t t = 0; t < model.support.size(); ++t)
        os << model.support[t] << ' ' << model.dual_coef[t] << "\n";
}

SvcModel load_model(const std::string &path) {
    std::ifstream is(path);
    if (!is)
        throw ArgumentError("load_model: cannot open '" + path + "'");
    std::string line;
    std::getline(is, line);
    if (line != "qkb-svc-model v1")
        throw ArgumentError("load_model: unrecognized header in '" + path + "'");
    SvcModel m;
    std::string key;
    std::size_t n_train = 0, n_support = 0;
    is >> key >> m.c;
    is >> key >> m.bias;
    is >> key >> n_train;
    is >> key;
    m.labels.resize(n_train);
    for (auto &y : m.labels)
        is >> y;
    is >> key >> n_support;
    m.support.resize(n_support);
    m.dual_coef.resize(n_support);
    for (std::size_t t = 0; t < n_support; ++t)
        is >> m.support[t] >> m.dual_coef[t];
    if (!is)
        throw ArgumentError("load_model: truncated model file '" + path + "'");
    return m;
}

} // namespace qkb::svc
