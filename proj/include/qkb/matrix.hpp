#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qkb {

/// Minimal dense row-major matrix of doubles.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double &at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::span<const double> row(std::size_t r) const {
        return {data.data() + r * cols, cols};
    }
    std::span<double> row(std::size_t r) {
        return {data.data() + r * cols, cols};
    }

    /// New matrix holding the given subset of rows, in the given order.
    Matrix select_rows(std::span<const std::size_t> idx) const {
        Matrix out(idx.size(), cols);
        for (std::size_t i = 0; i < idx.size(); ++i)
            for (std::size_t c = 0; c < cols; ++c)
                out.at(i, c) = at(idx[i], c);
        return out;
    }

    /// New matrix holding the given subset of columns, in the given order.
    Matrix select_cols(std::span<const int> idx) const {
        Matrix out(rows, idx.size());
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < idx.size(); ++c)
                out.at(r, c) = at(r, static_cast<std::size_t>(idx[c]));
        return out;
    }
};

} // namespace qkb
