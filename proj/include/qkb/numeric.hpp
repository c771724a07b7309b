#pragma once

#include <vector>

namespace qkb::numeric {

/// Eigenvalues of a dense symmetric matrix (row-major, n x n) by the cyclic
/// Jacobi method. Ascending order.
std::vector<double> symmetric_eigenvalues(std::vector<double> a, std::size_t n);

/// Smallest eigenvalue of a dense symmetric matrix.
double min_symmetric_eigenvalue(const std::vector<double> &a, std::size_t n);

} // namespace qkb::numeric
