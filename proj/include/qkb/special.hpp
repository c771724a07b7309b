#pragma once

#include <vector>

namespace qkb::special {

/// log Gamma(x) for x > 0, Lanczos approximation (g = 7, 9 coefficients).
double log_gamma(double x);

/// Regularized incomplete beta I_x(a, b), continued fraction (modified Lentz)
/// with 1e-12 relative tolerance. The symmetry transform keeps the fraction in
/// its fast-converging region.
double reg_inc_beta(double a, double b, double x);

/// Survival function of the F distribution: P(F > f) with d1/d2 degrees of
/// freedom, computed directly from the incomplete beta (no 1-CDF cancellation).
double f_survival(double f, int d1, int d2);

double normal_pdf(double z);
double normal_cdf(double z);

/// Gauss-Legendre nodes and weights on [-1, 1]; cached per order.
struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const Quadrature &gauss_legendre(int order);

/// CDF of the range of k independent standard normals.
double normal_range_cdf(double r, int k);

/// CDF of the studentized range statistic with k groups and df degrees of
/// freedom: an outer integral over the chi-distributed scale estimate and an
/// inner integral over the normal location. Relative error <= 1e-4.
double studentized_range_cdf(double q, int k, int df);

} // namespace qkb::special
