#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qkb/errors.hpp"
#include "qkb/rng.hpp"
#include "qkb/special.hpp"

using namespace qkb;

TEST_CASE("log gamma agrees with known values") {
    CHECK(special::log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(special::log_gamma(2.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(special::log_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-12));
    CHECK(special::log_gamma(0.5) ==
          doctest::Approx(0.5 * std::log(std::numbers::pi)).epsilon(1e-12));
    // cross-check against the library implementation over a wide range
    for (double x : {0.1, 0.9, 1.5, 3.7, 12.0, 88.5, 500.0, 16384.0})
        CHECK(special::log_gamma(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-12));
    CHECK_THROWS_AS(special::log_gamma(0.0), ArgumentError);
}

TEST_CASE("regularized incomplete beta closed forms") {
    // I_x(1, b) = 1 - (1-x)^b
    for (double x : {0.05, 0.3, 0.75}) {
        CHECK(special::reg_inc_beta(1.0, 4.0, x) ==
              doctest::Approx(1.0 - std::pow(1.0 - x, 4.0)).epsilon(1e-12));
        // I_x(1/2, 1/2) = (2/pi) asin(sqrt(x))
        CHECK(special::reg_inc_beta(0.5, 0.5, x) ==
              doctest::Approx(2.0 / std::numbers::pi * std::asin(std::sqrt(x))).epsilon(1e-12));
    }
    CHECK(special::reg_inc_beta(3.0, 5.0, 0.0) == 0.0);
    CHECK(special::reg_inc_beta(3.0, 5.0, 1.0) == 1.0);
}

TEST_CASE("incomplete beta symmetry identity") {
    rng::Engine eng(404);
    for (int rep = 0; rep < 200; ++rep) {
        const double a = 0.2 + 30.0 * eng.uniform();
        const double b = 0.2 + 30.0 * eng.uniform();
        const double x = eng.uniform();
        const double lhs = special::reg_inc_beta(a, b, x) + special::reg_inc_beta(b, a, 1.0 - x);
        CHECK(lhs == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("F survival function against a trapezoid integral of the density") {
    // density of F(d1,d2) integrated numerically as the oracle
    const int d1 = 3, d2 = 14;
    auto pdf = [&](double x) {
        const double a = 0.5 * d1, b = 0.5 * d2;
        const double ln = a * std::log(static_cast<double>(d1) / d2) +
                          (a - 1.0) * std::log(x) -
                          (a + b) * std::log1p(static_cast<double>(d1) / d2 * x) +
                          special::log_gamma(a + b) - special::log_gamma(a) -
                          special::log_gamma(b);
        return std::exp(ln);
    };
    for (double f : {0.5, 1.0, 2.5}) {
        double cdf = 0.0;
        const int n = 200000;
        for (int i = 0; i < n; ++i) {
            const double x0 = f * i / n, x1 = f * (i + 1) / n;
            cdf += 0.5 * (pdf(std::max(x0, 1e-12)) + pdf(x1)) * (x1 - x0);
        }
        CHECK(special::f_survival(f, d1, d2) == doctest::Approx(1.0 - cdf).epsilon(1e-5));
    }
}

TEST_CASE("gauss-legendre integrates polynomials exactly") {
    const auto &q = special::gauss_legendre(8);
    double integral = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double x = q.nodes[i];
        integral += q.weights[i] * (5.0 * x * x * x * x - x * x + 2.0);
    }
    // int_{-1}^{1} 5x^4 - x^2 + 2 = 2 - 2/3 + 4
    CHECK(integral == doctest::Approx(2.0 - 2.0 / 3.0 + 4.0).epsilon(1e-13));
}

TEST_CASE("normal range CDF matches the closed form at k=2") {
    // range of two normals is |N(0,2)|: P(range <= r) = 2 Phi(r/sqrt(2)) - 1
    for (double r : {0.3, 1.0, 2.4, 4.0}) {
        const double expect = 2.0 * special::normal_cdf(r / std::numbers::sqrt2) - 1.0;
        CHECK(special::normal_range_cdf(r, 2) == doctest::Approx(expect).epsilon(1e-8));
    }
}

TEST_CASE("studentized range CDF against the Monte Carlo oracle") {
    const std::vector<double> qs{1.0, 2.0, 3.0, 4.0, 5.0};
    const auto mc = oracle::mc_studentized_range_cdf(qs, 3, 10, 1000000, 777);
    for (std::size_t t = 0; t < qs.size(); ++t)
        CHECK(std::abs(special::studentized_range_cdf(qs[t], 3, 10) - mc[t]) < 0.005);
}

TEST_CASE("studentized range CDF edge behaviour") {
    CHECK(special::studentized_range_cdf(0.0, 3, 10) == 0.0);
    CHECK(special::studentized_range_cdf(-1.0, 4, 20) == 0.0);
    CHECK(special::studentized_range_cdf(50.0, 3, 10) == doctest::Approx(1.0).epsilon(1e-6));
    // classic table value: q_{0.95}(k=3, df=10) ~ 3.877
    CHECK(special::studentized_range_cdf(3.877, 3, 10) == doctest::Approx(0.95).epsilon(2e-3));
}
