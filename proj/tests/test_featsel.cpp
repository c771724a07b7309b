#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qkb/errors.hpp"
#include "qkb/featsel.hpp"
#include "qkb/rng.hpp"

using namespace qkb;
using featsel::AnnealSettings;
using featsel::FeatSelSettings;
using featsel::QuboInstance;
using featsel::SelectionResult;
using featsel::SolverKind;

namespace {

QuboInstance random_instance(int n, rng::Engine &eng, double alpha) {
    QuboInstance q;
    q.n_vars = n;
    q.alpha = alpha;
    q.linear.resize(n);
    q.quadratic = Matrix(n, n, 0.0);
    for (int i = 0; i < n; ++i) {
        q.linear[i] = eng.uniform();
        for (int j = i + 1; j < n; ++j) {
            const double v = eng.uniform();
            q.quadratic.at(i, j) = v;
            q.quadratic.at(j, i) = v;
        }
    }
    return q;
}

// duplicated-feature fixture: feature 2 copies feature 0, both track the
// target; feature 1 is weakly correlated and independent of the others
struct DupFixture {
    Matrix features;
    std::vector<int> target;
};

DupFixture duplicated_feature_fixture() {
    rng::Engine eng(314);
    const std::size_t n = 400;
    DupFixture f;
    f.features = Matrix(n, 3);
    f.target.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
        const int t = eng.uniform() < 0.5 ? 0 : 1;
        f.target[r] = t;
        const double signal = t + 0.25 * (eng.uniform() - 0.5);
        f.features.at(r, 0) = signal;
        f.features.at(r, 1) = 0.15 * t + (eng.uniform() - 0.5);
        f.features.at(r, 2) = signal; // exact duplicate of feature 0
    }
    return f;
}

} // namespace

TEST_CASE("energy matches the naive double loop") {
    rng::Engine eng(101);
    for (int rep = 0; rep < 40; ++rep) {
        const int n = 2 + static_cast<int>(eng.uniform_below(10));
        const QuboInstance q = random_instance(n, eng, eng.uniform());
        std::vector<int> x(n);
        for (auto &b : x)
            b = eng.uniform() < 0.5 ? 0 : 1;
        CHECK(std::abs(q.energy(x) - oracle::qubo_energy_naive(q, x)) < 1e-12);
    }
}

TEST_CASE("build_qubo correlation structure") {
    const DupFixture f = duplicated_feature_fixture();
    const QuboInstance q = featsel::build_qubo(f.features, f.target, 0.5);
    SUBCASE("feature identical to the signal is strongly correlated") {
        CHECK(q.linear[0] > 0.9);
        CHECK(q.linear[2] > 0.9);
    }
    SUBCASE("duplicated features have unit redundancy") {
        CHECK(q.quadratic.at(0, 2) == doctest::Approx(1.0));
    }
    SUBCASE("weak feature sits well below the strong ones") {
        CHECK(q.linear[1] < 0.5);
        CHECK(q.linear[1] > 0.0);
    }
    SUBCASE("diagonal is zero and matrix symmetric") {
        for (int i = 0; i < q.n_vars; ++i) {
            CHECK(q.quadratic.at(i, i) == 0.0);
            for (int j = 0; j < q.n_vars; ++j)
                CHECK(q.quadratic.at(i, j) == q.quadratic.at(j, i));
        }
    }
}

TEST_CASE("build_qubo handles edge cases") {
    SUBCASE("constant feature gets zero correlation") {
        Matrix m(4, 2);
        std::vector<int> t{0, 1, 0, 1};
        for (std::size_t r = 0; r < 4; ++r) {
            m.at(r, 0) = 7.0; // constant
            m.at(r, 1) = static_cast<double>(t[r]);
        }
        const QuboInstance q = featsel::build_qubo(m, t, 0.5);
        CHECK(q.linear[0] == 0.0);
        CHECK(q.linear[1] == doctest::Approx(1.0));
    }
    SUBCASE("fewer than 2 rows is rejected") {
        Matrix m(1, 2);
        CHECK_THROWS_AS(featsel::build_qubo(m, {1}, 0.5), ArgumentError);
    }
    SUBCASE("alpha outside [0,1] is rejected") {
        Matrix m(3, 1);
        CHECK_THROWS_AS(featsel::build_qubo(m, {0, 1, 0}, 1.5), ArgumentError);
    }
    SUBCASE("non-binary target is rejected") {
        Matrix m(3, 1);
        CHECK_THROWS_AS(featsel::build_qubo(m, {0, 2, 1}, 0.5), ArgumentError);
    }
}

TEST_CASE("exhaustive solver extremes") {
    rng::Engine eng(207);
    SUBCASE("alpha = 1 selects every positively scored feature") {
        QuboInstance q = random_instance(8, eng, 1.0);
        const SelectionResult r = featsel::solve_exhaustive(q);
        std::vector<int> expect;
        for (int i = 0; i < 8; ++i)
            if (q.linear[i] > 0.0)
                expect.push_back(i);
        CHECK(r.chosen == expect);
    }
    SUBCASE("alpha = 0 with positive couplings selects nothing") {
        QuboInstance q = random_instance(8, eng, 0.0);
        const SelectionResult r = featsel::solve_exhaustive(q);
        CHECK(r.chosen.empty());
        CHECK(r.energy == 0.0);
    }
    SUBCASE("n_vars above the enumeration cap is refused") {
        QuboInstance q = random_instance(21, eng, 0.5);
        CHECK_THROWS_AS(featsel::solve_exhaustive(q), ArgumentError);
    }
}

TEST_CASE("duplicated features never chosen together at mid alpha") {
    // 3 features: 0 and 2 duplicate each other, both rewarding; 1 weak
    QuboInstance q;
    q.n_vars = 3;
    q.alpha = 0.5;
    q.linear = {0.9, 0.3, 0.9};
    q.quadratic = Matrix(3, 3, 0.0);
    q.quadratic.at(0, 2) = q.quadratic.at(2, 0) = 1.0;
    q.quadratic.at(0, 1) = q.quadratic.at(1, 0) = 0.05;
    q.quadratic.at(1, 2) = q.quadratic.at(2, 1) = 0.05;

    // enumerate all 8 assignments through the public energy as a cross-check
    double best_e = 1e300;
    std::vector<int> best;
    for (int bits = 0; bits < 8; ++bits) {
        std::vector<int> x{bits & 1, (bits >> 1) & 1, (bits >> 2) & 1};
        const double e = q.energy(x);
        if (e < best_e) {
            best_e = e;
            best = x;
        }
    }
    CHECK(!(best[0] == 1 && best[2] == 1));

    const SelectionResult r = featsel::solve_exhaustive(q);
    CHECK(r.energy == doctest::Approx(best_e));
    CHECK(!(std::count(r.chosen.begin(), r.chosen.end(), 0) &&
            std::count(r.chosen.begin(), r.chosen.end(), 2)));
}

TEST_CASE("annealing matches the exhaustive optimum on random instances") {
    rng::Engine eng(209);
    int matches = 0;
    const int n_instances = 100;
    for (int rep = 0; rep < n_instances; ++rep) {
        const QuboInstance q = random_instance(12, eng, 0.3 + 0.4 * eng.uniform());
        const SelectionResult ex = featsel::solve_exhaustive(q);
        const SelectionResult an =
            featsel::solve_annealing(q, AnnealSettings{2000, 10, 1000 + rep});
        if (std::abs(ex.energy - an.energy) < 1e-9)
            ++matches;
    }
    CHECK(matches >= 95);
}

TEST_CASE("annealing basics") {
    rng::Engine eng(210);
    SUBCASE("zero couplings pick exactly the positive-linear variables") {
        QuboInstance q = random_instance(10, eng, 0.7);
        q.quadratic = Matrix(10, 10, 0.0);
        q.linear[3] = 0.0;
        const SelectionResult r = featsel::solve_annealing(q, AnnealSettings{500, 4, 7});
        std::vector<int> expect;
        for (int i = 0; i < 10; ++i)
            if (q.linear[i] > 0.0)
                expect.push_back(i);
        CHECK(r.chosen == expect);
    }
    SUBCASE("same seed gives identical results") {
        const QuboInstance q = random_instance(10, eng, 0.5);
        const SelectionResult a = featsel::solve_annealing(q, AnnealSettings{300, 5, 99});
        const SelectionResult b = featsel::solve_annealing(q, AnnealSettings{300, 5, 99});
        CHECK(a.chosen == b.chosen);
        CHECK(a.energy == b.energy);
    }
    SUBCASE("parallel restarts match the serial reference") {
        const QuboInstance q = random_instance(14, eng, 0.5);
        const SelectionResult a = featsel::solve_annealing(q, AnnealSettings{400, 8, 5});
        const SelectionResult b = featsel::serial::solve_annealing(q, AnnealSettings{400, 8, 5});
        CHECK(a.chosen == b.chosen);
        CHECK(a.energy == b.energy);
    }
    SUBCASE("result beats the trivial assignments") {
        for (int rep = 0; rep < 10; ++rep) {
            const QuboInstance q = random_instance(10, eng, eng.uniform());
            const SelectionResult r = featsel::solve_annealing(q, AnnealSettings{500, 5, rep});
            const std::vector<int> zeros(10, 0), ones(10, 1);
            CHECK(r.energy <= q.energy(zeros) + 1e-12);
            CHECK(r.energy <= q.energy(ones) + 1e-12);
        }
    }
}

TEST_CASE("selected count is nondecreasing in alpha under the exhaustive solver") {
    rng::Engine eng(212);
    int violations = 0;
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 6 + static_cast<int>(eng.uniform_below(6));
        QuboInstance q = random_instance(n, eng, 0.0);
        std::size_t prev = 0;
        for (const double alpha : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            q.alpha = alpha;
            const std::size_t count = featsel::solve_exhaustive(q).chosen.size();
            if (count < prev)
                ++violations; // logged, not asserted per spec under heuristics
            prev = count;
        }
    }
    CHECK(violations == 0); // exact solver: monotone in practice on these instances
}

TEST_CASE("select_k_features") {
    const DupFixture f = duplicated_feature_fixture();
    FeatSelSettings settings;
    settings.solver = SolverKind::Exhaustive;
    SUBCASE("k = n selects everything when all correlations are positive") {
        const SelectionResult r = featsel::select_k_features(f.features, f.target, 3, settings);
        CHECK(r.chosen == std::vector<int>{0, 1, 2});
    }
    SUBCASE("k = 1 picks the single best-correlated feature") {
        const SelectionResult r = featsel::select_k_features(f.features, f.target, 1, settings);
        REQUIRE(r.chosen.size() == 1);
        // features 0 and 2 tie up to sampling noise; the winner must be one of them
        CHECK((r.chosen[0] == 0 || r.chosen[0] == 2));
    }
    SUBCASE("k = 2 avoids the duplicate pair") {
        const SelectionResult r = featsel::select_k_features(f.features, f.target, 2, settings);
        REQUIRE(r.chosen.size() == 2);
        CHECK(!(std::count(r.chosen.begin(), r.chosen.end(), 0) &&
                std::count(r.chosen.begin(), r.chosen.end(), 2)));
        CHECK(std::count(r.chosen.begin(), r.chosen.end(), 1) == 1);
    }
    SUBCASE("annealing solver agrees on the duplicate fixture") {
        FeatSelSettings anneal;
        anneal.solver = SolverKind::Annealing;
        anneal.anneal = AnnealSettings{1000, 8, 42};
        const SelectionResult r = featsel::select_k_features(f.features, f.target, 2, anneal);
        REQUIRE(r.chosen.size() == 2);
        CHECK(!(std::count(r.chosen.begin(), r.chosen.end(), 0) &&
                std::count(r.chosen.begin(), r.chosen.end(), 2)));
    }
    SUBCASE("k out of range is rejected") {
        CHECK_THROWS_AS(featsel::select_k_features(f.features, f.target, 0, settings),
                        ArgumentError);
        CHECK_THROWS_AS(featsel::select_k_features(f.features, f.target, 4, settings),
                        ArgumentError);
    }
}
