#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qkb/errors.hpp"
#include "qkb/rng.hpp"
#include "qkb/simcore.hpp"

using namespace qkb;
using sim::Circuit;
using sim::cx;
using sim::Gate;
using sim::StateVector;

namespace {

constexpr double kPi = std::numbers::pi;

Circuit random_circuit(int n_qubits, int depth, rng::Engine &eng) {
    Circuit c{n_qubits, {}};
    for (int g = 0; g < depth; ++g) {
        const int kind = static_cast<int>(eng.uniform_below(7));
        const int q = static_cast<int>(eng.uniform_below(n_qubits));
        const double angle = (eng.uniform() - 0.5) * 4.0 * kPi;
        switch (kind) {
        case 0: c.gates.push_back(Gate::h(q)); break;
        case 1: c.gates.push_back(Gate::x(q)); break;
        case 2: c.gates.push_back(Gate::rx(q, angle)); break;
        case 3: c.gates.push_back(Gate::ry(q, angle)); break;
        case 4: c.gates.push_back(Gate::rz(q, angle)); break;
        case 5: {
            if (n_qubits < 2) {
                c.gates.push_back(Gate::h(q));
                break;
            }
            int t = static_cast<int>(eng.uniform_below(n_qubits));
            while (t == q)
                t = static_cast<int>(eng.uniform_below(n_qubits));
            c.gates.push_back(Gate::cx(q, t));
            break;
        }
        default: {
            std::vector<sim::PhaseTerm> terms;
            const int n_terms = 1 + static_cast<int>(eng.uniform_below(3));
            for (int t = 0; t < n_terms; ++t) {
                const auto mask = static_cast<std::uint32_t>(
                    1 + eng.uniform_below((std::uint64_t{1} << n_qubits) - 1));
                terms.push_back({mask, (eng.uniform() - 0.5) * 2.0 * kPi});
            }
            c.gates.push_back(Gate::phase_poly(std::move(terms)));
        }
        }
    }
    return c;
}

StateVector random_state(int n_qubits, rng::Engine &eng) {
    StateVector s(n_qubits);
    auto amps = s.amplitudes();
    double norm = 0.0;
    for (auto &a : amps) {
        a = cx{eng.uniform() - 0.5, eng.uniform() - 0.5};
        norm += std::norm(a);
    }
    norm = std::sqrt(norm);
    for (auto &a : amps)
        a /= norm;
    return s;
}

} // namespace

TEST_CASE("statevector construction and limits") {
    StateVector s(3);
    CHECK(s.dim() == 8);
    CHECK(s.amp(0) == cx{1.0, 0.0});
    CHECK(s.norm_sq() == doctest::Approx(1.0));
    CHECK_THROWS_AS(StateVector(0), ArgumentError);
    CHECK_THROWS_AS(StateVector(17), ArgumentError);
}

TEST_CASE("hadamard on |0> gives the uniform pair") {
    StateVector s(1);
    sim::apply_gate(s, Gate::h(0));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(s.amp(0) - cx{inv_sqrt2, 0}) < 1e-15);
    CHECK(std::abs(s.amp(1) - cx{inv_sqrt2, 0}) < 1e-15);
}

TEST_CASE("RX(2d) with d=pi/2 maps |0> to |1> up to global phase") {
    StateVector s(1);
    sim::apply_gate(s, Gate::rx(0, kPi)); // 2d with d = pi/2
    CHECK(std::abs(s.amp(0)) < 1e-15);
    CHECK(std::abs(s.amp(1)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("single-term phase polynomial flips the |+> sign at c=pi") {
    StateVector s(1);
    sim::apply_gate(s, Gate::h(0));
    sim::apply_gate(s, Gate::phase_poly({{1u, kPi}}));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(s.amp(0) - cx{-inv_sqrt2, 0}) < 1e-12);
    CHECK(std::abs(s.amp(1) - cx{-inv_sqrt2, 0}) < 1e-12);
}

TEST_CASE("little-endian convention: X on qubit 0 of |00> lands on index 1") {
    StateVector s(2);
    sim::apply_gate(s, Gate::x(0));
    CHECK(std::abs(s.amp(1)) == doctest::Approx(1.0));
    CHECK(std::abs(s.amp(2)) < 1e-15);
}

TEST_CASE("gate argument validation") {
    StateVector s(2);
    CHECK_THROWS_AS(sim::apply_gate(s, Gate::h(2)), ArgumentError);
    CHECK_THROWS_AS(sim::apply_gate(s, Gate::h(-1)), ArgumentError);
    CHECK_THROWS_AS(sim::apply_gate(s, Gate::cx(1, 1)), ArgumentError);
    CHECK_THROWS_AS(sim::apply_gate(s, Gate::phase_poly({{8u, 1.0}})), ArgumentError);
}

TEST_CASE("run_circuit basics") {
    SUBCASE("H twice is the identity") {
        Circuit c{1, {Gate::h(0), Gate::h(0)}};
        const StateVector out = sim::run_circuit(c, StateVector(1));
        CHECK(std::abs(out.amp(0) - cx{1, 0}) < 1e-12);
    }
    SUBCASE("empty circuit returns the input") {
        rng::Engine eng(5);
        const StateVector in = random_state(3, eng);
        const StateVector out = sim::run_circuit(Circuit{3, {}}, in);
        for (std::size_t i = 0; i < in.dim(); ++i)
            CHECK(out.amp(i) == in.amp(i));
    }
    SUBCASE("qubit-count mismatch is rejected") {
        CHECK_THROWS_AS(sim::run_circuit(Circuit{2, {}}, StateVector(3)), ArgumentError);
    }
}

TEST_CASE("run_circuit matches the dense matrix oracle") {
    SUBCASE("H tensor H then CX on |00>") {
        Circuit c{2, {Gate::h(0), Gate::h(1), Gate::cx(0, 1)}};
        const StateVector out = sim::run_circuit(c, StateVector(2));
        const auto m = oracle::circuit_matrix(c);
        std::vector<cx> v(4, cx{0, 0});
        v[0] = cx{1, 0};
        const auto expect = oracle::matvec(m, v);
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(std::abs(out.amp(i) - expect[i]) < 1e-12);
    }
    SUBCASE("random circuits on 3 qubits") {
        rng::Engine eng(77);
        for (int rep = 0; rep < 25; ++rep) {
            const Circuit c = random_circuit(3, 12, eng);
            const StateVector in = random_state(3, eng);
            const StateVector out = sim::run_circuit(c, in);
            const auto m = oracle::circuit_matrix(c);
            const std::vector<cx> v(in.amplitudes().begin(), in.amplitudes().end());
            const auto expect = oracle::matvec(m, v);
            for (std::size_t i = 0; i < in.dim(); ++i)
                CHECK(std::abs(out.amp(i) - expect[i]) < 1e-10);
        }
    }
}

TEST_CASE("inner product") {
    rng::Engine eng(11);
    SUBCASE("normalized state has unit self-overlap") {
        const StateVector s = random_state(4, eng);
        CHECK(std::abs(sim::inner_product(s, s) - cx{1, 0}) < 1e-12);
    }
    SUBCASE("|0> and |1> are orthogonal") {
        StateVector zero(1), one(1);
        sim::apply_gate(one, Gate::x(0));
        CHECK(std::abs(sim::inner_product(zero, one)) < 1e-15);
    }
    SUBCASE("conjugate symmetry") {
        for (int rep = 0; rep < 20; ++rep) {
            const StateVector a = random_state(3, eng);
            const StateVector b = random_state(3, eng);
            const cx ab = sim::inner_product(a, b);
            const cx ba = sim::inner_product(b, a);
            CHECK(std::abs(ab - std::conj(ba)) < 1e-12);
        }
    }
    SUBCASE("size mismatch is rejected") {
        CHECK_THROWS_AS(sim::inner_product(StateVector(2), StateVector(3)), ArgumentError);
    }
}

TEST_CASE("sample_counts") {
    SUBCASE("deterministic state yields a single bucket") {
        const auto counts = sim::sample_counts(StateVector(3), 1000, 42);
        REQUIRE(counts.size() == 1);
        CHECK(counts.at(0) == 1000);
    }
    SUBCASE("uniform single qubit stays within the binomial bound") {
        StateVector s(1);
        sim::apply_gate(s, Gate::h(0));
        const auto counts = sim::sample_counts(s, 1000000, 1234);
        const double frac = static_cast<double>(counts.at(0)) / 1e6;
        CHECK(std::abs(frac - 0.5) < 0.002); // ~4 sigma
        std::uint64_t total = 0;
        for (const auto &[k, v] : counts)
            total += v;
        CHECK(total == 1000000);
    }
    SUBCASE("same seed reproduces the counts exactly") {
        StateVector s(2);
        sim::apply_gate(s, Gate::h(0));
        sim::apply_gate(s, Gate::h(1));
        const auto a = sim::sample_counts(s, 500, 99);
        const auto b = sim::sample_counts(s, 500, 99);
        CHECK(a == b);
    }
    SUBCASE("zero shots is rejected") {
        CHECK_THROWS_AS(sim::sample_counts(StateVector(1), 0, 1), ArgumentError);
    }
}

TEST_CASE("norm preservation over 1000 random circuits") {
    rng::Engine eng(2024);
    for (int rep = 0; rep < 1000; ++rep) {
        const int n = 1 + static_cast<int>(eng.uniform_below(10));
        const int depth = 1 + static_cast<int>(eng.uniform_below(50));
        const Circuit c = random_circuit(n, depth, eng);
        const StateVector out = sim::run_circuit(c, StateVector(n));
        CHECK(out.norm_sq() == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("adjoint inversion restores the input") {
    rng::Engine eng(31337);
    for (int rep = 0; rep < 50; ++rep) {
        const int n = 1 + static_cast<int>(eng.uniform_below(6));
        const Circuit c = random_circuit(n, 20, eng);
        const StateVector in = random_state(n, eng);
        const StateVector mid = sim::run_circuit(c, in);
        const StateVector back = sim::run_circuit(c.adjoint(), mid);
        double max_err = 0.0;
        for (std::size_t i = 0; i < in.dim(); ++i)
            max_err = std::max(max_err, std::abs(back.amp(i) - in.amp(i)));
        CHECK(max_err < 1e-9);
    }
}

TEST_CASE("phase polynomial gates commute bit-exactly under run_circuit") {
    rng::Engine eng(7);
    const StateVector in = random_state(4, eng);
    const Gate p1 = Gate::phase_poly({{0b0011u, 0.3}, {0b0100u, -1.1}});
    const Gate p2 = Gate::phase_poly({{0b1010u, 2.2}, {0b0001u, 0.9}});
    const StateVector a = sim::run_circuit(Circuit{4, {p1, p2}}, in);
    const StateVector b = sim::run_circuit(Circuit{4, {p2, p1}}, in);
    for (std::size_t i = 0; i < in.dim(); ++i) {
        CHECK(a.amp(i).real() == b.amp(i).real());
        CHECK(a.amp(i).imag() == b.amp(i).imag());
    }
}
