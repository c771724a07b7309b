#include "qkb/simcore.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "qkb/errors.hpp"
#include "qkb/rng.hpp"

namespace qkb::sim {

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1)
        throw ArgumentError("StateVector: n_qubits must be >= 1, got " + std::to_string(n_qubits));
    if (n_qubits > kMaxQubits)
        throw ArgumentError("StateVector: n_qubits " + std::to_string(n_qubits) +
                            " exceeds the cap of " + std::to_string(kMaxQubits));
    amps_.assign(std::size_t{1} << n_qubits, cx{0.0, 0.0});
    amps_[0] = cx{1.0, 0.0};
}

double StateVector::norm_sq() const {
    double s = 0.0;
    for (const cx &a : amps_)
        s += std::norm(a);
    return s;
}

Gate Gate::adjoint() const {
    Gate g = *this;
    switch (kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
        g.angle = -angle;
        break;
    case GateKind::PhasePoly:
        for (PhaseTerm &t : g.phase_terms)
            t.coeff = -t.coeff;
        break;
    case GateKind::H:
    case GateKind::X:
    case GateKind::CX:
        break; // self-inverse
    }
    return g;
}

Circuit Circuit::adjoint() const {
    Circuit c{n_qubits, {}};
    c.gates.reserve(gates.size());
    for (auto it = gates.rbegin(); it != gates.rend(); ++it)
        c.gates.push_back(it->adjoint());
    return c;
}

namespace {

void check_target(const StateVector &state, int q, const char *what) {
    if (q < 0 || q >= state.n_qubits())
        throw ArgumentError(std::string(what) + ": qubit index " + std::to_string(q) +
                            " out of range for " + std::to_string(state.n_qubits()) + " qubits");
}

// u = [[u00, u01], [u10, u11]] applied to the target qubit.
void apply_1q(StateVector &state, int target, cx u00, cx u01, cx u10, cx u11) {
    auto amps = state.amplitudes();
    const std::size_t mask = std::size_t{1} << target;
    const std::size_t lo_mask = mask - 1;
    const std::size_t hi_mask = ~lo_mask;
    const std::size_t half = state.dim() >> 1;
    for (std::size_t i = 0; i < half; ++i) {
        const std::size_t i0 = ((i & hi_mask) << 1) | (i & lo_mask);
        const std::size_t i1 = i0 | mask;
        const cx a0 = amps[i0];
        const cx a1 = amps[i1];
        amps[i0] = u00 * a0 + u01 * a1;
        amps[i1] = u10 * a0 + u11 * a1;
    }
}

void apply_phase_poly(StateVector &state, std::span<const PhaseTerm> terms) {
    const std::size_t dim = state.dim();
    const std::uint32_t valid = dim >= (std::size_t{1} << 32)
                                    ? 0xffffffffu
                                    : static_cast<std::uint32_t>(dim - 1);
    for (const PhaseTerm &t : terms)
        if (t.mask & ~valid)
            throw ArgumentError("PhasePoly: term mask references qubits outside the register");
    auto amps = state.amplitudes();
    for (std::size_t z = 0; z < dim; ++z) {
        double phi = 0.0;
        for (const PhaseTerm &t : terms) {
            const int parity = std::popcount(static_cast<std::uint32_t>(z) & t.mask) & 1;
            phi += parity ? -t.coeff : t.coeff;
        }
        amps[z] *= cx{std::cos(phi), std::sin(phi)};
    }
}

} // namespace

void apply_gate(StateVector &state, const Gate &gate) {
    switch (gate.kind) {
    case GateKind::H: {
        check_target(state, gate.target, "H");
        const double s = 1.0 / std::sqrt(2.0);
        apply_1q(state, gate.target, {s, 0}, {s, 0}, {s, 0}, {-s, 0});
        break;
    }
    case GateKind::X:
        check_target(state, gate.target, "X");
        apply_1q(state, gate.target, {0, 0}, {1, 0}, {1, 0}, {0, 0});
        break;
    case GateKind::RX: {
        check_target(state, gate.target, "RX");
        const double c = std::cos(gate.angle / 2), s = std::sin(gate.angle / 2);
        apply_1q(state, gate.target, {c, 0}, {0, -s}, {0, -s}, {c, 0});
        break;
    }
    case GateKind::RY: {
        check_target(state, gate.target, "RY");
        const double c = std::cos(gate.angle / 2), s = std::sin(gate.angle / 2);
        apply_1q(state, gate.target, {c, 0}, {-s, 0}, {s, 0}, {c, 0});
        break;
    }
    case GateKind::RZ: {
        check_target(state, gate.target, "RZ");
        const double c = std::cos(gate.angle / 2), s = std::sin(gate.angle / 2);
        apply_1q(state, gate.target, {c, -s}, {0, 0}, {0, 0}, {c, s});
        break;
    }
    case GateKind::CX: {
        check_target(state, gate.target, "CX target");
        check_target(state, gate.control, "CX control");
        if (gate.target == gate.control)
            throw ArgumentError("CX: control and target must be distinct");
        auto amps = state.amplitudes();
        const std::size_t cmask = std::size_t{1} << gate.control;
        const std::size_t tmask = std::size_t{1} << gate.target;
        for (std::size_t z = 0; z < state.dim(); ++z)
            if ((z & cmask) && !(z & tmask))
                std::swap(amps[z], amps[z | tmask]);
        break;
    }
    case GateKind::PhasePoly:
        apply_phase_poly(state, gate.phase_terms);
        break;
    }
}

StateVector run_circuit(const Circuit &circuit, StateVector initial) {
    if (circuit.n_qubits != initial.n_qubits())
        throw ArgumentError("run_circuit: circuit is for " + std::to_string(circuit.n_qubits) +
                            " qubits but state has " + std::to_string(initial.n_qubits()));
    std::size_t i = 0;
    const std::size_t n = circuit.gates.size();
    while (i < n) {
        const Gate &g = circuit.gates[i];
        if (g.kind != GateKind::PhasePoly) {
            apply_gate(initial, g);
            ++i;
            continue;
        }
        // Fuse the run of consecutive diagonal gates; the canonical term order
        // makes the result independent of how the run was split or ordered.
        std::size_t j = i;
        while (j < n && circuit.gates[j].kind == GateKind::PhasePoly)
            ++j;
        if (j == i + 1) {
            apply_gate(initial, g);
        } else {
            std::vector<PhaseTerm> merged;
            for (std::size_t k = i; k < j; ++k)
                merged.insert(merged.end(), circuit.gates[k].phase_terms.begin(),
                              circuit.gates[k].phase_terms.end());
            std::sort(merged.begin(), merged.end());
            apply_phase_poly(initial, merged);
        }
        i = j;
    }
    return initial;
}

cx inner_product(const StateVector &a, const StateVector &b) {
    if (a.n_qubits() != b.n_qubits())
        throw ArgumentError("inner_product: qubit counts differ");
    cx s{0.0, 0.0};
    auto av = a.amplitudes();
    auto bv = b.amplitudes();
    for (std::size_t i = 0; i < av.size(); ++i)
        s += std::conj(av[i]) * bv[i];
    return s;
}

std::map<std::uint64_t, std::uint64_t> sample_counts(const StateVector &state, int shots,
                                                     std::uint64_t seed) {
    if (shots < 1)
        throw ArgumentError("sample_counts: shots must be >= 1");
    std::vector<double> cdf(state.dim());
    double acc = 0.0;
    auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        acc += std::norm(amps[i]);
        cdf[i] = acc;
    }
    // acc ~ 1 up to rounding; scaling u by acc keeps the last bucket reachable.
    rng::Engine eng(seed);
    std::map<std::uint64_t, std::uint64_t> counts;
    for (int s = 0; s < shots; ++s) {
        const double u = eng.uniform() * acc;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
        if (idx >= cdf.size())
            idx = cdf.size() - 1;
        ++counts[idx];
    }
    return counts;
}

} // namespace qkb::sim
