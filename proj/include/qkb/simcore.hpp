#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace qkb::sim {

using cx = std::complex<double>;

/// Dense statevector of an n-qubit register. Bit ordering is little-endian:
/// qubit 0 is the least-significant bit of the basis index.
class StateVector {
  public:
    static constexpr int kMaxQubits = 16; // memory guard

    /// Constructs |0...0>.
    explicit StateVector(int n_qubits);

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amps_.size(); }

    std::span<const cx> amplitudes() const { return amps_; }
    std::span<cx> amplitudes() { return amps_; }

    cx amp(std::size_t i) const { return amps_[i]; }

    double norm_sq() const;

  private:
    int n_qubits_;
    std::vector<cx> amps_;
};

enum class GateKind { H, RX, RY, RZ, X, CX, PhasePoly };

/// One term of a diagonal phase polynomial: the Z-product over the qubits in
/// `mask`, weighted by `coeff`. The gate multiplies basis state |z> by
/// exp(i * sum_terms coeff * s(z)) where s(z) = prod_{j in mask} (1 - 2 z_j).
struct PhaseTerm {
    std::uint32_t mask = 0;
    double coeff = 0.0;

    friend bool operator<(const PhaseTerm &a, const PhaseTerm &b) {
        return a.mask != b.mask ? a.mask < b.mask : a.coeff < b.coeff;
    }
};

struct Gate {
    GateKind kind;
    int target = -1;
    int control = -1;  // CX only
    double angle = 0.0; // RX/RY/RZ only
    std::vector<PhaseTerm> phase_terms; // PhasePoly only

    static Gate h(int q) { return {GateKind::H, q, -1, 0.0, {}}; }
    static Gate x(int q) { return {GateKind::X, q, -1, 0.0, {}}; }
    static Gate rx(int q, double a) { return {GateKind::RX, q, -1, a, {}}; }
    static Gate ry(int q, double a) { return {GateKind::RY, q, -1, a, {}}; }
    static Gate rz(int q, double a) { return {GateKind::RZ, q, -1, a, {}}; }
    static Gate cx(int control, int target) { return {GateKind::CX, target, control, 0.0, {}}; }
    static Gate phase_poly(std::vector<PhaseTerm> terms) {
        Gate g{GateKind::PhasePoly, -1, -1, 0.0, std::move(terms)};
        return g;
    }

    /// Inverse gate: angles and phase coefficients negated; H/X/CX self-inverse.
    Gate adjoint() const;
};

struct Circuit {
    int n_qubits = 0;
    std::vector<Gate> gates;

    /// Gates reversed, each replaced by its adjoint.
    Circuit adjoint() const;
};

/// Applies one gate in place. Throws ArgumentError on invalid targets.
void apply_gate(StateVector &state, const Gate &gate);

/// Applies the circuit's gates in order. Consecutive PhasePoly gates are fused
/// into one diagonal pass with a canonically sorted term list, which makes
/// diagonal-gate reordering bit-exact.
StateVector run_circuit(const Circuit &circuit, StateVector initial);

/// <a|b>. Throws ArgumentError on size mismatch.
cx inner_product(const StateVector &a, const StateVector &b);

/// Draws `shots` i.i.d. basis indices from |amplitude|^2. Deterministic given
/// the seed; the returned counts sum to `shots`.
std::map<std::uint64_t, std::uint64_t> sample_counts(const StateVector &state, int shots,
                                                     std::uint64_t seed);

} // namespace qkb::sim
