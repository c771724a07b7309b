#include "qkb/encoders.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qkb/errors.hpp"

namespace qkb::enc {

using sim::Circuit;
using sim::Gate;
using sim::PhaseTerm;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

std::string map_name(MapKind m) {
    switch (m) {
    case MapKind::Angle: return "angle";
    case MapKind::EntAngle: return "entangle";
    case MapKind::Amplitude: return "amplitude";
    case MapKind::IQP: return "iqp";
    case MapKind::AltIQP: return "altiqp";
    }
    return "?";
}

MapKind map_from_name(const std::string &name) {
    if (name == "angle") return MapKind::Angle;
    if (name == "entangle") return MapKind::EntAngle;
    if (name == "amplitude") return MapKind::Amplitude;
    if (name == "iqp") return MapKind::IQP;
    if (name == "altiqp") return MapKind::AltIQP;
    throw ArgumentError("unknown feature map '" + name +
                        "' (expected angle|entangle|amplitude|iqp|altiqp)");
}

int EncodingSpec::n_qubits() const {
    if (n_features < 1)
        throw ArgumentError("EncodingSpec: n_features must be >= 1");
    if (map != MapKind::Amplitude)
        return n_features;
    int q = 0;
    while ((1 << q) < n_features)
        ++q;
    return std::max(q, 1);
}

EncodingSpec EncodingSpec::make(MapKind map, int n_features) {
    EncodingSpec s;
    s.map = map;
    s.n_features = n_features;
    s.scaling = map == MapKind::Amplitude ? ScalingMode::UnitInterval : ScalingMode::MinMaxToTwoPi;
    return s;
}

std::vector<double> ScalerParams::apply(std::span<const double> row) const {
    if (row.size() != mins.size())
        throw ArgumentError("scaler: row has " + std::to_string(row.size()) +
                            " features, scaler was fitted for " + std::to_string(mins.size()));
    std::vector<double> out(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) {
        if (mode == ScalingMode::None) {
            out[j] = row[j];
        } else if (maxs[j] <= mins[j]) {
            out[j] = 0.5 * (target_lo + target_hi); // constant column -> midpoint
        } else {
            double t = (row[j] - mins[j]) / (maxs[j] - mins[j]);
            if (mode == ScalingMode::UnitInterval)
                t = std::clamp(t, 0.0, 1.0); // amplitude tree needs nonnegative values
            out[j] = target_lo + t * (target_hi - target_lo);
        }
    }
    return out;
}

ScalerParams fit_scaler(const Matrix &rows, const EncodingSpec &spec) {
    if (rows.rows < 2)
        throw ArgumentError("fit_scaler: need at least 2 rows");
    if (rows.cols != static_cast<std::size_t>(spec.n_features))
        throw ArgumentError("fit_scaler: column count " + std::to_string(rows.cols) +
                            " != spec.n_features " + std::to_string(spec.n_features));
    ScalerParams p;
    p.mode = spec.scaling;
    p.target_lo = 0.0;
    p.target_hi = spec.scaling == ScalingMode::MinMaxToTwoPi ? kTwoPi : 1.0;
    p.mins.assign(rows.cols, 0.0);
    p.maxs.assign(rows.cols, 0.0);
    for (std::size_t c = 0; c < rows.cols; ++c) {
        double lo = rows.at(0, c), hi = rows.at(0, c);
        for (std::size_t r = 1; r < rows.rows; ++r) {
            lo = std::min(lo, rows.at(r, c));
            hi = std::max(hi, rows.at(r, c));
        }
        p.mins[c] = lo;
        p.maxs[c] = hi;
    }
    return p;
}

ScalerParams identity_scaler(int n_features) {
    ScalerParams p;
    p.mode = ScalingMode::None;
    p.mins.assign(n_features, 0.0);
    p.maxs.assign(n_features, 1.0);
    return p;
}

namespace {

void append_angle(Circuit &c, std::span<const double> d) {
    for (std::size_t l = 0; l < d.size(); ++l)
        c.gates.push_back(Gate::rx(static_cast<int>(l), 2.0 * d[l])); // exp(-i X d) = RX(2d)
}

void append_entangle(Circuit &c, std::span<const double> d) {
    const int n = static_cast<int>(d.size());
    for (int l = 0; l < n; ++l)
        c.gates.push_back(Gate::h(l));
    for (int l = 0; l < n; ++l)
        c.gates.push_back(Gate::ry(l, d[l]));
    if (n == 2) {
        c.gates.push_back(Gate::cx(0, 1));
    } else if (n > 2) {
        for (int l = 0; l + 1 < n; ++l)
            c.gates.push_back(Gate::cx(l, l + 1));
        c.gates.push_back(Gate::cx(n - 1, 0)); // ring closure
    }
}

// Uniformly controlled RY on `target`, controls listed most-significant first.
// angles[j] applies when the controls read pattern j. Recursion:
//   UC(a) on {c, rest} = UC((a0+a1)/2) CX(c,t) UC((a0-a1)/2) CX(c,t)
// using X RY(b) X = RY(-b) on the target.
void append_ucry(Circuit &c, int target, std::span<const int> controls,
                 std::vector<double> angles) {
    if (controls.empty()) {
        c.gates.push_back(Gate::ry(target, angles[0]));
        return;
    }
    const int top = controls[0];
    const std::size_t half = angles.size() / 2;
    std::vector<double> sum(half), diff(half);
    for (std::size_t i = 0; i < half; ++i) {
        sum[i] = 0.5 * (angles[i] + angles[half + i]);
        diff[i] = 0.5 * (angles[i] - angles[half + i]);
    }
    append_ucry(c, target, controls.subspan(1), std::move(sum));
    c.gates.push_back(Gate::cx(top, target));
    append_ucry(c, target, controls.subspan(1), std::move(diff));
    c.gates.push_back(Gate::cx(top, target));
}

// Binary-tree state preparation for a nonnegative unit vector: level t splits
// probability mass on qubit n-1-t with node angle 2*acos(sqrt(w_left/w_parent)).
void append_amplitude(Circuit &c, std::span<const double> scaled, int n_qubits) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    std::vector<double> w(dim, 0.0); // squared amplitudes, zero-padded
    double norm_sq = 0.0;
    for (std::size_t k = 0; k < scaled.size(); ++k) {
        if (scaled[k] < 0.0)
            throw EncodingError("amplitude encoding: negative value at feature " +
                                std::to_string(k) + " (use UnitInterval scaling)");
        w[k] = scaled[k] * scaled[k];
        norm_sq += w[k];
    }
    if (norm_sq <= 0.0)
        throw EncodingError("amplitude encoding: zero vector has no direction");
    for (double &v : w)
        v /= norm_sq;

    // masses[t][j]: mass of the block whose top t index bits equal j
    std::vector<std::vector<double>> masses(n_qubits + 1);
    masses[n_qubits] = w;
    for (int t = n_qubits - 1; t >= 0; --t) {
        masses[t].assign(std::size_t{1} << t, 0.0);
        for (std::size_t j = 0; j < masses[t].size(); ++j)
            masses[t][j] = masses[t + 1][2 * j] + masses[t + 1][2 * j + 1];
    }
    for (int t = 0; t < n_qubits; ++t) {
        std::vector<double> angles(std::size_t{1} << t, 0.0);
        for (std::size_t j = 0; j < angles.size(); ++j) {
            const double parent = masses[t][j];
            if (parent > 0.0) {
                double ratio = masses[t + 1][2 * j] / parent;
                ratio = std::clamp(ratio, 0.0, 1.0);
                angles[j] = 2.0 * std::acos(std::sqrt(ratio));
            }
        }
        std::vector<int> controls(t);
        for (int k = 0; k < t; ++k)
            controls[k] = n_qubits - 1 - k; // most significant first
        append_ucry(c, n_qubits - 1 - t, controls, std::move(angles));
    }
}

// One diagonal block of the IQP family. IQP: linear coeff d_l, quadratic
// (pi-d_l)(pi-d_j) over l<j. AltIQP: both doubled, pair set configurable.
Gate iqp_block(std::span<const double> d, bool alt, PairSet pairs) {
    const int n = static_cast<int>(d.size());
    const double scale = alt ? 2.0 : 1.0;
    std::vector<PhaseTerm> terms;
    for (int l = 0; l < n; ++l)
        terms.push_back({std::uint32_t{1} << l, scale * d[l]});
    auto add_pair = [&](int l, int j) {
        const double coeff =
            scale * (std::numbers::pi - d[l]) * (std::numbers::pi - d[j]);
        terms.push_back({(std::uint32_t{1} << l) | (std::uint32_t{1} << j), coeff});
    };
    if (!alt || pairs == PairSet::Full) {
        for (int l = 0; l < n; ++l)
            for (int j = l + 1; j < n; ++j)
                add_pair(l, j);
    } else {
        for (int l = 0; l + 1 < n; ++l)
            add_pair(l, l + 1);
    }
    return Gate::phase_poly(std::move(terms));
}

void append_iqp(Circuit &c, std::span<const double> d, bool alt, PairSet pairs) {
    const int n = static_cast<int>(d.size());
    for (int rep = 0; rep < 2; ++rep) {
        for (int l = 0; l < n; ++l)
            c.gates.push_back(Gate::h(l));
        c.gates.push_back(iqp_block(d, alt, pairs));
    }
}

} // namespace

Circuit encoding_circuit(std::span<const double> row, const EncodingSpec &spec,
                         const ScalerParams &scaler) {
    if (row.size() != static_cast<std::size_t>(spec.n_features))
        throw ArgumentError("encode: row has " + std::to_string(row.size()) +
                            " features, spec expects " + std::to_string(spec.n_features));
    const std::vector<double> d = scaler.apply(row);
    Circuit c{spec.n_qubits(), {}};
    switch (spec.map) {
    case MapKind::Angle:
        append_angle(c, d);
        break;
    case MapKind::EntAngle:
        append_entangle(c, d);
        break;
    case MapKind::Amplitude:
        append_amplitude(c, d, c.n_qubits);
        break;
    case MapKind::IQP:
        append_iqp(c, d, false, spec.altiqp_pairs);
        break;
    case MapKind::AltIQP:
        append_iqp(c, d, true, spec.altiqp_pairs);
        break;
    }
    return c;
}

sim::StateVector encode(std::span<const double> row, const EncodingSpec &spec,
                        const ScalerParams &scaler) {
    const Circuit c = encoding_circuit(row, spec, scaler);
    return sim::run_circuit(c, sim::StateVector(c.n_qubits));
}

Circuit encoding_adjoint(std::span<const double> row, const EncodingSpec &spec,
                         const ScalerParams &scaler) {
    return encoding_circuit(row, spec, scaler).adjoint();
}

} // namespace qkb::enc
