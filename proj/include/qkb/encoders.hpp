#pragma once

#include <span>
#include <string>
#include <vector>

#include "qkb/matrix.hpp"
#include "qkb/simcore.hpp"

namespace qkb::enc {

enum class MapKind { Angle, EntAngle, Amplitude, IQP, AltIQP };

enum class ScalingMode { MinMaxToTwoPi, UnitInterval, None };

/// Pair set for the AltIQP quadratic block.
enum class PairSet { Full, Linear };

std::string map_name(MapKind m);
MapKind map_from_name(const std::string &name);

struct EncodingSpec {
    MapKind map = MapKind::Angle;
    int n_features = 0;
    ScalingMode scaling = ScalingMode::MinMaxToTwoPi;
    PairSet altiqp_pairs = PairSet::Full;

    /// Angle/EntAngle/IQP/AltIQP use one qubit per feature; Amplitude uses
    /// ceil(log2(n_features)) qubits with zero padding.
    int n_qubits() const;

    /// Spec with the default scaling for the map: min-max to [0,2pi] for the
    /// rotation/IQP maps, unit interval for Amplitude.
    static EncodingSpec make(MapKind map, int n_features);
};

/// Per-feature affine scaling fitted on training rows only.
struct ScalerParams {
    std::vector<double> mins;
    std::vector<double> maxs;
    double target_lo = 0.0;
    double target_hi = 1.0;
    ScalingMode mode = ScalingMode::None;

    std::vector<double> apply(std::span<const double> row) const;
};

/// Fits the scaler on `rows` per spec.scaling. Constant columns map to the
/// midpoint of the target interval.
ScalerParams fit_scaler(const Matrix &rows, const EncodingSpec &spec);

/// Scaler that passes rows through unchanged (scaling None).
ScalerParams identity_scaler(int n_features);

/// The encoding circuit for one data row.
sim::Circuit encoding_circuit(std::span<const double> row, const EncodingSpec &spec,
                              const ScalerParams &scaler);

/// encode = run encoding_circuit on |0...0>.
sim::StateVector encode(std::span<const double> row, const EncodingSpec &spec,
                        const ScalerParams &scaler);

/// Adjoint of the encoding circuit; appending it after encode(row) restores
/// |0...0>.
sim::Circuit encoding_adjoint(std::span<const double> row, const EncodingSpec &spec,
                              const ScalerParams &scaler);

} // namespace qkb::enc
