// Linear-optical elements acting on hybrid states.

#pragma once

#include <optional>
#include <random>
#include <string>

#include "hesim/logical.hpp"
#include "hesim/state.hpp"

namespace hesim {

/// ideal: label-based detection as written in the protocol; exact: true
/// vacuum projector and parity-resolved photon counting.
enum class FidelityMode { ideal, exact };

enum class MeasurementKind { vacuum_postselect, photon_parity };
enum class MeasurementOutcome { accepted, rejected, even, odd };

std::string to_string(FidelityMode m);
std::string to_string(MeasurementKind k);
std::string to_string(MeasurementOutcome o);

struct MeasurementRecord {
  std::string mode;
  MeasurementKind kind;
  MeasurementOutcome outcome;
  /// Probability of the recorded outcome given the input state.
  double branch_probability;
  /// Probability of the other outcome, evaluated from its own branch state.
  double complement_probability;
};

struct MeasuredState {
  /// Unnormalized: its squared norm is branch_probability times the input's.
  HybridState state;
  MeasurementRecord record;
};

using Rng = std::mt19937_64;

/// Uniform draw in [0, 1) from the top 53 bits, identical on every platform.
double uniform01(Rng& rng);

/// 50:50 beamsplitter: labels (x, y) on (m1, m2) become ((x+y)/sqrt2, (x-y)/sqrt2).
HybridState apply_beamsplitter(const HybridState& s, const std::string& m1, const std::string& m2);

/// Beamsplitter whose second input is a fresh vacuum port. `mode` keeps the
/// + output and `spawned` (a new mode) receives the - output.
HybridState split_with_vacuum(const HybridState& s, const std::string& mode, const std::string& spawned);

/// Keeps the no-photon outcome on `mode` and removes the mode.
/// ideal keeps exactly the terms labelled 0; exact applies <0| to every term.
/// An empty result is a zero-probability outcome, not an error.
MeasuredState postselect_vacuum(const HybridState& s, const std::string& mode, FidelityMode fm);

/// Photon-number measurement that discards `mode`. Every label on the mode
/// must be +c or -c for a single c. ideal drops the mode unchanged. exact
/// resolves the photon-count parity, either sampled from `rng` or forced, and
/// applies the parity phase to the -c terms; when `compensate` names a
/// polarization mode, odd parity is undone by a sign flip on that mode's
/// minus terms, which must coincide with the -c terms.
MeasuredState measure_photon_parity_discard(const HybridState& s, const std::string& mode, FidelityMode fm,
                                            Rng* rng, std::optional<int> forced_parity = std::nullopt,
                                            const std::optional<std::string>& compensate = std::nullopt);

/// Parity projection that keeps `mode`, for labels of any magnitude:
/// P_even|x> = (|x> + |-x>)/2 and P_odd|x> = (|x> - |-x>)/2.
MeasuredState measure_photon_parity_retain(const HybridState& s, const std::string& mode, int parity);

/// Sign flip on the terms whose label on polarization mode `pol_mode` is minus.
HybridState apply_polarization_z(const HybridState& s, const std::string& pol_mode);

enum class Pauli { I, X, Y, Z, iY };

std::string to_string(Pauli p);
Pauli parse_pauli(const std::string& name);

/// Logical Pauli on qubit q. Z acts on polarization only; X flips polarization
/// and negates the coherent label; Y = iXZ; iY = -XZ.
/// Throws OutsideLogicalSpan if the pair carries support outside the logical span.
HybridState apply_logical_pauli(const HybridState& s, const LogicalQubit& q, Pauli which);

}  // namespace hesim
