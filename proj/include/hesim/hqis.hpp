// Hierarchical quantum information splitting over the Omega-type channel.
//
// Alice holds the secret on A0 and channel qubit A; Bob, Charlie and Diana hold
// B, C and D. Diana recovers with one helper announcement, Bob and Charlie
// need a joint logical Bell measurement by the other two agents.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hesim/ecp.hpp"
#include "hesim/logical.hpp"
#include "hesim/optics.hpp"

namespace hesim {

enum class BellOutcome { phi_plus, phi_minus, psi_plus, psi_minus };
inline constexpr std::array<BellOutcome, 4> kBellOutcomes{BellOutcome::phi_plus, BellOutcome::phi_minus,
                                                          BellOutcome::psi_plus, BellOutcome::psi_minus};

/// "phiL+", "phiL-", "psiL+", "psiL-"
std::string to_string(BellOutcome b);
BellOutcome parse_bell_outcome(const std::string& name);

enum class Recoverer { diana, bob, charlie };
std::string to_string(Recoverer r);
Recoverer parse_recoverer(const std::string& name);

struct InputSecret {
  Complex lambda{1.0, 0.0};
  Complex eta{0.0, 0.0};

  /// Throws std::invalid_argument unless |lambda|^2 + |eta|^2 = 1 within tol.
  void validate(double tol = 1e-12) const;
};

/// |lambda|^2 uniform on [0, 1], independent uniform phases.
InputSecret random_secret(Rng& rng);

LogicalQubit hqis_qubit(const std::string& name);  // "A0", "A", "B", "C", "D"

/// (|0_L 0_L> +- |1_L 1_L>)/sqrt2 and (|0_L 1_L> +- |1_L 0_L>)/sqrt2 on (q1, q2).
HybridState logical_bell_state(const LogicalQubit& q1, const LogicalQubit& q2, BellOutcome b, double alpha,
                               double prune_threshold = kDefaultPruneThreshold);

/// (|0000> + |0110> + |1001> - |1111>)_L / 2 on A, B, C, D.
HybridState build_channel(double alpha);
/// lambda|0_L> + eta|1_L> on `q` (A0 by default).
HybridState build_input(const InputSecret& secret, double alpha, const LogicalQubit& q = hqis_qubit("A0"));
/// Channel on A..D taken from a concentration output on a..d.
HybridState channel_from_ecp(const ECPResult& r);

/// (|000> + |110>)_L/sqrt2 and (|001> - |111>)_L/sqrt2 on B, C, D.
HybridState psi0_logical(double alpha);
HybridState psi1_logical(double alpha);
/// Normalized B, C, D state listed for each of Alice's outcomes:
/// lambda psi0 +- eta psi1 for phiL+-, lambda psi1 +- eta psi0 for psiL+-.
HybridState alice_table_state(BellOutcome b, const InputSecret& secret, double alpha);

struct BellMeasurement {
  BellOutcome outcome;
  HybridState collapsed;  // normalized, over the unmeasured modes
  std::array<double, 4> probabilities;
};

/// Projective logical Bell measurement on (q1, q2), sampled from rng or forced.
BellMeasurement measure_logical_bell(const HybridState& s, const LogicalQubit& q1, const LogicalQubit& q2, Rng* rng,
                                     std::optional<BellOutcome> forced = std::nullopt);
/// Bell measurement on A0, A of |psi>_in (x) channel.
BellMeasurement alice_bell_measurement(const HybridState& s, Rng* rng,
                                       std::optional<BellOutcome> forced = std::nullopt);

/// Pauli applied by the recoverer, indexed [alice outcome][helper outcome].
/// The helper index is Bob's logical bit (0 or 1) for Diana, otherwise the
/// helpers' Bell outcome. Entries that cannot occur are empty.
using CorrectionTable = std::array<std::array<std::optional<Pauli>, 4>, 4>;

/// Exhaustive search over {I, X, Z, iY}; throws std::logic_error if some
/// reachable branch has no or more than one restoring Pauli.
CorrectionTable derive_correction_table(Recoverer r, double alpha);

struct PrintedTableCheck {
  bool diana_rows = false;    // phiL+: 00 -> I, 11 -> Z
  bool bob_rows = false;      // phiL+: phiL+ -> Z, phiL- -> I, psiL+ -> X, psiL- -> iY
  bool charlie_rows = false;  // same rows as Bob
  std::vector<std::string> mismatches;
  bool ok() const { return diana_rows && bob_rows && charlie_rows; }
};

PrintedTableCheck check_printed_tables(double alpha);

struct HQISTranscript {
  std::size_t trial = 0;
  InputSecret secret;
  BellOutcome alice_outcome = BellOutcome::phi_plus;
  Recoverer recoverer = Recoverer::diana;
  /// "B:0_L", "C:0_L", ... for Diana; the helpers' Bell outcome otherwise.
  std::vector<std::string> helper_outcomes;
  std::vector<Pauli> corrections;
  double fidelity = 0.0;
  /// Alice's outcome distribution.
  std::array<double, 4> branch_probabilities{};
  /// Helper outcome distributions, conditional on the earlier outcomes.
  std::vector<double> helper_probabilities;
};

/// Recovery after Alice's announcement. `collapsed` is the B, C, D state.
/// `forced_helper` fixes Bob's logical bit (Diana) or the helpers' Bell outcome index.
HQISTranscript recover(const HybridState& collapsed, BellOutcome alice_outcome, const InputSecret& secret,
                       Recoverer who, const CorrectionTable& table, Rng* rng,
                       std::optional<int> forced_helper = std::nullopt);

HQISTranscript diana_recovery(const HybridState& collapsed, BellOutcome alice_outcome, const InputSecret& secret,
                              Rng& rng);
HQISTranscript bob_recovery(const HybridState& collapsed, BellOutcome alice_outcome, const InputSecret& secret,
                            Rng& rng);
HQISTranscript charlie_recovery(const HybridState& collapsed, BellOutcome alice_outcome, const InputSecret& secret,
                                Rng& rng);

/// Logical density operator of `holder` with the other two agents traced out.
Eigen::Matrix2cd agent_reduced_density(const HybridState& collapsed, const LogicalQubit& holder);

struct ProtocolOptions {
  /// Fixed secret; when absent each trial draws one from its own stream.
  std::optional<InputSecret> secret;
  Recoverer recoverer = Recoverer::diana;
  double alpha = 1.0;
  std::uint64_t seed = 0;
  std::size_t trials = 1;
  /// Channel on A..D; build_channel(alpha) when absent.
  std::optional<HybridState> channel;
};

/// Trial i uses an rng seeded from (seed, i), so output does not depend on trial order.
std::vector<HQISTranscript> run_protocol(const ProtocolOptions& o);

struct BellComponent {
  std::string pol_bell;    // phi+, phi-, psi+, psi- in the H/V basis
  std::string quasi_bell;  // phi_+, phi_-, psi_+, psi_- (normalized)
  Complex weight;
  /// weight * N of the quasi-Bell factor, 1/2 in magnitude for an exact identity.
  Complex weight_times_norm;
};

struct BellIdentityReport {
  BellOutcome logical;
  std::vector<BellComponent> components;
  /// ||LHS - sum weight pol (x) quasi||
  double derived_residual = 0.0;
  /// Printed pairing with weights 1/sqrt2, 1/(sqrt2 N) and 1/(2N).
  double printed_residual = 0.0;
  double printed_inv_norm_sqrt2_residual = 0.0;
  double printed_inv_norm_half_residual = 0.0;
  std::string printed_form;
  bool printed_pairing_matches = false;
};

struct BellDecompositionReport {
  double alpha = 0.0;
  double n_plus = 0.0;
  double n_minus = 0.0;
  std::array<BellIdentityReport, 4> identities;
};

/// Expands each logical Bell state over polarization Bell states (H/V basis)
/// times coherent quasi-Bell states without pruning and reports the exact
/// weights alongside the printed identities.
BellDecompositionReport verify_bell_decomposition(double alpha);

}  // namespace hesim
