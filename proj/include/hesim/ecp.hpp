// Entanglement concentration for the Omega-type hybrid state.

#pragma once

#include <array>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "hesim/optics.hpp"
#include "hesim/state.hpp"

namespace hesim {

struct ECPParams {
  double zeta = 0.5;
  double beta = 0.5;
  double gamma = 0.5;
  double delta = 0.5;
  double alpha = 1.0;

  /// Throws std::invalid_argument unless alpha > 0, the coefficients are finite
  /// with unit squared sum (within 1e-12), and, unless allow_zero, all nonzero.
  void validate(bool allow_zero = false) const;
  bool degenerate() const { return zeta * beta * gamma * delta == 0.0; }

  /// Ancilla normalizers in closed form.
  double n1() const;
  double n2() const;
};

/// (cos, sin) of theta, exact when theta is within 1e-12 of a multiple of pi/2.
std::pair<double, double> snapped_cos_sin(double theta);

struct AngleParams {
  double theta1 = std::numbers::pi / 4;
  double theta2 = std::numbers::pi / 4;
  double theta3 = 3 * std::numbers::pi / 8;

  /// zeta = cos t3, beta = sin t3 cos t2, delta = sin t3 sin t2 cos t1, gamma = sin t3 sin t2 sin t1.
  ECPParams to_params(double alpha) const;
};

/// Qubits a, b, c, d; registry a:pol..d:pol then a..d.
HybridState build_nonmax_omega(const ECPParams& p);
/// Maximally entangled target (zeta = beta = gamma = delta = 1/2).
HybridState build_target_omega(double alpha);
/// N1(zeta|-a>|a> + beta|a>|a> + gamma|-a>|-a> + delta|a>|-a>) on e1, f1.
HybridState build_two_mode_ancilla(const ECPParams& p);
/// N2(zeta beta|-a> + delta gamma|a>) on g1.
HybridState build_single_mode_ancilla(const ECPParams& p);

/// 4 (N1 N2 zeta beta delta gamma)^2
double success_probability_closed_form(const ECPParams& p);

/// Detection semantics per element kind. Exact vacuum detection leaves labels
/// of mixed magnitude on the parity modes, so it requires exact parity.
struct DetectionModel {
  FidelityMode vacuum = FidelityMode::ideal;
  FidelityMode parity = FidelityMode::ideal;
};

inline constexpr DetectionModel kIdealDetection{FidelityMode::ideal, FidelityMode::ideal};
inline constexpr DetectionModel kExactDetection{FidelityMode::exact, FidelityMode::exact};

struct StageSnapshot {
  std::string name;
  HybridState state;
  std::optional<MeasurementRecord> record;
};

struct ECPResult {
  DetectionModel model;
  /// Product of the vacuum acceptance probabilities under `model`.
  double success_probability = 0.0;
  double success_probability_ideal = 0.0;
  double success_probability_closed_form = 0.0;
  std::optional<double> success_probability_exact;
  /// Joint probability of the parity outcomes given success (1 in ideal parity).
  double parity_branch_probability = 1.0;
  /// Parity outcomes on c4, d4, a4; empty under ideal parity.
  std::vector<int> parities;
  bool zero_probability = false;
  /// Normalized output; empty when zero_probability. Under exact vacuum
  /// detection the parity modes c4, d4, a4 are still present.
  HybridState final_state{ModeRegistry{}, {}, 1.0};
  /// Fidelity of the output on a, b, c, d with the target, other modes traced.
  double fidelity = 0.0;
  std::vector<StageSnapshot> stage_trace;
};

struct ECPOptions {
  DetectionModel model = kIdealDetection;
  /// Parity source under exact parity: forced outcomes for c4, d4, a4, else rng.
  std::optional<std::array<int, 3>> forced_parities;
  Rng* rng = nullptr;
  bool keep_trace = true;
  /// Also run ideal detection to fill success_probability_ideal.
  bool compare_ideal = true;
};

ECPResult run_ecp(const ECPParams& p, const ECPOptions& options);
/// ideal needs no rng; exact samples parities from `rng`, which must be given.
ECPResult run_ecp(const ECPParams& p, FidelityMode fm, Rng* rng = nullptr);

struct ExactAverage {
  /// Vacuum acceptance summed over the parity branches.
  double success_probability = 0.0;
  /// Fidelity averaged over the eight parity branches.
  double mean_fidelity = 0.0;
  /// Branch probabilities conditional on success.
  std::array<double, 8> branch_probability{};
  std::array<double, 8> branch_fidelity{};
};

/// Enumerates every parity branch (c4, d4, a4 bits, c4 most significant).
ExactAverage exact_average(const ECPParams& p, DetectionModel model = kExactDetection);

}  // namespace hesim
