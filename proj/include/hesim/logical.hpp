// Logical hybrid qubits |0_L> = |+>|alpha>, |1_L> = |->|-alpha>.

#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hesim/state.hpp"

namespace hesim {

/// A (polarization, coherent) mode pair carrying one logical qubit.
struct LogicalQubit {
  std::string pol_mode;
  std::string cs_mode;

  bool operator==(const LogicalQubit&) const = default;
};

/// Qubit named `name`: polarization mode "<name>:pol", coherent mode "<name>".
LogicalQubit named_qubit(const std::string& name);

/// Support outside span{|0_L>, |1_L>} on one or more pairs.
class OutsideLogicalSpan : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Relative residual tolerance for logical-span checks.
inline constexpr double kLogicalSpanTolerance = 1e-10;

/// Registry listing each qubit's polarization modes first, then coherent modes.
ModeRegistry logical_registry(std::span<const LogicalQubit> qubits);

/// sum_b amplitudes[b] |b_1 ... b_n>_L with qubit 0 as the most significant bit.
HybridState logical_state(std::span<const LogicalQubit> qubits, std::span<const Complex> amplitudes, double alpha,
                          double prune_threshold = kDefaultPruneThreshold);

/// Single-qubit ket lambda|0_L> + eta|1_L>.
HybridState logical_qubit_state(const LogicalQubit& q, Complex zero_amp, Complex one_amp, double alpha);

/// ||s - P_q s||^2 / ||s||^2 where P_q projects the pair q onto the logical span.
double logical_span_residual(const HybridState& s, const LogicalQubit& q);
/// Throws OutsideLogicalSpan if the residual exceeds kLogicalSpanTolerance.
void require_logical_span(const HybridState& s, const LogicalQubit& q);

/// Coefficients of the orthogonal projection of `s` onto the logical basis of
/// `qubits`, which must cover every mode of `s`. Throws OutsideLogicalSpan when
/// more than kLogicalSpanTolerance of the norm lies outside that span.
Eigen::VectorXcd logical_amplitudes(const HybridState& s, std::span<const LogicalQubit> qubits);

/// Reduced density operator of the `keep` qubits over the orthonormal logical
/// basis, after tracing out `traced`. Together the two lists must cover every
/// mode of `s`. The result has unit trace.
Eigen::MatrixXcd reduced_density_logical(const HybridState& s, std::span<const LogicalQubit> keep,
                                         std::span<const LogicalQubit> traced);

}  // namespace hesim
