#include "hesim/logical.hpp"

#include <algorithm>
#include <array>

namespace hesim {

namespace {

const CoherentLabel kPlusOne = CoherentLabel::integer(1);
const CoherentLabel kMinusOne = CoherentLabel::integer(-1);

ModeLabel pol_of(int bit) { return bit ? PolLabel::minus : PolLabel::plus; }
ModeLabel cs_of(int bit) { return bit ? kMinusOne : kPlusOne; }

}  // namespace

LogicalQubit named_qubit(const std::string& name) { return {name + ":pol", name}; }

ModeRegistry logical_registry(std::span<const LogicalQubit> qubits) {
  std::vector<Mode> modes;
  modes.reserve(2 * qubits.size());
  for (const auto& q : qubits) modes.push_back({q.pol_mode, ModeKind::polarization});
  for (const auto& q : qubits) modes.push_back({q.cs_mode, ModeKind::coherent});
  return ModeRegistry(std::move(modes));
}

HybridState logical_state(std::span<const LogicalQubit> qubits, std::span<const Complex> amplitudes, double alpha,
                          double prune_threshold) {
  const std::size_t n = qubits.size();
  if (amplitudes.size() != (std::size_t{1} << n)) throw std::invalid_argument("amplitude count must be 2^qubits");
  std::vector<Term> terms;
  for (std::size_t b = 0; b < amplitudes.size(); ++b) {
    if (amplitudes[b] == Complex{0.0, 0.0}) continue;
    Term t{amplitudes[b], std::vector<ModeLabel>(2 * n)};
    for (std::size_t k = 0; k < n; ++k) {
      const int bit = static_cast<int>((b >> (n - 1 - k)) & 1U);
      t.labels[k] = pol_of(bit);
      t.labels[n + k] = cs_of(bit);
    }
    terms.push_back(std::move(t));
  }
  return {logical_registry(qubits), std::move(terms), alpha, prune_threshold};
}

HybridState logical_qubit_state(const LogicalQubit& q, Complex zero_amp, Complex one_amp, double alpha) {
  const std::array<Complex, 2> amps{zero_amp, one_amp};
  return logical_state(std::span<const LogicalQubit>(&q, 1), amps, alpha);
}

double logical_span_residual(const HybridState& s, const LogicalQubit& q) {
  const double total = norm_squared(s);
  if (!(total > 1e-300)) return 0.0;
  const auto zero_l = logical_qubit_state(q, 1.0, 0.0, s.alpha());
  const auto one_l = logical_qubit_state(q, 0.0, 1.0, s.alpha());
  // P_q s = |0_L> (x) <0_L|s> + |1_L> (x) <1_L|s>, re-expressed in s's mode order.
  const auto projected = add(reorder(tensor(zero_l, partial_inner(zero_l, s)), s.registry()),
                             reorder(tensor(one_l, partial_inner(one_l, s)), s.registry()));
  const auto residual = add(s, scale(projected, -1.0));
  return std::max(0.0, norm_squared(residual)) / total;
}

void require_logical_span(const HybridState& s, const LogicalQubit& q) {
  if (logical_span_residual(s, q) > kLogicalSpanTolerance) {
    throw OutsideLogicalSpan("state has support outside the logical span of " + q.pol_mode + "/" + q.cs_mode);
  }
}

Eigen::VectorXcd logical_amplitudes(const HybridState& s, std::span<const LogicalQubit> qubits) {
  const std::size_t n = qubits.size();
  if (2 * n != s.registry().size()) throw RegistryMismatch("logical qubits must cover every mode of the state");
  std::vector<std::size_t> pol_idx(n), cs_idx(n);
  for (std::size_t k = 0; k < n; ++k) {
    pol_idx[k] = s.registry().index_of(qubits[k].pol_mode);
    cs_idx[k] = s.registry().index_of(qubits[k].cs_mode);
    if (s.registry()[pol_idx[k]].kind != ModeKind::polarization || s.registry()[cs_idx[k]].kind != ModeKind::coherent) {
      throw RegistryMismatch("logical qubit modes have the wrong kind");
    }
  }

  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(std::size_t{1} << n));
  for (const auto& t : s.terms()) {
    // Polarization fixes the only basis index the term can project onto.
    std::size_t index = 0;
    Complex coeff = t.amplitude;
    for (std::size_t k = 0; k < n; ++k) {
      const int bit = std::get<PolLabel>(t.labels[pol_idx[k]]) == PolLabel::minus ? 1 : 0;
      index = (index << 1) | static_cast<std::size_t>(bit);
      const auto& x = std::get<CoherentLabel>(t.labels[cs_idx[k]]);
      coeff *= coherent_overlap(bit ? kMinusOne : kPlusOne, x, s.alpha());
    }
    v[static_cast<Eigen::Index>(index)] += coeff;
  }

  const double total = norm_squared(s);
  if (!(total > 1e-300)) throw ZeroNorm("logical amplitudes of a zero-norm state");
  const double residual = (total - v.squaredNorm()) / total;
  if (residual > kLogicalSpanTolerance) throw OutsideLogicalSpan("state has support outside the logical span");
  return v;
}

Eigen::MatrixXcd reduced_density_logical(const HybridState& s, std::span<const LogicalQubit> keep,
                                         std::span<const LogicalQubit> traced) {
  std::vector<LogicalQubit> all(keep.begin(), keep.end());
  all.insert(all.end(), traced.begin(), traced.end());
  const Eigen::VectorXcd v = logical_amplitudes(s, all);

  const Eigen::Index dk = Eigen::Index{1} << keep.size();
  const Eigen::Index dt = Eigen::Index{1} << traced.size();
  // Kept qubits are the high bits, so v reshapes to a dk x dt coefficient matrix.
  Eigen::MatrixXcd c(dk, dt);
  for (Eigen::Index i = 0; i < dk; ++i) {
    for (Eigen::Index j = 0; j < dt; ++j) c(i, j) = v[i * dt + j];
  }
  Eigen::MatrixXcd rho = c * c.adjoint();
  return rho / rho.trace().real();
}

}  // namespace hesim
