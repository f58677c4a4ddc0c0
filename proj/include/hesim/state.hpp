// Hybrid polarization / coherent-state vectors over a nonorthogonal product basis.

#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hesim/coherent_label.hpp"

namespace hesim {

using Complex = std::complex<double>;

/// Default magnitude below which merged terms are dropped.
inline constexpr double kDefaultPruneThreshold = 1e-12;

class RegistryMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an operation needs a state with nonzero norm.
class ZeroNorm : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class ModeKind { polarization, coherent };

struct Mode {
  std::string name;
  ModeKind kind;

  bool operator==(const Mode&) const = default;
};

/// Ordered list of uniquely named modes.
class ModeRegistry {
 public:
  ModeRegistry() = default;
  explicit ModeRegistry(std::vector<Mode> modes);

  std::size_t size() const { return modes_.size(); }
  bool empty() const { return modes_.empty(); }
  const Mode& operator[](std::size_t i) const { return modes_[i]; }
  const std::vector<Mode>& modes() const { return modes_; }

  std::optional<std::size_t> find(const std::string& name) const;
  /// Index of `name`; throws RegistryMismatch if absent.
  std::size_t index_of(const std::string& name) const;
  bool contains(const std::string& name) const { return find(name).has_value(); }

  /// Same set of (name, kind) pairs, possibly in another order.
  bool same_modes(const ModeRegistry& other) const;

  bool operator==(const ModeRegistry&) const = default;

  auto begin() const { return modes_.begin(); }
  auto end() const { return modes_.end(); }

 private:
  std::vector<Mode> modes_;
};

/// Polarization basis state |+> or |->, with |+-> = (|H> +- |V>)/sqrt2.
enum class PolLabel { plus, minus };

inline PolLabel flipped(PolLabel p) { return p == PolLabel::plus ? PolLabel::minus : PolLabel::plus; }

/// Components of a polarization vector in the {H, V} view.
struct HVAmplitudes {
  Complex h;
  Complex v;
};

HVAmplitudes to_hv(Complex plus_amp, Complex minus_amp);
/// Inverse of to_hv: returns {plus, minus} amplitudes.
std::pair<Complex, Complex> from_hv(const HVAmplitudes& hv);

using ModeLabel = std::variant<PolLabel, CoherentLabel>;

struct Term {
  Complex amplitude;
  std::vector<ModeLabel> labels;
};

/// Linear combination of product kets; the registry fixes the label order of
/// every term. Construction merges terms with identical label assignments and
/// drops those whose merged amplitude magnitude is below the prune threshold
/// (threshold 0 keeps everything that is not exactly zero).
class HybridState {
 public:
  HybridState(ModeRegistry registry, std::vector<Term> terms, double alpha,
              double prune_threshold = kDefaultPruneThreshold);

  const ModeRegistry& registry() const { return registry_; }
  const std::vector<Term>& terms() const { return terms_; }
  double alpha() const { return alpha_; }
  double prune_threshold() const { return prune_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// Same registry, alpha and prune threshold, new terms.
  HybridState with_terms(std::vector<Term> terms) const {
    return {registry_, std::move(terms), alpha_, prune_};
  }

 private:
  void validate_and_canonicalize();

  ModeRegistry registry_;
  std::vector<Term> terms_;
  double alpha_;
  double prune_;
};

/// A state with no modes and a single amplitude (the scalar `value`).
HybridState scalar_state(Complex value, double alpha, double prune_threshold = kDefaultPruneThreshold);

/// <s|t>. Registries must be identical, including order.
Complex inner_product(const HybridState& s, const HybridState& t);
double norm_squared(const HybridState& s);

HybridState normalize(const HybridState& s);
HybridState scale(const HybridState& s, Complex factor);
/// s + t over an identical registry.
HybridState add(const HybridState& s, const HybridState& t);

/// |<s|t>|^2 / (<s|s><t|t>). `t` is reordered to s's registry if the mode sets agree.
double fidelity(const HybridState& s, const HybridState& t);

/// Tensor product; registries concatenated, names must be disjoint.
HybridState tensor(const HybridState& s, const HybridState& t);

/// Permute modes into `target` order; mode sets must agree.
HybridState reorder(const HybridState& s, const ModeRegistry& target);
HybridState rename_mode(const HybridState& s, const std::string& from, const std::string& to);
/// Appends a coherent mode in the vacuum (label 0) to every term.
HybridState add_vacuum_mode(const HybridState& s, const std::string& name);

/// (<bra| (x) 1)|ket>: contracts the bra's modes, leaving a state over ket's
/// remaining modes. Every bra mode must exist in ket with the same kind.
HybridState partial_inner(const HybridState& bra, const HybridState& ket);

/// Fidelity of the reduced state of `s` with the pure `target`; modes of `s`
/// absent from `target` are traced out. Evaluated as
/// ||(<target| (x) 1)|s>||^2 / (<s|s><target|target>).
double fidelity_traced(const HybridState& s, const HybridState& target);

std::string to_string(const HybridState& s);

}  // namespace hesim
