#include "hesim/state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace hesim {

// ---------------------------------------------------------------------------
// ModeRegistry

ModeRegistry::ModeRegistry(std::vector<Mode> modes) : modes_(std::move(modes)) {
  std::unordered_set<std::string> seen;
  for (const auto& m : modes_) {
    if (m.name.empty()) throw std::invalid_argument("mode name must be non-empty");
    if (!seen.insert(m.name).second) throw RegistryMismatch("duplicate mode name: " + m.name);
  }
}

std::optional<std::size_t> ModeRegistry::find(const std::string& name) const {
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (modes_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t ModeRegistry::index_of(const std::string& name) const {
  if (auto i = find(name)) return *i;
  throw RegistryMismatch("unknown mode: " + name);
}

bool ModeRegistry::same_modes(const ModeRegistry& other) const {
  if (size() != other.size()) return false;
  return std::all_of(modes_.begin(), modes_.end(), [&](const Mode& m) {
    auto j = other.find(m.name);
    return j && other[*j].kind == m.kind;
  });
}

// ---------------------------------------------------------------------------
// Polarization views

HVAmplitudes to_hv(Complex plus_amp, Complex minus_amp) {
  const double r = 1.0 / std::sqrt(2.0);
  return {(plus_amp + minus_amp) * r, (plus_amp - minus_amp) * r};
}

std::pair<Complex, Complex> from_hv(const HVAmplitudes& hv) {
  const double r = 1.0 / std::sqrt(2.0);
  return {(hv.h + hv.v) * r, (hv.h - hv.v) * r};
}

// ---------------------------------------------------------------------------
// HybridState

namespace {

bool kind_matches(const ModeLabel& label, ModeKind kind) {
  return kind == ModeKind::polarization ? std::holds_alternative<PolLabel>(label)
                                        : std::holds_alternative<CoherentLabel>(label);
}

// Numeric view of a state's labels used by the pairwise Gram sums.
struct NumericTerm {
  Complex amplitude;
  std::vector<unsigned char> pol;
  std::vector<double> cs;
};

std::vector<NumericTerm> numeric_view(const HybridState& s) {
  std::vector<NumericTerm> out;
  out.reserve(s.size());
  for (const auto& t : s.terms()) {
    NumericTerm n{t.amplitude, {}, {}};
    for (const auto& l : t.labels) {
      if (const auto* p = std::get_if<PolLabel>(&l)) {
        n.pol.push_back(*p == PolLabel::plus ? 0 : 1);
      } else {
        n.cs.push_back(std::get<CoherentLabel>(l).value());
      }
    }
    out.push_back(std::move(n));
  }
  return out;
}

// Overlap of two product kets with equal mode order: zero on any polarization
// mismatch, otherwise prod_k exp(-(x_k - y_k)^2 alpha^2 / 2).
double product_overlap(const NumericTerm& x, const NumericTerm& y, double alpha2) {
  if (x.pol != y.pol) return 0.0;
  double exponent = 0.0;
  for (std::size_t k = 0; k < x.cs.size(); ++k) {
    const double d = x.cs[k] - y.cs[k];
    exponent += d * d;
  }
  return exponent == 0.0 ? 1.0 : std::exp(-0.5 * alpha2 * exponent);
}

void require_same_alpha(const HybridState& s, const HybridState& t) {
  if (s.alpha() != t.alpha()) throw std::invalid_argument("states use different base alpha");
}

}  // namespace

HybridState::HybridState(ModeRegistry registry, std::vector<Term> terms, double alpha, double prune_threshold)
    : registry_(std::move(registry)), terms_(std::move(terms)), alpha_(alpha), prune_(prune_threshold) {
  validate_and_canonicalize();
}

void HybridState::validate_and_canonicalize() {
  if (!(alpha_ > 0.0) || !std::isfinite(alpha_)) throw std::invalid_argument("alpha must be positive and finite");
  if (!(prune_ >= 0.0)) throw std::invalid_argument("prune threshold must be non-negative");
  for (const auto& t : terms_) {
    if (t.labels.size() != registry_.size()) {
      throw RegistryMismatch("term label count does not match registry size");
    }
    for (std::size_t k = 0; k < t.labels.size(); ++k) {
      if (!kind_matches(t.labels[k], registry_[k].kind)) {
        throw RegistryMismatch("label kind does not match mode " + registry_[k].name);
      }
    }
    if (!std::isfinite(t.amplitude.real()) || !std::isfinite(t.amplitude.imag())) {
      throw std::invalid_argument("non-finite term amplitude");
    }
  }

  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.labels < b.labels; });
  std::vector<Term> merged;
  merged.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().labels == t.labels) {
      merged.back().amplitude += t.amplitude;
    } else {
      merged.push_back(std::move(t));
    }
  }
  std::erase_if(merged, [this](const Term& t) {
    const double mag = std::abs(t.amplitude);
    return mag == 0.0 || mag < prune_;
  });
  terms_ = std::move(merged);
}

HybridState scalar_state(Complex value, double alpha, double prune_threshold) {
  return {ModeRegistry{}, {Term{value, {}}}, alpha, prune_threshold};
}

Complex inner_product(const HybridState& s, const HybridState& t) {
  if (s.registry() != t.registry()) throw RegistryMismatch("inner product over different registries");
  require_same_alpha(s, t);
  const auto xs = numeric_view(s);
  const auto ys = numeric_view(t);
  const double alpha2 = s.alpha() * s.alpha();
  Complex sum{0.0, 0.0};
  for (const auto& x : xs) {
    for (const auto& y : ys) {
      const double ov = product_overlap(x, y, alpha2);
      if (ov != 0.0) sum += std::conj(x.amplitude) * y.amplitude * ov;
    }
  }
  return sum;
}

double norm_squared(const HybridState& s) {
  const auto xs = numeric_view(s);
  const double alpha2 = s.alpha() * s.alpha();
  double sum = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sum += std::norm(xs[i].amplitude);
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      const double ov = product_overlap(xs[i], xs[j], alpha2);
      if (ov != 0.0) sum += 2.0 * (std::conj(xs[i].amplitude) * xs[j].amplitude).real() * ov;
    }
  }
  return sum;
}

HybridState normalize(const HybridState& s) {
  const double n2 = norm_squared(s);
  if (!(n2 > 1e-300)) throw ZeroNorm("cannot normalize a zero-norm state");
  return scale(s, 1.0 / std::sqrt(n2));
}

HybridState scale(const HybridState& s, Complex factor) {
  auto terms = s.terms();
  for (auto& t : terms) t.amplitude *= factor;
  return s.with_terms(std::move(terms));
}

HybridState add(const HybridState& s, const HybridState& t) {
  if (s.registry() != t.registry()) throw RegistryMismatch("sum over different registries");
  require_same_alpha(s, t);
  auto terms = s.terms();
  terms.insert(terms.end(), t.terms().begin(), t.terms().end());
  return s.with_terms(std::move(terms));
}

double fidelity(const HybridState& s, const HybridState& t) {
  const HybridState* other = &t;
  std::optional<HybridState> aligned;
  if (s.registry() != t.registry()) {
    if (!s.registry().same_modes(t.registry())) throw RegistryMismatch("fidelity over different mode sets");
    aligned.emplace(reorder(t, s.registry()));
    other = &*aligned;
  }
  const double ns = norm_squared(s);
  const double nt = norm_squared(*other);
  if (!(ns > 1e-300) || !(nt > 1e-300)) throw ZeroNorm("fidelity of a zero-norm state");
  const double f = std::norm(inner_product(s, *other)) / (ns * nt);
  return std::clamp(f, 0.0, 1.0);
}

HybridState tensor(const HybridState& s, const HybridState& t) {
  require_same_alpha(s, t);
  std::vector<Mode> modes = s.registry().modes();
  for (const auto& m : t.registry()) {
    if (s.registry().contains(m.name)) throw RegistryMismatch("tensor of states sharing mode " + m.name);
    modes.push_back(m);
  }
  std::vector<Term> terms;
  terms.reserve(s.size() * t.size());
  for (const auto& a : s.terms()) {
    for (const auto& b : t.terms()) {
      Term n{a.amplitude * b.amplitude, a.labels};
      n.labels.insert(n.labels.end(), b.labels.begin(), b.labels.end());
      terms.push_back(std::move(n));
    }
  }
  return {ModeRegistry(std::move(modes)), std::move(terms), s.alpha(), s.prune_threshold()};
}

HybridState reorder(const HybridState& s, const ModeRegistry& target) {
  if (!s.registry().same_modes(target)) throw RegistryMismatch("reorder onto a different mode set");
  std::vector<std::size_t> src(target.size());
  for (std::size_t k = 0; k < target.size(); ++k) src[k] = s.registry().index_of(target[k].name);
  std::vector<Term> terms;
  terms.reserve(s.size());
  for (const auto& t : s.terms()) {
    Term n{t.amplitude, {}};
    n.labels.reserve(src.size());
    for (auto k : src) n.labels.push_back(t.labels[k]);
    terms.push_back(std::move(n));
  }
  return {target, std::move(terms), s.alpha(), s.prune_threshold()};
}

HybridState rename_mode(const HybridState& s, const std::string& from, const std::string& to) {
  std::vector<Mode> modes = s.registry().modes();
  modes[s.registry().index_of(from)].name = to;
  return {ModeRegistry(std::move(modes)), s.terms(), s.alpha(), s.prune_threshold()};
}

HybridState add_vacuum_mode(const HybridState& s, const std::string& name) {
  const HybridState vacuum(ModeRegistry({{name, ModeKind::coherent}}), {Term{1.0, {CoherentLabel{}}}}, s.alpha(),
                           s.prune_threshold());
  return tensor(s, vacuum);
}

HybridState partial_inner(const HybridState& bra, const HybridState& ket) {
  require_same_alpha(bra, ket);
  const auto& kr = ket.registry();
  std::vector<std::size_t> contracted;
  contracted.reserve(bra.registry().size());
  for (const auto& m : bra.registry()) {
    const auto k = kr.index_of(m.name);
    if (kr[k].kind != m.kind) throw RegistryMismatch("mode kind mismatch on " + m.name);
    contracted.push_back(k);
  }
  std::vector<bool> is_contracted(kr.size(), false);
  for (auto k : contracted) is_contracted[k] = true;
  std::vector<Mode> rest_modes;
  std::vector<std::size_t> rest;
  for (std::size_t k = 0; k < kr.size(); ++k) {
    if (!is_contracted[k]) {
      rest.push_back(k);
      rest_modes.push_back(kr[k]);
    }
  }

  const double alpha2 = ket.alpha() * ket.alpha();
  std::vector<Term> out;
  for (const auto& kt : ket.terms()) {
    Complex coeff{0.0, 0.0};
    for (const auto& bt : bra.terms()) {
      double exponent = 0.0;
      bool orthogonal = false;
      for (std::size_t j = 0; j < contracted.size() && !orthogonal; ++j) {
        const auto& kl = kt.labels[contracted[j]];
        const auto& bl = bt.labels[j];
        if (const auto* p = std::get_if<PolLabel>(&bl)) {
          orthogonal = *p != std::get<PolLabel>(kl);
        } else {
          const double d = std::get<CoherentLabel>(bl).value() - std::get<CoherentLabel>(kl).value();
          exponent += d * d;
        }
      }
      if (orthogonal) continue;
      const double ov = exponent == 0.0 ? 1.0 : std::exp(-0.5 * alpha2 * exponent);
      coeff += std::conj(bt.amplitude) * ov;
    }
    if (coeff == Complex{0.0, 0.0}) continue;
    Term n{coeff * kt.amplitude, {}};
    n.labels.reserve(rest.size());
    for (auto k : rest) n.labels.push_back(kt.labels[k]);
    out.push_back(std::move(n));
  }
  return {ModeRegistry(std::move(rest_modes)), std::move(out), ket.alpha(), ket.prune_threshold()};
}

double fidelity_traced(const HybridState& s, const HybridState& target) {
  const double ns = norm_squared(s);
  const double nt = norm_squared(target);
  if (!(ns > 1e-300) || !(nt > 1e-300)) throw ZeroNorm("fidelity of a zero-norm state");
  const auto rest = partial_inner(target, s);
  return std::clamp(norm_squared(rest) / (ns * nt), 0.0, 1.0);
}

std::string to_string(const HybridState& s) {
  std::ostringstream os;
  os << "alpha=" << s.alpha() << " [";
  for (std::size_t k = 0; k < s.registry().size(); ++k) os << (k ? "," : "") << s.registry()[k].name;
  os << "]";
  for (const auto& t : s.terms()) {
    os << "\n  (" << t.amplitude.real() << (t.amplitude.imag() < 0 ? "" : "+") << t.amplitude.imag() << "i) |";
    for (std::size_t k = 0; k < t.labels.size(); ++k) {
      if (k) os << ",";
      if (const auto* p = std::get_if<PolLabel>(&t.labels[k])) {
        os << (*p == PolLabel::plus ? "+" : "-");
      } else {
        os << std::get<CoherentLabel>(t.labels[k]).to_string();
      }
    }
    os << ">";
  }
  return os.str();
}

}  // namespace hesim
