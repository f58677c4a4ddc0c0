#include "hesim/optics.hpp"

#include <cmath>
#include <stdexcept>

namespace hesim {

std::string to_string(FidelityMode m) { return m == FidelityMode::ideal ? "ideal" : "exact"; }

std::string to_string(MeasurementKind k) {
  return k == MeasurementKind::vacuum_postselect ? "vacuum_postselect" : "photon_parity";
}

std::string to_string(MeasurementOutcome o) {
  switch (o) {
    case MeasurementOutcome::accepted: return "accepted";
    case MeasurementOutcome::rejected: return "rejected";
    case MeasurementOutcome::even: return "even";
    case MeasurementOutcome::odd: return "odd";
  }
  return "unknown";
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

namespace {

std::size_t coherent_index(const HybridState& s, const std::string& mode) {
  const auto k = s.registry().index_of(mode);
  if (s.registry()[k].kind != ModeKind::coherent) throw RegistryMismatch(mode + " is not a coherent mode");
  return k;
}

ModeRegistry without(const ModeRegistry& r, std::size_t k) {
  auto modes = r.modes();
  modes.erase(modes.begin() + static_cast<std::ptrdiff_t>(k));
  return ModeRegistry(std::move(modes));
}

Term drop_label(const Term& t, std::size_t k) {
  Term n{t.amplitude, t.labels};
  n.labels.erase(n.labels.begin() + static_cast<std::ptrdiff_t>(k));
  return n;
}

double ratio(double part, double whole) { return whole > 0.0 ? part / whole : 0.0; }

}  // namespace

HybridState apply_beamsplitter(const HybridState& s, const std::string& m1, const std::string& m2) {
  if (m1 == m2) throw std::invalid_argument("beamsplitter needs two distinct modes");
  const auto i = coherent_index(s, m1);
  const auto j = coherent_index(s, m2);
  auto terms = s.terms();
  for (auto& t : terms) {
    auto [x, y] = beamsplit(std::get<CoherentLabel>(t.labels[i]), std::get<CoherentLabel>(t.labels[j]));
    t.labels[i] = x;
    t.labels[j] = y;
  }
  return s.with_terms(std::move(terms));
}

HybridState split_with_vacuum(const HybridState& s, const std::string& mode, const std::string& spawned) {
  return apply_beamsplitter(add_vacuum_mode(s, spawned), mode, spawned);
}

MeasuredState postselect_vacuum(const HybridState& s, const std::string& mode, FidelityMode fm) {
  const auto k = coherent_index(s, mode);
  const double total = norm_squared(s);
  const double alpha2 = s.alpha() * s.alpha();
  std::vector<Term> kept;
  std::vector<Term> rejected;

  if (fm == FidelityMode::ideal) {
    for (const auto& t : s.terms()) {
      if (std::get<CoherentLabel>(t.labels[k]).is_zero()) {
        kept.push_back(drop_label(t, k));
      } else {
        rejected.push_back(t);
      }
    }
  } else {
    // (1 - |0><0|)|s> is built explicitly so the complement is measured, not inferred.
    rejected = s.terms();
    for (const auto& t : s.terms()) {
      const double x = std::get<CoherentLabel>(t.labels[k]).value();
      const double overlap = std::exp(-0.5 * x * x * alpha2);
      kept.push_back(drop_label(t, k));
      kept.back().amplitude *= overlap;
      Term back = t;
      back.labels[k] = CoherentLabel{};
      back.amplitude *= -overlap;
      rejected.push_back(std::move(back));
    }
  }

  HybridState out(without(s.registry(), k), std::move(kept), s.alpha(), s.prune_threshold());
  const HybridState rest = s.with_terms(std::move(rejected));
  const double p = ratio(norm_squared(out), total);
  const double q = ratio(norm_squared(rest), total);
  return {std::move(out), {mode, MeasurementKind::vacuum_postselect, MeasurementOutcome::accepted, p, q}};
}

MeasuredState measure_photon_parity_discard(const HybridState& s, const std::string& mode, FidelityMode fm,
                                            Rng* rng, std::optional<int> forced_parity,
                                            const std::optional<std::string>& compensate) {
  const auto k = coherent_index(s, mode);
  std::optional<CoherentLabel> magnitude;
  for (const auto& t : s.terms()) {
    const auto m = std::get<CoherentLabel>(t.labels[k]).abs();
    if (magnitude && *magnitude != m) throw std::invalid_argument("labels on " + mode + " differ in magnitude");
    magnitude = m;
  }
  const ModeRegistry rest = without(s.registry(), k);

  if (fm == FidelityMode::ideal) {
    std::vector<Term> terms;
    for (const auto& t : s.terms()) terms.push_back(drop_label(t, k));
    return {HybridState(rest, std::move(terms), s.alpha(), s.prune_threshold()),
            {mode, MeasurementKind::photon_parity, MeasurementOutcome::even, 1.0, 0.0}};
  }

  if (!forced_parity && rng == nullptr) throw std::invalid_argument("exact parity measurement needs an rng");
  if (forced_parity && *forced_parity != 0 && *forced_parity != 1) throw std::invalid_argument("parity must be 0 or 1");

  // s = |A>|c> + |B>|-c>; even branch (A + B)|e>, odd branch (A - B)|o>.
  std::vector<Term> plus_terms, minus_terms;
  for (const auto& t : s.terms()) {
    (std::get<CoherentLabel>(t.labels[k]).sign() < 0 ? minus_terms : plus_terms).push_back(drop_label(t, k));
  }
  const HybridState a(rest, plus_terms, s.alpha(), s.prune_threshold());
  const HybridState b(rest, minus_terms, s.alpha(), s.prune_threshold());
  const double c = magnitude ? magnitude->value() * s.alpha() : 0.0;
  const double overlap = std::exp(-2.0 * c * c);
  const double total = norm_squared(s);
  const HybridState even = add(a, b);
  const HybridState odd = add(a, scale(b, -1.0));
  const double p_even = ratio(norm_squared(even) * (1.0 + overlap) / 2.0, total);
  const double p_odd = ratio(norm_squared(odd) * (1.0 - overlap) / 2.0, total);

  int parity = 0;
  if (forced_parity) {
    parity = *forced_parity;
  } else {
    parity = uniform01(*rng) < p_even ? 0 : 1;
  }

  HybridState out = parity == 0 ? scale(even, std::sqrt((1.0 + overlap) / 2.0))
                                 : scale(odd, std::sqrt((1.0 - overlap) / 2.0));
  if (parity == 1 && compensate) {
    const auto pk = s.registry().index_of(*compensate);
    if (s.registry()[pk].kind != ModeKind::polarization) throw RegistryMismatch(*compensate + " is not polarization");
    for (const auto& t : s.terms()) {
      const bool minus_label = std::get<CoherentLabel>(t.labels[k]).sign() < 0;
      const bool minus_pol = std::get<PolLabel>(t.labels[pk]) == PolLabel::minus;
      if (minus_label != minus_pol) {
        throw std::invalid_argument("parity phase on " + mode + " is not correlated with " + *compensate);
      }
    }
    out = apply_polarization_z(out, *compensate);
  }
  const auto outcome = parity == 0 ? MeasurementOutcome::even : MeasurementOutcome::odd;
  return {std::move(out),
          {mode, MeasurementKind::photon_parity, outcome, parity == 0 ? p_even : p_odd, parity == 0 ? p_odd : p_even}};
}

MeasuredState measure_photon_parity_retain(const HybridState& s, const std::string& mode, int parity) {
  if (parity != 0 && parity != 1) throw std::invalid_argument("parity must be 0 or 1");
  const auto k = coherent_index(s, mode);
  auto project = [&](int which) {
    std::vector<Term> terms;
    terms.reserve(2 * s.size());
    for (const auto& t : s.terms()) {
      Term same = t;
      same.amplitude *= 0.5;
      Term mirrored = same;
      mirrored.labels[k] = -std::get<CoherentLabel>(t.labels[k]);
      if (which == 1) mirrored.amplitude = -mirrored.amplitude;
      terms.push_back(std::move(same));
      terms.push_back(std::move(mirrored));
    }
    return s.with_terms(std::move(terms));
  };
  HybridState out = project(parity);
  const HybridState other = project(1 - parity);
  const double total = norm_squared(s);
  const auto outcome = parity == 0 ? MeasurementOutcome::even : MeasurementOutcome::odd;
  const double p = ratio(norm_squared(out), total);
  const double q = ratio(norm_squared(other), total);
  return {std::move(out), {mode, MeasurementKind::photon_parity, outcome, p, q}};
}

HybridState apply_polarization_z(const HybridState& s, const std::string& pol_mode) {
  const auto k = s.registry().index_of(pol_mode);
  if (s.registry()[k].kind != ModeKind::polarization) throw RegistryMismatch(pol_mode + " is not polarization");
  auto terms = s.terms();
  for (auto& t : terms) {
    if (std::get<PolLabel>(t.labels[k]) == PolLabel::minus) t.amplitude = -t.amplitude;
  }
  return s.with_terms(std::move(terms));
}

std::string to_string(Pauli p) {
  switch (p) {
    case Pauli::I: return "I";
    case Pauli::X: return "X";
    case Pauli::Y: return "Y";
    case Pauli::Z: return "Z";
    case Pauli::iY: return "iY";
  }
  return "?";
}

Pauli parse_pauli(const std::string& name) {
  for (auto p : {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z, Pauli::iY}) {
    if (to_string(p) == name) return p;
  }
  throw std::invalid_argument("unknown Pauli: " + name);
}

HybridState apply_logical_pauli(const HybridState& s, const LogicalQubit& q, Pauli which) {
  require_logical_span(s, q);
  const auto pk = s.registry().index_of(q.pol_mode);
  const auto ck = coherent_index(s, q.cs_mode);
  auto flip_x = [&](const HybridState& in) {
    auto terms = in.terms();
    for (auto& t : terms) {
      t.labels[pk] = flipped(std::get<PolLabel>(t.labels[pk]));
      t.labels[ck] = -std::get<CoherentLabel>(t.labels[ck]);
    }
    return in.with_terms(std::move(terms));
  };
  switch (which) {
    case Pauli::I: return s;
    case Pauli::Z: return apply_polarization_z(s, q.pol_mode);
    case Pauli::X: return flip_x(s);
    case Pauli::Y: return scale(flip_x(apply_polarization_z(s, q.pol_mode)), Complex{0.0, 1.0});
    case Pauli::iY: return scale(flip_x(apply_polarization_z(s, q.pol_mode)), -1.0);
  }
  return s;
}

}  // namespace hesim
