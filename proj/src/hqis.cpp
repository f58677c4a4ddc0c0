#include "hesim/hqis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hesim {

std::string to_string(BellOutcome b) {
  switch (b) {
    case BellOutcome::phi_plus: return "phiL+";
    case BellOutcome::phi_minus: return "phiL-";
    case BellOutcome::psi_plus: return "psiL+";
    case BellOutcome::psi_minus: return "psiL-";
  }
  return "?";
}

BellOutcome parse_bell_outcome(const std::string& name) {
  for (auto b : kBellOutcomes) {
    if (to_string(b) == name) return b;
  }
  throw std::invalid_argument("unknown Bell outcome: " + name);
}

std::string to_string(Recoverer r) {
  switch (r) {
    case Recoverer::diana: return "diana";
    case Recoverer::bob: return "bob";
    case Recoverer::charlie: return "charlie";
  }
  return "?";
}

Recoverer parse_recoverer(const std::string& name) {
  for (auto r : {Recoverer::diana, Recoverer::bob, Recoverer::charlie}) {
    if (to_string(r) == name) return r;
  }
  throw std::invalid_argument("unknown recoverer: " + name);
}

void InputSecret::validate(double tol) const {
  const double n = std::norm(lambda) + std::norm(eta);
  if (!std::isfinite(n) || std::abs(n - 1.0) > tol) {
    throw std::invalid_argument("secret must satisfy |lambda|^2 + |eta|^2 = 1");
  }
}

InputSecret random_secret(Rng& rng) {
  const double u = uniform01(rng);
  const double phi1 = 2.0 * std::numbers::pi * uniform01(rng);
  const double phi2 = 2.0 * std::numbers::pi * uniform01(rng);
  return {std::polar(std::sqrt(u), phi1), std::polar(std::sqrt(1.0 - u), phi2)};
}

LogicalQubit hqis_qubit(const std::string& name) { return named_qubit(name); }

namespace {

std::size_t bell_index(BellOutcome b) { return static_cast<std::size_t>(b); }

const LogicalQubit kA0 = hqis_qubit("A0");
const LogicalQubit kA = hqis_qubit("A");
const LogicalQubit kB = hqis_qubit("B");
const LogicalQubit kC = hqis_qubit("C");
const LogicalQubit kD = hqis_qubit("D");

}  // namespace

HybridState logical_bell_state(const LogicalQubit& q1, const LogicalQubit& q2, BellOutcome b, double alpha,
                               double prune_threshold) {
  const double r = 1.0 / std::sqrt(2.0);
  std::array<Complex, 4> amps{};
  switch (b) {
    case BellOutcome::phi_plus: amps = {r, 0.0, 0.0, r}; break;
    case BellOutcome::phi_minus: amps = {r, 0.0, 0.0, -r}; break;
    case BellOutcome::psi_plus: amps = {0.0, r, r, 0.0}; break;
    case BellOutcome::psi_minus: amps = {0.0, r, -r, 0.0}; break;
  }
  const std::array<LogicalQubit, 2> qs{q1, q2};
  return logical_state(qs, amps, alpha, prune_threshold);
}

HybridState build_channel(double alpha) {
  const std::array<LogicalQubit, 4> qs{kA, kB, kC, kD};
  std::array<Complex, 16> amps{};
  amps[0b0000] = 0.5;
  amps[0b0110] = 0.5;
  amps[0b1001] = 0.5;
  amps[0b1111] = -0.5;
  return logical_state(qs, amps, alpha);
}

HybridState build_input(const InputSecret& secret, double alpha, const LogicalQubit& q) {
  return logical_qubit_state(q, secret.lambda, secret.eta, alpha);
}

HybridState channel_from_ecp(const ECPResult& r) {
  if (r.zero_probability) throw std::invalid_argument("concentration failed; no channel to hand over");
  HybridState s = r.final_state;
  for (const std::string party : {"a", "b", "c", "d"}) {
    std::string upper(1, static_cast<char>(party[0] - 'a' + 'A'));
    s = rename_mode(rename_mode(s, party + ":pol", upper + ":pol"), party, upper);
  }
  const HybridState reference = build_channel(s.alpha());
  if (!s.registry().same_modes(reference.registry())) {
    throw std::invalid_argument("concentration output carries extra modes and cannot serve as a channel");
  }
  return normalize(reorder(s, reference.registry()));
}

namespace {

HybridState bcd_state(const std::array<Complex, 8>& amps, double alpha) {
  const std::array<LogicalQubit, 3> qs{kB, kC, kD};
  return logical_state(qs, amps, alpha);
}

}  // namespace

HybridState psi0_logical(double alpha) {
  const double r = 1.0 / std::sqrt(2.0);
  std::array<Complex, 8> amps{};
  amps[0b000] = r;
  amps[0b110] = r;
  return bcd_state(amps, alpha);
}

HybridState psi1_logical(double alpha) {
  const double r = 1.0 / std::sqrt(2.0);
  std::array<Complex, 8> amps{};
  amps[0b001] = r;
  amps[0b111] = -r;
  return bcd_state(amps, alpha);
}

HybridState alice_table_state(BellOutcome b, const InputSecret& secret, double alpha) {
  const auto p0 = psi0_logical(alpha);
  const auto p1 = psi1_logical(alpha);
  const double sign = (b == BellOutcome::phi_plus || b == BellOutcome::psi_plus) ? 1.0 : -1.0;
  const bool phi = b == BellOutcome::phi_plus || b == BellOutcome::phi_minus;
  const auto& first = phi ? p0 : p1;
  const auto& second = phi ? p1 : p0;
  return normalize(add(scale(first, secret.lambda), scale(second, sign * secret.eta)));
}

namespace {

template <std::size_t N>
std::size_t sample(const std::array<double, N>& probs, Rng& rng) {
  const double u = uniform01(rng);
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < N; ++i) {
    if (probs[i] <= 0.0) continue;
    acc += probs[i];
    last = i;
    if (u < acc) return i;
  }
  return last;
}

struct ZOutcome {
  int bit;
  HybridState rest;
  std::array<double, 2> probabilities;
};

ZOutcome measure_logical_z(const HybridState& s, const LogicalQubit& q, Rng* rng, std::optional<int> forced) {
  const double total = norm_squared(s);
  std::array<std::optional<HybridState>, 2> branches;
  std::array<double, 2> probs{};
  for (int b = 0; b < 2; ++b) {
    auto basis = logical_qubit_state(q, b == 0 ? 1.0 : 0.0, b == 1 ? 1.0 : 0.0, s.alpha());
    branches[b] = partial_inner(basis, s);
    probs[b] = norm_squared(*branches[b]) / total;
  }
  int bit = 0;
  if (forced) {
    bit = *forced;
  } else if (rng) {
    bit = static_cast<int>(sample(probs, *rng));
  } else {
    bit = probs[1] > probs[0] ? 1 : 0;
  }
  if (!(probs[bit] > 1e-14)) throw std::invalid_argument("logical outcome has zero probability");
  return {bit, normalize(*branches[bit]), probs};
}

struct HelperStage {
  LogicalQubit holder;
  std::size_t index;
  std::vector<std::string> outcomes;
  std::vector<double> probabilities;
  HybridState rest;
};

std::string bit_label(const LogicalQubit& q, int bit) { return q.cs_mode + ":" + (bit ? "1_L" : "0_L"); }

HelperStage helper_stage(const HybridState& collapsed, Recoverer who, Rng* rng, std::optional<int> forced) {
  if (who == Recoverer::diana) {
    const auto zb = measure_logical_z(collapsed, kB, rng, forced);
    const auto zc = measure_logical_z(zb.rest, kC, rng, std::nullopt);
    if (zb.bit != zc.bit || zc.probabilities[static_cast<std::size_t>(1 - zb.bit)] > 1e-10) {
      throw std::logic_error("Bob and Charlie obtained different logical outcomes");
    }
    return {kD,
            static_cast<std::size_t>(zb.bit),
            {bit_label(kB, zb.bit), bit_label(kC, zc.bit)},
            {zb.probabilities[0], zb.probabilities[1], zc.probabilities[0], zc.probabilities[1]},
            zc.rest};
  }
  const bool bob = who == Recoverer::bob;
  const auto& h1 = bob ? kC : kB;
  std::optional<BellOutcome> fb;
  if (forced) fb = kBellOutcomes.at(static_cast<std::size_t>(*forced));
  auto m = measure_logical_bell(collapsed, h1, kD, rng, fb);
  return {bob ? kB : kC,
          bell_index(m.outcome),
          {h1.cs_mode + kD.cs_mode + ":" + to_string(m.outcome)},
          {m.probabilities.begin(), m.probabilities.end()},
          std::move(m.collapsed)};
}

constexpr std::array<Pauli, 4> kCandidates{Pauli::I, Pauli::X, Pauli::Z, Pauli::iY};

}  // namespace

BellMeasurement measure_logical_bell(const HybridState& s, const LogicalQubit& q1, const LogicalQubit& q2, Rng* rng,
                                     std::optional<BellOutcome> forced) {
  const double total = norm_squared(s);
  if (!(total > 1e-300)) throw ZeroNorm("Bell measurement on a zero-norm state");
  std::vector<HybridState> branches;
  std::array<double, 4> probs{};
  for (auto b : kBellOutcomes) {
    branches.push_back(partial_inner(logical_bell_state(q1, q2, b, s.alpha()), s));
    probs[bell_index(b)] = norm_squared(branches.back()) / total;
  }
  BellOutcome outcome = BellOutcome::phi_plus;
  if (forced) {
    outcome = *forced;
  } else if (rng) {
    outcome = kBellOutcomes[sample(probs, *rng)];
  } else {
    throw std::invalid_argument("Bell measurement needs an rng or a forced outcome");
  }
  const auto k = bell_index(outcome);
  if (!(probs[k] > 1e-14)) throw std::invalid_argument("Bell outcome has zero probability");
  return {outcome, normalize(branches[k]), probs};
}

BellMeasurement alice_bell_measurement(const HybridState& s, Rng* rng, std::optional<BellOutcome> forced) {
  for (const auto& q : {kA0, kA, kB, kC, kD}) require_logical_span(s, q);
  return measure_logical_bell(s, kA0, kA, rng, forced);
}

CorrectionTable derive_correction_table(Recoverer who, double alpha) {
  const std::array<InputSecret, 2> probes{
      InputSecret{0.6, std::polar(0.8, 0.7)},
      InputSecret{std::polar(std::cos(0.3), 1.9), std::polar(std::sin(0.3), -0.4)},
  };
  const HybridState channel = build_channel(alpha);
  const int helper_count = who == Recoverer::diana ? 2 : 4;
  CorrectionTable table{};
  for (auto a : kBellOutcomes) {
    for (int h = 0; h < helper_count; ++h) {
      std::array<bool, 4> works{true, true, true, true};
      bool reachable = true;
      for (const auto& secret : probes) {
        const auto alice = alice_bell_measurement(tensor(build_input(secret, alpha), channel), nullptr, a);
        std::optional<HelperStage> stage;
        try {
          stage = helper_stage(alice.collapsed, who, nullptr, h);
        } catch (const std::invalid_argument&) {
          reachable = false;
          break;
        }
        const auto target = build_input(secret, alpha, stage->holder);
        for (std::size_t k = 0; k < kCandidates.size(); ++k) {
          const auto out = apply_logical_pauli(stage->rest, stage->holder, kCandidates[k]);
          works[k] = works[k] && std::abs(1.0 - fidelity(out, target)) < 1e-10;
        }
      }
      if (!reachable) continue;
      std::optional<Pauli> found;
      for (std::size_t k = 0; k < kCandidates.size(); ++k) {
        if (!works[k]) continue;
        if (found) throw std::logic_error("correction is not unique for " + to_string(a));
        found = kCandidates[k];
      }
      if (!found) throw std::logic_error("no Pauli restores the secret after " + to_string(a));
      table[bell_index(a)][static_cast<std::size_t>(h)] = found;
    }
  }
  return table;
}

PrintedTableCheck check_printed_tables(double alpha) {
  PrintedTableCheck out;
  const InputSecret probe{0.6, std::polar(0.8, 0.7)};
  const Complex l = probe.lambda;
  const Complex e = probe.eta;
  const auto phi = bell_index(BellOutcome::phi_plus);

  auto state_matches = [&](Recoverer who, int helper, Complex zero_amp, Complex one_amp) {
    const auto alice =
        alice_bell_measurement(tensor(build_input(probe, alpha), build_channel(alpha)), nullptr, BellOutcome::phi_plus);
    const auto stage = helper_stage(alice.collapsed, who, nullptr, helper);
    return std::abs(1.0 - fidelity(stage.rest, logical_qubit_state(stage.holder, zero_amp, one_amp, alpha))) < 1e-10;
  };
  auto expect = [&](bool& flag, const std::string& who, const CorrectionTable& t, std::size_t h, Pauli p,
                    bool state_ok) {
    if (t[phi][h] != p || !state_ok) {
      flag = false;
      out.mismatches.push_back(who + " row " + std::to_string(h) + ": expected " + to_string(p) +
                               (t[phi][h] ? ", derived " + to_string(*t[phi][h]) : ", derived none") +
                               (state_ok ? "" : ", pre-correction state differs"));
    }
  };

  const auto diana = derive_correction_table(Recoverer::diana, alpha);
  out.diana_rows = true;
  expect(out.diana_rows, "diana", diana, 0, Pauli::I, state_matches(Recoverer::diana, 0, l, e));
  expect(out.diana_rows, "diana", diana, 1, Pauli::Z, state_matches(Recoverer::diana, 1, l, -e));

  for (auto who : {Recoverer::bob, Recoverer::charlie}) {
    const auto t = derive_correction_table(who, alpha);
    bool& flag = who == Recoverer::bob ? out.bob_rows : out.charlie_rows;
    flag = true;
    const std::string name = to_string(who);
    expect(flag, name, t, 0, Pauli::Z, state_matches(who, 0, l, -e));
    expect(flag, name, t, 1, Pauli::I, state_matches(who, 1, l, e));
    expect(flag, name, t, 2, Pauli::X, state_matches(who, 2, e, l));
    expect(flag, name, t, 3, Pauli::iY, state_matches(who, 3, e, -l));
  }
  return out;
}

HQISTranscript recover(const HybridState& collapsed, BellOutcome alice_outcome, const InputSecret& secret,
                       Recoverer who, const CorrectionTable& table, Rng* rng, std::optional<int> forced_helper) {
  auto stage = helper_stage(collapsed, who, rng, forced_helper);
  const auto& entry = table[bell_index(alice_outcome)][stage.index];
  if (!entry) throw std::logic_error("no correction recorded for this branch");
  const auto out = apply_logical_pauli(stage.rest, stage.holder, *entry);

  HQISTranscript t;
  t.secret = secret;
  t.alice_outcome = alice_outcome;
  t.recoverer = who;
  t.helper_outcomes = std::move(stage.outcomes);
  t.helper_probabilities = std::move(stage.probabilities);
  t.corrections = {*entry};
  t.fidelity = fidelity(out, build_input(secret, collapsed.alpha(), stage.holder));
  return t;
}

HQISTranscript diana_recovery(const HybridState& collapsed, BellOutcome alice_outcome, const InputSecret& secret,
                              Rng& rng) {
  return recover(collapsed, alice_outcome, secret, Recoverer::diana,
                 derive_correction_table(Recoverer::diana, collapsed.alpha()), &rng);
}

HQISTranscript bob_recovery(const HybridState& collapsed, BellOutcome alice_outcome, const InputSecret& secret,
                            Rng& rng) {
  return recover(collapsed, alice_outcome, secret, Recoverer::bob,
                 derive_correction_table(Recoverer::bob, collapsed.alpha()), &rng);
}

HQISTranscript charlie_recovery(const HybridState& collapsed, BellOutcome alice_outcome, const InputSecret& secret,
                                Rng& rng) {
  return recover(collapsed, alice_outcome, secret, Recoverer::charlie,
                 derive_correction_table(Recoverer::charlie, collapsed.alpha()), &rng);
}

Eigen::Matrix2cd agent_reduced_density(const HybridState& collapsed, const LogicalQubit& holder) {
  std::vector<LogicalQubit> others;
  for (const auto& q : {kB, kC, kD}) {
    if (!(q == holder)) others.push_back(q);
  }
  if (others.size() != 2) throw std::invalid_argument("holder must be one of B, C, D");
  const std::array<LogicalQubit, 1> keep{holder};
  return reduced_density_logical(collapsed, keep, others);
}

std::vector<HQISTranscript> run_protocol(const ProtocolOptions& o) {
  if (o.trials == 0) throw std::invalid_argument("trials must be at least 1");
  if (o.secret) o.secret->validate();
  HybridState channel = o.channel ? *o.channel : build_channel(o.alpha);
  if (channel.alpha() != o.alpha) throw std::invalid_argument("channel alpha differs from the protocol alpha");
  if (!(channel.registry() == build_channel(o.alpha).registry())) {
    throw RegistryMismatch("channel must be over qubits A, B, C, D");
  }
  channel = normalize(channel);
  const CorrectionTable table = derive_correction_table(o.recoverer, o.alpha);

  std::vector<HQISTranscript> out;
  out.reserve(o.trials);
  for (std::size_t i = 0; i < o.trials; ++i) {
    std::seed_seq seq{static_cast<std::uint32_t>(o.seed), static_cast<std::uint32_t>(o.seed >> 32),
                      static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(static_cast<std::uint64_t>(i) >> 32)};
    Rng rng(seq);
    const InputSecret secret = o.secret ? *o.secret : random_secret(rng);
    const auto alice = alice_bell_measurement(tensor(build_input(secret, o.alpha), channel), &rng);
    auto t = recover(alice.collapsed, alice.outcome, secret, o.recoverer, table, &rng);
    t.trial = i;
    t.branch_probabilities = alice.probabilities;
    out.push_back(std::move(t));
  }
  return out;
}

namespace {

// H/V Bell states written over |+->: <+|H> = <-|H> = <+|V> = 1/sqrt2, <-|V> = -1/sqrt2.
HybridState pol_bell(const std::string& m1, const std::string& m2, int which, double alpha) {
  const double r = 1.0 / std::sqrt(2.0);
  double hv[2][2] = {{0, 0}, {0, 0}};
  switch (which) {
    case 0: hv[0][0] = r; hv[1][1] = r; break;
    case 1: hv[0][0] = r; hv[1][1] = -r; break;
    case 2: hv[0][1] = r; hv[1][0] = r; break;
    default: hv[0][1] = r; hv[1][0] = -r; break;
  }
  auto u = [&](int s, int i) { return (s == 1 && i == 1) ? -r : r; };
  std::vector<Term> terms;
  for (int s = 0; s < 2; ++s) {
    for (int t = 0; t < 2; ++t) {
      double c = 0.0;
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) c += hv[i][j] * u(s, i) * u(t, j);
      }
      terms.push_back({c, {s ? PolLabel::minus : PolLabel::plus, t ? PolLabel::minus : PolLabel::plus}});
    }
  }
  return {ModeRegistry({{m1, ModeKind::polarization}, {m2, ModeKind::polarization}}), std::move(terms), alpha, 0.0};
}

double quasi_norm(int which, double alpha) {
  const double sign = (which % 2 == 0) ? 1.0 : -1.0;
  return 1.0 / std::sqrt(2.0 * (1.0 + sign * std::exp(-4.0 * alpha * alpha)));
}

// phi_+- = N(|a,a> +- |-a,-a>), psi_+- = N(|a,-a> +- |-a,a>), indices 0..3.
HybridState quasi_bell(const std::string& m1, const std::string& m2, int which, double alpha) {
  const double n = quasi_norm(which, alpha);
  const double sign = (which % 2 == 0) ? 1.0 : -1.0;
  const int y = which < 2 ? 1 : -1;
  std::vector<Term> terms{{n, {CoherentLabel::integer(1), CoherentLabel::integer(y)}},
                          {sign * n, {CoherentLabel::integer(-1), CoherentLabel::integer(-y)}}};
  return {ModeRegistry({{m1, ModeKind::coherent}, {m2, ModeKind::coherent}}), std::move(terms), alpha, 0.0};
}

const std::array<const char*, 4> kPolNames{"phi+", "phi-", "psi+", "psi-"};
const std::array<const char*, 4> kQuasiNames{"phi_+", "phi_-", "psi_+", "psi_-"};

struct PrintedTerm {
  int pol;
  int quasi;
  double sign;
};

std::array<PrintedTerm, 2> printed_terms(BellOutcome b) {
  switch (b) {
    case BellOutcome::phi_plus: return {{{0, 0, 1.0}, {2, 1, 1.0}}};
    case BellOutcome::phi_minus: return {{{0, 0, 1.0}, {2, 1, -1.0}}};
    case BellOutcome::psi_plus: return {{{2, 2, 1.0}, {3, 3, 1.0}}};
    case BellOutcome::psi_minus: return {{{2, 2, 1.0}, {3, 3, -1.0}}};
  }
  return {};
}

double distance(const HybridState& x, const HybridState& y) {
  return std::sqrt(std::max(0.0, norm_squared(add(x, scale(y, -1.0)))));
}

}  // namespace

BellDecompositionReport verify_bell_decomposition(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  BellDecompositionReport report;
  report.alpha = alpha;
  report.n_plus = quasi_norm(0, alpha);
  report.n_minus = quasi_norm(1, alpha);

  for (auto b : kBellOutcomes) {
    auto& rep = report.identities[bell_index(b)];
    rep.logical = b;
    const HybridState lhs = logical_bell_state(kA0, kA, b, alpha, 0.0);
    HybridState recon = lhs.with_terms({});

    for (int k = 0; k < 4; ++k) {
      const auto pol = pol_bell(kA0.pol_mode, kA.pol_mode, k, alpha);
      const auto cv = partial_inner(pol, lhs);
      if (norm_squared(cv) < 1e-24) continue;
      int best = -1;
      double best_residual = 0.0;
      Complex best_weight;
      for (int j = 0; j < 4; ++j) {
        const auto q = quasi_bell(kA0.cs_mode, kA.cs_mode, j, alpha);
        const Complex w = inner_product(q, cv);
        const double res = distance(cv, scale(q, w));
        if (best < 0 || res < best_residual) {
          best = j;
          best_residual = res;
          best_weight = w;
        }
      }
      const auto q = quasi_bell(kA0.cs_mode, kA.cs_mode, best, alpha);
      rep.components.push_back(
          {kPolNames[static_cast<std::size_t>(k)], kQuasiNames[static_cast<std::size_t>(best)], best_weight,
           best_weight * quasi_norm(best, alpha)});
      recon = add(recon, tensor(pol, scale(q, best_weight)));
    }
    rep.derived_residual = distance(lhs, recon);

    auto printed = [&](auto weight) {
      HybridState sum = lhs.with_terms({});
      for (const auto& t : printed_terms(b)) {
        const auto pol = pol_bell(kA0.pol_mode, kA.pol_mode, t.pol, alpha);
        const auto q = quasi_bell(kA0.cs_mode, kA.cs_mode, t.quasi, alpha);
        sum = add(sum, tensor(pol, scale(q, t.sign * weight(quasi_norm(t.quasi, alpha)))));
      }
      return distance(lhs, sum);
    };
    rep.printed_residual = printed([](double) { return 1.0 / std::sqrt(2.0); });
    rep.printed_inv_norm_sqrt2_residual = printed([](double n) { return 1.0 / (std::sqrt(2.0) * n); });
    rep.printed_inv_norm_half_residual = printed([](double n) { return 1.0 / (2.0 * n); });
    rep.printed_pairing_matches = rep.printed_inv_norm_half_residual < 1e-10;

    const auto pt = printed_terms(b);
    rep.printed_form = std::string(kPolNames[static_cast<std::size_t>(pt[0].pol)]) + " " +
                       kQuasiNames[static_cast<std::size_t>(pt[0].quasi)] + (pt[1].sign > 0 ? " + " : " - ") +
                       kPolNames[static_cast<std::size_t>(pt[1].pol)] + " " +
                       kQuasiNames[static_cast<std::size_t>(pt[1].quasi)];
  }
  return report;
}

}  // namespace hesim
