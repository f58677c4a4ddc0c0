#include "hesim/ecp.hpp"

#include <cmath>
#include <stdexcept>

#include "hesim/logical.hpp"

namespace hesim {

void ECPParams::validate(bool allow_zero) const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be positive and finite");
  for (double c : {zeta, beta, gamma, delta}) {
    if (!std::isfinite(c)) throw std::invalid_argument("coefficients must be finite");
    if (!allow_zero && c == 0.0) throw std::invalid_argument("coefficients must be nonzero");
  }
  const double sum = zeta * zeta + beta * beta + gamma * gamma + delta * delta;
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("coefficients must satisfy zeta^2+beta^2+gamma^2+delta^2 = 1");
  }
}

double ECPParams::n1() const {
  const double e2 = std::exp(-2.0 * alpha * alpha);
  const double e4 = std::exp(-4.0 * alpha * alpha);
  const double inv2 = zeta * zeta + beta * beta + delta * delta + gamma * gamma +
                      2.0 * (zeta * beta + zeta * gamma + delta * beta + gamma * delta) * e2 +
                      2.0 * (gamma * beta + delta * zeta) * e4;
  return 1.0 / std::sqrt(inv2);
}

double ECPParams::n2() const {
  const double e2 = std::exp(-2.0 * alpha * alpha);
  const double inv2 = zeta * zeta * beta * beta + delta * delta * gamma * gamma + 2.0 * zeta * beta * delta * gamma * e2;
  return 1.0 / std::sqrt(inv2);
}

std::pair<double, double> snapped_cos_sin(double theta) {
  constexpr double quarter = std::numbers::pi / 2;
  const double n = std::round(theta / quarter);
  if (std::abs(theta - n * quarter) < 1e-12) {
    static constexpr std::pair<double, double> exact[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
    const auto k = static_cast<long long>(n);
    return exact[((k % 4) + 4) % 4];
  }
  return {std::cos(theta), std::sin(theta)};
}

ECPParams AngleParams::to_params(double alpha) const {
  const auto [c1, s1] = snapped_cos_sin(theta1);
  const auto [c2, s2] = snapped_cos_sin(theta2);
  const auto [c3, s3] = snapped_cos_sin(theta3);
  ECPParams p;
  p.zeta = c3;
  p.beta = s3 * c2;
  p.delta = s3 * s2 * c1;
  p.gamma = s3 * s2 * s1;
  p.alpha = alpha;
  return p;
}

namespace {

const std::array<LogicalQubit, 4> kParties{named_qubit("a"), named_qubit("b"), named_qubit("c"), named_qubit("d")};

// Amplitudes over |abcd>_L: 0000 zeta, 0110 beta, 1001 gamma, 1111 -delta.
HybridState omega_with(double zeta, double beta, double gamma, double delta, double alpha) {
  std::array<Complex, 16> amps{};
  amps[0b0000] = zeta;
  amps[0b0110] = beta;
  amps[0b1001] = gamma;
  amps[0b1111] = -delta;
  return logical_state(kParties, amps, alpha);
}

HybridState cv_state(std::vector<std::string> names, std::vector<std::pair<double, std::vector<int>>> terms,
                     double alpha) {
  std::vector<Mode> modes;
  for (auto& n : names) modes.push_back({std::move(n), ModeKind::coherent});
  std::vector<Term> out;
  for (const auto& [amp, labels] : terms) {
    Term t{amp, {}};
    for (int x : labels) t.labels.emplace_back(CoherentLabel::integer(x));
    out.push_back(std::move(t));
  }
  return {ModeRegistry(std::move(modes)), std::move(out), alpha};
}

}  // namespace

HybridState build_nonmax_omega(const ECPParams& p) {
  p.validate(true);
  return omega_with(p.zeta, p.beta, p.gamma, p.delta, p.alpha);
}

HybridState build_target_omega(double alpha) { return omega_with(0.5, 0.5, 0.5, 0.5, alpha); }

HybridState build_two_mode_ancilla(const ECPParams& p) {
  p.validate(true);
  return normalize(cv_state({"e1", "f1"},
                            {{p.zeta, {-1, 1}}, {p.beta, {1, 1}}, {p.gamma, {-1, -1}}, {p.delta, {1, -1}}}, p.alpha));
}

HybridState build_single_mode_ancilla(const ECPParams& p) {
  p.validate(true);
  return normalize(cv_state({"g1"}, {{p.zeta * p.beta, {-1}}, {p.delta * p.gamma, {1}}}, p.alpha));
}

double success_probability_closed_form(const ECPParams& p) {
  p.validate(true);
  if (p.degenerate()) return 0.0;
  const double x = p.n1() * p.n2() * p.zeta * p.beta * p.delta * p.gamma;
  return 4.0 * x * x;
}

namespace {

class Pipeline {
 public:
  Pipeline(const ECPParams& p, const ECPOptions& o, ECPResult& r) : p_(p), o_(o), r_(r), s_(build_nonmax_omega(p)) {}

  bool run() {
    s_ = rename_mode(rename_mode(rename_mode(s_, "a", "a1"), "c", "c1"), "d", "d1");
    snapshot("non-maximal state");
    s_ = tensor(s_, build_two_mode_ancilla(p_));
    snapshot("with two-mode ancilla");
    s_ = rename_pair(apply_beamsplitter(s_, "c1", "e1"), {"c1", "e1"}, {"c2", "e2"});
    snapshot("BS5 c1,e1");
    s_ = rename_pair(apply_beamsplitter(s_, "d1", "f1"), {"d1", "f1"}, {"d2", "f2"});
    snapshot("BS3 d1,f1");
    if (!vacuum("e2") || !vacuum("f2")) return false;
    s_ = rename_mode(split_with_vacuum(s_, "c2", "c4"), "c2", "c3");
    snapshot("BS6 c2");
    s_ = rename_mode(split_with_vacuum(s_, "d2", "d4"), "d2", "d3");
    snapshot("BS4 d2");
    if (!parity("c4", "c:pol", 0) || !parity("d4", "d:pol", 1)) return false;
    s_ = tensor(s_, build_single_mode_ancilla(p_));
    snapshot("with single-mode ancilla");
    s_ = rename_pair(apply_beamsplitter(s_, "a1", "g1"), {"a1", "g1"}, {"a2", "g2"});
    snapshot("BS1 a1,g1");
    if (!vacuum("g2")) return false;
    s_ = rename_mode(split_with_vacuum(s_, "a2", "a4"), "a2", "a3");
    snapshot("BS2 a2");
    if (!parity("a4", "a:pol", 2)) return false;
    s_ = rename_mode(rename_mode(rename_mode(s_, "a3", "a"), "c3", "c"), "d3", "d");
    return true;
  }

  const HybridState& state() const { return s_; }
  double accepted() const { return accepted_; }
  double parity_probability() const { return parity_p_; }

 private:
  static HybridState rename_pair(const HybridState& s, std::pair<const char*, const char*> from,
                                 std::pair<const char*, const char*> to) {
    return rename_mode(rename_mode(s, from.first, to.first), from.second, to.second);
  }

  void snapshot(const std::string& name, std::optional<MeasurementRecord> rec = std::nullopt) {
    if (o_.keep_trace) r_.stage_trace.push_back({name, s_, std::move(rec)});
  }

  bool alive() const { return !s_.empty() && norm_squared(s_) > 1e-300; }

  bool vacuum(const std::string& mode) {
    auto m = postselect_vacuum(s_, mode, o_.model.vacuum);
    s_ = std::move(m.state);
    accepted_ *= m.record.branch_probability;
    snapshot("vacuum " + mode, m.record);
    return alive();
  }

  bool parity(const std::string& mode, const std::string& pol, int index) {
    MeasuredState m = [&] {
      if (o_.model.parity == FidelityMode::ideal) {
        return measure_photon_parity_discard(s_, mode, FidelityMode::ideal, nullptr);
      }
      std::optional<int> forced;
      if (o_.forced_parities) forced = (*o_.forced_parities)[static_cast<std::size_t>(index)];
      if (o_.model.vacuum == FidelityMode::ideal) {
        return measure_photon_parity_discard(s_, mode, FidelityMode::exact, o_.rng, forced, pol);
      }
      if (!forced) {
        auto even = measure_photon_parity_retain(s_, mode, 0);
        if (uniform01(*o_.rng) < even.record.branch_probability) return even;
        forced = 1;
      }
      auto kept = measure_photon_parity_retain(s_, mode, *forced);
      if (*forced == 1) kept.state = apply_polarization_z(kept.state, pol);
      return kept;
    }();
    s_ = std::move(m.state);
    parity_p_ *= m.record.branch_probability;
    if (o_.model.parity == FidelityMode::exact) {
      r_.parities.push_back(m.record.outcome == MeasurementOutcome::odd ? 1 : 0);
    }
    snapshot("parity " + mode, m.record);
    return alive();
  }

  const ECPParams& p_;
  const ECPOptions& o_;
  ECPResult& r_;
  HybridState s_;
  double accepted_ = 1.0;
  double parity_p_ = 1.0;
};

}  // namespace

ECPResult run_ecp(const ECPParams& p, const ECPOptions& o) {
  p.validate(true);
  if (o.model.vacuum == FidelityMode::exact && o.model.parity == FidelityMode::ideal) {
    throw std::invalid_argument("exact vacuum detection requires exact parity detection");
  }
  if (o.model.parity == FidelityMode::exact && !o.forced_parities && o.rng == nullptr) {
    throw std::invalid_argument("exact parity detection needs an rng or forced outcomes");
  }

  ECPResult r;
  r.model = o.model;
  r.success_probability_closed_form = success_probability_closed_form(p);

  Pipeline pipe(p, o, r);
  const bool ok = pipe.run();
  r.success_probability = ok ? pipe.accepted() : 0.0;
  r.parity_branch_probability = ok ? pipe.parity_probability() : 0.0;
  if (o.model.vacuum == FidelityMode::exact) r.success_probability_exact = r.success_probability;

  if (o.model.vacuum == FidelityMode::ideal) {
    r.success_probability_ideal = r.success_probability;
  } else if (o.compare_ideal) {
    ECPOptions ideal;
    ideal.keep_trace = false;
    ideal.compare_ideal = false;
    r.success_probability_ideal = run_ecp(p, ideal).success_probability;
  }

  if (!ok) {
    r.zero_probability = true;
    return r;
  }

  const HybridState target = build_target_omega(p.alpha);
  std::vector<Mode> order = target.registry().modes();
  for (const auto& m : pipe.state().registry()) {
    if (!target.registry().contains(m.name)) order.push_back(m);
  }
  r.final_state = normalize(reorder(pipe.state(), ModeRegistry(std::move(order))));
  r.fidelity = fidelity_traced(r.final_state, target);
  if (o.keep_trace) r.stage_trace.push_back({"final", r.final_state, std::nullopt});
  return r;
}

ECPResult run_ecp(const ECPParams& p, FidelityMode fm, Rng* rng) {
  ECPOptions o;
  if (fm == FidelityMode::exact) {
    if (rng == nullptr) throw std::invalid_argument("exact mode needs a seeded rng");
    o.model = kExactDetection;
    o.rng = rng;
  }
  return run_ecp(p, o);
}

ExactAverage exact_average(const ECPParams& p, DetectionModel model) {
  ExactAverage out;
  // Joint weight of (success, branch); the g2 acceptance depends on the c4, d4 outcomes.
  std::array<double, 8> joint{};
  for (int b = 0; b < 8; ++b) {
    ECPOptions o;
    o.model = model;
    o.forced_parities = std::array<int, 3>{(b >> 2) & 1, (b >> 1) & 1, b & 1};
    o.keep_trace = false;
    o.compare_ideal = false;
    const auto r = run_ecp(p, o);
    const auto k = static_cast<std::size_t>(b);
    joint[k] = r.success_probability * r.parity_branch_probability;
    out.branch_fidelity[k] = r.zero_probability ? 0.0 : r.fidelity;
    out.success_probability += joint[k];
  }
  for (std::size_t k = 0; k < 8; ++k) {
    out.branch_probability[k] = out.success_probability > 0.0 ? joint[k] / out.success_probability : 0.0;
    out.mean_fidelity += out.branch_probability[k] * out.branch_fidelity[k];
  }
  return out;
}

}  // namespace hesim
