#include "hesim/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hesim/ecp.hpp"
#include "hesim/hqis.hpp"
#include "hesim/hqis_json.hpp"
#include "hesim/state_json.hpp"
#include "hesim/sweep.hpp"

namespace hesim::cli {

namespace {

using nlohmann::json;

constexpr double kCheckTolerance = 1e-10;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct VerificationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string g17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::filesystem::path resolve_output(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("HESIM_OUTPUT_DIR"); dir != nullptr && *dir != '\0') return dir / p;
  }
  return p;
}

// Writes to --output when given, otherwise to `out`.
void emit(const std::string& output, const std::string& text, std::ostream& out) {
  if (output.empty()) {
    out << text;
    return;
  }
  const auto path = resolve_output(output);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path.string());
  f << text;
  if (!f.flush()) throw InputError("cannot write " + path.string());
}

std::string cplx(Complex c) {
  std::ostringstream os;
  os << g17(c.real()) << (c.imag() < 0 ? "-" : "+") << g17(std::abs(c.imag())) << "i";
  return os.str();
}

// ---- ecp run ----

struct EcpRunConfig {
  double alpha = 0.0;
  std::vector<double> angles;
  std::optional<double> zeta, beta, gamma, delta;
  std::string mode = "ideal";
  std::uint64_t seed = 0;
  std::string format = "text";
  std::string output;
};

ECPParams ecp_params(const EcpRunConfig& c) {
  const bool raw = c.zeta || c.beta || c.gamma || c.delta;
  if (raw && !c.angles.empty()) throw InputError("--angles and raw coefficients are mutually exclusive");
  if (!raw && c.angles.empty()) throw InputError("give --angles or all of --zeta --beta --gamma --delta");
  ECPParams p;
  if (raw) {
    if (!(c.zeta && c.beta && c.gamma && c.delta)) throw InputError("raw coefficients need all four values");
    p = {*c.zeta, *c.beta, *c.gamma, *c.delta, c.alpha};
  } else {
    if (c.angles.size() != 3) throw InputError("--angles takes theta1,theta2,theta3");
    p = AngleParams{c.angles[0], c.angles[1], c.angles[2]}.to_params(c.alpha);
  }
  p.validate(true);
  return p;
}

int cmd_ecp_run(const EcpRunConfig& c, std::ostream& out) {
  const ECPParams p = ecp_params(c);
  Rng rng(c.seed);
  ECPOptions o;
  o.keep_trace = false;
  if (c.mode == "exact") {
    o.model = kExactDetection;
    o.rng = &rng;
  }
  const ECPResult r = run_ecp(p, o);

  std::vector<std::string> failures;
  if (std::abs(r.success_probability_ideal - r.success_probability_closed_form) > kCheckTolerance) {
    failures.push_back("simulated P differs from the closed form");
  }
  if (c.mode == "ideal" && !r.zero_probability && std::abs(r.fidelity - 1.0) > kCheckTolerance) {
    failures.push_back("ideal output fidelity differs from 1");
  }

  std::string text;
  if (c.format == "json") {
    json j{{"zeta", p.zeta},
           {"beta", p.beta},
           {"gamma", p.gamma},
           {"delta", p.delta},
           {"alpha", p.alpha},
           {"mode", c.mode},
           {"P_closed", r.success_probability_closed_form},
           {"P_sim", r.success_probability},
           {"P_ideal", r.success_probability_ideal},
           {"zero_probability", r.zero_probability},
           {"fidelity", r.fidelity}};
    if (c.mode == "exact") {
      j["seed"] = c.seed;
      j["parities"] = r.parities;
      j["parity_branch_probability"] = r.parity_branch_probability;
    }
    if (!r.zero_probability) j["final_state"] = to_json(r.final_state);
    text = j.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "coefficients  zeta=" << g17(p.zeta) << " beta=" << g17(p.beta) << " gamma=" << g17(p.gamma)
       << " delta=" << g17(p.delta) << "\n";
    os << "alpha         " << g17(p.alpha) << "\n";
    os << "mode          " << c.mode << "\n";
    os << "P_closed      " << g17(r.success_probability_closed_form) << "\n";
    os << "P_sim         " << g17(r.success_probability) << "\n";
    if (c.mode == "exact") {
      os << "P_ideal       " << g17(r.success_probability_ideal) << "\n";
      os << "parities      ";
      for (std::size_t i = 0; i < r.parities.size(); ++i) os << (i ? "," : "") << r.parities[i];
      os << "  (seed " << c.seed << ", branch probability " << g17(r.parity_branch_probability) << ")\n";
    }
    if (r.zero_probability) {
      os << "fidelity      n/a (zero success probability)\n";
    } else {
      os << "fidelity      " << g17(r.fidelity) << "\n";
      os << "terms         " << r.final_state.size() << "\n";
    }
    text = os.str();
  }
  emit(c.output, text, out);
  if (!failures.empty()) throw VerificationFailure(failures.front());
  return kExitOk;
}

// ---- ecp sweep ----

struct EcpSweepConfig {
  std::vector<std::string> axes{"theta1"};
  std::size_t points = 181;
  double lo = 0.0;
  double hi = std::numbers::pi;
  std::vector<double> alphas{0.5, 1.0, 2.0};
  double theta1 = std::numbers::pi / 4;
  double theta2 = std::numbers::pi / 4;
  double theta3 = 3 * std::numbers::pi / 8;
  unsigned threads = 0;
  std::string output;
};

int cmd_ecp_sweep(const EcpSweepConfig& c, std::ostream& out, std::ostream& err) {
  if (c.axes.empty() || c.axes.size() > 2) throw InputError("--axis takes one or two axes");
  if (c.points < 2) throw InputError("--points must be at least 2");
  if (c.alphas.empty()) throw InputError("--alphas needs at least one value");
  for (double a : c.alphas) {
    if (!(a > 0.0) || !std::isfinite(a)) throw InputError("alpha values must be positive");
  }

  SweepSpec spec;
  spec.fixed = {c.theta1, c.theta2, c.theta3};
  spec.alphas = c.alphas;
  spec.threads = c.threads;
  for (const auto& name : c.axes) spec.grids.push_back({parse_sweep_axis(name), linspace(c.lo, c.hi, c.points)});
  if (spec.grids.size() == 2 && spec.grids[0].axis == spec.grids[1].axis) throw InputError("axes must differ");
  const auto rows = run_sweep(spec);

  std::ostringstream csv;
  write_sweep_csv(csv, rows);
  std::string output = c.output;
  if (output.empty() && std::getenv("HESIM_OUTPUT_DIR") != nullptr) output = "sweep.csv";
  emit(output, csv.str(), out);

  // Reference angles for comparing the alpha series by hand.
  std::ostream& note = output.empty() ? err : out;
  const AngleParams ref{};
  for (double a : c.alphas) {
    const ECPParams p = ref.to_params(a);
    note << "reference P(theta1=pi/4, theta2=pi/4, theta3=3pi/8, alpha=" << g17(a)
         << ") = " << g17(success_probability_closed_form(p)) << "\n";
  }
  if (!output.empty()) out << "wrote " << rows.size() << " rows to " << resolve_output(output).string() << "\n";
  return kExitOk;
}

// ---- hqis ----

struct HqisRunConfig {
  std::optional<double> lambda_re, lambda_im, eta_re, eta_im;
  std::string recoverer = "diana";
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  double alpha = 1.0;
  std::string channel = "ideal";
  std::string output;
};

int cmd_hqis_run(const HqisRunConfig& c, std::ostream& out) {
  if (!(c.alpha > 0.0) || !std::isfinite(c.alpha)) throw InputError("alpha must be positive");
  if (c.trials == 0) throw InputError("--trials must be at least 1");
  ProtocolOptions o;
  o.recoverer = parse_recoverer(c.recoverer);
  o.alpha = c.alpha;
  o.seed = c.seed;
  o.trials = c.trials;
  if (c.lambda_re || c.lambda_im || c.eta_re || c.eta_im) {
    InputSecret s{{c.lambda_re.value_or(0.0), c.lambda_im.value_or(0.0)},
                  {c.eta_re.value_or(0.0), c.eta_im.value_or(0.0)}};
    const double n2 = std::norm(s.lambda) + std::norm(s.eta);
    if (!std::isfinite(n2) || std::abs(n2 - 1.0) > 1e-9) throw InputError("secret is not normalized within 1e-9");
    const double n = std::sqrt(n2);
    s.lambda /= n;
    s.eta /= n;
    o.secret = s;
  }
  if (c.channel == "ecp") {
    ECPOptions eo;
    eo.keep_trace = false;
    const ECPResult r = run_ecp(ECPParams{0.5, 0.5, 0.5, 0.5, c.alpha}, eo);
    o.channel = channel_from_ecp(r);
  }

  const auto transcripts = run_protocol(o);
  json all = json::array();
  std::size_t bad = 0;
  for (const auto& t : transcripts) {
    if (std::abs(t.fidelity - 1.0) > kCheckTolerance) ++bad;
    all.push_back(to_json(t));
  }
  emit(c.output, all.dump(2) + "\n", out);
  if (bad > 0) throw VerificationFailure(std::to_string(bad) + " transcript(s) with fidelity off 1");
  return kExitOk;
}

struct HqisTablesConfig {
  double alpha = 1.0;
  std::string format = "text";
  std::string output;
};

std::string table_text(const CorrectionTable& table, Recoverer who) {
  std::ostringstream os;
  os << to_string(who) << "\n";
  const std::size_t helpers = who == Recoverer::diana ? 2 : 4;
  for (auto a : kBellOutcomes) {
    for (std::size_t h = 0; h < helpers; ++h) {
      const auto& e = table[static_cast<std::size_t>(a)][h];
      const std::string helper =
          who == Recoverer::diana ? (h == 0 ? "B,C=0_L 0_L" : "B,C=1_L 1_L") : to_string(kBellOutcomes[h]);
      os << "  " << to_string(a) << ", " << helper << " -> " << (e ? to_string(*e) : "none") << "\n";
    }
  }
  return os.str();
}

int cmd_hqis_tables(const HqisTablesConfig& c, std::ostream& out) {
  if (!(c.alpha > 0.0) || !std::isfinite(c.alpha)) throw InputError("alpha must be positive");
  const auto check = check_printed_tables(c.alpha);
  std::string text;
  if (c.format == "json") {
    json j{{"alpha", c.alpha}, {"tables", json::array()}};
    for (auto who : {Recoverer::diana, Recoverer::bob, Recoverer::charlie}) {
      j["tables"].push_back(to_json(derive_correction_table(who, c.alpha), who));
    }
    j["printed_rows"] = {{"diana", check.diana_rows},
                         {"bob", check.bob_rows},
                         {"charlie", check.charlie_rows},
                         {"mismatches", check.mismatches}};
    text = j.dump(2) + "\n";
  } else {
    std::ostringstream os;
    for (auto who : {Recoverer::diana, Recoverer::bob, Recoverer::charlie}) {
      os << table_text(derive_correction_table(who, c.alpha), who);
    }
    os << "printed rows: diana " << (check.diana_rows ? "match" : "MISMATCH") << ", bob "
       << (check.bob_rows ? "match" : "MISMATCH") << ", charlie " << (check.charlie_rows ? "match" : "MISMATCH")
       << "\n";
    for (const auto& m : check.mismatches) os << "  " << m << "\n";
    text = os.str();
  }
  emit(c.output, text, out);
  if (!check.ok()) throw VerificationFailure("derived tables disagree with the printed rows");
  return kExitOk;
}

int cmd_hqis_audit(const HqisTablesConfig& c, std::ostream& out) {
  if (!(c.alpha > 0.0) || !std::isfinite(c.alpha)) throw InputError("alpha must be positive");
  const auto report = verify_bell_decomposition(c.alpha);
  bool ok = true;
  for (const auto& id : report.identities) ok = ok && id.derived_residual < 1e-12;

  std::string text;
  if (c.format == "json") {
    text = to_json(report).dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "alpha " << g17(report.alpha) << "  N+ " << g17(report.n_plus) << "  N- " << g17(report.n_minus) << "\n";
    for (const auto& id : report.identities) {
      os << to_string(id.logical) << " =";
      for (const auto& comp : id.components) {
        os << "\n    " << cplx(comp.weight) << " |" << comp.pol_bell << "> |" << comp.quasi_bell
           << ">   (weight*N = " << cplx(comp.weight_times_norm) << ")";
      }
      os << "\n  derived residual       " << g17(id.derived_residual) << "\n";
      os << "  printed form           " << id.printed_form << "\n";
      os << "  printed, unweighted    " << g17(id.printed_residual) << "\n";
      os << "  printed, 1/(sqrt2 N)   " << g17(id.printed_inv_norm_sqrt2_residual) << "\n";
      os << "  printed, 1/(2N)        " << g17(id.printed_inv_norm_half_residual) << "\n";
      os << "  printed pairing holds  " << (id.printed_pairing_matches ? "yes" : "no") << "\n";
    }
    text = os.str();
  }
  emit(c.output, text, out);
  if (!ok) throw VerificationFailure("logical Bell expansion residual above 1e-12");
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact simulator for hybrid polarization / coherent-state entanglement"};
  app.name("hesim");
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  auto* ecp = app.add_subcommand("ecp", "Entanglement concentration");
  ecp->require_subcommand(1);
  EcpRunConfig er;
  auto* ecp_run = ecp->add_subcommand("run", "Run the concentration pipeline once");
  ecp_run->add_option("--alpha", er.alpha, "Coherent amplitude")->required();
  auto* angles = ecp_run->add_option("--angles", er.angles,
                                     "theta1,theta2,theta3 in radians (pi/4 = 0.7853981634, 3pi/8 = 1.1780972451)")
                     ->delimiter(',')
                     ->expected(3);
  for (auto [flag, slot] : {std::pair{"--zeta", &er.zeta}, std::pair{"--beta", &er.beta},
                            std::pair{"--gamma", &er.gamma}, std::pair{"--delta", &er.delta}}) {
    ecp_run->add_option(flag, *slot, "Raw coefficient")->excludes(angles);
  }
  ecp_run->add_option("--mode", er.mode, "ideal (default) or exact detection")
      ->check(CLI::IsMember({"ideal", "exact"}));
  ecp_run->add_option("--seed", er.seed, "Parity sampling seed for --mode exact");
  ecp_run->add_option("--format", er.format)->check(CLI::IsMember({"text", "json"}));
  ecp_run->add_option("--output", er.output, "Write to this file instead of stdout");

  EcpSweepConfig es;
  auto* ecp_sweep = ecp->add_subcommand("sweep", "Tabulate P over a theta or alpha grid as CSV");
  ecp_sweep->add_option("--axis", es.axes, "theta1, theta2, theta3 or alpha; repeat once for a 2-D grid")
      ->check(CLI::IsMember({"theta1", "theta2", "theta3", "alpha"}));
  ecp_sweep->add_option("--points", es.points, "Grid points per axis");
  ecp_sweep->add_option("--lo", es.lo, "Grid start");
  ecp_sweep->add_option("--hi", es.hi, "Grid end (default pi)");
  ecp_sweep->add_option("--alphas", es.alphas, "Alpha series")->delimiter(',');
  ecp_sweep->add_option("--theta1", es.theta1, "Fixed theta1 (default pi/4 = 0.7853981634)");
  ecp_sweep->add_option("--theta2", es.theta2, "Fixed theta2 (default pi/4 = 0.7853981634)");
  ecp_sweep->add_option("--theta3", es.theta3, "Fixed theta3 (default 3pi/8 = 1.1780972451)");
  ecp_sweep->add_option("--threads", es.threads, "Worker threads, 0 for all cores");
  ecp_sweep->add_option("--output", es.output, "CSV path (default stdout, or sweep.csv in HESIM_OUTPUT_DIR)");

  auto* hqis = app.add_subcommand("hqis", "Hierarchical quantum information splitting");
  hqis->require_subcommand(1);
  HqisRunConfig hr;
  auto* hqis_run = hqis->add_subcommand("run", "Run protocol trials and print JSON transcripts");
  hqis_run->add_option("--lambda-re", hr.lambda_re);
  hqis_run->add_option("--lambda-im", hr.lambda_im);
  hqis_run->add_option("--eta-re", hr.eta_re);
  hqis_run->add_option("--eta-im", hr.eta_im);
  hqis_run->add_option("--recoverer", hr.recoverer)->check(CLI::IsMember({"diana", "bob", "charlie"}));
  hqis_run->add_option("--trials", hr.trials);
  hqis_run->add_option("--seed", hr.seed);
  hqis_run->add_option("--alpha", hr.alpha);
  hqis_run->add_option("--channel", hr.channel, "ideal, or ecp to use the concentration output")
      ->check(CLI::IsMember({"ideal", "ecp"}));
  hqis_run->add_option("--output", hr.output);

  HqisTablesConfig ht;
  auto* hqis_tables = hqis->add_subcommand("tables", "Derive correction tables and check the printed rows");
  hqis_tables->add_option("--alpha", ht.alpha);
  hqis_tables->add_option("--format", ht.format)->check(CLI::IsMember({"text", "json"}));
  hqis_tables->add_option("--output", ht.output);

  HqisTablesConfig ha;
  auto* hqis_audit = hqis->add_subcommand("audit", "Expand logical Bell states over polarization x quasi-Bell");
  hqis_audit->add_option("--alpha", ha.alpha);
  hqis_audit->add_option("--format", ha.format)->check(CLI::IsMember({"text", "json"}));
  hqis_audit->add_option("--output", ha.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (ecp_run->parsed()) return cmd_ecp_run(er, out);
    if (ecp_sweep->parsed()) return cmd_ecp_sweep(es, out, err);
    if (hqis_run->parsed()) return cmd_hqis_run(hr, out);
    if (hqis_tables->parsed()) return cmd_hqis_tables(ht, out);
    if (hqis_audit->parsed()) return cmd_hqis_audit(ha, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const VerificationFailure& e) {
    err << "verification failed: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::domain_error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitInput;
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace hesim::cli
