#include "hesim/hqis_json.hpp"

namespace hesim {

using nlohmann::json;

namespace {

json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

std::string helper_name(Recoverer who, std::size_t h) {
  if (who == Recoverer::diana) return h == 0 ? "B:0_L,C:0_L" : "B:1_L,C:1_L";
  return to_string(kBellOutcomes[h]);
}

}  // namespace

json to_json(const HQISTranscript& t) {
  json corrections = json::array();
  for (auto p : t.corrections) corrections.push_back(to_string(p));
  return {{"trial", t.trial},
          {"alice_outcome", to_string(t.alice_outcome)},
          {"recoverer", to_string(t.recoverer)},
          {"helper_outcomes", t.helper_outcomes},
          {"corrections", std::move(corrections)},
          {"fidelity", t.fidelity},
          {"branch_probabilities", t.branch_probabilities},
          {"helper_probabilities", t.helper_probabilities},
          {"secret", {{"lambda", complex_json(t.secret.lambda)}, {"eta", complex_json(t.secret.eta)}}}};
}

json to_json(const CorrectionTable& table, Recoverer who) {
  json rows = json::array();
  const std::size_t helpers = who == Recoverer::diana ? 2 : 4;
  for (auto a : kBellOutcomes) {
    for (std::size_t h = 0; h < helpers; ++h) {
      const auto& e = table[static_cast<std::size_t>(a)][h];
      rows.push_back({{"alice_outcome", to_string(a)},
                      {"helper_outcome", helper_name(who, h)},
                      {"correction", e ? to_string(*e) : "none"}});
    }
  }
  return {{"recoverer", to_string(who)}, {"rows", std::move(rows)}};
}

json to_json(const BellDecompositionReport& r) {
  json ids = json::array();
  for (const auto& id : r.identities) {
    json comps = json::array();
    for (const auto& c : id.components) {
      comps.push_back({{"polarization", c.pol_bell},
                       {"quasi_bell", c.quasi_bell},
                       {"weight", complex_json(c.weight)},
                       {"weight_times_norm", complex_json(c.weight_times_norm)}});
    }
    ids.push_back({{"logical", to_string(id.logical)},
                   {"components", std::move(comps)},
                   {"derived_residual", id.derived_residual},
                   {"printed_form", id.printed_form},
                   {"printed_residual", id.printed_residual},
                   {"printed_inv_norm_sqrt2_residual", id.printed_inv_norm_sqrt2_residual},
                   {"printed_inv_norm_half_residual", id.printed_inv_norm_half_residual},
                   {"printed_pairing_matches", id.printed_pairing_matches}});
  }
  return {{"alpha", r.alpha}, {"n_plus", r.n_plus}, {"n_minus", r.n_minus}, {"identities", std::move(ids)}};
}

}  // namespace hesim
