#include "hesim/state_json.hpp"

#include <stdexcept>

namespace hesim {

namespace {

using nlohmann::json;

json rational_json(const Rational& r) { return json::array({r.numerator(), r.denominator()}); }

Rational rational_from(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw std::invalid_argument("rational must be [numerator, denominator]");
  }
  const auto den = j[1].get<std::int64_t>();
  if (den == 0) throw std::invalid_argument("zero denominator");
  return Rational(j[0].get<std::int64_t>(), den);
}

}  // namespace

json to_json(const HybridState& s) {
  json modes = json::array();
  for (const auto& m : s.registry()) {
    modes.push_back({{"name", m.name}, {"kind", m.kind == ModeKind::polarization ? "polarization" : "coherent"}});
  }
  json terms = json::array();
  for (const auto& t : s.terms()) {
    json labels = json::array();
    for (const auto& l : t.labels) {
      if (const auto* p = std::get_if<PolLabel>(&l)) {
        labels.push_back(*p == PolLabel::plus ? "+" : "-");
      } else {
        const auto& c = std::get<CoherentLabel>(l);
        labels.push_back({{"a", rational_json(c.rational_part())}, {"b", rational_json(c.sqrt2_part())}});
      }
    }
    terms.push_back({{"re", t.amplitude.real()}, {"im", t.amplitude.imag()}, {"labels", std::move(labels)}});
  }
  return {{"alpha", s.alpha()}, {"modes", std::move(modes)}, {"terms", std::move(terms)}};
}

HybridState state_from_json(const json& j, double prune_threshold) {
  try {
    std::vector<Mode> modes;
    for (const auto& m : j.at("modes")) {
      const auto kind = m.at("kind").get<std::string>();
      if (kind != "polarization" && kind != "coherent") throw std::invalid_argument("unknown mode kind " + kind);
      modes.push_back({m.at("name").get<std::string>(),
                       kind == "polarization" ? ModeKind::polarization : ModeKind::coherent});
    }
    std::vector<Term> terms;
    for (const auto& t : j.at("terms")) {
      Term term{{t.at("re").get<double>(), t.at("im").get<double>()}, {}};
      for (const auto& l : t.at("labels")) {
        if (l.is_string()) {
          const auto v = l.get<std::string>();
          if (v != "+" && v != "-") throw std::invalid_argument("polarization label must be + or -");
          term.labels.emplace_back(v == "+" ? PolLabel::plus : PolLabel::minus);
        } else {
          term.labels.emplace_back(CoherentLabel(rational_from(l.at("a")), rational_from(l.at("b"))));
        }
      }
      terms.push_back(std::move(term));
    }
    return {ModeRegistry(std::move(modes)), std::move(terms), j.at("alpha").get<double>(), prune_threshold};
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed state json: ") + e.what());
  }
}

}  // namespace hesim
