// Small builders shared by the unit tests.

#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "hesim/state.hpp"

namespace testing_support {

using namespace hesim;

inline Mode pol(const std::string& n) { return {n, ModeKind::polarization}; }
inline Mode cs(const std::string& n) { return {n, ModeKind::coherent}; }
inline CoherentLabel lab(int n) { return CoherentLabel::integer(n); }

// Random state over one polarization mode "p" and coherent modes "x", "y",
// labels drawn from {-1, 0, 1}.
inline HybridState random_state(std::mt19937_64& rng, double alpha, int terms = 5) {
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> l(-1, 1), b(0, 1);
  std::vector<Term> ts;
  for (int i = 0; i < terms; ++i) {
    ts.push_back({{g(rng), g(rng)}, {b(rng) ? PolLabel::plus : PolLabel::minus, lab(l(rng)), lab(l(rng))}});
  }
  return {ModeRegistry({pol("p"), cs("x"), cs("y")}), std::move(ts), alpha, 0.0};
}

}  // namespace testing_support
