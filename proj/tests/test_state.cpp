#include <doctest.h>

#include <cmath>
#include <random>

#include "hesim/state.hpp"
#include "hesim/state_json.hpp"
#include "support.hpp"

using namespace hesim;
using namespace testing_support;

TEST_CASE("terms with identical labels merge and cancel") {
  const ModeRegistry r({cs("x")});
  const HybridState s(r, {{1.0, {lab(1)}}, {0.5, {lab(1)}}, {1.0, {lab(-1)}}, {-1.0, {lab(-1)}}}, 1.0);
  REQUIRE(s.size() == 1);
  CHECK(s.terms()[0].amplitude == Complex(1.5, 0.0));
}

TEST_CASE("merging does not depend on term order") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = random_state(rng, 0.8, 8);
    auto terms = s.terms();
    std::shuffle(terms.begin(), terms.end(), rng);
    const auto t = s.with_terms(terms);
    CHECK(std::abs(inner_product(s, s) - inner_product(s, t)) < 1e-12);
    CHECK(to_string(s) == to_string(t));
  }
}

TEST_CASE("norm of a cat pair uses the Gram matrix") {
  const ModeRegistry r({cs("x")});
  for (double a : {0.5, 1.0, 2.0}) {
    const HybridState cat(r, {{1.0, {lab(1)}}, {1.0, {lab(-1)}}}, a);
    CHECK(norm_squared(cat) == doctest::Approx(2.0 + 2.0 * std::exp(-2.0 * a * a)).epsilon(1e-14));
  }
}

TEST_CASE("two-mode ancilla norm with equal coefficients") {
  // (|-a>|a> + |a>|a> + |-a>|-a> + |a>|-a>) = (|a>+|-a>)^(x)2
  const ModeRegistry r({cs("e"), cs("f")});
  const double a = 1.0;
  const HybridState s(r,
                      {{1.0, {lab(-1), lab(1)}}, {1.0, {lab(1), lab(1)}}, {1.0, {lab(-1), lab(-1)}},
                       {1.0, {lab(1), lab(-1)}}},
                      a);
  const double one = 2.0 + 2.0 * std::exp(-2.0 * a * a);
  CHECK(norm_squared(s) == doctest::Approx(one * one).epsilon(1e-14));
}

TEST_CASE("polarization basis conversion round trips") {
  const auto hv = to_hv({0.6, 0.1}, {-0.2, 0.7});
  const auto [p, m] = from_hv(hv);
  CHECK(std::abs(p - Complex(0.6, 0.1)) < 1e-15);
  CHECK(std::abs(m - Complex(-0.2, 0.7)) < 1e-15);
}

TEST_CASE("tensor, reorder and rename preserve inner products") {
  std::mt19937_64 rng(5);
  const auto s = random_state(rng, 1.1);
  const auto t = rename_mode(rename_mode(rename_mode(random_state(rng, 1.1), "p", "q"), "x", "u"), "y", "v");
  const auto st = tensor(s, t);
  CHECK(norm_squared(st) == doctest::Approx(norm_squared(s) * norm_squared(t)).epsilon(1e-12));
  const ModeRegistry shuffled({cs("v"), pol("p"), cs("x"), pol("q"), cs("u"), cs("y")});
  const auto ro = reorder(st, shuffled);
  CHECK(norm_squared(ro) == doctest::Approx(norm_squared(st)).epsilon(1e-12));
  CHECK(fidelity(st, ro) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(tensor(s, s), RegistryMismatch);
}

TEST_CASE("partial inner product contracts the named modes") {
  std::mt19937_64 rng(21);
  const auto s = random_state(rng, 0.9);
  const HybridState bra(ModeRegistry({cs("x")}), {{1.0, {lab(1)}}}, 0.9);
  const auto rest = partial_inner(bra, s);
  REQUIRE(rest.registry().size() == 2);
  // Contracting x then the rest equals the full inner product with bra (x) rest-basis.
  const auto full = inner_product(reorder(tensor(bra, rest), s.registry()), s);
  CHECK(std::abs(full - inner_product(rest, rest)) < 1e-12);
}

TEST_CASE("traced fidelity of a product state with a factor is that factor's fidelity") {
  const double a = 1.0;
  const HybridState keep(ModeRegistry({cs("x")}), {{1.0, {lab(1)}}, {0.5, {lab(-1)}}}, a);
  const HybridState junk(ModeRegistry({cs("y")}), {{1.0, {lab(0)}}, {1.0, {lab(1)}}}, a);
  const HybridState target(ModeRegistry({cs("x")}), {{1.0, {lab(1)}}}, a);
  CHECK(fidelity_traced(tensor(keep, junk), target) == doctest::Approx(fidelity(keep, target)).epsilon(1e-12));
}

TEST_CASE("zero states and mismatched registries are rejected") {
  const ModeRegistry r({cs("x")});
  const HybridState zero(r, {{1.0, {lab(1)}}, {-1.0, {lab(1)}}}, 1.0);
  CHECK(zero.empty());
  CHECK_THROWS_AS(normalize(zero), ZeroNorm);
  const HybridState other(ModeRegistry({cs("y")}), {{1.0, {lab(1)}}}, 1.0);
  CHECK_THROWS_AS(inner_product(zero, other), RegistryMismatch);
  CHECK_THROWS_AS(HybridState(r, {{1.0, {PolLabel::plus}}}, 1.0), RegistryMismatch);
  CHECK_THROWS_AS(HybridState(r, {}, -1.0), std::invalid_argument);
}

TEST_CASE("pruning drops merged amplitudes below the threshold") {
  const ModeRegistry r({cs("x")});
  const HybridState s(r, {{1.0, {lab(1)}}, {1e-14, {lab(-1)}}}, 1.0);
  CHECK(s.size() == 1);
  const HybridState kept(r, {{1.0, {lab(1)}}, {1e-14, {lab(-1)}}}, 1.0, 0.0);
  CHECK(kept.size() == 2);
}

TEST_CASE("JSON round trip is exact") {
  std::mt19937_64 rng(3);
  auto s = random_state(rng, 1.3, 6);
  s = s.with_terms([&] {
    auto t = s.terms();
    t.push_back({{0.25, -0.5}, {PolLabel::minus, CoherentLabel(Rational(1, 2), Rational(-3, 4)), lab(0)}});
    return t;
  }());
  const auto back = state_from_json(nlohmann::json::parse(to_json(s).dump()), s.prune_threshold());
  CHECK(to_string(back) == to_string(s));
  CHECK(back.registry() == s.registry());
  CHECK(back.alpha() == s.alpha());
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(back.terms()[i].amplitude == s.terms()[i].amplitude);
  CHECK_THROWS_AS(state_from_json(nlohmann::json::parse(R"({"alpha": 1})")), std::invalid_argument);
}
