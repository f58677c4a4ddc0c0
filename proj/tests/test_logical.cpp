#include <doctest.h>

#include <array>
#include <cmath>

#include "hesim/logical.hpp"
#include "support.hpp"

using namespace hesim;
using namespace testing_support;

TEST_CASE("logical basis states are orthonormal at any alpha") {
  const auto q = named_qubit("q");
  for (double a : {0.2, 1.0, 2.5}) {
    const auto zero = logical_qubit_state(q, 1.0, 0.0, a);
    const auto one = logical_qubit_state(q, 0.0, 1.0, a);
    CHECK(norm_squared(zero) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(inner_product(zero, one)) < 1e-15);
  }
}

TEST_CASE("logical registry lists polarization modes first") {
  const std::array qs{named_qubit("a"), named_qubit("b")};
  const auto r = logical_registry(qs);
  REQUIRE(r.size() == 4);
  CHECK(r[0].name == "a:pol");
  CHECK(r[1].name == "b:pol");
  CHECK(r[2].name == "a");
  CHECK(r[3].kind == ModeKind::coherent);
}

TEST_CASE("logical amplitudes recover the construction coefficients") {
  const std::array qs{named_qubit("a"), named_qubit("b"), named_qubit("c")};
  std::array<Complex, 8> amps{};
  for (std::size_t i = 0; i < 8; ++i) amps[i] = Complex(0.1 * double(i) - 0.3, 0.05 * double(i * i % 5));
  const auto s = logical_state(qs, amps, 0.7, 0.0);
  const auto v = logical_amplitudes(s, qs);
  for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(v(Eigen::Index(i)) - amps[i]) < 1e-13);
}

TEST_CASE("span residual flags non-logical label pairs") {
  const auto q = named_qubit("q");
  CHECK(logical_span_residual(logical_qubit_state(q, 0.6, 0.8, 1.0), q) < 1e-14);
  // |+>|-a> is not in span{|+>|a>, |->|-a>}
  const HybridState bad(ModeRegistry({pol("q:pol"), cs("q")}), {{1.0, {PolLabel::plus, lab(-1)}}}, 1.0);
  CHECK(logical_span_residual(bad, q) > 0.5);
  CHECK_THROWS_AS(require_logical_span(bad, q), OutsideLogicalSpan);
  CHECK_THROWS_AS(logical_amplitudes(bad, std::array{q}), OutsideLogicalSpan);
}

TEST_CASE("reduced density of one half of a logical Bell pair is maximally mixed") {
  const std::array qs{named_qubit("a"), named_qubit("b")};
  const std::array<Complex, 4> amps{M_SQRT1_2, 0.0, 0.0, M_SQRT1_2};
  const auto s = logical_state(qs, amps, 0.5);
  const auto rho = reduced_density_logical(s, std::span(qs).first(1), std::span(qs).last(1));
  CHECK(std::abs(rho(0, 0) - 0.5) < 1e-14);
  CHECK(std::abs(rho(1, 1) - 0.5) < 1e-14);
  CHECK(std::abs(rho(0, 1)) < 1e-14);
}

TEST_CASE("reduced density of a product state is pure") {
  const auto a = named_qubit("a");
  const auto b = named_qubit("b");
  const auto s = tensor(logical_qubit_state(a, 0.6, Complex(0, 0.8), 1.0), logical_qubit_state(b, 1.0, 1.0, 1.0));
  const std::array keep{a};
  const std::array traced{b};
  const auto rho = reduced_density_logical(reorder(s, logical_registry(std::array{a, b})), keep, traced);
  CHECK(std::abs((rho * rho).trace() - 1.0) < 1e-13);
  CHECK(std::abs(rho(0, 1) - Complex(0.6, 0) * std::conj(Complex(0, 0.8))) < 1e-13);
}
