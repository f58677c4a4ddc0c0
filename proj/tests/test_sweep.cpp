#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "hesim/sweep.hpp"

using namespace hesim;

namespace {

SweepSpec theta_spec(SweepAxis axis, std::vector<double> alphas, unsigned threads = 0) {
  SweepSpec s;
  s.grids = {{axis, linspace(0.0, std::numbers::pi, 181)}};
  s.alphas = std::move(alphas);
  s.threads = threads;
  return s;
}

std::string csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  write_sweep_csv(os, rows);
  return os.str();
}

}  // namespace

TEST_CASE("linspace hits both ends") {
  const auto v = linspace(0.0, std::numbers::pi, 181);
  REQUIRE(v.size() == 181);
  CHECK(v.front() == 0.0);
  CHECK(v.back() == std::numbers::pi);
  CHECK(v[90] == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
}

TEST_CASE("default grid gives 181 rows per alpha in order") {
  const auto rows = run_sweep(theta_spec(SweepAxis::theta1, {0.5, 1.0, 2.0}));
  REQUIRE(rows.size() == 543);
  CHECK(rows[0].alpha == 0.5);
  CHECK(rows[181].alpha == 1.0);
  CHECK(rows[362].alpha == 2.0);
  for (const auto& r : rows) {
    CHECK(r.theta2 == std::numbers::pi / 4);
    CHECK(std::abs(r.p_sim - r.p_closed) < 1e-12);
  }
  const auto text = csv(rows);
  CHECK(text.rfind("theta1,theta2,theta3,alpha,P_closed,P_sim\n", 0) == 0);
}

TEST_CASE("sweep output does not depend on the thread count") {
  const auto one = csv(run_sweep(theta_spec(SweepAxis::theta2, {1.0}, 1)));
  const auto many = csv(run_sweep(theta_spec(SweepAxis::theta2, {1.0}, 7)));
  CHECK(one == many);
  CHECK(one == csv(run_sweep(theta_spec(SweepAxis::theta2, {1.0}, 7))));
}

TEST_CASE("P vanishes at quarter turns; grid maxima at alpha = 1") {
  // Peak rows of the closed form, located independently by brute force.
  struct Peaks {
    SweepAxis axis;
    std::size_t lo, hi;
  };
  for (auto [axis, want_lo, want_hi] : {Peaks{SweepAxis::theta1, 45, 137}, Peaks{SweepAxis::theta2, 51, 130}}) {
    const auto rows = run_sweep(theta_spec(axis, {1.0}));
    CHECK(rows[0].p_sim == 0.0);
    CHECK(rows[90].p_sim == 0.0);
    CHECK(rows[180].p_sim == 0.0);
    std::size_t lo = 0, hi = 90;
    for (std::size_t i = 0; i <= 90; ++i) {
      CHECK(rows[i].p_sim >= 0.0);
      if (rows[i].p_sim > rows[lo].p_sim) lo = i;
      if (rows[90 + i].p_sim > rows[hi].p_sim) hi = 90 + i;
    }
    CHECK(lo == want_lo);
    CHECK(hi == want_hi);
  }
}

TEST_CASE("P is invariant under swapping zeta with delta and beta with gamma") {
  for (const auto& a : run_sweep(theta_spec(SweepAxis::theta1, {0.5, 2.0}))) {
    const ECPParams p = AngleParams{a.theta1, a.theta2, a.theta3}.to_params(a.alpha);
    const ECPParams q{p.delta, p.gamma, p.beta, p.zeta, p.alpha};
    CHECK(success_probability_closed_form(q) == doctest::Approx(a.p_closed).epsilon(1e-12));
  }
}

TEST_CASE("two-axis grid is row-major in the first axis") {
  SweepSpec s;
  s.grids = {{SweepAxis::theta1, linspace(0.0, std::numbers::pi, 5)},
             {SweepAxis::theta2, linspace(0.0, std::numbers::pi, 4)}};
  s.alphas = {1.0};
  const auto rows = run_sweep(s);
  REQUIRE(rows.size() == 20);
  CHECK(rows[0].theta1 == rows[3].theta1);
  CHECK(rows[1].theta2 > rows[0].theta2);
  CHECK(rows[4].theta1 > rows[3].theta1);
}

TEST_CASE("alpha as a grid axis replaces the alpha list") {
  SweepSpec s;
  s.grids = {{SweepAxis::alpha, {0.5, 1.0, 3.0}}};
  s.alphas = {7.0};
  const auto rows = run_sweep(s);
  REQUIRE(rows.size() == 3);
  CHECK(rows[2].alpha == 3.0);
  CHECK(parse_sweep_axis(to_string(SweepAxis::theta3)) == SweepAxis::theta3);
}
