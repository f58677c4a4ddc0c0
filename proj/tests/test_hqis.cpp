#include <doctest.h>

#include <array>
#include <cmath>

#include "hesim/hqis.hpp"
#include "hesim/hqis_json.hpp"

using namespace hesim;

namespace {

const InputSecret kSecret{std::polar(0.6, 0.4), std::polar(0.8, -1.3)};

HybridState alice_input(const InputSecret& s, double alpha) { return tensor(build_input(s, alpha), build_channel(alpha)); }

Pauli P(const char* name) { return parse_pauli(name); }

}  // namespace

TEST_CASE("logical Bell states are orthonormal") {
  const auto a = hqis_qubit("A0");
  const auto b = hqis_qubit("A");
  for (double alpha : {0.3, 1.0}) {
    for (auto x : kBellOutcomes) {
      for (auto y : kBellOutcomes) {
        const auto ip = inner_product(logical_bell_state(a, b, x, alpha), logical_bell_state(a, b, y, alpha));
        CHECK(std::abs(ip - Complex(x == y ? 1.0 : 0.0)) < 1e-14);
      }
    }
    CHECK(parse_bell_outcome(to_string(BellOutcome::psi_minus)) == BellOutcome::psi_minus);
  }
}

TEST_CASE("channel is the four-term Omega state") {
  const auto c = build_channel(1.0);
  CHECK(c.size() == 4);
  CHECK(norm_squared(c) == doctest::Approx(1.0).epsilon(1e-14));
  ECPOptions o;
  o.keep_trace = false;
  const auto r = run_ecp(ECPParams{0.3, 0.5, 0.7, std::sqrt(1 - 0.83), 1.0}, o);
  CHECK(fidelity(channel_from_ecp(r), c) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Alice's outcomes are equiprobable and leave the listed states") {
  for (double alpha : {0.5, 1.0, 2.0}) {
    for (auto b : kBellOutcomes) {
      const auto m = alice_bell_measurement(alice_input(kSecret, alpha), nullptr, b);
      for (double p : m.probabilities) CHECK(p == doctest::Approx(0.25).epsilon(1e-12));
      CHECK(fidelity(m.collapsed, alice_table_state(b, kSecret, alpha)) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("psi0 and psi1 are orthonormal") {
  const auto p0 = psi0_logical(1.0);
  const auto p1 = psi1_logical(1.0);
  CHECK(norm_squared(p0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(inner_product(p0, p1)) < 1e-14);
}

TEST_CASE("printed correction rows are reproduced") {
  const auto check = check_printed_tables(1.0);
  CHECK(check.diana_rows);
  CHECK(check.bob_rows);
  CHECK(check.charlie_rows);
  CHECK(check.mismatches.empty());
}

TEST_CASE("full derived correction tables") {
  const std::array<std::array<const char*, 2>, 4> diana{{{"I", "Z"}, {"Z", "I"}, {"X", "iY"}, {"iY", "X"}}};
  const std::array<std::array<const char*, 4>, 4> pair{
      {{"Z", "I", "X", "iY"}, {"I", "Z", "iY", "X"}, {"iY", "X", "I", "Z"}, {"X", "iY", "Z", "I"}}};
  for (double alpha : {0.4, 1.5}) {
    const auto d = derive_correction_table(Recoverer::diana, alpha);
    for (std::size_t a = 0; a < 4; ++a) {
      for (std::size_t h = 0; h < 2; ++h) CHECK(d[a][h] == P(diana[a][h]));
      CHECK_FALSE(d[a][2].has_value());
    }
    for (auto who : {Recoverer::bob, Recoverer::charlie}) {
      const auto t = derive_correction_table(who, alpha);
      for (std::size_t a = 0; a < 4; ++a) {
        for (std::size_t h = 0; h < 4; ++h) CHECK(t[a][h] == P(pair[a][h]));
      }
    }
  }
}

TEST_CASE("every branch of every recoverer restores the secret") {
  const double alpha = 0.8;
  for (auto who : {Recoverer::diana, Recoverer::bob, Recoverer::charlie}) {
    const auto table = derive_correction_table(who, alpha);
    for (auto b : kBellOutcomes) {
      const auto m = alice_bell_measurement(alice_input(kSecret, alpha), nullptr, b);
      for (int h = 0; h < (who == Recoverer::diana ? 2 : 4); ++h) {
        const auto t = recover(m.collapsed, b, kSecret, who, table, nullptr, h);
        CHECK(t.fidelity == doctest::Approx(1.0).epsilon(1e-12));
        double total = 0.0;
        const std::size_t n = who == Recoverer::diana ? 2 : 4;
        for (std::size_t k = 0; k < n; ++k) total += t.helper_probabilities[k];
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("without helpers, Bob and Charlie hold a maximally mixed qubit") {
  for (auto b : kBellOutcomes) {
    const auto m = alice_bell_measurement(alice_input(kSecret, 1.0), nullptr, b);
    for (const char* who : {"B", "C"}) {
      const Eigen::Matrix2cd rho = agent_reduced_density(m.collapsed, hqis_qubit(who));
      CHECK((rho - 0.5 * Eigen::Matrix2cd::Identity()).norm() < 1e-12);
    }
  }
}

TEST_CASE("Bob and Charlie agree on their logical bits when Diana recovers") {
  ProtocolOptions o;
  o.recoverer = Recoverer::diana;
  o.trials = 40;
  o.seed = 99;
  for (const auto& t : run_protocol(o)) {
    REQUIRE(t.helper_outcomes.size() == 2);
    CHECK(t.helper_outcomes[0].substr(1) == t.helper_outcomes[1].substr(1));
    CHECK(t.fidelity == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("protocol trials depend only on seed and index") {
  ProtocolOptions o;
  o.recoverer = Recoverer::charlie;
  o.seed = 5;
  o.trials = 6;
  const auto six = run_protocol(o);
  o.trials = 3;
  const auto three = run_protocol(o);
  for (std::size_t i = 0; i < 3; ++i) CHECK(to_json(six[i]) == to_json(three[i]));
  o.seed = 6;
  CHECK(to_json(run_protocol(o)[0]) != to_json(three[0]));
}

TEST_CASE("protocol input validation") {
  ProtocolOptions o;
  o.secret = InputSecret{0.6, 0.9};
  CHECK_THROWS_AS(run_protocol(o), std::invalid_argument);
  o.secret.reset();
  o.trials = 0;
  CHECK_THROWS_AS(run_protocol(o), std::invalid_argument);
  CHECK_THROWS_AS(parse_recoverer("eve"), std::invalid_argument);
}

TEST_CASE("transcript JSON carries the documented keys") {
  ProtocolOptions o;
  o.recoverer = Recoverer::bob;
  o.secret = InputSecret{0.6, 0.8};
  const auto j = to_json(run_protocol(o).front());
  for (const char* key : {"trial", "alice_outcome", "recoverer", "helper_outcomes", "corrections", "fidelity",
                          "branch_probabilities"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["recoverer"] == "bob");
}

TEST_CASE("logical Bell states expand with 1/N weights") {
  for (double alpha : {0.5, 1.0, 2.0}) {
    const auto r = verify_bell_decomposition(alpha);
    for (const auto& id : r.identities) {
      CHECK(id.derived_residual < 1e-12);
      REQUIRE(id.components.size() == 2);
      for (const auto& c : id.components) CHECK(std::abs(std::abs(c.weight_times_norm) - 0.5) < 1e-12);
      CHECK(id.printed_inv_norm_sqrt2_residual > 0.1);
    }
    CHECK(r.identities[0].printed_pairing_matches);
    CHECK_FALSE(r.identities[1].printed_pairing_matches);
  }
}
