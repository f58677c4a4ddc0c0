#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hesim/cli.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "hesim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = hesim::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "hesim_cli_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("ecp run at the reference angles") {
  const auto r = cli({"ecp", "run", "--alpha", "1", "--angles", "0.7853981634,0.7853981634,1.1780972451"});
  CHECK(r.code == 0);
  CHECK(r.out.find("P_closed      0.0730439516") != std::string::npos);
  CHECK(r.out.find("fidelity      1") != std::string::npos);
}

TEST_CASE("ecp run with equal coefficients as JSON") {
  const auto r = cli({"ecp", "run", "--alpha", "1", "--zeta", "0.5", "--beta", "0.5", "--gamma", "0.5", "--delta",
                      "0.5", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["P_sim"].get<double>() == doctest::Approx(0.0854156811680682).epsilon(1e-12));
  CHECK(j["fidelity"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(j["final_state"]["terms"].size() == 4);
}

TEST_CASE("ecp run input errors exit with 2") {
  CHECK(cli({"ecp", "run", "--zeta", "0.5"}).code == 2);
  const auto missing = cli({"ecp", "run", "--angles", "0.1,0.2,0.3"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("--alpha") != std::string::npos);
  CHECK(cli({"ecp", "run", "--alpha", "1", "--zeta", "0.5", "--angles", "0.1,0.2,0.3"}).code == 2);
  CHECK(cli({"ecp", "run", "--alpha", "1", "--zeta", "0.5", "--beta", "0.5"}).code == 2);
  CHECK(cli({"ecp", "run", "--alpha", "1", "--zeta", "0.5", "--beta", "0.5", "--gamma", "0.5", "--delta", "0.6"})
            .code == 2);
  CHECK(cli({"ecp", "run", "--alpha", "-1", "--angles", "0.1,0.2,0.3"}).code == 2);
  CHECK(cli({"ecp", "run", "--alpha", "1", "--angles", "0.1,0.2,0.3", "--mode", "fuzzy"}).code == 2);
  CHECK(cli({"bogus"}).code == 2);
  CHECK(cli({}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("ecp run in exact mode is seeded") {
  const std::vector<std::string> args{"ecp", "run", "--alpha", "1.5", "--angles", "0.7,0.8,1.0",
                                      "--mode", "exact", "--seed", "12", "--format", "json"};
  const auto a = cli(args);
  const auto b = cli(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(nlohmann::json::parse(a.out)["parities"].size() == 3);
}

TEST_CASE("ecp sweep writes a deterministic CSV") {
  const auto path = scratch("sweep.csv");
  const auto r = cli({"ecp", "sweep", "--output", path.string()});
  REQUIRE(r.code == 0);
  const auto first = slurp(path);
  REQUIRE(cli({"ecp", "sweep", "--output", path.string(), "--threads", "3"}).code == 0);
  CHECK(slurp(path) == first);
  std::istringstream lines(first);
  std::string line;
  std::size_t n = 0;
  std::getline(lines, line);
  CHECK(line == "theta1,theta2,theta3,alpha,P_closed,P_sim");
  while (std::getline(lines, line)) ++n;
  CHECK(n == 543);
  CHECK(r.out.find("alpha=0.5) = ") != std::string::npos);
  CHECK(r.out.find("alpha=2) = ") != std::string::npos);
}

TEST_CASE("ecp sweep in two dimensions") {
  const auto r = cli({"ecp", "sweep", "--axis", "theta1", "--axis", "theta2", "--points", "11", "--alphas", "1"});
  REQUIRE(r.code == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 122);
  CHECK(cli({"ecp", "sweep", "--axis", "theta1", "--axis", "theta1"}).code == 2);
}

TEST_CASE("unwritable output paths exit with 2") {
  CHECK(cli({"ecp", "sweep", "--points", "3", "--output", "/nonexistent-dir/x.csv"}).code == 2);
  CHECK(cli({"hqis", "tables", "--output", "/nonexistent-dir/t.txt"}).code == 2);
}

TEST_CASE("HESIM_OUTPUT_DIR receives relative outputs") {
  const auto dir = scratch("envdir");
  std::filesystem::create_directories(dir);
  std::filesystem::remove(dir / "sweep.csv");
  ::setenv("HESIM_OUTPUT_DIR", dir.c_str(), 1);
  const auto r = cli({"ecp", "sweep", "--points", "5", "--alphas", "1"});
  const auto t = cli({"hqis", "tables", "--output", "tables.txt"});
  ::unsetenv("HESIM_OUTPUT_DIR");
  CHECK(r.code == 0);
  CHECK(t.code == 0);
  CHECK(std::filesystem::exists(dir / "sweep.csv"));
  CHECK(slurp(dir / "tables.txt").find("printed rows: diana match") != std::string::npos);
}

TEST_CASE("hqis run emits transcripts with unit fidelity") {
  const auto r = cli({"hqis", "run", "--lambda-re", "0.6", "--eta-re", "0.8", "--recoverer", "bob", "--trials",
                      "100", "--seed", "7"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j.size() == 100);
  for (const auto& t : j) CHECK(t["fidelity"].get<double>() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(cli({"hqis", "run", "--lambda-re", "0.6", "--eta-re", "0.8", "--recoverer", "bob", "--trials", "100",
             "--seed", "7"})
            .out == r.out);
}

TEST_CASE("hqis run through the concentration channel") {
  const auto r = cli({"hqis", "run", "--channel", "ecp", "--recoverer", "charlie", "--trials", "5", "--alpha", "0.7"});
  CHECK(r.code == 0);
}

TEST_CASE("unnormalized secrets exit with 2") {
  CHECK(cli({"hqis", "run", "--lambda-re", "0.6", "--eta-re", "0.9"}).code == 2);
  CHECK(cli({"hqis", "run", "--lambda-re", "0.6", "--eta-re", "0.8000000001"}).code == 0);
  CHECK(cli({"hqis", "run", "--recoverer", "eve"}).code == 2);
}

TEST_CASE("hqis tables lists the printed first rows") {
  const auto r = cli({"hqis", "tables"});
  CHECK(r.code == 0);
  CHECK(r.out.find("phiL+, phiL+ -> Z") != std::string::npos);
  CHECK(r.out.find("phiL+, B,C=1_L 1_L -> Z") != std::string::npos);
  const auto j = nlohmann::json::parse(cli({"hqis", "tables", "--format", "json"}).out);
  CHECK(j["tables"].size() == 3);
}

TEST_CASE("hqis audit reports the weighted identities") {
  const auto r = cli({"hqis", "audit", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  for (const auto& id : j["identities"]) CHECK(id["derived_residual"].get<double>() < 1e-12);
}
