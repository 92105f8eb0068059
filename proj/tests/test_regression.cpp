// Data-driven regression over the bundled systems: every headline number
// carries its tolerance in the expectation file.

#include <cmath>
#include <string>

#include <doctest.h>

#include "fixtures.hpp"
#include "lienard/cycles.hpp"
#include "lienard/io.hpp"

using namespace lienard;

namespace {

void check_list(const Json& expect, const std::vector<double>& got,
                const char* label) {
  INFO(label);
  const auto& values = expect.at("values");
  const double tol = expect.at("tol").get<double>();
  REQUIRE(got.size() == values.size());
  for (size_t i = 0; i < got.size(); ++i) {
    INFO("entry " << i);
    CHECK(std::abs(got[i] - values[i].get<double>()) <= tol);
  }
}

void run_expectations(const std::string& name) {
  const Json exp = read_json_file(fixtures::path(name));
  const LienardSystem sys =
      fixtures::load_system(exp.at("system").get<std::string>());

  check_list(exp.at("zeros"), sys.F.positive_zeros(), "zeros");

  const TheoremReport rep = check_theorem(sys, {}, {});
  CHECK(rep.pass == exp.at("check_pass").get<bool>());
  check_list(exp.at("levels"), rep.levels, "levels");

  std::vector<double> y0s, alphas;
  for (const auto& c : rep.scan.cycles) y0s.push_back(c.y0);
  for (const auto& ab : rep.alpha_bars) alphas.push_back(ab.value);
  check_list(exp.at("cycles_y0"), y0s, "cycles_y0");
  check_list(exp.at("alpha_bars"), alphas, "alpha_bars");

  const auto& stab = exp.at("stability");
  REQUIRE(rep.scan.cycles.size() == stab.size());
  for (size_t i = 0; i < stab.size(); ++i)
    CHECK(std::string(to_string(rep.scan.cycles[i].stability)) ==
          stab[i].get<std::string>());

  const BuiltExtension built = build_extension(
      fixtures::load_plan(exp.at("plan").get<std::string>()));
  const auto& phis = exp.at("phi");
  REQUIRE(!built.steps.empty());
  const auto& step1 = built.steps.front().step;
  CHECK(std::abs(step1.phi_L.A - phis[0].at("A").get<double>()) <=
        phis[0].at("tol").get<double>());
  CHECK(std::abs(step1.phi_L.B - phis[0].at("B").get<double>()) <=
        phis[0].at("tol").get<double>());
  CHECK(std::abs(step1.phi_R.A - phis[1].at("A").get<double>()) <=
        phis[1].at("tol").get<double>());
  CHECK(std::abs(step1.phi_R.B - phis[1].at("B").get<double>()) <=
        phis[1].at("tol").get<double>());

  const OdaniReport odani = odani_check(built);
  CHECK(odani.verdict == exp.at("odani_verdict").get<std::string>());
  check_list(exp.at("odani_loci"), odani.equality_loci, "odani_loci");
}

}  // namespace

TEST_SUITE("regression") {

TEST_CASE("example 1 expectations") { run_expectations("example1.expected.json"); }
TEST_CASE("example 2 expectations") { run_expectations("example2.expected.json"); }
TEST_CASE("example 3 expectations") { run_expectations("example3.expected.json"); }

}  // TEST_SUITE
