#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "reelstock/domain.hpp"
#include "support.hpp"

using namespace reelstock;
using reelstock::testing::toy_scenario;
using reelstock::testing::toy_scenario_with;

TEST_CASE("kg_to_reels reproduces the reel column of the demand table") {
  ReelStandard standard{1.072};
  for (const auto& row : reelstock::testing::mill_table()) {
    INFO("width " << row.width);
    CHECK(kg_to_reels(row.kg, row.width, standard) == row.reels);
  }
}

TEST_CASE("kg_to_reels rounds half up with a floor of one reel") {
  ReelStandard standard{1.0};
  CHECK(kg_to_reels(0.0, 1000, standard) == 0);
  CHECK(kg_to_reels(1.0, 1000, standard) == 1);
  CHECK(kg_to_reels(1499.0, 1000, standard) == 1);
  CHECK(kg_to_reels(1500.0, 1000, standard) == 2);
  CHECK(kg_to_reels(2499.0, 1000, standard) == 2);
  CHECK(reels_to_kg(3, 2000, ReelStandard{1.072}) == Catch::Approx(6432.0));
}

TEST_CASE("reels_to_kg of kg_to_reels stays within one reel weight") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> mass(0.0, 200000.0);
  std::uniform_int_distribution<int> width(50, 250);
  ReelStandard standard{1.072};
  for (int i = 0; i < 2000; ++i) {
    double m = mass(rng);
    WidthMm w = width(rng) * 10;
    double back = reels_to_kg(kg_to_reels(m, w, standard), w, standard);
    REQUIRE(std::abs(back - m) <= w * standard.kg_per_mm_per_reel + 1e-9);
  }
}

TEST_CASE("Policy keeps widths sorted and rejects bad input") {
  Policy p({2500, 2200, 1350});
  CHECK(p.widths() == std::vector<WidthMm>{1350, 2200, 2500});
  CHECK(p.to_string() == "1350,2200,2500");
  CHECK(Policy::parse(" 2500, 2200 ") == Policy({2200, 2500}));
  CHECK(p.contains(2200));
  CHECK_FALSE(p.contains(2100));
  CHECK(Policy({2200}).is_subset_of(p));
  CHECK(p.filtered_to(2300) == Policy({1350, 2200}));
  CHECK_THROWS_AS(Policy({2200, 2200}), std::invalid_argument);
  CHECK_THROWS_AS(Policy({0}), std::invalid_argument);
  CHECK_THROWS_AS(Policy::parse("2200,abc"), std::invalid_argument);
  CHECK_THROWS_AS(Policy::parse("2200.5"), std::invalid_argument);
}

TEST_CASE("validation reports every violation") {
  Scenario s = toy_scenario();
  s.boms[0].entries[2].weight_share = 0.3;
  s.instances = {{"I1", "C1", "W01", "B1", {{2600, 1000, 10}}}};
  auto violations = find_violations(s);
  REQUIRE(violations.size() == 2);
  bool share = false, width = false;
  for (const auto& v : violations) {
    if (v.find("shares sum 0.9") != std::string::npos) share = true;
    if (v.find("width 2600 exceeds") != std::string::npos) width = true;
  }
  CHECK(share);
  CHECK(width);
  try {
    validate_scenario(s);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.violations() == violations);
  }
}

TEST_CASE("validation catches references and parameters") {
  Scenario s = toy_scenario();
  s.instances = {{"I1", "CX", "W09", "BX", {}}};
  s.beta = 0.5;
  s.corrugators[0].knife_count = 4;
  s.grade_machines["LA"] = {"PM9"};
  s.external_supply_grades = {"ZZ"};
  CHECK(find_violations(s).size() == 8);
}

TEST_CASE("validate_scenario is idempotent") {
  Scenario s = toy_scenario_with({{"I1", "C1", "W01", "B1", {{1250, 1000, 100}}}});
  Scenario again = validate_scenario(s);
  CHECK(again == s);
  CHECK(validate_scenario(again) == again);
}

TEST_CASE("bom grammage falls back to the nominal value") {
  Scenario s = toy_scenario();
  CHECK(s.bom_grammage(s.boms[0]) == 181.0);
  s.boms[0].grammage = 200.0;
  CHECK(s.bom_grammage(s.boms[0]) == 200.0);
}
