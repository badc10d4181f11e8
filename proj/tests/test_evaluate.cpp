#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "reelstock/evaluate.hpp"
#include "reelstock/generator.hpp"
#include "support.hpp"

using namespace reelstock;
namespace t = reelstock::testing;

namespace {

CorrugatorSolution consuming(std::map<WidthMm, double> kg) {
  CorrugatorSolution s;
  s.grammage = 181.0;
  for (const auto& [w, m] : kg) s.consumption[w] = {m / 0.181, m};
  return s;
}

Scenario small_generated(std::uint64_t seed, std::int64_t instances = 12) {
  GeneratorParams p;
  p.seed = seed;
  p.instance_count = instances;
  p.period_count = 2;
  return generate_scenario(p);
}

}  // namespace

TEST_CASE("bom explosion splits board mass by share") {
  Scenario s = t::toy_scenario_with({{"I1", "C1", "W01", "B1", {{1100, 1000, 10}}}});
  std::vector<CorrugatorSolution> sols{consuming({{2200, 891.0}})};
  auto demand = explode_bom(s.instances, sols, s);
  REQUIRE(demand.size() == 3);
  std::map<std::string, double> by_grade;
  for (const auto& d : demand) {
    CHECK(d.period_id == "W01");
    REQUIRE(d.entries.size() == 1);
    by_grade[d.grade_id] = d.entries.at(2200).mass_kg;
    CHECK(d.entries.at(2200).reels == kg_to_reels(d.entries.at(2200).mass_kg, 2200, s.reel_standard));
  }
  CHECK(by_grade.at("LA") == Catch::Approx(356.4));
  CHECK(by_grade.at("FL") == Catch::Approx(178.2));
  CHECK(by_grade.at("LB") == Catch::Approx(356.4));
}

TEST_CASE("externally supplied grades are left out") {
  Scenario s = t::toy_scenario();
  s.external_supply_grades = {"FL"};
  s.instances = {{"I1", "C1", "W01", "B1", {{1100, 1000, 10}}}};
  s = validate_scenario(s);
  std::vector<CorrugatorSolution> sols{consuming({{2200, 891.0}})};
  auto demand = explode_bom(s.instances, sols, s);
  REQUIRE(demand.size() == 2);
  for (const auto& d : demand) CHECK(d.grade_id != "FL");
  CHECK(explode_bom({}, {}, s).empty());
}

TEST_CASE("instances in the same period add up") {
  Scenario s = t::toy_scenario_with(
      {{"I1", "C1", "W01", "B1", {{1100, 1000, 10}}}, {"I2", "C1", "W01", "B1", {{1100, 1000, 10}}}});
  std::vector<CorrugatorSolution> sols{consuming({{2200, 1000.0}, {2500, 50.0}}), consuming({{2200, 500.0}})};
  auto demand = explode_bom(s.instances, sols, s);
  REQUIRE(demand.size() == 3);
  for (const auto& d : demand) {
    double share = d.grade_id == "FL" ? 0.2 : 0.4;
    CHECK(d.entries.at(2200).mass_kg == Catch::Approx(1500.0 * share));
    CHECK(d.entries.at(2500).mass_kg == Catch::Approx(50.0 * share));
  }
}

TEST_CASE("exact fit at both stages costs nothing") {
  // 1250 mm sheets pair up on a 2500 mm reel, and a 2500 mm deckle takes one
  // reel per set.
  Scenario s = t::toy_scenario_with({{"I1", "C1", "W01", "B1", {{1250, 1000, 4000}}}}, 2500);
  auto r = evaluate_policy(Policy({2500}), s);
  CHECK(r.w_cor == Catch::Approx(0.0).margin(1e-9));
  CHECK(r.w_pm == 0.0);
  CHECK(r.z == Catch::Approx(0.0).margin(1e-9));
  auto report = waste_percentage_report(r);
  REQUIRE(report.total_percent);
  CHECK(*report.total_percent == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("waste percentages") {
  auto both = waste_percentages(10000.0, 30000.0, 1000000.0, 500000.0);
  REQUIRE(both.total_percent);
  CHECK(*both.total_percent == 4.0);
  CHECK(*both.mill_percent == Catch::Approx(3.0));
  CHECK(*both.corrugator_percent == Catch::Approx(2.0));
  auto corr_only = waste_percentages(10000.0, 0.0, 1000000.0, 500000.0);
  CHECK(*corr_only.total_percent == 1.0);
  auto none = waste_percentages(0.0, 0.0, 1000.0, 1000.0);
  CHECK(*none.total_percent == 0.0);
  auto empty = waste_percentages(5.0, 0.0, 0.0, 0.0);
  CHECK_FALSE(empty.total_percent);
  CHECK_FALSE(empty.corrugator_percent);
}

TEST_CASE("z combines the stages with beta") {
  Scenario s = small_generated(3);
  Policy p({1500, 1800, 2100, 2300, 2500});
  double previous = -1.0;
  for (double beta : {1.0, 1.5, 2.0, 4.0}) {
    s.beta = beta;
    auto r = evaluate_policy(p, s);
    CHECK(r.z == Catch::Approx(beta * r.weighted_cor + r.weighted_pm).epsilon(1e-12));
    REQUIRE(r.w_cor > 0.0);
    CHECK(r.z > previous);
    previous = r.z;
  }
  s.beta = 1.0;
  auto r = evaluate_policy(p, s);
  CHECK(r.z == Catch::Approx(r.w_cor + r.w_pm).epsilon(1e-12));
}

TEST_CASE("grade cost weights scale each component") {
  Scenario s = small_generated(4);
  Policy p({1500, 1800, 2100, 2300, 2500});
  auto base = evaluate_policy(p, s);
  for (auto& g : s.grades) g.cost_weight = 2.0;
  auto doubled = evaluate_policy(p, s);
  CHECK(doubled.z == Catch::Approx(2.0 * base.z).epsilon(1e-12));
  CHECK(doubled.w_cor == Catch::Approx(base.w_cor).epsilon(1e-12));
}

TEST_CASE("attribution and bookkeeping") {
  Scenario s = small_generated(5, 20);
  Policy p({1400, 1750, 2000, 2250, 2500});
  auto r = evaluate_policy(p, s);
  double cor = 0.0, inst = 0.0, consumed = 0.0;
  for (const auto& [w, kg] : r.corrugator_attribution) {
    CHECK(p.contains(w));
    cor += kg;
  }
  for (const auto& [w, kg] : r.per_width_attribution) CHECK(p.contains(w));
  for (const auto& i : r.per_instance) {
    inst += i.waste_kg;
    consumed += i.consumed_kg;
  }
  CHECK(cor == Catch::Approx(r.w_cor).epsilon(1e-9));
  CHECK(inst == Catch::Approx(r.w_cor).epsilon(1e-9));
  CHECK(consumed == Catch::Approx(r.corrugator_input_kg).epsilon(1e-9));
  double mill = 0.0, production = 0.0;
  for (const auto& m : r.per_mill) {
    mill += m.waste_kg;
    production += m.production_kg;
    CHECK(m.proven_optimal);
  }
  CHECK(mill == Catch::Approx(r.w_pm).epsilon(1e-9));
  CHECK(production == Catch::Approx(r.mill_production_kg).epsilon(1e-9));
  CHECK(r.waste_fraction_total == Catch::Approx((r.w_cor + r.w_pm) / r.mill_production_kg).epsilon(1e-12));

  // Board mass is recovered from each grade's demand within one reel per cell.
  std::map<WidthMm, double> board;
  for (const auto& i : r.per_instance)
    for (const auto& [w, kg] : i.consumption_kg) board[w] += kg;
  for (const auto& d : r.demand) {
    for (const auto& [w, cell] : d.entries) {
      double reel_mass = reels_to_kg(cell.reels, w, s.reel_standard);
      CHECK(std::abs(reel_mass - cell.mass_kg) <= w * s.reel_standard.kg_per_mm_per_reel + 1e-9);
    }
  }
  for (const auto& g : s.grades) {
    std::map<WidthMm, double> recovered;
    for (const auto& d : r.demand)
      if (d.grade_id == g.id)
        for (const auto& [w, cell] : d.entries) recovered[w] += cell.mass_kg;
    for (const auto& [w, kg] : recovered) CHECK(kg <= board[w] + 1e-6);
  }
}

TEST_CASE("instance order does not change z") {
  Scenario s = small_generated(6, 16);
  Policy p({1450, 1700, 1950, 2250, 2500});
  auto base = evaluate_policy(p, s);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 3; ++i) {
    std::shuffle(s.instances.begin(), s.instances.end(), rng);
    auto shuffled = evaluate_policy(p, s);
    CHECK(shuffled.z == Catch::Approx(base.z).epsilon(1e-12));
  }
}

TEST_CASE("worker count does not change results") {
  Scenario s = small_generated(7, 16);
  Policy p({1450, 1700, 1950, 2250, 2500});
  auto a = evaluate_policy(p, s, {1, {}});
  auto b = evaluate_policy(p, s, {4, {}});
  CHECK(a.z == b.z);
  CHECK(a.per_width_attribution == b.per_width_attribution);
}

TEST_CASE("nested policies lift corrugator monotonicity") {
  Scenario s = small_generated(8, 10);
  Policy small({1800, 2500});
  Policy big({1500, 1800, 2200, 2500});
  CHECK(evaluate_policy(small, s).w_cor >= evaluate_policy(big, s).w_cor - 1e-9);
}

TEST_CASE("unservable policies name the failing instance") {
  Scenario s = t::toy_scenario_with({{"I7", "C1", "W01", "B1", {{1250, 1000, 100}}}});
  try {
    evaluate_policy(Policy({1200}), s);
    FAIL("expected UnservableError");
  } catch (const UnservableError& e) {
    CHECK(std::string(e.what()).find("I7") != std::string::npos);
  }
}

TEST_CASE("external demand joins the mill problem") {
  Scenario s = t::toy_scenario_with({{"I1", "C1", "W01", "B1", {{1250, 1000, 4000}}}}, 2500);
  s.external_demand = {{"LA", 2000, 3, "W01", {}}};
  s = validate_scenario(s);
  auto r = evaluate_policy(Policy({2500}), s);
  // Three 2000 mm reels on a 2500 mm deckle leave 500 mm each.
  CHECK(r.w_pm == Catch::Approx(3 * 500 * 1.072));
}
