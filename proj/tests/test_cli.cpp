#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "reelstock/cli.hpp"
#include "reelstock/generator.hpp"
#include "reelstock/scenario_io.hpp"

using namespace reelstock;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = REELSTOCK_FIXTURE_DIR;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("reelstock_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string without_elapsed(const std::string& text) {
  std::istringstream in(text);
  std::string line, kept;
  while (std::getline(in, line))
    if (line.rfind("elapsed", 0) != 0) kept += line + "\n";
  return kept;
}

std::string five_order() { return (kFixtures / "five_order.json").string(); }

// Small generated scenario written to disk.
fs::path small_scenario(const fs::path& dir, std::uint64_t seed, std::int64_t grades = 3) {
  GeneratorParams p;
  p.seed = seed;
  p.instance_count = 6;
  p.period_count = 2;
  p.grade_count = grades;
  fs::path path = dir / ("scenario_" + std::to_string(seed) + ".json");
  io::save_scenario(path, generate_scenario(p));
  return path;
}

}  // namespace

TEST_CASE("evaluate reports the five-order instance") {
  auto dir = scratch("evaluate");
  auto r = run({"evaluate", "--scenario", five_order(), "--policy", "2200,2500", "--out", (dir / "r.json").string()});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(r.out.find("3.07") != std::string::npos);
  CHECK(r.out.find("(3.075% of") != std::string::npos);
  REQUIRE(fs::exists(dir / "r.json"));
  auto json = io::read_file(dir / "r.json");
  CHECK(json.find("\"z\"") != std::string::npos);
  auto again = run({"evaluate", "--scenario", five_order(), "--policy", "2200,2500"});
  CHECK(without_elapsed(again.out) == without_elapsed(r.out));
}

TEST_CASE("evaluate rejects bad input with documented codes") {
  auto dir = scratch("bad");
  io::write_file(dir / "broken.json", "{ \"schema_version\": 1, ");
  CHECK(run({"evaluate", "--scenario", (dir / "broken.json").string(), "--policy", "2500"}).code ==
        cli::kExitValidation);
  CHECK(run({"evaluate", "--scenario", (dir / "missing.json").string(), "--policy", "2500"}).code ==
        cli::kExitValidation);
  CHECK(run({"evaluate", "--scenario", five_order(), "--policy", "22x0"}).code == cli::kExitValidation);
  CHECK(run({"evaluate", "--scenario", five_order(), "--policy", "2500", "--beta", "0.5"}).code ==
        cli::kExitValidation);
  auto unservable = run({"evaluate", "--scenario", five_order(), "--policy", "1100"});
  CHECK(unservable.code == cli::kExitUnservable);
  CHECK(unservable.err.find("I1") != std::string::npos);
  std::string text = io::read_file(five_order());
  auto pos = text.find("\"width\": 1150");
  text.replace(pos, 13, "\"width\": 11.5");
  io::write_file(dir / "fractional.json", text);
  CHECK(run({"evaluate", "--scenario", (dir / "fractional.json").string(), "--policy", "2500"}).code ==
        cli::kExitValidation);
  CHECK(run({"frobnicate"}).code == cli::kExitValidation);
  CHECK(run({}).code == cli::kExitValidation);
  CHECK(run({"--help"}).code == cli::kExitOk);
}

TEST_CASE("search writes its outputs") {
  auto dir = scratch("search");
  auto scenario = small_scenario(dir, 1);
  auto r = run({"search", "--scenario", scenario.string(), "--policy", "1500,2000,2500", "--max-evals", "1",
                "--workers", "1", "--out", (dir / "one").string()});
  REQUIRE(r.code == cli::kExitOk);
  auto history = io::read_file(dir / "one" / "history.tsv");
  auto rows = io::parse_history(history);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].policy == Policy({1500, 2000, 2500}));
  CHECK(rows[0].move == Move::initial);
  CHECK(std::count(history.begin(), history.end(), '\n') == 2);
  CHECK(fs::exists(dir / "one" / "best.json"));
  CHECK(fs::exists(dir / "one" / "report.txt"));
  CHECK(io::read_file(dir / "one" / "best_policy.txt").find("1500,2000,2500") != std::string::npos);
}

TEST_CASE("search history is byte identical across runs") {
  auto dir = scratch("repeat");
  auto scenario = small_scenario(dir, 2);
  for (const char* name : {"a", "b"}) {
    auto r = run({"search", "--scenario", scenario.string(), "--policy", "1400,1800,2200,2500", "--max-evals", "25",
                  "--workers", "1", "--seed", "9", "--out", (dir / name).string()});
    REQUIRE(r.code == cli::kExitOk);
  }
  auto a = io::read_file(dir / "a" / "history.tsv");
  auto b = io::read_file(dir / "b" / "history.tsv");
  CHECK(a == b);
  CHECK(io::parse_history(a).size() > 1);
}

TEST_CASE("estimate reads a history") {
  auto dir = scratch("estimate");
  std::string text = io::history_header();
  for (int i = 0; i < 40; ++i) {
    HistoryEntry e{Policy({1000 + 5 * i, 2500}), 100.0 + (i * 37 % 41) * 0.5, static_cast<std::size_t>(i + 1),
                   std::nullopt, Move::initial};
    if (i > 0) e.parent = Policy({1000, 2500}), e.move = Move::jitter;
    text += io::format_history_row(e);
  }
  io::write_file(dir / "h.tsv", text);
  auto r = run({"estimate", "--history", (dir / "h.tsv").string(), "--out", (dir / "hist.csv").string(), "--bins",
                "5"});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(r.out.find("estimated optimum") != std::string::npos);
  CHECK(r.out.find("sample minimum   100") != std::string::npos);
  auto csv = io::read_file(dir / "hist.csv");
  CHECK(csv.rfind("bin_lower,count\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);

  std::string short_text = io::history_header();
  for (int i = 0; i < 5; ++i)
    short_text += io::format_history_row({Policy({1000 + 5 * i}), 1.0 + i, static_cast<std::size_t>(i + 1)});
  io::write_file(dir / "short.tsv", short_text);
  CHECK(run({"estimate", "--history", (dir / "short.tsv").string()}).code == cli::kExitValidation);
  io::write_file(dir / "garbled.tsv", io::history_header() + "1500\tabc\t-\tinitial\t1\n");
  CHECK(run({"estimate", "--history", (dir / "garbled.tsv").string()}).code == cli::kExitValidation);
}

TEST_CASE("estimate on a synthetic Weibull history") {
  auto dir = scratch("weibull");
  std::mt19937_64 rng(400);
  std::weibull_distribution<double> dist(1.5, 2.0);
  std::string text = io::history_header();
  for (int i = 0; i < 400; ++i)
    text += io::format_history_row({Policy({500 + 5 * i}), 5.0 + dist(rng), static_cast<std::size_t>(i + 1)});
  io::write_file(dir / "h.tsv", text);
  auto r = run({"estimate", "--history", (dir / "h.tsv").string()});
  REQUIRE(r.code == cli::kExitOk);
  auto pos = r.out.find("estimated optimum ");
  REQUIRE(pos != std::string::npos);
  double estimate = std::stod(r.out.substr(pos + 18));
  CHECK(std::abs(estimate - 5.0) <= 0.10);

  std::string flat = io::history_header();
  for (int i = 0; i < 12; ++i) flat += io::format_history_row({Policy({500 + 5 * i}), 3.5, static_cast<std::size_t>(i + 1)});
  io::write_file(dir / "flat.tsv", flat);
  auto f = run({"estimate", "--history", (dir / "flat.tsv").string()});
  REQUIRE(f.code == cli::kExitOk);
  CHECK(f.out.find("estimated optimum 3.5\n") != std::string::npos);

  std::string many = io::history_header();
  for (int i = 0; i < 436; ++i)
    many += io::format_history_row({Policy({500 + 5 * i}), 10.0 + dist(rng), static_cast<std::size_t>(i + 1)});
  io::write_file(dir / "many.tsv", many);
  REQUIRE(run({"estimate", "--history", (dir / "many.tsv").string(), "--out", (dir / "many.csv").string()}).code ==
          cli::kExitOk);
  std::istringstream csv(io::read_file(dir / "many.csv"));
  std::string line;
  std::getline(csv, line);
  std::size_t total = 0;
  while (std::getline(csv, line)) total += std::stoul(line.substr(line.find(',') + 1));
  CHECK(total == 436);
}

TEST_CASE("generate is deterministic per seed") {
  auto dir = scratch("generate");
  auto params = (kFixtures / "midscale_params.json").string();
  REQUIRE(run({"generate", "--params", params, "--out", (dir / "a.json").string()}).code == cli::kExitOk);
  REQUIRE(run({"generate", "--params", params, "--out", (dir / "b.json").string()}).code == cli::kExitOk);
  REQUIRE(run({"generate", "--params", params, "--out", (dir / "c.json").string(), "--seed", "5"}).code ==
          cli::kExitOk);
  auto a = io::read_file(dir / "a.json");
  CHECK(a == io::read_file(dir / "b.json"));
  CHECK(a != io::read_file(dir / "c.json"));
  auto s = io::parse_scenario(a);
  CHECK(s.instances.size() == 200);
  io::write_file(dir / "bad_params.json", "{\"instance_count\": 0}");
  CHECK(run({"generate", "--params", (dir / "bad_params.json").string(), "--out", (dir / "d.json").string()}).code ==
        cli::kExitValidation);
  CHECK_FALSE(fs::exists(dir / "d.json"));
}

TEST_CASE("compare runs both scenarios") {
  auto dir = scratch("compare");
  auto a = small_scenario(dir, 3);
  auto same = run({"compare", "--scenario", a.string(), "--scenario-b", a.string(), "--policy", "1500,2000,2500",
                   "--max-evals", "5", "--workers", "1", "--out", (dir / "out").string()});
  REQUIRE(same.code == cli::kExitOk);
  CHECK(same.out.find("delta z (B - A)   +0.000000") != std::string::npos);
  CHECK(fs::exists(dir / "out" / "history_a.tsv"));
  CHECK(fs::exists(dir / "out" / "history_b.tsv"));
  CHECK(fs::exists(dir / "out" / "compare.txt"));
  auto other = small_scenario(dir, 4, 5);
  auto mismatch = run({"compare", "--scenario", a.string(), "--scenario-b", other.string(), "--policy",
                       "1500,2000,2500", "--max-evals", "5", "--workers", "1"});
  CHECK(mismatch.code == cli::kExitValidation);
}

TEST_CASE("scenario files round-trip") {
  auto text = io::read_file(five_order());
  auto first = io::parse_scenario(text);
  auto second = io::parse_scenario(io::serialize_scenario(first));
  CHECK(first == second);
  CHECK(io::scenario_digest(first) == io::scenario_digest(second));
  GeneratorParams p;
  p.seed = 17;
  p.grade_count = 5;
  auto generated = generate_scenario(p);
  generated.external_supply_grades = {generated.grades[0].id};
  generated.grade_machines[generated.grades[1].id] = {generated.machines[0].id};
  generated.external_demand.push_back({generated.grades[2].id, 1900, 4, generated.periods[0], {}});
  generated = validate_scenario(generated);
  CHECK(io::parse_scenario(io::serialize_scenario(generated)) == generated);
  auto params = io::parse_generator_params(io::serialize_generator_params(p));
  CHECK(params == p);
}

TEST_CASE("history rows round-trip") {
  HistoryEntry a{Policy({1350, 2500}), 12345.678901234567, 1, std::nullopt, Move::initial};
  HistoryEntry b{Policy({1355, 2500}), INFINITY, 2, Policy({1350, 2500}), Move::double_jitter};
  auto rows = io::parse_history(io::history_header() + io::format_history_row(a) + io::format_history_row(b));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].z == a.z);
  CHECK_FALSE(rows[0].parent);
  CHECK(std::isinf(rows[1].z));
  CHECK(rows[1].parent == a.policy);
  CHECK(rows[1].move == Move::double_jitter);
}
