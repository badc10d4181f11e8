#include "reelstock/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "reelstock/generator.hpp"
#include "reelstock/scenario_io.hpp"
#include "reelstock/search.hpp"
#include "reelstock/stats.hpp"

namespace reelstock::cli {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string percent(const std::optional<double>& v) { return v ? fmt::format("{:.3f}%", *v) : "undefined"; }

struct SearchFlags {
  std::string scenario;
  std::string policy;
  std::optional<double> beta;
  std::uint64_t seed = 1;
  std::size_t workers = 0;
  std::size_t max_evals = 500;
  WidthMm grid = 5;
  std::size_t card_min = 0;
  std::size_t card_max = 0;
  WidthMm width_min = 0;
  WidthMm width_max = 0;
  double epsilon = 0.30;
  double delta = 0.05;
  std::size_t candidates = 8;
  std::optional<double> time_limit;
  std::string out;
};

void add_search_flags(CLI::App* cmd, SearchFlags& f) {
  cmd->add_option("--policy", f.policy, "Initial policy, comma-separated mm")->required();
  cmd->add_option("--beta", f.beta, "Override the corrugator waste weight (>= 1)");
  cmd->add_option("--seed", f.seed, "Random seed")->capture_default_str();
  cmd->add_option("--workers", f.workers, "Parallel evaluations (0: all cores)")->capture_default_str();
  cmd->add_option("--max-evals", f.max_evals, "Evaluation budget")->capture_default_str();
  cmd->add_option("--grid", f.grid, "Width grid in mm")->capture_default_str();
  cmd->add_option("--card-min", f.card_min, "Smallest policy cardinality (0: 1)")->capture_default_str();
  cmd->add_option("--card-max", f.card_max, "Largest policy cardinality (0: initial)")->capture_default_str();
  cmd->add_option("--width-min", f.width_min, "Narrowest width searched (0: narrowest sheet)");
  cmd->add_option("--width-max", f.width_max, "Widest width searched (0: widest corrugator)");
  cmd->add_option("--epsilon", f.epsilon, "Initial expansion slack")->capture_default_str();
  cmd->add_option("--delta", f.delta, "Decay of the expansion slack")->capture_default_str();
  cmd->add_option("--candidates", f.candidates, "Candidates per expansion")->capture_default_str();
  cmd->add_option("--time-limit", f.time_limit, "Wall-clock limit in seconds");
}

SearchConfig config_from(const SearchFlags& f) {
  SearchConfig c;
  c.epsilon = f.epsilon;
  c.delta = f.delta;
  c.width_grid = f.grid;
  c.width_min = f.width_min;
  c.width_max = f.width_max;
  c.cardinality_min = f.card_min;
  c.cardinality_max = f.card_max;
  c.max_evaluations = f.max_evals;
  c.worker_count = f.workers;
  c.seed = f.seed;
  c.candidates_per_expansion = f.candidates;
  c.wall_clock_seconds = f.time_limit;
  return c;
}

Policy parse_policy_flag(const std::string& text) {
  try {
    Policy p = Policy::parse(text);
    if (p.empty()) throw std::invalid_argument("empty policy");
    return p;
  } catch (const std::invalid_argument& e) {
    throw ValidationError({std::string("--policy: ") + e.what()});
  }
}

Scenario load_with_beta(const std::string& path, const std::optional<double>& beta) {
  Scenario s = io::load_scenario(path);
  if (beta) {
    s.beta = *beta;
    s = validate_scenario(std::move(s));
  }
  return s;
}

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create '" + dir + "': " + ec.message());
}

std::string stop_text(StopReason r) {
  switch (r) {
    case StopReason::budget:
      return "evaluation budget reached";
    case StopReason::queue_empty:
      return "candidate queue exhausted";
    case StopReason::wall_clock:
      return "wall-clock limit reached";
  }
  return "";
}

int cmd_evaluate(const std::string& scenario_path, const std::string& policy_text, const std::optional<double>& beta,
                 std::size_t workers, const std::string& out_path, std::ostream& out) {
  const auto start = Clock::now();
  const Scenario scenario = load_with_beta(scenario_path, beta);
  const Policy policy = parse_policy_flag(policy_text);
  EvaluateOptions options;
  options.worker_count = workers ? workers : std::max(1u, std::thread::hardware_concurrency());
  const EvaluationResult result = evaluate_policy(policy, scenario, options);
  const std::string digest = io::scenario_digest(scenario);
  const double elapsed = seconds_since(start);
  if (!out_path.empty()) io::write_file(out_path, io::serialize_result(result, digest, elapsed));
  out << format_report(result, digest) << fmt::format("elapsed          {:.3f} s\n", elapsed);
  return kExitOk;
}

SearchResult run_search(const Scenario& scenario, const SearchFlags& flags, const std::string& history_path) {
  const Policy initial = parse_policy_flag(flags.policy);
  std::ofstream history;
  if (!history_path.empty()) {
    history.open(history_path, std::ios::binary | std::ios::trunc);
    if (!history) throw std::runtime_error("cannot write '" + history_path + "'");
    history << io::history_header() << std::flush;
  }
  SearchHooks hooks;
  hooks.on_evaluated = [&](const HistoryEntry& e) {
    if (history.is_open()) history << io::format_history_row(e) << std::flush;
  };
  return search(scenario, initial, config_from(flags), hooks);
}

int cmd_search(const SearchFlags& flags, std::ostream& out) {
  const auto start = Clock::now();
  const Scenario scenario = load_with_beta(flags.scenario, flags.beta);
  ensure_directory(flags.out);
  const fs::path dir(flags.out);
  const SearchResult result = run_search(scenario, flags, (dir / "history.tsv").string());

  const std::string digest = io::scenario_digest(scenario);
  const double elapsed = seconds_since(start);
  std::string report = format_report(result.best, digest);
  report += fmt::format("evaluations      {}\nstopped          {}\n", result.history.size(), stop_text(result.stop));
  io::write_file(dir / "best.json", io::serialize_result(result.best, digest, elapsed));
  io::write_file(dir / "best_policy.txt", result.best_policy.to_string() + "\n");
  io::write_file(dir / "report.txt", report);
  out << report << fmt::format("elapsed          {:.3f} s\n", elapsed);
  return kExitOk;
}

int cmd_estimate(const std::string& history_path, const std::string& histogram_path, std::size_t bins,
                 double percentile, std::ostream& out) {
  const auto entries = io::parse_history(io::read_file(history_path));
  std::vector<double> z;
  for (const auto& e : entries) {
    if (std::isfinite(e.z)) z.push_back(e.z);
  }
  if (z.size() < 10) {
    throw ValidationError({"history holds " + std::to_string(z.size()) + " finite evaluations; at least 10 needed"});
  }
  if (bins < 1) throw ValidationError({"--bins must be >= 1"});
  if (!(percentile > 0.0 && percentile < 1.0)) throw ValidationError({"--percentile must lie in (0, 1)"});

  LocationOptions options;
  options.upper_percentile = percentile;
  const double location = estimate_location(z, options);
  const double minimum = *std::min_element(z.begin(), z.end());
  const WeibullFit fit =
      fit_weibull(z, [&](std::span<const double> s) { return estimate_location(s, options); });

  out << fmt::format("samples          {}\n", z.size());
  if (z.size() < entries.size()) out << fmt::format("skipped          {} unservable\n", entries.size() - z.size());
  out << fmt::format("sample minimum   {:.6g}\n", minimum);
  out << fmt::format("estimated optimum {:.6g}\n", location);
  out << fmt::format("gap              {:.6g} ({:.3f}% of minimum)\n", minimum - location,
                     minimum != 0.0 ? 100.0 * (minimum - location) / std::abs(minimum) : 0.0);
  if (fit.converged) {
    out << fmt::format("weibull shape    {:.4g}\nweibull scale    {:.6g}\n", fit.shape, fit.scale);
  } else {
    out << "weibull fit      not converged: " << fit.diagnostics << "\n";
  }
  if (!histogram_path.empty()) io::write_file(histogram_path, io::format_histogram(histogram(z, bins)));
  return kExitOk;
}

int cmd_compare(const SearchFlags& flags, const std::string& other_path, std::ostream& out) {
  const auto start = Clock::now();
  const Scenario a = load_with_beta(flags.scenario, flags.beta);
  const Scenario b = load_with_beta(other_path, flags.beta);

  auto grade_ids = [](const Scenario& s) {
    std::set<std::string> ids;
    for (const auto& g : s.grades) ids.insert(g.id);
    return ids;
  };
  std::vector<std::string> problems;
  if (grade_ids(a) != grade_ids(b)) problems.push_back("scenarios have different grade sets");
  if (std::set<std::string>(a.periods.begin(), a.periods.end()) !=
      std::set<std::string>(b.periods.begin(), b.periods.end())) {
    problems.push_back("scenarios have different periods");
  }
  if (!problems.empty()) throw ValidationError(problems);

  std::string history_a, history_b;
  if (!flags.out.empty()) {
    ensure_directory(flags.out);
    history_a = (fs::path(flags.out) / "history_a.tsv").string();
    history_b = (fs::path(flags.out) / "history_b.tsv").string();
  }
  const SearchResult ra = run_search(a, flags, history_a);
  const SearchResult rb = run_search(b, flags, history_b);
  const WasteReport wa = waste_percentage_report(ra.best);
  const WasteReport wb = waste_percentage_report(rb.best);

  std::string report;
  report += fmt::format("{:<18}{:>24}{:>24}\n", "", "A", "B");
  report += fmt::format("{:<18}{:>24}{:>24}\n", "scenario", io::scenario_digest(a), io::scenario_digest(b));
  report += fmt::format("{:<18}{:>24}{:>24}\n", "best policy", ra.best_policy.to_string(), rb.best_policy.to_string());
  report += fmt::format("{:<18}{:>24.6f}{:>24.6f}\n", "z", ra.best.z, rb.best.z);
  report += fmt::format("{:<18}{:>24}{:>24}\n", "total waste", percent(wa.total_percent), percent(wb.total_percent));
  report += fmt::format("{:<18}{:>24}{:>24}\n", "evaluations", ra.history.size(), rb.history.size());
  report += fmt::format("delta z (B - A)   {:+.6f}\n", rb.best.z - ra.best.z);
  if (wa.total_percent && wb.total_percent) {
    report += fmt::format("delta waste       {:+.3f} pp\n", *wb.total_percent - *wa.total_percent);
  }
  if (!flags.out.empty()) io::write_file(fs::path(flags.out) / "compare.txt", report);
  out << report << fmt::format("elapsed          {:.3f} s\n", seconds_since(start));
  return kExitOk;
}

int cmd_generate(const std::string& params_path, const std::string& out_path, const std::optional<std::uint64_t>& seed,
                 std::ostream& out) {
  GeneratorParams params = io::parse_generator_params(io::read_file(params_path));
  if (seed) params.seed = *seed;
  const Scenario scenario = generate_scenario(params);
  io::save_scenario(out_path, scenario);
  out << fmt::format("wrote {} instances, {} grades, {} periods to {}\n", scenario.instances.size(),
                     scenario.grades.size(), scenario.periods.size(), out_path);
  return kExitOk;
}

}  // namespace

std::string format_report(const EvaluationResult& r, const std::string& digest) {
  const WasteReport w = waste_percentage_report(r);
  std::string s;
  s += fmt::format("scenario         {}\n", digest);
  s += fmt::format("policy           {} ({} widths)\n", r.policy.to_string(), r.policy.cardinality());
  s += fmt::format("beta             {:g}\n", r.beta);
  s += fmt::format("corrugator waste {:.1f} kg ({} of {:.1f} kg input)\n", r.w_cor, percent(w.corrugator_percent),
                   r.corrugator_input_kg);
  s += fmt::format("mill waste       {:.1f} kg ({} of {:.1f} kg production)\n", r.w_pm, percent(w.mill_percent),
                   r.mill_production_kg);
  s += fmt::format("total waste      {:.1f} kg ({} of mill production)\n", w.total_waste_kg, percent(w.total_percent));
  s += fmt::format("z                {:.6f}\n", r.z);

  s += "\nper width            consumed kg   corrugator kg       mill kg      total kg\n";
  for (const auto& [width, total] : r.per_width_attribution) {
    auto at = [&](const std::map<WidthMm, double>& m) {
      auto it = m.find(width);
      return it == m.end() ? 0.0 : it->second;
    };
    s += fmt::format("  {:>6} {:>20.1f} {:>15.1f} {:>13.1f} {:>13.1f}\n", width, at(r.per_width_consumption),
                     at(r.corrugator_attribution), at(r.mill_attribution), total);
  }

  s += "\ncorrugator instances\n";
  for (const auto& i : r.per_instance) {
    s += fmt::format("  {:<12} {:<8} {:<8} waste {:>10.1f} kg of {:>11.1f} kg  {:>7.3f}%  runs {}\n", i.instance_id,
                     i.corrugator_id, i.period_id, i.waste_kg, i.consumed_kg, 100.0 * i.waste_fraction, i.run_count);
  }
  s += "\npaper machines\n";
  for (const auto& m : r.per_mill) {
    s += fmt::format("  {:<8} {:<8} waste {:>10.1f} kg of {:>11.1f} kg  {:>7.3f}%  runs {}{}\n", m.grade_id,
                     m.period_id, m.waste_kg, m.production_kg, 100.0 * m.waste_fraction, m.run_count,
                     m.proven_optimal ? "" : "  (node limit hit)");
  }
  return s;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reel-width policy analysis for integrated paper and corrugated-board production"};
  app.require_subcommand(1);

  std::string scenario, policy, out_path, history, other, params;
  std::optional<double> beta;
  std::size_t workers = 0, bins = 20;
  double percentile = 0.63;
  std::optional<std::uint64_t> seed;
  SearchFlags search_flags;

  auto* evaluate = app.add_subcommand("evaluate", "Evaluate one policy");
  evaluate->add_option("--scenario", scenario, "Scenario file")->required();
  evaluate->add_option("--policy", policy, "Policy, comma-separated mm")->required();
  evaluate->add_option("--beta", beta, "Override the corrugator waste weight (>= 1)");
  evaluate->add_option("--workers", workers, "Parallel instance solves (0: all cores)");
  evaluate->add_option("--out", out_path, "Result file (JSON)");

  auto* search_cmd = app.add_subcommand("search", "Tabu search from an initial policy");
  search_cmd->add_option("--scenario", search_flags.scenario, "Scenario file")->required();
  add_search_flags(search_cmd, search_flags);
  search_cmd->add_option("--out", search_flags.out, "Output directory")->required();

  auto* estimate = app.add_subcommand("estimate", "Estimate the optimum from a search history");
  estimate->add_option("--history", history, "History file")->required();
  estimate->add_option("--out", out_path, "Histogram file (CSV)");
  estimate->add_option("--bins", bins, "Histogram bins")->capture_default_str();
  estimate->add_option("--percentile", percentile, "Upper order-statistic percentile")->capture_default_str();

  auto* compare = app.add_subcommand("compare", "Search two scenarios with the same settings");
  compare->add_option("--scenario", search_flags.scenario, "Scenario A")->required();
  compare->add_option("--scenario-b", other, "Scenario B")->required();
  add_search_flags(compare, search_flags);
  compare->add_option("--out", search_flags.out, "Output directory");

  auto* generate = app.add_subcommand("generate", "Write a synthetic scenario");
  generate->add_option("--params", params, "Generator parameters (JSON)")->required();
  generate->add_option("--out", out_path, "Scenario file to write")->required();
  generate->add_option("--seed", seed, "Override the seed in the parameters");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    if (auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front()) {
      err << sub->help();
    } else {
      err << app.help();
    }
    return kExitValidation;
  }

  try {
    if (evaluate->parsed()) return cmd_evaluate(scenario, policy, beta, workers, out_path, out);
    if (search_cmd->parsed()) return cmd_search(search_flags, out);
    if (estimate->parsed()) return cmd_estimate(history, out_path, bins, percentile, out);
    if (compare->parsed()) return cmd_compare(search_flags, other, out);
    if (generate->parsed()) return cmd_generate(params, out_path, seed, out);
  } catch (const ValidationError& e) {
    err << "invalid input:\n";
    for (const auto& v : e.violations()) err << "  - " << v << "\n";
    return kExitValidation;
  } catch (const UnservableError& e) {
    err << "unservable: " << e.what() << "\n";
    return kExitUnservable;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace reelstock::cli
