#include "reelstock/evaluate.hpp"

#include <algorithm>
#include <utility>

#include "parallel.hpp"

namespace reelstock {

std::vector<GradeWidthDemand> explode_bom(std::span<const CorrugatorInstance> instances,
                                          std::span<const CorrugatorSolution> solutions, const Scenario& scenario) {
  if (instances.size() != solutions.size()) {
    throw std::invalid_argument("explode_bom: one solution per instance required");
  }
  std::map<std::pair<std::string, std::string>, std::map<WidthMm, double>> mass;
  for (std::size_t n = 0; n < instances.size(); ++n) {
    const Bom* bom = scenario.find_bom(instances[n].bom_id);
    if (!bom) throw std::invalid_argument("explode_bom: unknown bom '" + instances[n].bom_id + "'");
    for (const auto& entry : bom->entries) {
      if (scenario.is_external_supply(entry.grade_id)) continue;
      auto& cell = mass[{entry.grade_id, instances[n].period_id}];
      for (const auto& [width, used] : solutions[n].consumption) cell[width] += used.mass_kg * entry.weight_share;
    }
  }
  std::vector<GradeWidthDemand> out;
  for (const auto& [key, widths] : mass) {
    GradeWidthDemand demand{key.first, key.second, {}};
    for (const auto& [width, kg] : widths) {
      demand.entries[width] = GradeWidthCell{kg, kg_to_reels(kg, width, scenario.reel_standard)};
    }
    out.push_back(std::move(demand));
  }
  return out;
}

namespace {

struct MillProblem {
  std::string grade_id;
  std::string period_id;
  std::vector<PaperMachineSpec> machines;
  std::vector<ReelDemandItem> items;
};

std::vector<MillProblem> build_mill_problems(const std::vector<GradeWidthDemand>& demand, const Scenario& scenario) {
  std::map<std::pair<std::string, std::string>, MillProblem> problems;
  auto problem_for = [&](const std::string& grade, const std::string& period) -> MillProblem& {
    auto [it, fresh] = problems.try_emplace({grade, period});
    if (fresh) {
      it->second.grade_id = grade;
      it->second.period_id = period;
      auto allowed = scenario.grade_machines.find(grade);
      for (const auto& m : scenario.machines) {
        if (allowed == scenario.grade_machines.end() ||
            std::find(allowed->second.begin(), allowed->second.end(), m.id) != allowed->second.end()) {
          it->second.machines.push_back(m);
        }
      }
    }
    return it->second;
  };

  for (const auto& d : demand) {
    MillProblem& p = problem_for(d.grade_id, d.period_id);
    for (const auto& [width, cell] : d.entries) {
      if (cell.reels > 0) p.items.push_back(ReelDemandItem{width, cell.reels, {}});
    }
  }
  for (const auto& ext : scenario.external_demand) {
    if (scenario.is_external_supply(ext.grade_id) || ext.reels <= 0) continue;
    MillProblem& p = problem_for(ext.grade_id, ext.period_id);
    ReelDemandItem item{ext.width, ext.reels, {}};
    if (!ext.machine_ids.empty()) {
      for (std::size_t m = 0; m < p.machines.size(); ++m) {
        if (std::find(ext.machine_ids.begin(), ext.machine_ids.end(), p.machines[m].id) != ext.machine_ids.end()) {
          item.eligible_machines.push_back(m);
        }
      }
      if (item.eligible_machines.empty()) {
        throw UnservableError("grade '" + ext.grade_id + "' period '" + ext.period_id + "'",
                              "external demand for width " + std::to_string(ext.width) +
                                  " has no eligible machine for its grade");
      }
    }
    p.items.push_back(std::move(item));
  }

  std::vector<MillProblem> out;
  for (auto& [key, p] : problems) {
    if (!p.items.empty()) out.push_back(std::move(p));
  }
  return out;
}

double bom_cost_factor(const Bom& bom, const Scenario& scenario) {
  double factor = 0.0;
  for (const auto& entry : bom.entries) {
    const Grade* grade = scenario.find_grade(entry.grade_id);
    factor += entry.weight_share * (grade ? grade->cost_weight : 1.0);
  }
  return factor;
}

}  // namespace

EvaluationResult evaluate_policy(const Policy& policy, const Scenario& scenario, const EvaluateOptions& options) {
  if (policy.empty()) throw std::invalid_argument("evaluate_policy: empty policy");

  const auto& instances = scenario.instances;
  std::vector<CorrugatorSolution> solutions(instances.size());
  detail::parallel_for(instances.size(), options.worker_count, [&](std::size_t n) {
    const CorrugatorInstance& inst = instances[n];
    const CorrugatorSpec* spec = scenario.find_corrugator(inst.corrugator_id);
    const Bom* bom = scenario.find_bom(inst.bom_id);
    if (!spec || !bom) throw std::invalid_argument("evaluate_policy: instance '" + inst.id + "' has dangling references");
    solutions[n] = solve_corrugator(inst, policy, *spec, scenario.bom_grammage(*bom));
  });

  EvaluationResult result;
  result.policy = policy;
  result.beta = scenario.beta;
  for (std::size_t n = 0; n < instances.size(); ++n) {
    const CorrugatorSolution& sol = solutions[n];
    const Bom* bom = scenario.find_bom(instances[n].bom_id);
    result.w_cor += sol.waste_mass_kg;
    result.weighted_cor += sol.waste_mass_kg * bom_cost_factor(*bom, scenario);
    result.corrugator_input_kg += sol.consumed_mass_kg();
    for (const auto& [width, kg] : corrugator_waste_by_width(sol)) result.corrugator_attribution[width] += kg;

    InstanceSummary summary{instances[n].id, instances[n].corrugator_id, instances[n].period_id,
                            instances[n].bom_id, sol.waste_mass_kg, sol.consumed_mass_kg(), sol.waste_fraction,
                            sol.runs.size(), {}};
    for (const auto& [width, used] : sol.consumption) {
      summary.consumption_kg[width] = used.mass_kg;
      result.per_width_consumption[width] += used.mass_kg;
    }
    result.per_instance.push_back(std::move(summary));
  }

  result.demand = explode_bom(instances, solutions, scenario);
  const auto problems = build_mill_problems(result.demand, scenario);
  std::vector<MillSolution> mill(problems.size());
  detail::parallel_for(problems.size(), options.worker_count, [&](std::size_t k) {
    const MillProblem& p = problems[k];
    const std::string where = "grade '" + p.grade_id + "' period '" + p.period_id + "'";
    if (p.machines.empty()) throw UnservableError(where, "no machine may make this grade");
    try {
      mill[k] = solve_papermill(p.items, p.machines, scenario.quantity_tolerance_up, scenario.reel_standard,
                                options.mill);
    } catch (const UnservableError& e) {
      throw UnservableError(where, e.what());
    }
  });

  for (std::size_t k = 0; k < problems.size(); ++k) {
    const MillSolution& sol = mill[k];
    const Grade* grade = scenario.find_grade(problems[k].grade_id);
    result.w_pm += sol.waste_kg;
    result.weighted_pm += sol.waste_kg * (grade ? grade->cost_weight : 1.0);
    result.mill_production_kg += sol.production_kg;
    for (const auto& [width, kg] : attribute_mill_waste(sol, problems[k].machines, scenario.reel_standard)) {
      result.mill_attribution[width] += kg;
    }
    std::int64_t runs = 0;
    for (const auto& run : sol.runs) runs += run.run_count;
    result.per_mill.push_back(MillSummary{problems[k].grade_id, problems[k].period_id, sol.waste_kg,
                                          sol.production_kg, sol.waste_fraction, static_cast<std::size_t>(runs),
                                          sol.proven_optimal});
  }

  for (WidthMm width : policy.widths()) {
    double kg = 0.0;
    if (auto it = result.corrugator_attribution.find(width); it != result.corrugator_attribution.end()) kg += it->second;
    if (auto it = result.mill_attribution.find(width); it != result.mill_attribution.end()) kg += it->second;
    result.per_width_attribution[width] = kg;
  }

  result.z = scenario.beta * result.weighted_cor + result.weighted_pm;
  result.waste_fraction_total =
      result.mill_production_kg > 0.0 ? (result.w_cor + result.w_pm) / result.mill_production_kg : 0.0;
  return result;
}

WasteReport waste_percentages(double corrugator_waste_kg, double mill_waste_kg, double production_kg,
                              double corrugator_input_kg) {
  WasteReport r;
  r.corrugator_waste_kg = corrugator_waste_kg;
  r.mill_waste_kg = mill_waste_kg;
  r.total_waste_kg = corrugator_waste_kg + mill_waste_kg;
  r.production_kg = production_kg;
  r.corrugator_input_kg = corrugator_input_kg;
  if (production_kg > 0.0) {
    r.total_percent = 100.0 * r.total_waste_kg / production_kg;
    r.mill_percent = 100.0 * mill_waste_kg / production_kg;
  }
  if (corrugator_input_kg > 0.0) r.corrugator_percent = 100.0 * corrugator_waste_kg / corrugator_input_kg;
  return r;
}

WasteReport waste_percentage_report(const EvaluationResult& result) {
  return waste_percentages(result.w_cor, result.w_pm, result.mill_production_kg, result.corrugator_input_kg);
}

}  // namespace reelstock
