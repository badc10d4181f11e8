#include "reelstock/domain.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>

namespace reelstock {

namespace {

std::string join_violations(const std::vector<std::string>& violations) {
  std::string out = "scenario validation failed:";
  for (const auto& v : violations) {
    out += "\n  - ";
    out += v;
  }
  return out;
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

template <typename T, typename Key>
void check_unique_ids(const std::vector<T>& items, Key key, std::string_view kind,
                      std::vector<std::string>& out) {
  std::set<std::string> seen;
  for (const auto& item : items) {
    const std::string& id = key(item);
    if (id.empty()) out.push_back(std::string(kind) + " with empty id");
    if (!seen.insert(id).second) out.push_back("duplicate " + std::string(kind) + " id '" + id + "'");
  }
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : std::runtime_error(join_violations(violations)), violations_(std::move(violations)) {}

UnservableError::UnservableError(std::string where, const std::string& what)
    : std::runtime_error(where + ": " + what), where_(std::move(where)) {}

std::string_view to_string(LayerRole role) {
  switch (role) {
    case LayerRole::top:
      return "top";
    case LayerRole::fluting:
      return "fluting";
    case LayerRole::bottom:
      return "bottom";
    case LayerRole::extra:
      return "extra";
  }
  return "extra";
}

std::optional<LayerRole> parse_layer_role(std::string_view text) {
  if (text == "top") return LayerRole::top;
  if (text == "fluting") return LayerRole::fluting;
  if (text == "bottom") return LayerRole::bottom;
  if (text == "extra") return LayerRole::extra;
  return std::nullopt;
}

const Grade* Scenario::find_grade(std::string_view id) const {
  auto it = std::find_if(grades.begin(), grades.end(), [&](const Grade& g) { return g.id == id; });
  return it == grades.end() ? nullptr : &*it;
}

const Bom* Scenario::find_bom(std::string_view id) const {
  auto it = std::find_if(boms.begin(), boms.end(), [&](const Bom& b) { return b.id == id; });
  return it == boms.end() ? nullptr : &*it;
}

const CorrugatorSpec* Scenario::find_corrugator(std::string_view id) const {
  auto it = std::find_if(corrugators.begin(), corrugators.end(),
                         [&](const CorrugatorSpec& c) { return c.id == id; });
  return it == corrugators.end() ? nullptr : &*it;
}

const PaperMachineSpec* Scenario::find_machine(std::string_view id) const {
  auto it = std::find_if(machines.begin(), machines.end(),
                         [&](const PaperMachineSpec& m) { return m.id == id; });
  return it == machines.end() ? nullptr : &*it;
}

bool Scenario::is_external_supply(std::string_view grade_id) const {
  return std::find(external_supply_grades.begin(), external_supply_grades.end(), grade_id) !=
         external_supply_grades.end();
}

double Scenario::bom_grammage(const Bom& bom) const {
  return bom.grammage.value_or(nominal_grammage);
}

Policy::Policy(std::vector<WidthMm> widths) : widths_(std::move(widths)) {
  std::sort(widths_.begin(), widths_.end());
  if (!widths_.empty() && widths_.front() <= 0) {
    throw std::invalid_argument("policy widths must be positive");
  }
  if (std::adjacent_find(widths_.begin(), widths_.end()) != widths_.end()) {
    throw std::invalid_argument("policy widths must be distinct");
  }
}

Policy Policy::parse(std::string_view text) {
  std::vector<WidthMm> widths;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view token = text.substr(pos, comma - pos);
    while (!token.empty() && std::isspace(static_cast<unsigned char>(token.front()))) token.remove_prefix(1);
    while (!token.empty() && std::isspace(static_cast<unsigned char>(token.back()))) token.remove_suffix(1);
    if (token.empty()) throw std::invalid_argument("empty width in policy '" + std::string(text) + "'");
    WidthMm value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      throw std::invalid_argument("policy widths must be integer mm, got '" + std::string(token) + "'");
    }
    widths.push_back(value);
    pos = comma + 1;
  }
  return Policy(std::move(widths));
}

bool Policy::contains(WidthMm width) const {
  return std::binary_search(widths_.begin(), widths_.end(), width);
}

bool Policy::is_subset_of(const Policy& other) const {
  return std::includes(other.widths_.begin(), other.widths_.end(), widths_.begin(), widths_.end());
}

std::string Policy::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < widths_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(widths_[i]);
  }
  return out;
}

Policy Policy::filtered_to(WidthMm max_width) const {
  Policy out;
  for (WidthMm w : widths_) {
    if (w <= max_width) out.widths_.push_back(w);
  }
  return out;
}

std::vector<std::string> find_violations(const Scenario& s) {
  std::vector<std::string> out;

  if (s.schema_version != 1) {
    out.push_back("unsupported schema_version " + std::to_string(s.schema_version));
  }

  check_unique_ids(s.grades, [](const Grade& g) -> const std::string& { return g.id; }, "grade", out);
  check_unique_ids(s.boms, [](const Bom& b) -> const std::string& { return b.id; }, "bom", out);
  check_unique_ids(s.corrugators, [](const CorrugatorSpec& c) -> const std::string& { return c.id; },
                   "corrugator", out);
  check_unique_ids(s.machines, [](const PaperMachineSpec& m) -> const std::string& { return m.id; },
                   "machine", out);
  check_unique_ids(s.instances, [](const CorrugatorInstance& i) -> const std::string& { return i.id; },
                   "instance", out);

  for (const auto& g : s.grades) {
    if (g.grammage && !(*g.grammage > 0.0)) out.push_back("grade '" + g.id + "': grammage must be > 0");
    if (!(g.cost_weight > 0.0)) out.push_back("grade '" + g.id + "': cost_weight must be > 0");
  }

  for (const auto& b : s.boms) {
    if (b.entries.empty()) out.push_back("bom '" + b.id + "': no entries");
    double sum = 0.0;
    for (const auto& e : b.entries) {
      if (!s.find_grade(e.grade_id)) {
        out.push_back("bom '" + b.id + "': unknown grade '" + e.grade_id + "'");
      }
      if (!(e.weight_share > 0.0 && e.weight_share <= 1.0)) {
        out.push_back("bom '" + b.id + "': share " + format_number(e.weight_share) + " outside (0,1]");
      }
      sum += e.weight_share;
    }
    if (!b.entries.empty() && std::abs(sum - 1.0) > 1e-9) {
      out.push_back("bom '" + b.id + "': shares sum " + format_number(sum) + " ≠ 1");
    }
    if (b.grammage && !(*b.grammage > 0.0)) out.push_back("bom '" + b.id + "': grammage must be > 0");
  }

  for (const auto& c : s.corrugators) {
    const std::string where = "corrugator '" + c.id + "'";
    if (c.max_width <= 0) out.push_back(where + ": max_width must be > 0");
    if (c.min_trim < 0) out.push_back(where + ": min_trim must be >= 0");
    if (c.knife_count != 2 && c.knife_count != 3) out.push_back(where + ": knife_count must be 2 or 3");
    if (c.max_lanes && *c.max_lanes <= 0) out.push_back(where + ": max_lanes must be positive");
    if (!(c.overrun_tolerance >= 0.0)) out.push_back(where + ": overrun_tolerance must be >= 0");
  }

  for (const auto& m : s.machines) {
    if (m.deckle_width <= 0) out.push_back("machine '" + m.id + "': deckle_width must be > 0");
    if (m.max_reels_per_pattern && *m.max_reels_per_pattern <= 0) {
      out.push_back("machine '" + m.id + "': max_reels_per_pattern must be positive");
    }
  }
  if (s.machines.empty()) out.push_back("no paper machines");

  if (!(s.reel_standard.kg_per_mm_per_reel > 0.0)) out.push_back("reel_standard: kg_per_mm_per_reel must be > 0");

  if (s.periods.empty()) out.push_back("no periods");
  {
    std::set<std::string> seen;
    for (const auto& p : s.periods) {
      if (!seen.insert(p).second) out.push_back("duplicate period '" + p + "'");
    }
  }
  auto has_period = [&](const std::string& p) {
    return std::find(s.periods.begin(), s.periods.end(), p) != s.periods.end();
  };

  for (const auto& inst : s.instances) {
    const std::string where = "instance '" + inst.id + "'";
    const CorrugatorSpec* corr = s.find_corrugator(inst.corrugator_id);
    if (!corr) out.push_back(where + ": unknown corrugator '" + inst.corrugator_id + "'");
    if (!has_period(inst.period_id)) out.push_back(where + ": unknown period '" + inst.period_id + "'");
    if (!s.find_bom(inst.bom_id)) out.push_back(where + ": unknown bom '" + inst.bom_id + "'");
    if (inst.orders.empty()) out.push_back(where + ": no orders");
    for (std::size_t k = 0; k < inst.orders.size(); ++k) {
      const SheetOrder& o = inst.orders[k];
      const std::string ow = where + " order " + std::to_string(k + 1);
      if (o.width < 1 || o.length < 1 || o.quantity < 1) {
        out.push_back(ow + ": width, length and quantity must be >= 1");
      }
      if (corr && o.width > corr->max_width - corr->min_trim) {
        out.push_back(ow + ": width " + std::to_string(o.width) + " exceeds corrugator '" + corr->id +
                      "' usable width " + std::to_string(corr->max_width - corr->min_trim));
      }
    }
  }

  for (std::size_t k = 0; k < s.external_demand.size(); ++k) {
    const ExternalDemand& d = s.external_demand[k];
    const std::string where = "external_demand " + std::to_string(k + 1);
    if (!s.find_grade(d.grade_id)) out.push_back(where + ": unknown grade '" + d.grade_id + "'");
    if (d.width <= 0) out.push_back(where + ": width must be > 0");
    if (d.reels < 1) out.push_back(where + ": reels must be >= 1");
    if (!has_period(d.period_id)) out.push_back(where + ": unknown period '" + d.period_id + "'");
    for (const auto& m : d.machine_ids) {
      if (!s.find_machine(m)) out.push_back(where + ": unknown machine '" + m + "'");
    }
  }

  for (const auto& g : s.external_supply_grades) {
    if (!s.find_grade(g)) out.push_back("external_supply: unknown grade '" + g + "'");
  }

  for (const auto& [grade, machines] : s.grade_machines) {
    if (!s.find_grade(grade)) out.push_back("grade_machines: unknown grade '" + grade + "'");
    if (machines.empty()) out.push_back("grade_machines: grade '" + grade + "' has no machines");
    for (const auto& m : machines) {
      if (!s.find_machine(m)) out.push_back("grade_machines: unknown machine '" + m + "'");
    }
  }

  if (!(s.beta >= 1.0)) out.push_back("beta " + format_number(s.beta) + " < 1");
  if (!(s.quantity_tolerance_up >= 0.0)) out.push_back("quantity_tolerance_up must be >= 0");
  if (!(s.nominal_grammage > 0.0)) out.push_back("nominal_grammage must be > 0");

  return out;
}

Scenario validate_scenario(Scenario raw) {
  auto violations = find_violations(raw);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return raw;
}

std::int64_t kg_to_reels(double mass_kg, WidthMm width, const ReelStandard& standard) {
  if (width <= 0) throw std::invalid_argument("kg_to_reels: width must be positive");
  if (!(mass_kg >= 0.0)) throw std::invalid_argument("kg_to_reels: mass must be >= 0");
  if (mass_kg == 0.0) return 0;
  const double reels = mass_kg / (static_cast<double>(width) * standard.kg_per_mm_per_reel);
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(reels + 0.5)));
}

double reels_to_kg(std::int64_t reels, WidthMm width, const ReelStandard& standard) {
  return static_cast<double>(reels) * static_cast<double>(width) * standard.kg_per_mm_per_reel;
}

}  // namespace reelstock
