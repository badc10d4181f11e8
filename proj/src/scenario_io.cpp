#include "reelstock/scenario_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace reelstock::io {

using json = nlohmann::ordered_json;

namespace {

// Collects every structural problem instead of stopping at the first.
class Reader {
 public:
  std::vector<std::string> errors;

  const json* get(const json& obj, const char* key, const std::string& where, bool required) {
    if (!obj.is_object()) {
      errors.push_back(where + ": expected an object");
      return nullptr;
    }
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
      if (required) errors.push_back(where + ": missing '" + key + "'");
      return nullptr;
    }
    return &*it;
  }

  template <typename Int>
  std::optional<Int> integer(const json& obj, const char* key, const std::string& where, bool required = true) {
    const json* v = get(obj, key, where, required);
    if (!v) return std::nullopt;
    if (!v->is_number_integer()) {
      errors.push_back(where + ": '" + key + "' must be an integer");
      return std::nullopt;
    }
    const auto raw = v->get<std::int64_t>();
    if (raw < std::numeric_limits<Int>::min() || raw > std::numeric_limits<Int>::max()) {
      errors.push_back(where + ": '" + key + "' out of range");
      return std::nullopt;
    }
    return static_cast<Int>(raw);
  }

  std::optional<double> number(const json& obj, const char* key, const std::string& where, bool required = true) {
    const json* v = get(obj, key, where, required);
    if (!v) return std::nullopt;
    if (!v->is_number()) {
      errors.push_back(where + ": '" + key + "' must be a number");
      return std::nullopt;
    }
    return v->get<double>();
  }

  std::optional<std::string> text(const json& obj, const char* key, const std::string& where, bool required = true) {
    const json* v = get(obj, key, where, required);
    if (!v) return std::nullopt;
    if (!v->is_string()) {
      errors.push_back(where + ": '" + key + "' must be a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  const json* array(const json& obj, const char* key, const std::string& where, bool required = true) {
    const json* v = get(obj, key, where, required);
    if (!v) return nullptr;
    if (!v->is_array()) {
      errors.push_back(where + ": '" + key + "' must be an array");
      return nullptr;
    }
    return v;
  }

  std::vector<std::string> strings(const json& obj, const char* key, const std::string& where, bool required) {
    std::vector<std::string> out;
    const json* arr = array(obj, key, where, required);
    if (!arr) return out;
    for (const auto& v : *arr) {
      if (v.is_string()) {
        out.push_back(v.get<std::string>());
      } else {
        errors.push_back(where + ": '" + key + "' entries must be strings");
      }
    }
    return out;
  }
};

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError({std::string(what) + ": malformed JSON: " + e.what()});
  }
}

template <typename T>
void put_optional(json& obj, const char* key, const std::optional<T>& v) {
  if (v) obj[key] = *v;
}

}  // namespace

Scenario parse_scenario(std::string_view json_text) {
  const json root = parse_json(json_text, "scenario");
  Reader r;
  Scenario s;
  if (!root.is_object()) throw ValidationError({"scenario: top level must be an object"});

  if (auto v = r.integer<int>(root, "schema_version", "scenario")) s.schema_version = *v;
  if (auto v = r.number(root, "beta", "scenario", false)) s.beta = *v;
  if (auto v = r.number(root, "quantity_tolerance_up", "scenario", false)) s.quantity_tolerance_up = *v;
  if (auto v = r.number(root, "nominal_grammage", "scenario", false)) s.nominal_grammage = *v;
  if (const json* rs = r.get(root, "reel_standard", "scenario", false)) {
    if (auto v = r.number(*rs, "kg_per_mm_per_reel", "reel_standard")) s.reel_standard.kg_per_mm_per_reel = *v;
  }

  if (const json* arr = r.array(root, "grades", "scenario")) {
    for (std::size_t k = 0; k < arr->size(); ++k) {
      const json& g = (*arr)[k];
      const std::string where = "grades[" + std::to_string(k) + "]";
      Grade grade;
      grade.id = r.text(g, "id", where).value_or("");
      grade.name = r.text(g, "name", where, false).value_or(grade.id);
      grade.grammage = r.number(g, "grammage", where, false);
      grade.cost_weight = r.number(g, "cost_weight", where, false).value_or(1.0);
      s.grades.push_back(std::move(grade));
    }
  }

  if (const json* arr = r.array(root, "boms", "scenario")) {
    for (std::size_t k = 0; k < arr->size(); ++k) {
      const json& b = (*arr)[k];
      const std::string where = "boms[" + std::to_string(k) + "]";
      Bom bom;
      bom.id = r.text(b, "id", where).value_or("");
      bom.grammage = r.number(b, "grammage", where, false);
      if (const json* entries = r.array(b, "entries", where)) {
        for (std::size_t e = 0; e < entries->size(); ++e) {
          const json& en = (*entries)[e];
          const std::string ew = where + ".entries[" + std::to_string(e) + "]";
          BomEntry entry;
          entry.grade_id = r.text(en, "grade", ew).value_or("");
          const std::string role = r.text(en, "role", ew).value_or("top");
          if (auto parsed = parse_layer_role(role)) {
            entry.role = *parsed;
          } else {
            r.errors.push_back(ew + ": unknown role '" + role + "'");
          }
          entry.weight_share = r.number(en, "share", ew).value_or(0.0);
          bom.entries.push_back(std::move(entry));
        }
      }
      s.boms.push_back(std::move(bom));
    }
  }

  if (const json* arr = r.array(root, "corrugators", "scenario")) {
    for (std::size_t k = 0; k < arr->size(); ++k) {
      const json& c = (*arr)[k];
      const std::string where = "corrugators[" + std::to_string(k) + "]";
      CorrugatorSpec spec;
      spec.id = r.text(c, "id", where).value_or("");
      spec.plant_id = r.text(c, "plant", where, false).value_or("");
      spec.max_width = r.integer<WidthMm>(c, "max_width", where).value_or(0);
      spec.knife_count = r.integer<int>(c, "knife_count", where, false).value_or(2);
      spec.max_lanes = r.integer<int>(c, "max_lanes", where, false);
      spec.min_trim = r.integer<WidthMm>(c, "min_trim", where, false).value_or(0);
      spec.overrun_tolerance = r.number(c, "overrun_tolerance", where, false).value_or(0.0);
      s.corrugators.push_back(std::move(spec));
    }
  }

  if (const json* arr = r.array(root, "machines", "scenario")) {
    for (std::size_t k = 0; k < arr->size(); ++k) {
      const json& m = (*arr)[k];
      const std::string where = "machines[" + std::to_string(k) + "]";
      PaperMachineSpec spec;
      spec.id = r.text(m, "id", where).value_or("");
      spec.mill_id = r.text(m, "mill", where, false).value_or("");
      spec.deckle_width = r.integer<WidthMm>(m, "deckle_width", where).value_or(0);
      spec.max_reels_per_pattern = r.integer<int>(m, "max_reels_per_pattern", where, false);
      s.machines.push_back(std::move(spec));
    }
  }

  s.periods = r.strings(root, "periods", "scenario", true);

  if (const json* arr = r.array(root, "instances", "scenario")) {
    for (std::size_t k = 0; k < arr->size(); ++k) {
      const json& i = (*arr)[k];
      const std::string where = "instances[" + std::to_string(k) + "]";
      CorrugatorInstance inst;
      inst.id = r.text(i, "id", where).value_or("");
      inst.corrugator_id = r.text(i, "corrugator", where).value_or("");
      inst.period_id = r.text(i, "period", where).value_or("");
      inst.bom_id = r.text(i, "bom", where).value_or("");
      if (const json* orders = r.array(i, "orders", where)) {
        for (std::size_t o = 0; o < orders->size(); ++o) {
          const json& od = (*orders)[o];
          const std::string ow = where + ".orders[" + std::to_string(o) + "]";
          SheetOrder order;
          order.width = r.integer<WidthMm>(od, "width", ow).value_or(0);
          order.length = r.integer<WidthMm>(od, "length", ow).value_or(0);
          order.quantity = r.integer<std::int64_t>(od, "quantity", ow).value_or(0);
          inst.orders.push_back(order);
        }
      }
      s.instances.push_back(std::move(inst));
    }
  }

  if (const json* arr = r.array(root, "external_demand", "scenario", false)) {
    for (std::size_t k = 0; k < arr->size(); ++k) {
      const json& d = (*arr)[k];
      const std::string where = "external_demand[" + std::to_string(k) + "]";
      ExternalDemand ext;
      ext.grade_id = r.text(d, "grade", where).value_or("");
      ext.width = r.integer<WidthMm>(d, "width", where).value_or(0);
      ext.reels = r.integer<std::int64_t>(d, "reels", where).value_or(0);
      ext.period_id = r.text(d, "period", where).value_or("");
      ext.machine_ids = r.strings(d, "machines", where, false);
      s.external_demand.push_back(std::move(ext));
    }
  }

  s.external_supply_grades = r.strings(root, "external_supply", "scenario", false);

  if (const json* gm = r.get(root, "grade_machines", "scenario", false)) {
    if (!gm->is_object()) {
      r.errors.push_back("scenario: 'grade_machines' must be an object");
    } else {
      for (const auto& [grade, machines] : gm->items()) {
        json wrapper = json::object();
        wrapper["m"] = machines;
        s.grade_machines[grade] = r.strings(wrapper, "m", "grade_machines." + grade, true);
      }
    }
  }

  if (!r.errors.empty()) throw ValidationError(r.errors);
  return validate_scenario(std::move(s));
}

std::string serialize_scenario(const Scenario& s) {
  json root = json::object();
  root["schema_version"] = s.schema_version;
  root["beta"] = s.beta;
  root["quantity_tolerance_up"] = s.quantity_tolerance_up;
  root["nominal_grammage"] = s.nominal_grammage;
  root["reel_standard"] = {{"kg_per_mm_per_reel", s.reel_standard.kg_per_mm_per_reel}};

  json grades = json::array();
  for (const auto& g : s.grades) {
    json j = {{"id", g.id}, {"name", g.name}};
    put_optional(j, "grammage", g.grammage);
    j["cost_weight"] = g.cost_weight;
    grades.push_back(std::move(j));
  }
  root["grades"] = std::move(grades);

  json boms = json::array();
  for (const auto& b : s.boms) {
    json j = {{"id", b.id}};
    put_optional(j, "grammage", b.grammage);
    json entries = json::array();
    for (const auto& e : b.entries) {
      entries.push_back({{"grade", e.grade_id}, {"role", std::string(to_string(e.role))}, {"share", e.weight_share}});
    }
    j["entries"] = std::move(entries);
    boms.push_back(std::move(j));
  }
  root["boms"] = std::move(boms);

  json corrugators = json::array();
  for (const auto& c : s.corrugators) {
    json j = {{"id", c.id}, {"plant", c.plant_id}, {"max_width", c.max_width}, {"knife_count", c.knife_count}};
    put_optional(j, "max_lanes", c.max_lanes);
    j["min_trim"] = c.min_trim;
    j["overrun_tolerance"] = c.overrun_tolerance;
    corrugators.push_back(std::move(j));
  }
  root["corrugators"] = std::move(corrugators);

  json machines = json::array();
  for (const auto& m : s.machines) {
    json j = {{"id", m.id}, {"mill", m.mill_id}, {"deckle_width", m.deckle_width}};
    put_optional(j, "max_reels_per_pattern", m.max_reels_per_pattern);
    machines.push_back(std::move(j));
  }
  root["machines"] = std::move(machines);
  root["periods"] = s.periods;

  json instances = json::array();
  for (const auto& i : s.instances) {
    json orders = json::array();
    for (const auto& o : i.orders) orders.push_back({{"width", o.width}, {"length", o.length}, {"quantity", o.quantity}});
    instances.push_back({{"id", i.id},
                         {"corrugator", i.corrugator_id},
                         {"period", i.period_id},
                         {"bom", i.bom_id},
                         {"orders", std::move(orders)}});
  }
  root["instances"] = std::move(instances);

  json external = json::array();
  for (const auto& d : s.external_demand) {
    json j = {{"grade", d.grade_id}, {"width", d.width}, {"reels", d.reels}, {"period", d.period_id}};
    if (!d.machine_ids.empty()) j["machines"] = d.machine_ids;
    external.push_back(std::move(j));
  }
  root["external_demand"] = std::move(external);
  root["external_supply"] = s.external_supply_grades;
  json gm = json::object();
  for (const auto& [grade, machines] : s.grade_machines) gm[grade] = machines;
  root["grade_machines"] = std::move(gm);
  return root.dump(2) + "\n";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError({"cannot read '" + path.string() + "'"});
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

Scenario load_scenario(const std::filesystem::path& path) { return parse_scenario(read_file(path)); }

void save_scenario(const std::filesystem::path& path, const Scenario& scenario) {
  write_file(path, serialize_scenario(scenario));
}

std::string scenario_digest(const Scenario& scenario) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize_scenario(scenario)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

namespace {

void read_range(Reader& r, const json& root, const char* key, IntRange& range) {
  const json* v = r.get(root, key, "params", false);
  if (!v) return;
  if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number_integer() || !(*v)[1].is_number_integer()) {
    r.errors.push_back(std::string("params: '") + key + "' must be [min, max] integers");
    return;
  }
  range = IntRange{(*v)[0].get<std::int64_t>(), (*v)[1].get<std::int64_t>()};
}

}  // namespace

GeneratorParams parse_generator_params(std::string_view json_text) {
  const json root = parse_json(json_text, "params");
  if (!root.is_object()) throw ValidationError({"params: top level must be an object"});
  Reader r;
  GeneratorParams p;
  if (auto v = r.integer<std::int64_t>(root, "seed", "params", false)) {
    if (*v < 0) r.errors.push_back("params: 'seed' must be >= 0");
    p.seed = static_cast<std::uint64_t>(*v);
  }
  if (auto v = r.integer<std::int64_t>(root, "instance_count", "params", false)) p.instance_count = *v;
  read_range(r, root, "orders_per_instance", p.orders_per_instance);
  read_range(r, root, "sheet_width", p.sheet_width);
  if (auto v = r.integer<WidthMm>(root, "sheet_width_step", "params", false)) p.sheet_width_step = *v;
  read_range(r, root, "sheet_length", p.sheet_length);
  if (auto v = r.integer<WidthMm>(root, "sheet_length_step", "params", false)) p.sheet_length_step = *v;
  read_range(r, root, "lengths_per_instance", p.lengths_per_instance);
  read_range(r, root, "quantity", p.quantity);
  if (auto v = r.integer<std::int64_t>(root, "grade_count", "params", false)) p.grade_count = *v;
  if (auto v = r.integer<std::int64_t>(root, "bom_count", "params", false)) p.bom_count = *v;
  if (auto v = r.integer<std::int64_t>(root, "period_count", "params", false)) p.period_count = *v;
  if (auto v = r.number(root, "fluting_take_up", "params", false)) p.fluting_take_up = *v;
  read_range(r, root, "liner_grammage", p.liner_grammage);
  read_range(r, root, "fluting_grammage", p.fluting_grammage);
  if (auto v = r.number(root, "beta", "params", false)) p.beta = *v;

  if (const json* arr = r.array(root, "corrugators", "params", false)) {
    for (std::size_t k = 0; k < arr->size(); ++k) {
      const json& c = (*arr)[k];
      const std::string where = "params.corrugators[" + std::to_string(k) + "]";
      CorrugatorSpec spec;
      spec.id = r.text(c, "id", where).value_or("");
      spec.plant_id = r.text(c, "plant", where, false).value_or("");
      spec.max_width = r.integer<WidthMm>(c, "max_width", where).value_or(0);
      spec.knife_count = r.integer<int>(c, "knife_count", where, false).value_or(2);
      spec.max_lanes = r.integer<int>(c, "max_lanes", where, false);
      spec.min_trim = r.integer<WidthMm>(c, "min_trim", where, false).value_or(0);
      spec.overrun_tolerance = r.number(c, "overrun_tolerance", where, false).value_or(0.0);
      p.corrugators.push_back(std::move(spec));
    }
  }
  if (const json* arr = r.array(root, "machines", "params", false)) {
    for (std::size_t k = 0; k < arr->size(); ++k) {
      const json& m = (*arr)[k];
      const std::string where = "params.machines[" + std::to_string(k) + "]";
      PaperMachineSpec spec;
      spec.id = r.text(m, "id", where).value_or("");
      spec.mill_id = r.text(m, "mill", where, false).value_or("");
      spec.deckle_width = r.integer<WidthMm>(m, "deckle_width", where).value_or(0);
      spec.max_reels_per_pattern = r.integer<int>(m, "max_reels_per_pattern", where, false);
      p.machines.push_back(std::move(spec));
    }
  }
  if (!r.errors.empty()) throw ValidationError(r.errors);
  return p;
}

std::string serialize_generator_params(const GeneratorParams& p) {
  auto range = [](const IntRange& r) { return json::array({r.min, r.max}); };
  json root = json::object();
  root["seed"] = p.seed;
  root["instance_count"] = p.instance_count;
  root["orders_per_instance"] = range(p.orders_per_instance);
  root["sheet_width"] = range(p.sheet_width);
  root["sheet_width_step"] = p.sheet_width_step;
  root["sheet_length"] = range(p.sheet_length);
  root["sheet_length_step"] = p.sheet_length_step;
  root["lengths_per_instance"] = range(p.lengths_per_instance);
  root["quantity"] = range(p.quantity);
  root["grade_count"] = p.grade_count;
  root["bom_count"] = p.bom_count;
  root["period_count"] = p.period_count;
  root["fluting_take_up"] = p.fluting_take_up;
  root["liner_grammage"] = range(p.liner_grammage);
  root["fluting_grammage"] = range(p.fluting_grammage);
  root["beta"] = p.beta;
  json corrugators = json::array();
  for (const auto& c : p.corrugators) {
    json j = {{"id", c.id}, {"plant", c.plant_id}, {"max_width", c.max_width}, {"knife_count", c.knife_count}};
    put_optional(j, "max_lanes", c.max_lanes);
    j["min_trim"] = c.min_trim;
    j["overrun_tolerance"] = c.overrun_tolerance;
    corrugators.push_back(std::move(j));
  }
  root["corrugators"] = std::move(corrugators);
  json machines = json::array();
  for (const auto& m : p.machines) {
    json j = {{"id", m.id}, {"mill", m.mill_id}, {"deckle_width", m.deckle_width}};
    put_optional(j, "max_reels_per_pattern", m.max_reels_per_pattern);
    machines.push_back(std::move(j));
  }
  root["machines"] = std::move(machines);
  return root.dump(2) + "\n";
}

std::string serialize_result(const EvaluationResult& result, const std::string& digest, double elapsed_seconds) {
  const WasteReport report = waste_percentage_report(result);
  auto maybe = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };

  json root = json::object();
  root["scenario_digest"] = digest;
  root["policy"] = result.policy.widths();
  root["beta"] = result.beta;
  root["w_cor_kg"] = result.w_cor;
  root["w_pm_kg"] = result.w_pm;
  root["weighted_cor"] = result.weighted_cor;
  root["weighted_pm"] = result.weighted_pm;
  root["z"] = result.z;
  root["corrugator_input_kg"] = result.corrugator_input_kg;
  root["mill_production_kg"] = result.mill_production_kg;
  root["total_waste_percent"] = maybe(report.total_percent);
  root["mill_waste_percent"] = maybe(report.mill_percent);
  root["corrugator_waste_percent"] = maybe(report.corrugator_percent);

  json widths = json::array();
  for (const auto& [width, kg] : result.per_width_attribution) {
    auto at = [&](const std::map<WidthMm, double>& m) {
      auto it = m.find(width);
      return it == m.end() ? 0.0 : it->second;
    };
    widths.push_back({{"width", width},
                      {"corrugator_kg", at(result.corrugator_attribution)},
                      {"mill_kg", at(result.mill_attribution)},
                      {"total_kg", kg},
                      {"consumption_kg", at(result.per_width_consumption)}});
  }
  root["per_width"] = std::move(widths);

  json instances = json::array();
  for (const auto& i : result.per_instance) {
    json consumption = json::object();
    for (const auto& [width, kg] : i.consumption_kg) consumption[std::to_string(width)] = kg;
    instances.push_back({{"id", i.instance_id},
                         {"corrugator", i.corrugator_id},
                         {"period", i.period_id},
                         {"bom", i.bom_id},
                         {"waste_kg", i.waste_kg},
                         {"consumed_kg", i.consumed_kg},
                         {"waste_fraction", i.waste_fraction},
                         {"runs", i.run_count},
                         {"consumption_kg", std::move(consumption)}});
  }
  root["instances"] = std::move(instances);

  json mills = json::array();
  for (const auto& m : result.per_mill) {
    mills.push_back({{"grade", m.grade_id},
                     {"period", m.period_id},
                     {"waste_kg", m.waste_kg},
                     {"production_kg", m.production_kg},
                     {"waste_fraction", m.waste_fraction},
                     {"runs", m.run_count},
                     {"proven_optimal", m.proven_optimal}});
  }
  root["mills"] = std::move(mills);

  json demand = json::array();
  for (const auto& d : result.demand) {
    for (const auto& [width, cell] : d.entries) {
      demand.push_back(
          {{"grade", d.grade_id}, {"period", d.period_id}, {"width", width}, {"kg", cell.mass_kg}, {"reels", cell.reels}});
    }
  }
  root["demand"] = std::move(demand);
  root["elapsed_seconds"] = elapsed_seconds;
  return root.dump(2) + "\n";
}

std::string history_header() { return "widths\tz\tparent\tmove\tordinal\n"; }

std::string format_history_row(const HistoryEntry& e) {
  const std::string z = std::isfinite(e.z) ? fmt::format("{:.17g}", e.z) : std::string("inf");
  return fmt::format("{}\t{}\t{}\t{}\t{}\n", e.policy.to_string(), z, e.parent ? e.parent->to_string() : "-",
                     to_string(e.move), e.ordinal);
}

std::vector<HistoryEntry> parse_history(std::string_view text) {
  std::vector<HistoryEntry> out;
  std::vector<std::string> errors;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (line_no == 1 && line.rfind("widths", 0) == 0)) continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    for (std::size_t tab; (tab = line.find('\t', start)) != std::string::npos; start = tab + 1) {
      cols.push_back(line.substr(start, tab - start));
    }
    cols.push_back(line.substr(start));
    const std::string where = "history line " + std::to_string(line_no);
    if (cols.size() != 5) {
      errors.push_back(where + ": expected 5 tab-separated columns");
      continue;
    }
    try {
      HistoryEntry e;
      e.policy = Policy::parse(cols[0]);
      if (cols[1] == "inf") {
        e.z = std::numeric_limits<double>::infinity();
      } else {
        std::size_t used = 0;
        e.z = std::stod(cols[1], &used);
        if (used != cols[1].size()) throw std::invalid_argument("z");
      }
      if (cols[2] != "-") e.parent = Policy::parse(cols[2]);
      auto move = parse_move(cols[3]);
      if (!move) throw std::invalid_argument("move");
      e.move = *move;
      e.ordinal = static_cast<std::size_t>(std::stoull(cols[4]));
      out.push_back(std::move(e));
    } catch (const std::exception& ex) {
      errors.push_back(where + ": malformed (" + ex.what() + ")");
    }
  }
  if (!errors.empty()) throw ValidationError(errors);
  return out;
}

std::string format_histogram(const std::vector<HistogramBin>& bins) {
  std::string out = "bin_lower,count\n";
  for (const auto& b : bins) out += fmt::format("{:.17g},{}\n", b.lower, b.count);
  return out;
}

}  // namespace reelstock::io
