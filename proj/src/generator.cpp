#include "reelstock/generator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace reelstock {

namespace {

std::string numbered(const char* prefix, std::int64_t n, int digits) {
  std::string s = std::to_string(n);
  if (static_cast<int>(s.size()) < digits) s.insert(0, static_cast<std::size_t>(digits) - s.size(), '0');
  return prefix + s;
}

void check_range(const IntRange& r, const char* name, std::int64_t floor, std::vector<std::string>& out) {
  if (r.min < floor || r.max < r.min) {
    out.push_back(std::string(name) + ": need " + std::to_string(floor) + " <= min <= max");
  }
}

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }
  std::int64_t in(const IntRange& r) { return between(r.min, r.max); }
  std::size_t index(std::size_t size) { return static_cast<std::size_t>(between(0, static_cast<std::int64_t>(size) - 1)); }
  // Uniform over multiples of step inside the range.
  std::int64_t on_grid(const IntRange& r, std::int64_t step) {
    const std::int64_t lo = (r.min + step - 1) / step, hi = r.max / step;
    if (hi < lo) return in(r);
    return step * between(lo, hi);
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

Scenario generate_scenario(const GeneratorParams& params) {
  std::vector<std::string> problems;
  if (params.instance_count < 1) problems.push_back("instance_count must be >= 1");
  check_range(params.orders_per_instance, "orders_per_instance", 1, problems);
  check_range(params.sheet_width, "sheet_width", 1, problems);
  check_range(params.sheet_length, "sheet_length", 1, problems);
  check_range(params.lengths_per_instance, "lengths_per_instance", 1, problems);
  check_range(params.quantity, "quantity", 1, problems);
  check_range(params.liner_grammage, "liner_grammage", 1, problems);
  check_range(params.fluting_grammage, "fluting_grammage", 1, problems);
  if (params.sheet_width_step < 1 || params.sheet_length_step < 1) problems.push_back("steps must be >= 1");
  if (params.grade_count < 2) problems.push_back("grade_count must be >= 2 (liner and fluting)");
  if (params.bom_count < 1) problems.push_back("bom_count must be >= 1");
  if (params.period_count < 1) problems.push_back("period_count must be >= 1");
  if (!(params.fluting_take_up > 0.0)) problems.push_back("fluting_take_up must be > 0");
  if (!problems.empty()) throw ValidationError(problems);

  Scenario s;
  s.beta = params.beta;
  s.corrugators = params.corrugators;
  if (s.corrugators.empty()) s.corrugators.push_back(CorrugatorSpec{"C1", "PL1", 2500, 2, std::nullopt, 0, 0.0});
  s.machines = params.machines;
  if (s.machines.empty()) s.machines.push_back(PaperMachineSpec{"PM1", "M1", 6000, std::nullopt});
  for (const auto& c : s.corrugators) {
    if (params.sheet_width.max > c.max_width - c.min_trim) {
      problems.push_back("sheet widths up to " + std::to_string(params.sheet_width.max) + " do not fit corrugator '" +
                         c.id + "'");
    }
  }
  if ((params.sheet_width.max / params.sheet_width_step) * params.sheet_width_step < params.sheet_width.min) {
    problems.push_back("sheet_width range holds no multiple of the step");
  }
  if (!problems.empty()) throw ValidationError(problems);

  Draw draw(params.seed);

  const std::int64_t fluting_count = std::max<std::int64_t>(1, params.grade_count / 3);
  std::vector<std::size_t> liners, flutings;
  for (std::int64_t g = 0; g < params.grade_count; ++g) {
    const bool fluting = g >= params.grade_count - fluting_count;
    const std::int64_t k = fluting ? g - (params.grade_count - fluting_count) + 1 : g + 1;
    Grade grade;
    grade.id = numbered(fluting ? "F" : "L", k, 1);
    grade.name = (fluting ? "Fluting " : "Liner ") + std::to_string(k);
    grade.grammage = static_cast<double>(draw.on_grid(fluting ? params.fluting_grammage : params.liner_grammage, 5));
    (fluting ? flutings : liners).push_back(s.grades.size());
    s.grades.push_back(std::move(grade));
  }

  for (std::int64_t b = 0; b < params.bom_count; ++b) {
    const std::size_t top_pick = draw.index(liners.size());
    std::size_t bottom_pick = draw.index(liners.size());
    if (bottom_pick == top_pick && liners.size() > 1) bottom_pick = (top_pick + 1) % liners.size();
    const std::size_t top = liners[top_pick];
    const std::size_t bottom = liners[bottom_pick];
    const std::size_t flute = flutings[draw.index(flutings.size())];

    const double m_top = *s.grades[top].grammage;
    const double m_flute = *s.grades[flute].grammage * params.fluting_take_up;
    const double m_bottom = *s.grades[bottom].grammage;
    const double total = m_top + m_flute + m_bottom;
    const double share_top = std::round(m_top / total * 1e4) / 1e4;
    const double share_flute = std::round(m_flute / total * 1e4) / 1e4;

    Bom bom;
    bom.id = numbered("B", b + 1, 1);
    bom.grammage = total;
    bom.entries.push_back(BomEntry{s.grades[top].id, LayerRole::top, share_top});
    bom.entries.push_back(BomEntry{s.grades[flute].id, LayerRole::fluting, share_flute});
    bom.entries.push_back(BomEntry{s.grades[bottom].id, LayerRole::bottom, 1.0 - share_top - share_flute});
    s.boms.push_back(std::move(bom));
  }

  for (std::int64_t p = 0; p < params.period_count; ++p) s.periods.push_back(numbered("W", p + 1, 2));

  const int digits = static_cast<int>(std::to_string(params.instance_count).size());
  for (std::int64_t n = 0; n < params.instance_count; ++n) {
    CorrugatorInstance inst;
    inst.id = numbered("I", n + 1, digits);
    inst.corrugator_id = s.corrugators[draw.index(s.corrugators.size())].id;
    inst.period_id = s.periods[draw.index(s.periods.size())];
    inst.bom_id = s.boms[draw.index(s.boms.size())].id;

    std::vector<WidthMm> lengths;
    const std::int64_t want_lengths = draw.in(params.lengths_per_instance);
    for (std::int64_t k = 0; k < want_lengths; ++k) {
      const auto len = static_cast<WidthMm>(draw.on_grid(params.sheet_length, params.sheet_length_step));
      if (std::find(lengths.begin(), lengths.end(), len) == lengths.end()) lengths.push_back(len);
    }
    const std::int64_t order_count = draw.in(params.orders_per_instance);
    for (std::int64_t k = 0; k < order_count; ++k) {
      SheetOrder o;
      o.width = static_cast<WidthMm>(draw.on_grid(params.sheet_width, params.sheet_width_step));
      o.length = lengths[draw.index(lengths.size())];
      o.quantity = draw.on_grid(params.quantity, 10);
      inst.orders.push_back(o);
    }
    s.instances.push_back(std::move(inst));
  }
  return validate_scenario(std::move(s));
}

}  // namespace reelstock
