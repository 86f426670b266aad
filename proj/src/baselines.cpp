/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "sisa/baselines.hpp"

#include <algorithm>
#include <sstream>

#include "sisa/error.hpp"

namespace sisa {

std::string arch_name(ArchVariant v) {
  switch (v) {
    case ArchVariant::Sisa:
      return "sisa";
    case ArchVariant::MonolithicTpu:
      return "tpu";
    case ArchVariant::RedasLike:
      return "redas";
  }
  return "?";
}

ArchVariant parse_arch(const std::string& name) {
  if (name == "sisa") return ArchVariant::Sisa;
  if (name == "tpu") return ArchVariant::MonolithicTpu;
  if (name == "redas") return ArchVariant::RedasLike;
  throw ConfigError("unknown architecture '" + name + "' (expected sisa, tpu or redas)");
}

std::string shape_label(const ArrayShape& s) {
  std::ostringstream os;
  os << s.height << "x" << s.width;
  return os.str();
}

EnergyConfig default_energy(ArchVariant v) {
  EnergyConfig cfg;
  if (v == ArchVariant::Sisa) return cfg;
  // Same PE array without gating support and without slab-local buffers.
  cfg.gating_energy_overhead_frac = 0.0;
  cfg.slab_buffers_total = 0.0;
  cfg.e_slab_sram_access_nJ = 0.0;
  return cfg;
}

ArchModel default_model(ArchVariant v) {
  ArchModel m;
  m.variant = v;
  m.energy = default_energy(v);
  return m;
}

ArrayGeometry monolithic_geometry(const ArrayGeometry& g) { return {g.rows, g.cols, g.rows, 1}; }

Schedule monolithic_plan(const GemmShape& shape, const ArrayGeometry& g, const MemoryConfig& mem,
                         const DataFormat& fmt) {
  validate_shape(shape);
  validate_geometry(g);
  validate_memory(mem);
  validate_format(fmt);
  const auto mono = monolithic_geometry(g);
  const auto mode = make_mode(mono, ModeVariant::monolithic(), {});

  Schedule s;
  s.shape = shape;
  for (std::int64_t row = 0; row < shape.m; row += mono.rows)
    s.phases.push_back(
        plan_phase(shape, mono, mem, fmt, row, std::min(mono.rows, shape.m - row), mode, false));
  return s;
}

namespace {

ArrayGeometry shape_geometry(const ArrayShape& s) { return {s.height, s.width, s.height, 1}; }

SimOptions baseline_options(SimOptions opts) {
  opts.slab_buffers = false;
  return opts;
}

ArchResult run_redas_shape(const ArchModel& model, const ArrayShape& shape_choice,
                           const GemmShape& shape, const MemoryConfig& mem, const DataFormat& fmt,
                           const SimOptions& opts, const ArrayGeometry& reference) {
  ArchResult out;
  out.geometry = shape_geometry(shape_choice);
  out.chosen_shape = shape_choice;
  const auto schedule = monolithic_plan(shape, out.geometry, mem, fmt);
  out.sim = simulate(schedule, out.geometry, mem, fmt, baseline_options(opts));

  // Only the active shape's PEs burn power; each costs pe_power_factor plain PEs.
  EnergyConfig cfg = model.energy;
  const double active_fraction = static_cast<double>(shape_choice.height * shape_choice.width) /
                                 static_cast<double>(reference.rows * reference.cols);
  cfg.pe_array_total *= model.redas.pe_power_factor * active_fraction;
  cfg.e_mac_nJ *= model.redas.pe_power_factor;
  out.energy = edp(out.sim, cfg, out.geometry);
  attach_energy(out.sim, out.energy);
  return out;
}

void validate_shape_set(const RedasOptions& opts, const ArrayGeometry& g) {
  if (opts.shape_set.empty()) throw ConfigError("reshapeable baseline needs a non-empty shape set");
  for (const auto& s : opts.shape_set)
    if (s.height < 1 || s.width < 1 || s.height * s.width > g.rows * g.cols)
      throw ConfigError("reshapeable shape " + shape_label(s) + " exceeds the PE budget");
}

}  // namespace

ArrayShape redas_select_shape(const GemmShape& shape, const ArchModel& model,
                              const MemoryConfig& mem, const DataFormat& fmt) {
  const auto& set = model.redas.shape_set;
  if (set.empty()) throw ConfigError("reshapeable baseline needs a non-empty shape set");

  if (model.redas.policy == RedasPolicy::HeightFit) {
    const ArrayShape* best = nullptr;
    for (const auto& s : set)
      if (s.height <= shape.m &&
          (!best || s.height > best->height || (s.height == best->height && s.width > best->width)))
        best = &s;
    if (best) return *best;
    best = &set.front();
    for (const auto& s : set)
      if (s.height < best->height || (s.height == best->height && s.width > best->width)) best = &s;
    return *best;
  }

  const ArrayShape* best = nullptr;
  std::int64_t best_cycles = 0;
  for (const auto& s : set) {
    const auto geom = shape_geometry(s);
    const auto cycles =
        simulate(monolithic_plan(shape, geom, mem, fmt), geom, mem, fmt, baseline_options({}))
            .cycles;
    if (!best || cycles < best_cycles || (cycles == best_cycles && s.height > best->height)) {
      best = &s;
      best_cycles = cycles;
    }
  }
  return *best;
}

ArchResult simulate_arch(const ArchModel& model, const GemmShape& shape, const ArrayGeometry& g,
                         const MemoryConfig& mem, const DataFormat& fmt, const SimOptions& opts) {
  validate_energy(model.energy);
  ArchResult out;
  switch (model.variant) {
    case ArchVariant::Sisa: {
      out.geometry = g;
      out.sim = simulate(plan_gemm(shape, g, mem, fmt), g, mem, fmt, opts);
      out.energy = edp(out.sim, model.energy, g);
      attach_energy(out.sim, out.energy);
      return out;
    }
    case ArchVariant::MonolithicTpu: {
      out.geometry = monolithic_geometry(g);
      out.sim = simulate(monolithic_plan(shape, g, mem, fmt), out.geometry, mem, fmt,
                         baseline_options(opts));
      out.energy = edp(out.sim, model.energy, out.geometry);
      attach_energy(out.sim, out.energy);
      return out;
    }
    case ArchVariant::RedasLike: {
      validate_shape_set(model.redas, g);
      const auto choice = redas_select_shape(shape, model, mem, fmt);
      return run_redas_shape(model, choice, shape, mem, fmt, opts, g);
    }
  }
  throw ConfigError("unknown architecture variant");
}

}  // namespace sisa
