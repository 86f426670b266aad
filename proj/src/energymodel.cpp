/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "sisa/energymodel.hpp"

#include "sisa/error.hpp"

namespace sisa {

namespace {
constexpr double kNano = 1e-9;
}

void validate_energy(const EnergyConfig& cfg) {
  auto non_negative = [](double v, const char* name) {
    if (!(v >= 0.0)) throw ConfigError(std::string("energy config: ") + name + " must be >= 0");
  };
  non_negative(cfg.pe_array_total, "pe_array_total");
  non_negative(cfg.global_buffer, "global_buffer");
  non_negative(cfg.slab_buffers_total, "slab_buffers_total");
  non_negative(cfg.output_buffer, "output_buffer");
  non_negative(cfg.e_mac_nJ, "e_mac_nJ");
  non_negative(cfg.e_global_sram_access_nJ, "e_global_sram_access_nJ");
  non_negative(cfg.e_slab_sram_access_nJ, "e_slab_sram_access_nJ");
  non_negative(cfg.e_output_sram_access_nJ, "e_output_sram_access_nJ");
  non_negative(cfg.e_dram_per_byte_nJ, "e_dram_per_byte_nJ");
  for (auto [v, name] : {std::pair{cfg.gating_energy_overhead_frac, "gating_energy_overhead_frac"},
                         std::pair{cfg.gated_leak_frac, "gated_leak_frac"}})
    if (!(v >= 0.0 && v <= 1.0))
      throw ConfigError(std::string("energy config: ") + name + " must be in [0, 1]");
  if (!(cfg.clock_hz > 0.0)) throw ConfigError("energy config: clock_hz must be > 0");
}

StaticShares static_shares_per_cycle(const EnergyConfig& cfg) {
  return {cfg.pe_array_total * (1.0 + cfg.gating_energy_overhead_frac), cfg.global_buffer,
          cfg.slab_buffers_total, cfg.output_buffer};
}

double static_energy(const SimResult& result, const EnergyConfig& cfg, const ArrayGeometry& g,
                     EnergyBreakdown* components) {
  const auto slabs = static_cast<double>(g.num_slabs);
  const double pe_active = cfg.pe_array_total / slabs * (1.0 + cfg.gating_energy_overhead_frac);
  const double pe_gated = cfg.pe_array_total / slabs * cfg.gated_leak_frac;
  const double buf_active = cfg.slab_buffers_total / slabs;
  const double buf_gated = buf_active * cfg.gated_leak_frac;

  const auto cycles = static_cast<double>(result.cycles);
  double pe_nj = 0.0;
  double buf_nj = 0.0;
  for (auto active_i : result.active_slab_cycles) {
    const auto active = static_cast<double>(active_i);
    pe_nj += active * pe_active + (cycles - active) * pe_gated;
    buf_nj += active * buf_active + (cycles - active) * buf_gated;
  }
  const double global_nj = cycles * cfg.global_buffer;
  const double output_nj = cycles * cfg.output_buffer;

  if (components) {
    components->static_pe_j = pe_nj * kNano;
    components->static_slab_buffers_j = buf_nj * kNano;
    components->static_global_j = global_nj * kNano;
    components->static_output_j = output_nj * kNano;
  }
  return (pe_nj + buf_nj + global_nj + output_nj) * kNano;
}

double dynamic_energy(const TrafficCounters& c, const EnergyConfig& cfg) {
  const double nj =
      static_cast<double>(c.mac_count) * cfg.e_mac_nJ +
      static_cast<double>(c.global_sram_reads + c.global_sram_writes) * cfg.e_global_sram_access_nJ +
      static_cast<double>(c.slab_sram_reads + c.slab_sram_writes) * cfg.e_slab_sram_access_nJ +
      static_cast<double>(c.output_sram_writes) * cfg.e_output_sram_access_nJ +
      static_cast<double>(c.dram_read_bytes + c.dram_write_bytes) * cfg.e_dram_per_byte_nJ;
  return nj * kNano;
}

EnergyBreakdown edp(const SimResult& result, const EnergyConfig& cfg, const ArrayGeometry& g) {
  EnergyBreakdown e;
  e.static_j = static_energy(result, cfg, g, &e);
  e.dynamic_j = dynamic_energy(result.counters, cfg);
  e.total_j = e.static_j + e.dynamic_j;
  e.delay_s = static_cast<double>(result.cycles) / cfg.clock_hz;
  e.edp_js = e.total_j * e.delay_s;
  return e;
}

void attach_energy(SimResult& result, const EnergyBreakdown& e) {
  result.energy_j = e.total_j;
  result.edp = e.edp_js;
}

Comparison compare(const SimResult& a, const EnergyBreakdown& ea, const SimResult& b,
                   const EnergyBreakdown& eb) {
  if (a.cycles == 0 || eb.edp_js == 0.0)
    throw PreconditionError("compare: empty workload (zero cycles or zero EDP)");
  return {static_cast<double>(b.cycles) / static_cast<double>(a.cycles), ea.edp_js / eb.edp_js};
}

}  // namespace sisa
