/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include "sisa/geometry.hpp"
#include "sisa/perfmodel.hpp"

namespace sisa {

/// Synthesized per-cycle static energy of the 128x128 slab array, including
/// its slab power-gating support (nJ per cycle at 1 GHz).
inline constexpr double kSynthPeArrayNj = 21.60;
inline constexpr double kSynthGlobalBufferNj = 5.22;
inline constexpr double kSynthSlabBuffersNj = 0.12;
inline constexpr double kSynthOutputBufferNj = 1.25;
inline constexpr double kGatingOverheadFrac = 0.03;

/// Static energies are nJ per cycle, dynamic energies nJ per access (per byte
/// for DRAM). `pe_array_total` is the array without gating support; active
/// slabs pay it times (1 + gating_energy_overhead_frac).
struct EnergyConfig {
  double pe_array_total = kSynthPeArrayNj / (1.0 + kGatingOverheadFrac);
  double global_buffer = kSynthGlobalBufferNj;
  double slab_buffers_total = kSynthSlabBuffersNj;
  double output_buffer = kSynthOutputBufferNj;
  double gating_energy_overhead_frac = kGatingOverheadFrac;
  double gated_leak_frac = 0.0;

  // Calibration values, not synthesized numbers.
  double e_mac_nJ = 0.0010;
  double e_global_sram_access_nJ = 0.0100;
  double e_slab_sram_access_nJ = 0.0085;
  double e_output_sram_access_nJ = 0.0100;
  double e_dram_per_byte_nJ = 0.0200;

  double clock_hz = 1e9;
};

void validate_energy(const EnergyConfig& cfg);

struct EnergyBreakdown {
  double static_j = 0.0;
  double dynamic_j = 0.0;
  double total_j = 0.0;
  double delay_s = 0.0;
  double edp_js = 0.0;

  // Static energy by component.
  double static_pe_j = 0.0;
  double static_global_j = 0.0;
  double static_slab_buffers_j = 0.0;
  double static_output_j = 0.0;
};

/// Per-cycle static energy (nJ) of each component with every slab active.
struct StaticShares {
  double pe_array = 0.0;
  double global_buffer = 0.0;
  double slab_buffers = 0.0;
  double output_buffer = 0.0;
  double total() const { return pe_array + global_buffer + slab_buffers + output_buffer; }
};

StaticShares static_shares_per_cycle(const EnergyConfig& cfg);

/// Static energy in joules; slabs are charged per their active cycle counts,
/// gated slab-cycles pay gated_leak_frac of the ungated slab cost.
double static_energy(const SimResult& result, const EnergyConfig& cfg, const ArrayGeometry& g,
                     EnergyBreakdown* components = nullptr);

/// Per-access dynamic energy in joules.
double dynamic_energy(const TrafficCounters& counters, const EnergyConfig& cfg);

EnergyBreakdown edp(const SimResult& result, const EnergyConfig& cfg, const ArrayGeometry& g);

/// Copies total energy and EDP into the result.
void attach_energy(SimResult& result, const EnergyBreakdown& e);

struct Comparison {
  double speedup = 0.0;    // cycles_b / cycles_a
  double edp_ratio = 0.0;  // edp_a / edp_b, below 1 means `a` is better
};

/// Compares `a` against the reference `b` on the same workload.
Comparison compare(const SimResult& a, const EnergyBreakdown& ea, const SimResult& b,
                   const EnergyBreakdown& eb);

}  // namespace sisa
