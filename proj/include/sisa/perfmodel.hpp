/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sisa/geometry.hpp"
#include "sisa/memory_config.hpp"
#include "sisa/scheduler.hpp"

namespace sisa {

/// Event counts. SRAM counters are element accesses, DRAM counters are bytes.
struct TrafficCounters {
  std::int64_t dram_read_bytes = 0;
  std::int64_t dram_write_bytes = 0;
  std::int64_t global_sram_reads = 0;
  std::int64_t global_sram_writes = 0;
  std::int64_t slab_sram_reads = 0;
  std::int64_t slab_sram_writes = 0;
  std::int64_t output_sram_writes = 0;
  std::int64_t mac_count = 0;

  std::int64_t sram_reads() const { return global_sram_reads + slab_sram_reads; }
  std::int64_t sram_writes() const {
    return global_sram_writes + slab_sram_writes + output_sram_writes;
  }
  friend bool operator==(const TrafficCounters&, const TrafficCounters&) = default;
};

struct SimResult {
  std::int64_t cycles = 0;
  std::vector<std::int64_t> per_phase_cycles;
  std::int64_t cold_start_cycles = 0;            // exposed load of the first round (in cycles)
  TrafficCounters counters;
  std::vector<std::int64_t> active_slab_cycles;  // one entry per physical slab
  std::string mode;                              // phase mode labels joined with '+'
  double energy_j = 0.0;                         // filled by the energy model
  double edp = 0.0;

  std::int64_t total_active_slab_cycles() const;
  friend bool operator==(const SimResult&, const SimResult&) = default;
};

struct SimOptions {
  bool power_gating = true;
  // Experiment knob: a tile's drain overlaps the next tile on the same unit.
  bool drain_overlap = false;
  // Arrays without slab-local buffers stream straight from the global buffers.
  bool slab_buffers = true;
};

/// Skewed-wavefront fill plus k MACs: PE(r-1, c-1) starts at r + c - 2.
std::int64_t compute_cycles(std::int64_t r, std::int64_t c, std::int64_t k);

/// Outputs shift through the unit's full height.
std::int64_t drain_cycles(const LogicalUnit& unit);

/// Cycles to stream a tile's DRAM-sourced operands when `sharing` units load
/// concurrently and split the bandwidth equally. A is skipped when resident.
std::int64_t load_cycles(const Tile& tile, std::int64_t sharing, const DataFormat& fmt,
                         const MemoryConfig& mem, bool a_resident = true);

/// Cycles for `bytes` under an equal 1/sharing share of DRAM bandwidth.
std::int64_t transfer_cycles(std::int64_t bytes, std::int64_t sharing, const MemoryConfig& mem);

/// Busy time of one tile on its unit. `final_chunk` is false for K chunks whose
/// accumulation continues in the PEs; those do not drain.
std::int64_t tile_cycles(const Tile& tile, const LogicalUnit& unit, bool final_chunk);

/// Latency of a round whose successor needs `next_load_cycles` to stage:
/// max over units of max(tile time, next-round load).
std::int64_t round_latency(const Round& round, const ExecutionMode& mode, std::int64_t k_total,
                           std::int64_t next_load_cycles);

/// Runs the analytical model over a schedule. Energy fields are left at zero.
SimResult simulate(const Schedule& schedule, const ArrayGeometry& g, const MemoryConfig& mem,
                   const DataFormat& fmt, const SimOptions& opts = {});

/// (mk + kn + mn) * bytes_per_element.
std::int64_t dram_traffic_lower_bound(const GemmShape& shape, const DataFormat& fmt);

}  // namespace sisa
