/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sisa/geometry.hpp"
#include "sisa/memory_config.hpp"

namespace sisa {

/// C[m, n] = A[m, k] x B[k, n].
struct GemmShape {
  std::int64_t m = 1;
  std::int64_t n = 1;
  std::int64_t k = 1;

  std::int64_t macs() const { return m * n * k; }
  friend bool operator==(const GemmShape&, const GemmShape&) = default;
};

void validate_shape(const GemmShape& shape);

struct Tile {
  std::int64_t row_off = 0;
  std::int64_t row_len = 0;
  std::int64_t col_off = 0;
  std::int64_t col_len = 0;
  std::int64_t k_off = 0;
  std::int64_t k_len = 0;
  std::int64_t unit_id = 0;
  bool accumulate = false;  // k_off > 0: continues an accumulation already in the PEs

  std::int64_t volume() const { return row_len * col_len * k_len; }
  friend bool operator==(const Tile&, const Tile&) = default;
};

using Round = std::vector<Tile>;

struct Phase {
  ExecutionMode mode;
  std::vector<Round> rounds;
  std::int64_t row_off = 0;
  std::int64_t row_len = 0;
  // A[row_off:row_len, :] stays in the global buffer for the whole phase.
  // Otherwise every tile fetches its own A chunk.
  bool a_resident = true;
};

struct Schedule {
  GemmShape shape;
  std::vector<Phase> phases;
};

/// Regime choice for `m` rows (m > rows is reported as Monolithic; the
/// planner splits such GEMMs into main and residual phases).
ExecutionMode select_mode(std::int64_t m, const ArrayGeometry& g);

/// Per-round footprint of one phase, used to size K chunks.
struct TileWorkingSet {
  std::int64_t rows = 1;             // A rows shared by every tile of the round
  std::int64_t k = 1;                // full reduction depth
  std::int64_t col_len = 1;          // widest B tile
  std::int64_t concurrent_tiles = 1; // tiles of one round
  std::int64_t rows_per_slab = 1;    // A rows landing in one slab's activation buffer
  std::int64_t unit_slabs = 1;       // slabs feeding one tile
  std::int64_t bytes_per_element = 2;
  bool slab_buffers = true;          // false for arrays without slab-local buffers
};

struct CapacityResult {
  bool feasible = true;          // false when no K split can help
  std::int64_t k_split = 1;      // smallest split factor that fits
  std::string reason;            // set when infeasible
};

CapacityResult check_capacity(const TileWorkingSet& ws, const MemoryConfig& mem);

/// Tiles a GEMM onto `g`: full-height monolithic phases while more than `rows`
/// rows remain, then one residual phase in the mode chosen by select_mode.
/// Throws InfeasibleCapacity when a tile does not fit even at k_len = 1.
Schedule plan_gemm(const GemmShape& shape, const ArrayGeometry& g, const MemoryConfig& mem,
                   const DataFormat& fmt = {});

/// Builds one phase over rows [row_off, row_off + row_len) with `base` as the
/// starting mode. Units left without tiles are gated. Shared by the baselines.
Phase plan_phase(const GemmShape& shape, const ArrayGeometry& g, const MemoryConfig& mem,
                 const DataFormat& fmt, std::int64_t row_off, std::int64_t row_len,
                 const ExecutionMode& base, bool slab_buffers);

/// Checks tile bounds, unit constraints, round exclusivity, accumulation
/// locality and exact M x N x K coverage. Returns the first violation.
std::optional<std::string> schedule_violation(const Schedule& s, const ArrayGeometry& g);

std::int64_t total_volume(const Schedule& s);
std::int64_t tile_count(const Schedule& s);

/// One line per tile: `phase round unit row_off:row_len col_off:col_len k_off:k_len acc`.
std::string dump_schedule(const Schedule& s);

}  // namespace sisa
