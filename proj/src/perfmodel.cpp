/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "sisa/perfmodel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "sisa/error.hpp"

namespace sisa {

std::int64_t SimResult::total_active_slab_cycles() const {
  return std::accumulate(active_slab_cycles.begin(), active_slab_cycles.end(), std::int64_t{0});
}

std::int64_t compute_cycles(std::int64_t r, std::int64_t c, std::int64_t k) {
  if (r < 1 || c < 1 || k < 1) throw PreconditionError("compute_cycles requires r, c, k >= 1");
  return k + r + c - 2;
}

std::int64_t drain_cycles(const LogicalUnit& unit) { return unit.drain_depth; }

std::int64_t transfer_cycles(std::int64_t bytes, std::int64_t sharing, const MemoryConfig& mem) {
  if (sharing < 1) throw PreconditionError("load sharing must be >= 1");
  if (bytes <= 0) return 0;
  const double bw = mem.dram_bytes_per_cycle;
  const auto bw_int = static_cast<std::int64_t>(bw);
  if (static_cast<double>(bw_int) == bw) return (bytes * sharing + bw_int - 1) / bw_int;
  // Non-integral bandwidth: round the quotient, then nudge to the exact ceiling.
  const double q = static_cast<double>(bytes) * static_cast<double>(sharing) / bw;
  auto c = static_cast<std::int64_t>(std::ceil(q - 1e-9));
  return std::max<std::int64_t>(c, 1);
}

std::int64_t load_cycles(const Tile& tile, std::int64_t sharing, const DataFormat& fmt,
                         const MemoryConfig& mem, bool a_resident) {
  std::int64_t elems = tile.k_len * tile.col_len;
  if (!a_resident) elems += tile.row_len * tile.k_len;
  return transfer_cycles(elems * fmt.bytes_per_element, sharing, mem);
}

std::int64_t tile_cycles(const Tile& tile, const LogicalUnit& unit, bool final_chunk) {
  return compute_cycles(tile.row_len, tile.col_len, tile.k_len) +
         (final_chunk ? drain_cycles(unit) : 0);
}

std::int64_t round_latency(const Round& round, const ExecutionMode& mode, std::int64_t k_total,
                           std::int64_t next_load_cycles) {
  std::int64_t latency = next_load_cycles;
  for (const auto& t : round) {
    const auto& unit = mode.units.at(static_cast<std::size_t>(t.unit_id));
    latency = std::max(latency, tile_cycles(t, unit, t.k_off + t.k_len == k_total));
  }
  return latency;
}

namespace {

struct FlatRound {
  std::size_t phase = 0;
  const Round* tiles = nullptr;
  std::vector<std::int64_t> load_bytes;  // per tile, DRAM bytes staged before it starts
};

}  // namespace

SimResult simulate(const Schedule& schedule, const ArrayGeometry& g, const MemoryConfig& mem,
                   const DataFormat& fmt, const SimOptions& opts) {
  validate_geometry(g);
  validate_memory(mem);
  validate_format(fmt);
  const auto& shape = schedule.shape;
  const std::int64_t bpe = fmt.bytes_per_element;

  SimResult res;
  res.per_phase_cycles.assign(schedule.phases.size(), 0);
  res.active_slab_cycles.assign(static_cast<std::size_t>(g.num_slabs), 0);
  auto& ctr = res.counters;

  std::vector<FlatRound> rounds;
  for (std::size_t p = 0; p < schedule.phases.size(); ++p) {
    const auto& phase = schedule.phases[p];
    for (std::size_t r = 0; r < phase.rounds.size(); ++r) {
      FlatRound fr;
      fr.phase = p;
      fr.tiles = &phase.rounds[r];
      for (const auto& t : phase.rounds[r]) {
        std::int64_t elems = t.k_len * t.col_len;
        if (!phase.a_resident) elems += t.row_len * t.k_len;
        fr.load_bytes.push_back(elems * bpe);
      }
      // A resident phase fetches its whole A slice alongside its first round.
      if (r == 0 && phase.a_resident && !fr.load_bytes.empty())
        fr.load_bytes.front() += phase.row_len * shape.k * bpe;
      rounds.push_back(std::move(fr));
    }
  }

  auto round_load = [&](const FlatRound& fr) {
    const auto sharing = static_cast<std::int64_t>(fr.load_bytes.size());
    std::int64_t worst = 0;
    for (auto b : fr.load_bytes) worst = std::max(worst, transfer_cycles(b, sharing, mem));
    return worst;
  };

  // Index of the next tile each unit of each phase runs, for the drain-overlap knob.
  std::map<std::pair<std::size_t, std::int64_t>, std::size_t> last_round_of_unit;
  if (opts.drain_overlap)
    for (std::size_t i = 0; i < rounds.size(); ++i)
      for (const auto& t : *rounds[i].tiles) last_round_of_unit[{rounds[i].phase, t.unit_id}] = i;

  for (std::size_t i = 0; i < rounds.size(); ++i) {
    const auto& fr = rounds[i];
    const auto& phase = schedule.phases[fr.phase];
    std::int64_t latency = i + 1 < rounds.size() ? round_load(rounds[i + 1]) : 0;
    if (i == 0) {
      res.cold_start_cycles = round_load(fr);  // nothing to overlap with
      res.per_phase_cycles[0] += res.cold_start_cycles;
    }

    for (const auto& t : *fr.tiles) {
      const auto& unit = phase.mode.units.at(static_cast<std::size_t>(t.unit_id));
      const bool final_chunk = t.k_off + t.k_len == shape.k;
      std::int64_t busy = tile_cycles(t, unit, final_chunk);
      if (opts.drain_overlap && final_chunk &&
          last_round_of_unit[{fr.phase, t.unit_id}] != i) {
        const auto compute = compute_cycles(t.row_len, t.col_len, t.k_len);
        busy = std::max(compute, drain_cycles(unit));
      }
      latency = std::max(latency, busy);

      const std::int64_t streamed = (t.row_len + t.col_len) * t.k_len;
      ctr.global_sram_reads += streamed;
      if (opts.slab_buffers) {
        ctr.slab_sram_writes += streamed;
        ctr.slab_sram_reads += streamed;
      }
      if (final_chunk) ctr.output_sram_writes += t.row_len * t.col_len;
      ctr.mac_count += t.volume();
    }
    for (auto b : fr.load_bytes) ctr.dram_read_bytes += b;
    res.per_phase_cycles[fr.phase] += latency;
  }

  ctr.global_sram_writes = ctr.dram_read_bytes / bpe;
  ctr.dram_write_bytes = shape.m * shape.n * bpe;

  std::vector<std::string> labels;
  for (std::size_t p = 0; p < schedule.phases.size(); ++p) {
    const auto& phase = schedule.phases[p];
    res.cycles += res.per_phase_cycles[p];
    for (std::int64_t s = 0; s < g.num_slabs; ++s) {
      const bool gated = opts.power_gating && phase.mode.gated_slabs.count(s) > 0;
      if (!gated) res.active_slab_cycles[static_cast<std::size_t>(s)] += res.per_phase_cycles[p];
    }
    labels.push_back(mode_label(phase.mode));
  }
  for (std::size_t i = 0; i < labels.size(); ++i) res.mode += (i ? "+" : "") + labels[i];
  return res;
}

std::int64_t dram_traffic_lower_bound(const GemmShape& shape, const DataFormat& fmt) {
  return (shape.m * shape.k + shape.k * shape.n + shape.m * shape.n) * fmt.bytes_per_element;
}

}  // namespace sisa
