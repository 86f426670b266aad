/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "sisa/scheduler.hpp"

#include <algorithm>
#include <sstream>

#include "sisa/error.hpp"

namespace sisa {

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

// len_at[off] holds the length of the slice starting at `off` (0 if none);
// the slices must tile [0, extent) exactly.
bool partitions(const std::vector<std::int64_t>& len_at, std::int64_t extent) {
  std::int64_t pos = 0;
  while (pos < extent) {
    const auto len = len_at[static_cast<std::size_t>(pos)];
    if (len < 1 || pos + len > extent) return false;
    for (auto q = pos + 1; q < pos + len; ++q)
      if (len_at[static_cast<std::size_t>(q)] != 0) return false;
    pos += len;
  }
  return true;
}

}  // namespace

void validate_memory(const MemoryConfig& mem) {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("memory config violates ") + what);
  };
  need(mem.global_buffer_bytes >= 1, "global_buffer_bytes >= 1");
  need(mem.output_buffer_bytes >= 1, "output_buffer_bytes >= 1");
  need(mem.slab_act_buffer_bytes >= 1, "slab_act_buffer_bytes >= 1");
  need(mem.slab_wgt_buffer_bytes >= 1, "slab_wgt_buffer_bytes >= 1");
  need(mem.dram_bytes_per_cycle >= 1.0, "dram_bytes_per_cycle >= 1");
  need(mem.global_bank_port_elems >= 1, "global_bank_port_elems >= 1");
}

void validate_shape(const GemmShape& shape) {
  if (shape.m < 1 || shape.n < 1 || shape.k < 1) {
    std::ostringstream os;
    os << "invalid GEMM " << shape.m << "x" << shape.n << "x" << shape.k
       << ": m, n and k must be >= 1";
    throw ConfigError(os.str());
  }
}

ExecutionMode select_mode(std::int64_t m, const ArrayGeometry& g) {
  validate_geometry(g);
  if (m < 1) throw PreconditionError("select_mode requires m >= 1");

  if (m <= g.slab_height) return make_mode(g, ModeVariant::independent(), {});
  if (m > g.rows) return make_mode(g, ModeVariant::monolithic(), {});

  ModeVariant variant = ModeVariant::monolithic();
  for (auto h : allowed_fusion_heights(g)) {
    if (h >= m) {
      variant = ModeVariant::fused(h);
      break;
    }
  }
  const std::int64_t unit_height = variant.kind == ModeKind::Fused ? variant.group_height : g.rows;
  const std::int64_t slabs_per_unit = unit_height / g.slab_height;
  const std::int64_t active = ceil_div(m, g.slab_height);
  std::set<std::int64_t> gated;
  for (std::int64_t base = 0; base < g.num_slabs; base += slabs_per_unit)
    for (std::int64_t i = active; i < slabs_per_unit; ++i) gated.insert(base + i);
  return make_mode(g, variant, std::move(gated));
}

CapacityResult check_capacity(const TileWorkingSet& ws, const MemoryConfig& mem) {
  CapacityResult r;
  const std::int64_t bpe = ws.bytes_per_element;
  auto infeasible = [&](std::string why) {
    r.feasible = false;
    r.k_split = 0;
    r.reason = std::move(why);
    return r;
  };

  // Completed C tiles of one round, double-buffered for write-back.
  const std::int64_t c_bytes = ws.concurrent_tiles * ws.rows * ws.col_len * bpe * 2;
  if (c_bytes > mem.output_buffer_bytes) {
    std::ostringstream os;
    os << "output tiles need " << c_bytes << " B, output buffer holds " << mem.output_buffer_bytes;
    return infeasible(os.str());
  }

  if (ws.slab_buffers) {
    // Slab-local buffers stage the K stream one step at a time (double-buffered).
    if (ws.rows_per_slab * bpe * 2 > mem.slab_act_buffer_bytes)
      return infeasible("activation window exceeds the slab activation buffer");
    if (ws.col_len * bpe * 2 > mem.slab_wgt_buffer_bytes)
      return infeasible("weight window exceeds the slab weight buffer");
    if (mem.global_bank_port_elems < ws.rows_per_slab || mem.global_bank_port_elems < ws.col_len)
      return infeasible("global buffer bank port narrower than one K step of the tile");
  }

  // The A slice shared by the round, double-buffered, lives in the global buffer.
  const std::int64_t bytes_per_k = ws.rows * bpe * 2;
  const std::int64_t max_chunk = mem.global_buffer_bytes / bytes_per_k;
  if (max_chunk < 1) {
    std::ostringstream os;
    os << "A slice of " << ws.rows << " rows needs " << bytes_per_k
       << " B per K step, global buffer holds " << mem.global_buffer_bytes;
    return infeasible(os.str());
  }
  r.k_split = ceil_div(ws.k, max_chunk);
  return r;
}

Phase plan_phase(const GemmShape& shape, const ArrayGeometry& g, const MemoryConfig& mem,
                 const DataFormat& fmt, std::int64_t row_off, std::int64_t row_len,
                 const ExecutionMode& base, bool slab_buffers) {
  const auto num_units = static_cast<std::int64_t>(base.units.size());
  const std::int64_t unit_width = base.units.front().width;
  const std::int64_t unit_height = base.units.front().height;
  if (row_len > unit_height) throw PreconditionError("phase rows exceed the unit height");

  const std::int64_t n_tiles = ceil_div(shape.n, unit_width);
  const std::int64_t used_units = std::min(num_units, n_tiles);

  TileWorkingSet ws;
  ws.rows = row_len;
  ws.k = shape.k;
  ws.col_len = std::min(shape.n, unit_width);
  ws.concurrent_tiles = used_units;
  ws.rows_per_slab = std::min(row_len, g.slab_height);
  ws.unit_slabs = static_cast<std::int64_t>(base.units.front().member_slabs.size());
  ws.bytes_per_element = fmt.bytes_per_element;
  ws.slab_buffers = slab_buffers;
  const auto cap = check_capacity(ws, mem);
  if (!cap.feasible) {
    std::ostringstream os;
    os << "GEMM " << shape.m << "x" << shape.n << "x" << shape.k << " rows " << row_off << "+"
       << row_len << ": " << cap.reason;
    throw InfeasibleCapacity(os.str());
  }
  const std::int64_t chunk = ceil_div(shape.k, cap.k_split);

  Phase phase;
  phase.row_off = row_off;
  phase.row_len = row_len;
  phase.a_resident = cap.k_split == 1;

  // Tile j runs on unit j % num_units; its K chunks fill consecutive rounds.
  const std::int64_t chunks = ceil_div(shape.k, chunk);
  phase.rounds.resize(static_cast<std::size_t>(ceil_div(n_tiles, num_units) * chunks));
  for (auto& round : phase.rounds) round.reserve(static_cast<std::size_t>(used_units));
  for (std::int64_t j = 0; j < n_tiles; ++j) {
    const std::int64_t col_off = j * unit_width;
    const std::int64_t col_len = std::min(unit_width, shape.n - col_off);
    for (std::int64_t c = 0; c < chunks; ++c) {
      Tile t;
      t.row_off = row_off;
      t.row_len = row_len;
      t.col_off = col_off;
      t.col_len = col_len;
      t.k_off = c * chunk;
      t.k_len = std::min(chunk, shape.k - t.k_off);
      t.unit_id = j % num_units;
      t.accumulate = t.k_off > 0;
      phase.rounds[static_cast<std::size_t>((j / num_units) * chunks + c)].push_back(t);
    }
  }

  std::set<std::int64_t> gated = base.gated_slabs;
  for (std::int64_t u = used_units; u < num_units; ++u)
    for (auto s : base.units[static_cast<std::size_t>(u)].member_slabs) gated.insert(s);
  phase.mode = base;
  phase.mode.gated_slabs = std::move(gated);
  return phase;
}

Schedule plan_gemm(const GemmShape& shape, const ArrayGeometry& g, const MemoryConfig& mem,
                   const DataFormat& fmt) {
  validate_shape(shape);
  validate_geometry(g);
  validate_memory(mem);
  validate_format(fmt);

  Schedule s;
  s.shape = shape;
  std::int64_t row = 0;
  const auto full = make_mode(g, ModeVariant::monolithic(), {});
  while (shape.m - row > g.rows) {
    s.phases.push_back(plan_phase(shape, g, mem, fmt, row, g.rows, full, true));
    row += g.rows;
  }
  const std::int64_t residual = shape.m - row;
  s.phases.push_back(plan_phase(shape, g, mem, fmt, row, residual, select_mode(residual, g), true));
  return s;
}

std::optional<std::string> schedule_violation(const Schedule& s, const ArrayGeometry& g) {
  const auto& shape = s.shape;
  auto where = [](std::size_t p, std::size_t r, const Tile& t) {
    std::ostringstream os;
    os << "phase " << p << " round " << r << " unit " << t.unit_id << ": ";
    return os.str();
  };

  // Pass 1: per-tile checks and the distinct row / column slices.
  std::vector<std::int64_t> row_len_at(static_cast<std::size_t>(shape.m), 0);
  std::vector<std::int64_t> col_len_at(static_cast<std::size_t>(shape.n), 0);
  for (std::size_t p = 0; p < s.phases.size(); ++p) {
    const auto& phase = s.phases[p];
    if (auto v = mode_violation(g, phase.mode)) return "phase " + std::to_string(p) + ": " + *v;
    const auto num_units = static_cast<std::int64_t>(phase.mode.units.size());
    std::vector<char> fully_gated(static_cast<std::size_t>(num_units), 1);
    for (std::size_t u = 0; u < phase.mode.units.size(); ++u)
      for (auto slab : phase.mode.units[u].member_slabs)
        if (!phase.mode.gated_slabs.count(slab)) fully_gated[u] = 0;
    std::vector<std::size_t> seen_in_round(static_cast<std::size_t>(num_units), 0);

    for (std::size_t r = 0; r < phase.rounds.size(); ++r) {
      for (const auto& t : phase.rounds[r]) {
        if (t.unit_id < 0 || t.unit_id >= num_units) return where(p, r, t) + "unit id out of range";
        const auto u = static_cast<std::size_t>(t.unit_id);
        const auto& unit = phase.mode.units[u];
        if (seen_in_round[u] == r + 1) return where(p, r, t) + "two tiles share a unit";
        seen_in_round[u] = r + 1;
        if (t.row_len < 1 || t.col_len < 1 || t.k_len < 1) return where(p, r, t) + "empty tile";
        if (t.row_len > unit.height) return where(p, r, t) + "row_len exceeds unit height";
        if (t.col_len > unit.width) return where(p, r, t) + "col_len exceeds unit width";
        if (t.row_off < 0 || t.row_off + t.row_len > shape.m || t.col_off < 0 ||
            t.col_off + t.col_len > shape.n || t.k_off < 0 || t.k_off + t.k_len > shape.k)
          return where(p, r, t) + "tile outside the GEMM";
        if (t.accumulate != (t.k_off > 0)) return where(p, r, t) + "accumulate flag mismatch";
        if (fully_gated[u]) return where(p, r, t) + "tile assigned to a fully gated unit";
        auto& rl = row_len_at[static_cast<std::size_t>(t.row_off)];
        auto& cl = col_len_at[static_cast<std::size_t>(t.col_off)];
        if (rl != 0 && rl != t.row_len) return where(p, r, t) + "row slices overlap";
        if (cl != 0 && cl != t.col_len) return where(p, r, t) + "column slices overlap";
        rl = t.row_len;
        cl = t.col_len;
      }
    }
  }
  if (!partitions(row_len_at, shape.m)) return "row slices do not partition M";
  if (!partitions(col_len_at, shape.n)) return "column slices do not partition N";

  // Pass 2: each output rectangle gets K chunks in order, on one unit.
  auto index_by_offset = [](const std::vector<std::int64_t>& len_at, std::size_t& count) {
    std::vector<std::size_t> idx(len_at.size(), 0);
    count = 0;
    for (std::size_t off = 0; off < len_at.size(); ++off)
      if (len_at[off] != 0) idx[off] = count++;
    return idx;
  };
  std::size_t rows = 0, cols = 0;
  const auto row_idx = index_by_offset(row_len_at, rows);
  const auto col_idx = index_by_offset(col_len_at, cols);
  const auto cells = rows * cols;
  std::vector<std::int64_t> next_k(cells, 0), owner(cells, -1);
  for (std::size_t p = 0; p < s.phases.size(); ++p) {
    for (const auto& round : s.phases[p].rounds) {
      for (const auto& t : round) {
        const auto cell = row_idx[static_cast<std::size_t>(t.row_off)] * cols +
                          col_idx[static_cast<std::size_t>(t.col_off)];
        const auto unit = static_cast<std::int64_t>(p) * (1 << 20) + t.unit_id;
        if (owner[cell] < 0) owner[cell] = unit;
        if (owner[cell] != unit) return "K chunks of one output tile run on different units";
        if (t.k_off != next_k[cell]) return "K chunks out of order, overlapping or missing";
        next_k[cell] = t.k_off + t.k_len;
      }
    }
  }
  for (auto k : next_k)
    if (k != shape.k) return "output tiles do not cover M x N x K exactly";
  return std::nullopt;
}

std::int64_t total_volume(const Schedule& s) {
  std::int64_t v = 0;
  for (const auto& p : s.phases)
    for (const auto& r : p.rounds)
      for (const auto& t : r) v += t.volume();
  return v;
}

std::int64_t tile_count(const Schedule& s) {
  std::int64_t n = 0;
  for (const auto& p : s.phases)
    for (const auto& r : p.rounds) n += static_cast<std::int64_t>(r.size());
  return n;
}

std::string dump_schedule(const Schedule& s) {
  std::ostringstream os;
  for (std::size_t p = 0; p < s.phases.size(); ++p)
    for (std::size_t r = 0; r < s.phases[p].rounds.size(); ++r)
      for (const auto& t : s.phases[p].rounds[r])
        os << p << ' ' << r << ' ' << t.unit_id << ' ' << t.row_off << ':' << t.row_len << ' '
           << t.col_off << ':' << t.col_len << ' ' << t.k_off << ':' << t.k_len << ' '
           << (t.accumulate ? 1 : 0) << '\n';
  return os.str();
}

}  // namespace sisa
