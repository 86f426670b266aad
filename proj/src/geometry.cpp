/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "sisa/geometry.hpp"

#include <algorithm>
#include <sstream>

#include "sisa/error.hpp"

namespace sisa {

namespace {

bool is_power_of_two(std::int64_t v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

std::optional<std::string> geometry_violation(const ArrayGeometry& g) {
  if (g.rows < 1) return "rows >= 1";
  if (g.cols < 1) return "cols >= 1";
  if (g.slab_height < 1) return "slab_height >= 1";
  if (g.num_slabs < 1) return "num_slabs >= 1";
  if (g.rows != g.slab_height * g.num_slabs) return "rows == slab_height * num_slabs";
  if (!is_power_of_two(g.num_slabs)) return "num_slabs is a power of two";
  return std::nullopt;
}

void validate_geometry(const ArrayGeometry& g) {
  if (auto v = geometry_violation(g)) {
    std::ostringstream os;
    os << "invalid geometry " << g.rows << "x" << g.cols << " (slab_height " << g.slab_height
       << ", num_slabs " << g.num_slabs << "): violates " << *v;
    throw ConfigError(os.str());
  }
}

void validate_format(const DataFormat& fmt) {
  if (fmt.bytes_per_element < 1) throw ConfigError("data format violates bytes_per_element >= 1");
}

std::vector<std::int64_t> allowed_fusion_heights(const ArrayGeometry& g) {
  std::vector<std::int64_t> heights;
  for (std::int64_t h = g.slab_height * 2; h < g.rows; h *= 2) heights.push_back(h);
  return heights;
}

std::vector<LogicalUnit> units_for_mode(const ArrayGeometry& g, const ModeVariant& variant,
                                        const std::set<std::int64_t>& gated) {
  validate_geometry(g);

  std::int64_t slabs_per_unit = 1;
  switch (variant.kind) {
    case ModeKind::Independent:
      slabs_per_unit = 1;
      break;
    case ModeKind::Monolithic:
      slabs_per_unit = g.num_slabs;
      break;
    case ModeKind::Fused: {
      const auto heights = allowed_fusion_heights(g);
      if (std::find(heights.begin(), heights.end(), variant.group_height) == heights.end()) {
        std::ostringstream os;
        os << "fusion height " << variant.group_height
           << " is not slab_height * 2^j (j >= 1) below the array height " << g.rows;
        throw ConfigError(os.str());
      }
      slabs_per_unit = variant.group_height / g.slab_height;
      break;
    }
  }

  for (auto s : gated) {
    if (s < 0 || s >= g.num_slabs) {
      std::ostringstream os;
      os << "gated slab " << s << " out of range [0, " << g.num_slabs << ")";
      throw ConfigError(os.str());
    }
  }

  std::vector<LogicalUnit> units;
  const std::int64_t num_units = g.num_slabs / slabs_per_unit;
  units.reserve(static_cast<std::size_t>(num_units));
  for (std::int64_t u = 0; u < num_units; ++u) {
    LogicalUnit unit;
    unit.unit_id = u;
    unit.height = slabs_per_unit * g.slab_height;
    unit.width = g.cols;
    unit.drain_depth = unit.height;
    bool seen_gated = false;
    for (std::int64_t i = 0; i < slabs_per_unit; ++i) {
      const std::int64_t slab = u * slabs_per_unit + i;
      unit.member_slabs.push_back(slab);
      const bool is_gated = gated.count(slab) > 0;
      if (seen_gated && !is_gated) {
        std::ostringstream os;
        os << "slab " << slab - 1 << " is gated but slab " << slab
           << " below it in the same group is active; only a trailing suffix of a group may be gated";
        throw ConfigError(os.str());
      }
      seen_gated = seen_gated || is_gated;
    }
    units.push_back(std::move(unit));
  }
  return units;
}

ExecutionMode make_mode(const ArrayGeometry& g, const ModeVariant& variant,
                        std::set<std::int64_t> gated) {
  ExecutionMode mode;
  mode.variant = variant;
  mode.units = units_for_mode(g, variant, gated);
  mode.gated_slabs = std::move(gated);
  return mode;
}

std::optional<std::string> mode_violation(const ArrayGeometry& g, const ExecutionMode& mode) {
  if (auto v = geometry_violation(g)) return "geometry: " + *v;
  std::set<std::int64_t> assigned;
  for (std::size_t i = 0; i < mode.units.size(); ++i) {
    const auto& u = mode.units[i];
    if (u.unit_id != static_cast<std::int64_t>(i)) return "unit ids are dense from 0";
    if (u.member_slabs.empty()) return "unit has member slabs";
    if (u.height != g.slab_height * static_cast<std::int64_t>(u.member_slabs.size()))
      return "height == slab_height * |member_slabs|";
    if (u.width != g.cols) return "width == cols";
    if (u.drain_depth != u.height) return "drain_depth == height";
    for (std::size_t j = 1; j < u.member_slabs.size(); ++j)
      if (u.member_slabs[j] != u.member_slabs[j - 1] + 1) return "member slabs contiguous ascending";
    bool seen_gated = false;
    for (auto s : u.member_slabs) {
      if (!assigned.insert(s).second) return "no slab appears in two units";
      const bool is_gated = mode.gated_slabs.count(s) > 0;
      if (seen_gated && !is_gated) return "gated slabs form a trailing suffix of their group";
      seen_gated = seen_gated || is_gated;
    }
    switch (mode.variant.kind) {
      case ModeKind::Independent:
        if (u.height != g.slab_height) return "independent units have slab height";
        break;
      case ModeKind::Fused: {
        const auto h = mode.variant.group_height;
        const auto heights = allowed_fusion_heights(g);
        if (std::find(heights.begin(), heights.end(), h) == heights.end())
          return "fused height is slab_height * 2^j below rows";
        if (u.height != h) return "fused units have the group height";
        break;
      }
      case ModeKind::Monolithic:
        if (mode.units.size() != 1 || u.height != g.rows) return "monolithic has one full-height unit";
        break;
    }
  }
  for (auto s : mode.gated_slabs)
    if (s < 0 || s >= g.num_slabs) return "gated slab index in range";
  return std::nullopt;
}

std::string mode_label(const ExecutionMode& mode) {
  std::ostringstream os;
  switch (mode.variant.kind) {
    case ModeKind::Independent:
      os << "independent×" << mode.units.size();
      break;
    case ModeKind::Fused:
      os << "fused" << mode.variant.group_height << "×" << mode.units.size();
      break;
    case ModeKind::Monolithic:
      os << "monolithic";
      break;
  }
  return os.str();
}

}  // namespace sisa
