/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace sisa {

/// Physical PE grid split into horizontal slabs that span the full width.
struct ArrayGeometry {
  std::int64_t rows = 128;
  std::int64_t cols = 128;
  std::int64_t slab_height = 16;
  std::int64_t num_slabs = 8;

  friend bool operator==(const ArrayGeometry&, const ArrayGeometry&) = default;
};

struct DataFormat {
  std::int64_t bytes_per_element = 2;  // BF16
};

/// Returns the name of the first violated invariant, or nullopt when `g` is valid.
std::optional<std::string> geometry_violation(const ArrayGeometry& g);

/// Throws ConfigError naming the first violated invariant.
void validate_geometry(const ArrayGeometry& g);

void validate_format(const DataFormat& fmt);

enum class ModeKind { Independent, Fused, Monolithic };

/// Mode selector; `group_height` is meaningful only for Fused.
struct ModeVariant {
  ModeKind kind = ModeKind::Independent;
  std::int64_t group_height = 0;

  static ModeVariant independent() { return {ModeKind::Independent, 0}; }
  static ModeVariant fused(std::int64_t h) { return {ModeKind::Fused, h}; }
  static ModeVariant monolithic() { return {ModeKind::Monolithic, 0}; }

  friend bool operator==(const ModeVariant&, const ModeVariant&) = default;
};

/// A group of contiguous slabs executing one tile at a time.
///
/// The unit keeps its full height (and drain depth) when trailing member
/// slabs are power-gated; gating only changes which slabs burn static energy.
struct LogicalUnit {
  std::int64_t unit_id = 0;
  std::int64_t height = 0;
  std::int64_t width = 0;
  std::int64_t drain_depth = 0;
  std::vector<std::int64_t> member_slabs;

  friend bool operator==(const LogicalUnit&, const LogicalUnit&) = default;
};

struct ExecutionMode {
  ModeVariant variant;
  std::vector<LogicalUnit> units;
  std::set<std::int64_t> gated_slabs;

  friend bool operator==(const ExecutionMode&, const ExecutionMode&) = default;
};

/// Heights a fused group may take: slab_height * 2^j for j >= 1, below rows.
std::vector<std::int64_t> allowed_fusion_heights(const ArrayGeometry& g);

/// Builds the logical units for `variant`. Gated slabs must be a trailing
/// suffix of their group's slab chain (whole groups may be gated).
std::vector<LogicalUnit> units_for_mode(const ArrayGeometry& g, const ModeVariant& variant,
                                        const std::set<std::int64_t>& gated);

/// Same as units_for_mode, packaged with the variant and gating set.
ExecutionMode make_mode(const ArrayGeometry& g, const ModeVariant& variant,
                        std::set<std::int64_t> gated);

/// Checks every ExecutionMode invariant; returns a description of the first failure.
std::optional<std::string> mode_violation(const ArrayGeometry& g, const ExecutionMode& mode);

/// Short label used in reports, e.g. "independent×8", "fused64×2", "monolithic".
std::string mode_label(const ExecutionMode& mode);

}  // namespace sisa
