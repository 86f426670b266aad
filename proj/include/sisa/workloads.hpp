/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "sisa/energymodel.hpp"
#include "sisa/perfmodel.hpp"
#include "sisa/scheduler.hpp"

namespace sisa {

inline constexpr int kModelSchemaVersion = 1;

/// One unique linear layer (m, n, k) of a model; `weight` counts its
/// occurrences in one full forward pass.
struct GemmTemplate {
  std::int64_t id = 0;
  std::int64_t n = 1;
  std::int64_t k = 1;
  std::int64_t weight = 1;
};

struct ModelDescriptor {
  std::string name;
  std::int64_t num_blocks = 1;
  std::vector<GemmTemplate> gemm_templates;
};

/// Parses and validates a descriptor document. `source` prefixes error messages.
ModelDescriptor parse_model(const std::string& text, const std::string& source = "<model>");

/// Reads a descriptor file; errors carry the JSON path of the offending field.
ModelDescriptor load_model(const std::filesystem::path& path);

struct WeightedGemm {
  GemmShape shape;
  std::int64_t weight = 1;
};

std::vector<WeightedGemm> expand(const ModelDescriptor& model, std::int64_t m);

struct WeightedResult {
  SimResult sim;
  EnergyBreakdown energy;
  std::int64_t weight = 1;
};

/// Weighted totals of one sweep point. EDP is aggregate energy times aggregate
/// delay, not a sum of per-layer EDPs.
struct SweepPoint {
  std::int64_t m = 0;
  std::vector<WeightedResult> per_template;
  std::int64_t cycles = 0;
  double static_j = 0.0;
  double dynamic_j = 0.0;
  double energy_j = 0.0;
  double delay_s = 0.0;
  double edp_js = 0.0;
  TrafficCounters counters;
  std::int64_t active_slab_cycles = 0;
  std::int64_t gated_slab_cycles = 0;
};

/// Throws PreconditionError on an empty list.
SweepPoint aggregate(const std::vector<WeightedResult>& results, std::int64_t m = 0);

}  // namespace sisa
