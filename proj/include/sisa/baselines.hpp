/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sisa/energymodel.hpp"
#include "sisa/perfmodel.hpp"
#include "sisa/scheduler.hpp"

namespace sisa {

enum class ArchVariant { Sisa, MonolithicTpu, RedasLike };

std::string arch_name(ArchVariant v);            // "sisa" | "tpu" | "redas"
ArchVariant parse_arch(const std::string& name);  // throws ConfigError

/// Height x width of one reshaped array configuration.
struct ArrayShape {
  std::int64_t height = 128;
  std::int64_t width = 128;
  friend bool operator==(const ArrayShape&, const ArrayShape&) = default;
};

std::string shape_label(const ArrayShape& s);  // "16x448"

/// How the reshapeable baseline picks its configuration for a GEMM.
enum class RedasPolicy {
  HeightFit,   // tallest shape whose height does not exceed m (else the shortest)
  MinLatency,  // exhaustive simulation, fewest cycles, ties toward the taller shape
};

struct RedasOptions {
  std::vector<ArrayShape> shape_set{{128, 128}, {64, 256}, {32, 384}, {16, 448}};
  RedasPolicy policy = RedasPolicy::HeightFit;
  double pe_power_factor = 2.49;  // per-PE power relative to a plain PE (INT8 figure, calibration)
};

struct ArchModel {
  ArchVariant variant = ArchVariant::Sisa;
  EnergyConfig energy;
  RedasOptions redas;
};

/// Default per-variant energy configurations.
EnergyConfig default_energy(ArchVariant v);
ArchModel default_model(ArchVariant v);

/// The single full-height array used by monolithic baselines of `g`'s size.
ArrayGeometry monolithic_geometry(const ArrayGeometry& g);

/// Tiles M into chunks of at most g.rows and N into chunks of at most g.cols on
/// one full-height unit, sequentially. Unit ids refer to monolithic_geometry(g).
Schedule monolithic_plan(const GemmShape& shape, const ArrayGeometry& g, const MemoryConfig& mem,
                         const DataFormat& fmt = {});

ArrayShape redas_select_shape(const GemmShape& shape, const ArchModel& model,
                              const MemoryConfig& mem, const DataFormat& fmt);

struct ArchResult {
  SimResult sim;
  EnergyBreakdown energy;
  ArrayGeometry geometry;               // geometry the schedule ran on
  std::optional<ArrayShape> chosen_shape;
};

/// Plans, simulates and costs one GEMM on the given architecture.
ArchResult simulate_arch(const ArchModel& model, const GemmShape& shape, const ArrayGeometry& g,
                         const MemoryConfig& mem, const DataFormat& fmt,
                         const SimOptions& opts = {});

}  // namespace sisa
