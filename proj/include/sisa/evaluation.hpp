/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sisa/baselines.hpp"
#include "sisa/config.hpp"
#include "sisa/workloads.hpp"

namespace sisa {

/// Simulates one GEMM on one architecture with the config's settings.
ArchResult evaluate_gemm(const SimConfig& cfg, ArchVariant arch, const GemmShape& shape);

/// All of a model's templates at sequence length / batch size m, weighted.
struct ModelPoint {
  ArchVariant arch = ArchVariant::Sisa;
  SweepPoint point;
  std::string mode;  // mode label of the point (SISA) or the reshaped/monolithic shape
};

ModelPoint evaluate_model(const SimConfig& cfg, ArchVariant arch, const ModelDescriptor& model,
                          std::int64_t m);

struct SweepRow {
  std::int64_t m = 0;
  ArchVariant arch = ArchVariant::Sisa;
  ModelPoint point;
  double speedup = 1.0;   // cycles of the first arch / cycles of this row
  double norm_edp = 1.0;  // EDP of this row / EDP of the first arch
};

/// Rows ordered by m, then by the order of `archs`. Points run on up to
/// `workers` threads; the output order does not depend on completion order.
std::vector<SweepRow> run_sweep(const SimConfig& cfg, const ModelDescriptor& model,
                                std::int64_t m_first, std::int64_t m_last,
                                const std::vector<ArchVariant>& archs, unsigned workers = 0);

inline constexpr const char* kSweepCsvHeader =
    "m,arch,mode,cycles,energy_j,edp_js,dram_rd,dram_wr,active_slab_cycles,gated_slab_cycles,"
    "speedup,norm_edp";

std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string sweep_json(const std::vector<SweepRow>& rows);

/// JSON report of a single-GEMM simulation.
std::string gemm_result_json(ArchVariant arch, const GemmShape& shape, const ArchResult& r);

/// Formats a double so that output is byte-stable across runs.
std::string format_double(double v);

}  // namespace sisa
