/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>

namespace sisa {

inline constexpr std::int64_t kKiB = 1024;
inline constexpr std::int64_t kMiB = 1024 * kKiB;

/// On-chip buffer capacities (bytes) and the off-chip bandwidth budget.
/// Slab buffer sizes are per slab.
struct MemoryConfig {
  std::int64_t global_buffer_bytes = 8 * kMiB;
  std::int64_t output_buffer_bytes = 2 * kMiB;
  std::int64_t slab_act_buffer_bytes = 8 * kKiB;
  std::int64_t slab_wgt_buffer_bytes = 64 * kKiB;
  double dram_bytes_per_cycle = 2300.0;  // 2.3 TB/s at 1 GHz
  std::int64_t global_bank_port_elems = 128;
};

/// Throws ConfigError when any field is below 1.
void validate_memory(const MemoryConfig& mem);

}  // namespace sisa
