/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <filesystem>
#include <string>

#include "sisa/baselines.hpp"
#include "sisa/energymodel.hpp"
#include "sisa/geometry.hpp"
#include "sisa/memory_config.hpp"
#include "sisa/perfmodel.hpp"

namespace sisa {

inline constexpr int kConfigSchemaVersion = 1;

/// Everything read from an architecture config file.
struct SimConfig {
  ArrayGeometry geometry;
  DataFormat format;
  MemoryConfig memory;
  bool power_gating = true;
  bool drain_overlap = false;
  EnergyConfig energy_sisa = default_energy(ArchVariant::Sisa);
  EnergyConfig energy_tpu = default_energy(ArchVariant::MonolithicTpu);
  EnergyConfig energy_redas = default_energy(ArchVariant::RedasLike);
  RedasOptions redas;

  ArchModel model(ArchVariant v) const;
  SimOptions sim_options() const;
};

/// Strict parse: every key is required and unknown keys are rejected.
SimConfig parse_config(const std::string& text, const std::string& source = "<config>");
SimConfig load_config(const std::filesystem::path& path);

/// Serializes a config in the same schema parse_config reads.
std::string dump_config(const SimConfig& cfg);

/// Root holding configs/ and models/: $SISA_CONFIG_ROOT, else the build-time default.
std::filesystem::path config_root();
std::filesystem::path default_config_path();

/// Accepts a descriptor path or a bundled model name such as "qwen2.5-0.5b".
std::filesystem::path resolve_model_path(const std::string& name_or_path);

}  // namespace sisa
