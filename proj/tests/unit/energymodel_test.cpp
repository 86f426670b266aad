/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include <gtest/gtest.h>

#include "sisa/energymodel.hpp"
#include "sisa/error.hpp"

using namespace sisa;

namespace {

const ArrayGeometry kDefault;

SimResult cycles_with_slabs(std::int64_t cycles, std::int64_t active_slabs) {
  SimResult r;
  r.cycles = cycles;
  r.per_phase_cycles = {cycles};
  r.active_slab_cycles.assign(8, 0);
  for (std::int64_t s = 0; s < active_slabs; ++s) r.active_slab_cycles[static_cast<std::size_t>(s)] = cycles;
  return r;
}

EnergyConfig table_values() {
  EnergyConfig cfg;
  cfg.pe_array_total = 21.60;
  cfg.gating_energy_overhead_frac = 0.0;
  return cfg;
}

}  // namespace

TEST(StaticEnergy, AllActiveCycleIsTableTotal) {
  EXPECT_NEAR(static_energy(cycles_with_slabs(1, 8), table_values(), kDefault), 28.19e-9, 1e-20);
}

TEST(StaticEnergy, DefaultConfigChargesTableTotalWithOverhead) {
  EnergyBreakdown parts;
  EXPECT_NEAR(static_energy(cycles_with_slabs(1, 8), EnergyConfig{}, kDefault, &parts), 28.19e-9, 1e-20);
  EXPECT_NEAR(parts.static_pe_j, 21.60e-9, 1e-20);
  EXPECT_NEAR(parts.static_global_j, 5.22e-9, 1e-20);
  EXPECT_NEAR(parts.static_slab_buffers_j, 0.12e-9, 1e-20);
  EXPECT_NEAR(parts.static_output_j, 1.25e-9, 1e-20);
}

TEST(StaticEnergy, OneGatedSlab) {
  EXPECT_NEAR(static_energy(cycles_with_slabs(1, 7), table_values(), kDefault), 25.475e-9, 1e-20);
}

TEST(StaticEnergy, ZeroCycles) {
  EXPECT_EQ(static_energy(cycles_with_slabs(0, 8), EnergyConfig{}, kDefault), 0.0);
}

TEST(StaticEnergy, GatingIsMonotone) {
  auto cfg = EnergyConfig{};
  for (double leak : {0.0, 0.5, 1.0}) {
    cfg.gated_leak_frac = leak;
    double prev = static_energy(cycles_with_slabs(100, 8), cfg, kDefault);
    for (std::int64_t active = 7; active >= 0; --active) {
      const double e = static_energy(cycles_with_slabs(100, active), cfg, kDefault);
      EXPECT_LE(e, prev + 1e-18) << "leak " << leak << " active " << active;
      prev = e;
    }
  }
}

TEST(StaticEnergy, ExactlyTableTotalPerCycle) {
  EXPECT_NEAR(static_energy(cycles_with_slabs(12345, 8), table_values(), kDefault),
              28.19e-9 * 12345, 1e-15);
}

TEST(StaticShares, MatchTableRows) {
  const auto s = static_shares_per_cycle(EnergyConfig{});
  EXPECT_NEAR(s.pe_array, 21.60, 1e-9);
  EXPECT_NEAR(s.global_buffer, 5.22, 1e-12);
  EXPECT_NEAR(s.slab_buffers, 0.12, 1e-12);
  EXPECT_NEAR(s.output_buffer, 1.25, 1e-12);
  EXPECT_NEAR(s.total(), 28.19, 1e-9);
}

TEST(DynamicEnergy, ZeroAndMacExample) {
  EnergyConfig cfg;
  EXPECT_EQ(dynamic_energy(TrafficCounters{}, cfg), 0.0);
  cfg.e_mac_nJ = 0.0005;
  TrafficCounters c;
  c.mac_count = 1835008;
  EXPECT_NEAR(dynamic_energy(c, cfg), 917504e-12, 1e-18);
  EXPECT_NEAR(dynamic_energy(c, cfg), 0.9175e-6, 0.00005e-6);
}

TEST(DynamicEnergy, Linear) {
  TrafficCounters c{100, 200, 300, 400, 500, 600, 700, 800};
  TrafficCounters d{200, 400, 600, 800, 1000, 1200, 1400, 1600};
  EnergyConfig cfg;
  EXPECT_NEAR(dynamic_energy(d, cfg), 2 * dynamic_energy(c, cfg), 1e-18);
}

TEST(Edp, ThousandCyclesAllActive) {
  const auto e = edp(cycles_with_slabs(1000, 8), table_values(), kDefault);
  EXPECT_NEAR(e.delay_s, 1e-6, 1e-18);
  EXPECT_NEAR(e.static_j, 28.19e-6, 1e-15);
  EXPECT_NEAR(e.edp_js, 2.819e-11, 1e-20);
  EXPECT_DOUBLE_EQ(e.total_j, e.static_j + e.dynamic_j);
}

TEST(Edp, ZeroCycles) {
  const auto e = edp(cycles_with_slabs(0, 8), EnergyConfig{}, kDefault);
  EXPECT_EQ(e.edp_js, 0.0);
}

TEST(Edp, ProportionalToDelay) {
  auto a = edp(cycles_with_slabs(1000, 8), table_values(), kDefault);
  auto b = a;
  b.delay_s *= 2;
  b.edp_js = b.total_j * b.delay_s;
  EXPECT_DOUBLE_EQ(b.edp_js, 2 * a.edp_js);
}

TEST(Compare, Definitions) {
  const auto r = cycles_with_slabs(1000, 8);
  const auto e = edp(r, table_values(), kDefault);
  const auto same = compare(r, e, r, e);
  EXPECT_DOUBLE_EQ(same.speedup, 1.0);
  EXPECT_DOUBLE_EQ(same.edp_ratio, 1.0);

  auto half = r;
  half.cycles = 500;
  auto eh = e;
  eh.total_j = e.total_j / 2;
  eh.delay_s = e.delay_s / 2;
  eh.edp_js = eh.total_j * eh.delay_s;
  const auto c = compare(half, eh, r, e);
  EXPECT_DOUBLE_EQ(c.speedup, 2.0);
  EXPECT_DOUBLE_EQ(c.edp_ratio, 0.25);

  EXPECT_THROW(compare(cycles_with_slabs(0, 8), e, r, e), PreconditionError);
}

TEST(EnergyConfig, RejectsOutOfRange) {
  EnergyConfig cfg;
  cfg.gated_leak_frac = 1.5;
  EXPECT_THROW(validate_energy(cfg), ConfigError);
  cfg = EnergyConfig{};
  cfg.e_mac_nJ = -1;
  EXPECT_THROW(validate_energy(cfg), ConfigError);
}
