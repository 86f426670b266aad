/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include <gtest/gtest.h>

#include <random>

#include "sisa/baselines.hpp"
#include "sisa/error.hpp"
#include "sisa/workloads.hpp"

using namespace sisa;

namespace {

const ArrayGeometry kDefault;

std::vector<GemmShape> table_shapes(std::int64_t m) {
  std::vector<GemmShape> out;
  for (const char* name : {"qwen2.5-0.5b", "qwen2.5-1.5b", "llama3.2-3b", "qwen2.5-7b"}) {
    const auto model = load_model(std::string(SISA_TEST_ROOT) + "/models/" + name + ".json");
    for (const auto& wg : expand(model, m)) out.push_back(wg.shape);
  }
  return out;
}

}  // namespace

TEST(Monolithic, TwelveTokenPromptRunsSequentially) {
  const auto s = monolithic_plan({12, 8192, 3072}, kDefault, MemoryConfig{});
  ASSERT_EQ(s.phases.size(), 1u);
  ASSERT_EQ(s.phases[0].mode.units.size(), 1u);
  EXPECT_EQ(s.phases[0].mode.units[0].height, 128);
  EXPECT_EQ(s.phases[0].rounds.size(), 64u);
  for (const auto& r : s.phases[0].rounds) {
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].row_len, 12);
    EXPECT_EQ(r[0].col_len, 128);
  }
}

TEST(Monolithic, SingleTileAndMChunks) {
  EXPECT_EQ(tile_count(monolithic_plan({128, 128, 128}, kDefault, MemoryConfig{})), 1);
  const auto s = monolithic_plan({129, 1, 1}, kDefault, MemoryConfig{});
  ASSERT_EQ(s.phases.size(), 2u);
  EXPECT_EQ(s.phases[0].row_len, 128);
  EXPECT_EQ(s.phases[1].row_len, 1);
  for (const auto& p : s.phases) EXPECT_EQ(p.mode.units[0].drain_depth, 128);
  EXPECT_FALSE(schedule_violation(s, monolithic_geometry(kDefault)).has_value());
}

TEST(Redas, ReportedShapes) {
  const auto model = default_model(ArchVariant::RedasLike);
  const std::vector<std::pair<std::int64_t, ArrayShape>> expect = {
      {16, {16, 448}}, {33, {32, 384}}, {64, {64, 256}}};
  for (const auto& [m, want] : expect)
    for (const auto& shape : table_shapes(m))
      EXPECT_EQ(redas_select_shape(shape, model, MemoryConfig{}, DataFormat{}), want)
          << shape.m << "x" << shape.n << "x" << shape.k;
}

TEST(Redas, HeightFitFallsBackToShortestShape) {
  auto model = default_model(ArchVariant::RedasLike);
  EXPECT_EQ(redas_select_shape({8, 896, 896}, model, MemoryConfig{}, DataFormat{}), (ArrayShape{16, 448}));
  EXPECT_EQ(redas_select_shape({500, 896, 896}, model, MemoryConfig{}, DataFormat{}), (ArrayShape{128, 128}));
}

TEST(Redas, MinLatencyPicksTheFastestShape) {
  auto model = default_model(ArchVariant::RedasLike);
  model.redas.policy = RedasPolicy::MinLatency;
  for (const GemmShape s : {GemmShape{16, 4864, 896}, GemmShape{33, 896, 896}, GemmShape{100, 8192, 3072}}) {
    const auto chosen = redas_select_shape(s, model, MemoryConfig{}, DataFormat{});
    const auto best = simulate_arch(model, s, kDefault, MemoryConfig{}, DataFormat{});
    for (const auto& shape : model.redas.shape_set) {
      auto fixed = model;
      fixed.redas.shape_set = {shape};
      EXPECT_LE(best.sim.cycles,
                simulate_arch(fixed, s, kDefault, MemoryConfig{}, DataFormat{}).sim.cycles);
    }
    EXPECT_EQ(best.chosen_shape, chosen);
  }
}

TEST(Redas, SquareOnlyShapeSetEqualsMonolithic) {
  auto redas = default_model(ArchVariant::RedasLike);
  redas.redas.shape_set = {{128, 128}};
  const auto tpu = default_model(ArchVariant::MonolithicTpu);
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<std::int64_t> dim(1, 3000);
  for (int i = 0; i < 50; ++i) {
    const GemmShape s{dim(rng) % 300 + 1, dim(rng), dim(rng)};
    const auto a = simulate_arch(redas, s, kDefault, MemoryConfig{}, DataFormat{});
    const auto b = simulate_arch(tpu, s, kDefault, MemoryConfig{}, DataFormat{});
    EXPECT_EQ(a.sim.cycles, b.sim.cycles);
    EXPECT_EQ(a.sim.per_phase_cycles, b.sim.per_phase_cycles);
    EXPECT_EQ(a.sim.counters, b.sim.counters);
    EXPECT_EQ(a.sim.active_slab_cycles, b.sim.active_slab_cycles);
  }
  // With a plain PE the energies agree as well.
  redas.redas.pe_power_factor = 1.0;
  const GemmShape s{40, 4864, 896};
  const auto a = simulate_arch(redas, s, kDefault, MemoryConfig{}, DataFormat{});
  const auto b = simulate_arch(tpu, s, kDefault, MemoryConfig{}, DataFormat{});
  EXPECT_EQ(a.energy.total_j, b.energy.total_j);
  EXPECT_EQ(a.energy.edp_js, b.energy.edp_js);
}

TEST(Redas, OversizedShapeIsRejected) {
  auto model = default_model(ArchVariant::RedasLike);
  model.redas.shape_set = {{256, 128}};
  EXPECT_THROW(simulate_arch(model, {16, 16, 16}, kDefault, MemoryConfig{}, DataFormat{}), ConfigError);
}

TEST(AllArchs, MacConservationAndTrafficBound) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<std::int64_t> dim(1, 5000);
  for (auto v : {ArchVariant::Sisa, ArchVariant::MonolithicTpu, ArchVariant::RedasLike}) {
    const auto model = default_model(v);
    for (int i = 0; i < 40; ++i) {
      const GemmShape s{dim(rng) % 400 + 1, dim(rng), dim(rng)};
      const auto r = simulate_arch(model, s, kDefault, MemoryConfig{}, DataFormat{});
      EXPECT_EQ(r.sim.counters.mac_count, s.macs()) << arch_name(v);
      EXPECT_GE(r.sim.counters.dram_read_bytes + r.sim.counters.dram_write_bytes,
                dram_traffic_lower_bound(s, DataFormat{}))
          << arch_name(v);
    }
  }
}

TEST(Arch, Names) {
  for (auto v : {ArchVariant::Sisa, ArchVariant::MonolithicTpu, ArchVariant::RedasLike})
    EXPECT_EQ(parse_arch(arch_name(v)), v);
  EXPECT_THROW(parse_arch("gpu"), ConfigError);
  EXPECT_EQ(shape_label({16, 448}), "16x448");
}
