/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sisa/cli.hpp"
#include "sisa/evaluation.hpp"

using namespace sisa;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("sisa_cli_test_" + name);
}

}  // namespace

TEST(CliSimulate, MacCount) {
  const auto r = cli({"simulate", "--gemm", "12x8192x3072", "--arch", "sisa"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["macs"].get<std::int64_t>(), 301989888);
  for (const char* key : {"cycles", "dram_read_bytes", "dram_write_bytes", "sram_reads", "sram_writes",
                          "macs", "energy_j", "edp"})
    EXPECT_TRUE(j.contains(key)) << key;
}

TEST(CliSimulate, ZeroDimensionIsConfigError) {
  const auto r = cli({"simulate", "--gemm", "0x1x1"});
  EXPECT_EQ(r.code, kExitConfig);
  const auto j = json::parse(r.err);
  EXPECT_EQ(j["error"]["kind"], "config_error");
  EXPECT_TRUE(r.out.empty());
}

TEST(CliSimulate, RedasReportsShape) {
  const auto r = cli({"simulate", "--arch", "redas", "--gemm", "16x4864x896"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(json::parse(r.out)["chosen_shape"], "16x448");
}

TEST(CliSimulate, MalformedArguments) {
  EXPECT_EQ(cli({"simulate", "--gemm", "12x8192"}).code, kExitConfig);
  EXPECT_EQ(cli({"simulate", "--gemm", "1x1x1", "--arch", "gpu"}).code, kExitConfig);
  EXPECT_EQ(cli({"simulate"}).code, kExitConfig);
  EXPECT_EQ(cli({}).code, kExitConfig);
  EXPECT_EQ(cli({"simulate", "--gemm", "1x1x1", "--config", "/nonexistent.json"}).code, kExitConfig);
}

TEST(CliSimulate, InfeasibleCapacityExitCode) {
  std::ifstream in(std::string(SISA_TEST_ROOT) + "/configs/default.json");
  auto doc = json::parse(in);
  doc["memory"]["slab_wgt_buffer_bytes"] = 16;
  const auto path = temp_path("tiny.json");
  std::ofstream(path) << doc.dump();
  const auto r = cli({"simulate", "--gemm", "16x128x64", "--config", path.string()});
  EXPECT_EQ(r.code, kExitInfeasible);
  EXPECT_EQ(json::parse(r.err)["error"]["kind"], "infeasible_capacity");
}

TEST(CliSweep, RowsAndModeLabels) {
  const auto r = cli({"sweep", "--model", "qwen2.5-0.5b", "--m-range", "1:150", "--archs", "sisa,tpu"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 301u);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), kSweepCsvHeader);
  for (const auto& row : rows) {
    if (row[0] == "16" && row[1] == "sisa") EXPECT_EQ(row[2], "independent×8");
    if (row[0] == "33" && row[1] == "sisa") EXPECT_EQ(row[2], "fused64×2");
  }
}

TEST(CliSweep, ByteStableAndWorkerIndependent) {
  const std::vector<std::string> base = {"sweep", "--model", "qwen2.5-0.5b", "--m-range", "1:40",
                                         "--archs", "sisa,tpu,redas"};
  auto one = base;
  one.insert(one.end(), {"--workers", "1"});
  auto four = base;
  four.insert(four.end(), {"--workers", "4"});
  const auto a = cli(one), b = cli(four), c = cli(one);
  ASSERT_EQ(a.code, kExitOk);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);
}

TEST(CliSweep, RowsReproducibleFromSimulate) {
  const auto sweep = cli({"sweep", "--model", "qwen2.5-0.5b", "--m-range", "20:20", "--archs", "sisa,tpu"});
  ASSERT_EQ(sweep.code, kExitOk);
  const auto rows = parse_csv(sweep.out);
  std::ifstream in(std::string(SISA_TEST_ROOT) + "/models/qwen2.5-0.5b.json");
  const auto model = json::parse(in);
  std::vector<std::int64_t> cycles;
  std::vector<double> edps;
  for (const char* arch : {"sisa", "tpu"}) {
    std::int64_t total_cycles = 0;
    double energy = 0, delay = 0;
    for (const auto& t : model["templates"]) {
      const auto gemm = "20x" + std::to_string(t["n"].get<int>()) + "x" + std::to_string(t["k"].get<int>());
      const auto r = cli({"simulate", "--gemm", gemm, "--arch", arch});
      ASSERT_EQ(r.code, kExitOk);
      const auto j = json::parse(r.out);
      const auto w = t["weight"].get<std::int64_t>();
      total_cycles += w * j["cycles"].get<std::int64_t>();
      energy += static_cast<double>(w) * j["energy_j"].get<double>();
      delay += static_cast<double>(w) * j["energy"]["delay_s"].get<double>();
    }
    cycles.push_back(total_cycles);
    edps.push_back(energy * delay);
  }
  EXPECT_EQ(rows[1][3], std::to_string(cycles[0]));
  EXPECT_EQ(rows[2][3], std::to_string(cycles[1]));
  // speedup and norm_edp of the tpu row relative to the sisa reference
  EXPECT_EQ(rows[2][10], format_double(static_cast<double>(cycles[0]) / static_cast<double>(cycles[1])));
  EXPECT_NEAR(std::stod(rows[2][11]), edps[1] / edps[0], 1e-8 * edps[1] / edps[0]);
}

TEST(CliSweep, BadRangeAndArchs) {
  EXPECT_EQ(cli({"sweep", "--model", "qwen2.5-0.5b", "--m-range", "5:3"}).code, kExitConfig);
  EXPECT_EQ(cli({"sweep", "--model", "qwen2.5-0.5b", "--m-range", "0:3"}).code, kExitConfig);
  EXPECT_EQ(cli({"sweep", "--model", "qwen2.5-0.5b", "--archs", ""}).code, kExitConfig);
  EXPECT_EQ(cli({"sweep", "--model", "no-such-model"}).code, kExitConfig);
}

TEST(CliSweep, JsonAndOutFile) {
  const auto path = temp_path("sweep.json");
  const auto r = cli({"sweep", "--model", "qwen2.5-0.5b", "--m-range", "1:3", "--format", "json",
                      "--out", path.string()});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  const auto j = json::parse(in);
  ASSERT_EQ(j.size(), 6u);
  EXPECT_EQ(j[0]["arch"], "sisa");
  EXPECT_EQ(j[1]["arch"], "tpu");
}

TEST(CliCompare, GemmAndModel) {
  const auto g = cli({"compare", "--gemm", "16x4864x896", "--archs", "sisa,tpu"});
  ASSERT_EQ(g.code, kExitOk) << g.err;
  const auto j = json::parse(g.out);
  EXPECT_GT(j["comparisons"][0]["speedup"].get<double>(), 1.0);
  EXPECT_LT(j["comparisons"][0]["edp_ratio"].get<double>(), 1.0);

  const auto m = cli({"compare", "--model", "qwen2.5-0.5b", "--m", "128"});
  ASSERT_EQ(m.code, kExitOk) << m.err;
  EXPECT_NEAR(json::parse(m.out)["comparisons"][0]["speedup"].get<double>(), 1.0, 0.05);
  EXPECT_EQ(cli({"compare", "--model", "qwen2.5-0.5b"}).code, kExitConfig);
  EXPECT_EQ(cli({"compare", "--gemm", "1x1x1", "--archs", "sisa"}).code, kExitConfig);
}

TEST(CliValidate, PassesOnCleanBuild) {
  const auto r = cli({"validate", "--shapes", "20"});
  ASSERT_EQ(r.code, kExitOk) << r.out;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["status"], "pass");
  EXPECT_GT(j["oracle"]["cases"].get<std::int64_t>(), 1000);
}

TEST(CliValidate, DrainFaultIsReported) {
  const auto r = cli({"validate", "--shapes", "1", "--inject-drain-fault", "1"});
  EXPECT_EQ(r.code, kExitValidation);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["status"], "fail");
  const auto ce = j["oracle"]["counterexample"].get<std::string>();
  EXPECT_NE(ce.find("grid"), std::string::npos) << ce;
  EXPECT_NE(ce.find("tile"), std::string::npos) << ce;
}
