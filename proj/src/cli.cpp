/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "sisa/cli.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sisa/error.hpp"
#include "sisa/evaluation.hpp"
#include "sisa/microsim.hpp"
#include "sisa/scheduler.hpp"

namespace sisa {

namespace {

using nlohmann::ordered_json;

struct CommonFlags {
  std::string config;
  std::string out;
  std::string format = "json";
  bool no_gating = false;
  bool drain_overlap = false;
};

void add_common(CLI::App* cmd, CommonFlags& f, const std::string& default_format) {
  f.format = default_format;
  cmd->add_option("--config", f.config, "Architecture config file (default: <root>/configs/default.json)");
  cmd->add_option("--out", f.out, "Write the report here instead of stdout");
  cmd->add_option("--format", f.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_flag("--no-gating", f.no_gating, "Disable power gating of idle slabs");
  cmd->add_flag("--drain-overlap", f.drain_overlap,
                "Overlap a tile's drain with the next tile's compute on the same unit");
}

SimConfig load_with_flags(const CommonFlags& f) {
  SimConfig cfg = load_config(f.config.empty() ? default_config_path() : std::filesystem::path(f.config));
  if (f.no_gating) cfg.power_gating = false;
  if (f.drain_overlap) cfg.drain_overlap = true;
  return cfg;
}

std::int64_t parse_int(const std::string& text, const std::string& what) {
  std::size_t pos = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(text, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != text.size()) throw ConfigError(what + ": '" + text + "' is not an integer");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

GemmShape parse_gemm(const std::string& text) {
  const auto parts = split(text, 'x');
  if (parts.size() != 3) throw ConfigError("--gemm expects MxNxK, got '" + text + "'");
  GemmShape s{parse_int(parts[0], "--gemm"), parse_int(parts[1], "--gemm"),
              parse_int(parts[2], "--gemm")};
  validate_shape(s);
  return s;
}

std::pair<std::int64_t, std::int64_t> parse_range(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() == 1) {
    const auto m = parse_int(parts[0], "--m-range");
    return {m, m};
  }
  if (parts.size() != 2) throw ConfigError("--m-range expects A:B, got '" + text + "'");
  const auto a = parse_int(parts[0], "--m-range");
  const auto b = parse_int(parts[1], "--m-range");
  if (a < 1 || b < a) throw ConfigError("--m-range must be non-empty and ascending, got '" + text + "'");
  return {a, b};
}

std::vector<ArchVariant> parse_archs(const std::string& text) {
  std::vector<ArchVariant> archs;
  for (const auto& name : split(text, ',')) archs.push_back(parse_arch(name));
  if (archs.empty()) throw ConfigError("--archs needs at least one architecture");
  return archs;
}

void emit(const CommonFlags& f, const std::string& text, std::ostream& out) {
  if (f.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(f.out, std::ios::binary);
  if (!file) throw ConfigError("cannot write " + f.out);
  file << text;
}

std::string error_json(const std::string& kind, const std::string& message) {
  ordered_json j = {{"error", {{"kind", kind}, {"message", message}}}};
  return j.dump() + "\n";
}

std::string simulate_csv(ArchVariant arch, const GemmShape& s, const ArchResult& r) {
  std::ostringstream os;
  os << "arch,m,n,k,mode,cycles,energy_j,edp_js,dram_rd,dram_wr,macs\n"
     << arch_name(arch) << ',' << s.m << ',' << s.n << ',' << s.k << ','
     << (r.chosen_shape ? shape_label(*r.chosen_shape) : r.sim.mode) << ',' << r.sim.cycles << ','
     << format_double(r.energy.total_j) << ',' << format_double(r.energy.edp_js) << ','
     << r.sim.counters.dram_read_bytes << ',' << r.sim.counters.dram_write_bytes << ','
     << r.sim.counters.mac_count << '\n';
  return os.str();
}

struct ValidateFlags {
  std::int64_t drain_fault = 0;
  std::int64_t shapes = 200;
  std::uint64_t seed = 0x5157;
};

// Runs the microsim oracle sweep and random schedule-coverage checks.
int cmd_validate(const ValidateFlags& v, const CommonFlags& f, std::ostream& out) {
  micro::MicroSimOptions mo;
  mo.drain_fault_cycles = v.drain_fault;
  const auto report = micro::oracle_sweep({2, 4, 8, 16}, {2, 4, 8, 16}, {1, 3, 17}, 1, v.seed, mo);

  const std::vector<std::pair<std::string, ArrayGeometry>> geometries = {
      {"default", ArrayGeometry{}}, {"desk-4x4x2", ArrayGeometry{4, 4, 2, 2}}};
  std::mt19937_64 rng(v.seed);
  std::uniform_int_distribution<std::int64_t> dim(1, 4096);
  std::int64_t schedules = 0;
  std::optional<std::string> schedule_failure;
  for (std::int64_t i = 0; i < v.shapes && !schedule_failure; ++i) {
    const GemmShape s{dim(rng), dim(rng), dim(rng)};
    for (const auto& [name, g] : geometries) {
      const auto sched = plan_gemm(s, g, MemoryConfig{});
      ++schedules;
      auto bad = schedule_violation(sched, g);
      if (!bad && total_volume(sched) != s.macs()) bad = "tile volumes do not sum to m*n*k";
      if (bad) {
        schedule_failure = "geometry " + name + ", gemm " + std::to_string(s.m) + "x" +
                           std::to_string(s.n) + "x" + std::to_string(s.k) + ": " + *bad;
        break;
      }
    }
  }

  const bool pass = report.passed() && !report.vacuous && !schedule_failure;
  ordered_json j = {
      {"status", pass ? "pass" : "fail"},
      {"oracle", {{"cases", report.cases}, {"passed", report.passed() && !report.vacuous}}},
      {"schedules", {{"cases", schedules}, {"passed", !schedule_failure.has_value()}}},
  };
  if (report.counterexample) j["oracle"]["counterexample"] = *report.counterexample;
  if (report.vacuous) j["oracle"]["counterexample"] = "no cases were run";
  if (schedule_failure) j["schedules"]["counterexample"] = *schedule_failure;
  emit(f, j.dump(2) + "\n", out);
  return pass ? kExitOk : kExitValidation;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Slab-partitioned systolic array performance and energy model", "sisa"};
  app.require_subcommand(1);

  CommonFlags sim_f, sweep_f, cmp_f, val_f;
  std::string gemm, arch = "sisa", model, m_range = "1:150", archs = "sisa,tpu", cmp_archs = "sisa,tpu";
  std::int64_t cmp_m = 0;
  unsigned workers = 0;
  ValidateFlags val;

  auto* sim = app.add_subcommand("simulate", "Simulate one GEMM on one architecture");
  sim->add_option("--gemm", gemm, "GEMM shape as MxNxK")->required();
  sim->add_option("--arch", arch, "sisa | tpu | redas")->capture_default_str();
  add_common(sim, sim_f, "json");

  auto* sweep = app.add_subcommand("sweep", "Sweep a model over m for several architectures");
  sweep->add_option("--model", model, "Model descriptor path or bundled name")->required();
  sweep->add_option("--m-range", m_range, "Inclusive range A:B")->capture_default_str();
  sweep->add_option("--archs", archs, "Comma-separated; the first is the reference")
      ->capture_default_str();
  sweep->add_option("--workers", workers, "Worker threads (0 = hardware concurrency)");
  add_common(sweep, sweep_f, "csv");

  auto* cmp = app.add_subcommand("compare", "Speedup and EDP ratio of the first arch vs the others");
  auto* cmp_gemm = cmp->add_option("--gemm", gemm, "GEMM shape as MxNxK");
  auto* cmp_model = cmp->add_option("--model", model, "Model descriptor path or bundled name");
  cmp->add_option("--m", cmp_m, "Sequence length / batch size for --model");
  cmp->add_option("--archs", cmp_archs, "Comma-separated, at least two")->capture_default_str();
  cmp_gemm->excludes(cmp_model);
  add_common(cmp, cmp_f, "json");

  auto* validate = app.add_subcommand("validate", "Check the analytical model against the microsim oracle");
  validate->add_option("--shapes", val.shapes, "Random GEMM shapes per geometry")->capture_default_str();
  validate->add_option("--seed", val.seed, "RNG seed")->capture_default_str();
  validate->add_option("--inject-drain-fault", val.drain_fault, "Mutation check: stall the drain")
      ->group("");
  add_common(validate, val_f, "json");

  std::vector<std::string> argv_store{"sisa"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << error_json("usage_error", e.what());
    return kExitConfig;
  }

  try {
    if (sim->parsed()) {
      const auto cfg = load_with_flags(sim_f);
      const auto shape = parse_gemm(gemm);
      const auto variant = parse_arch(arch);
      const auto r = evaluate_gemm(cfg, variant, shape);
      emit(sim_f, sim_f.format == "csv" ? simulate_csv(variant, shape, r)
                                        : gemm_result_json(variant, shape, r),
           out);
      return kExitOk;
    }
    if (sweep->parsed()) {
      const auto cfg = load_with_flags(sweep_f);
      const auto [a, b] = parse_range(m_range);
      const auto arch_list = parse_archs(archs);
      const auto desc = load_model(resolve_model_path(model));
      const auto rows = run_sweep(cfg, desc, a, b, arch_list, workers);
      emit(sweep_f, sweep_f.format == "csv" ? sweep_csv(rows) : sweep_json(rows), out);
      return kExitOk;
    }
    if (cmp->parsed()) {
      const auto cfg = load_with_flags(cmp_f);
      const auto arch_list = parse_archs(cmp_archs);
      if (arch_list.size() < 2) throw ConfigError("compare needs at least two architectures");
      ordered_json j;
      std::vector<std::pair<SimResult, EnergyBreakdown>> results;
      if (!gemm.empty()) {
        const auto shape = parse_gemm(gemm);
        j["gemm"] = {{"m", shape.m}, {"n", shape.n}, {"k", shape.k}};
        for (auto v : arch_list) {
          auto r = evaluate_gemm(cfg, v, shape);
          results.emplace_back(std::move(r.sim), r.energy);
        }
      } else if (!model.empty()) {
        if (cmp_m < 1) throw ConfigError("compare --model needs --m >= 1");
        const auto desc = load_model(resolve_model_path(model));
        j["model"] = desc.name;
        j["m"] = cmp_m;
        for (auto v : arch_list) {
          const auto p = evaluate_model(cfg, v, desc, cmp_m).point;
          SimResult s;
          s.cycles = p.cycles;
          EnergyBreakdown e;
          e.total_j = p.energy_j;
          e.delay_s = p.delay_s;
          e.edp_js = p.edp_js;
          results.emplace_back(s, e);
        }
      } else {
        throw ConfigError("compare needs --gemm or --model");
      }
      j["reference"] = arch_name(arch_list[0]);
      j["comparisons"] = ordered_json::array();
      for (std::size_t i = 1; i < arch_list.size(); ++i) {
        const auto c = compare(results[0].first, results[0].second, results[i].first,
                               results[i].second);
        j["comparisons"].push_back({{"against", arch_name(arch_list[i])},
                                    {"speedup", c.speedup},
                                    {"edp_ratio", c.edp_ratio},
                                    {"cycles", {results[0].first.cycles, results[i].first.cycles}},
                                    {"edp_js", {results[0].second.edp_js, results[i].second.edp_js}}});
      }
      emit(cmp_f, j.dump(2) + "\n", out);
      return kExitOk;
    }
    return cmd_validate(val, val_f, out);
  } catch (const InfeasibleCapacity& e) {
    err << error_json("infeasible_capacity", e.what());
    return kExitInfeasible;
  } catch (const ConfigError& e) {
    err << error_json("config_error", e.what());
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << error_json("config_error", e.what());
    return kExitConfig;
  }
}

}  // namespace sisa
