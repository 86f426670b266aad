/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "sisa/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "sisa/error.hpp"

namespace sisa {

ArchResult evaluate_gemm(const SimConfig& cfg, ArchVariant arch, const GemmShape& shape) {
  return simulate_arch(cfg.model(arch), shape, cfg.geometry, cfg.memory, cfg.format,
                       cfg.sim_options());
}

ModelPoint evaluate_model(const SimConfig& cfg, ArchVariant arch, const ModelDescriptor& model,
                          std::int64_t m) {
  std::vector<WeightedResult> results;
  std::vector<std::string> labels;
  for (const auto& wg : expand(model, m)) {
    auto r = evaluate_gemm(cfg, arch, wg.shape);
    const auto label = r.chosen_shape ? shape_label(*r.chosen_shape) : r.sim.mode;
    if (std::find(labels.begin(), labels.end(), label) == labels.end()) labels.push_back(label);
    results.push_back({std::move(r.sim), r.energy, wg.weight});
  }
  ModelPoint p;
  p.arch = arch;
  p.point = aggregate(results, m);
  for (std::size_t i = 0; i < labels.size(); ++i) p.mode += (i ? "/" : "") + labels[i];
  return p;
}

std::vector<SweepRow> run_sweep(const SimConfig& cfg, const ModelDescriptor& model,
                                std::int64_t m_first, std::int64_t m_last,
                                const std::vector<ArchVariant>& archs, unsigned workers) {
  if (m_first < 1 || m_last < m_first) throw ConfigError("m-range must be non-empty and ascending");
  if (archs.empty()) throw ConfigError("sweep needs at least one architecture");

  const auto num_m = static_cast<std::size_t>(m_last - m_first + 1);
  const std::size_t total = num_m * archs.size();
  std::vector<SweepRow> rows(total);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      const auto m = m_first + static_cast<std::int64_t>(i / archs.size());
      const auto arch = archs[i % archs.size()];
      try {
        rows[i].m = m;
        rows[i].arch = arch;
        rows[i].point = evaluate_model(cfg, arch, model, m);
      } catch (const std::exception& e) {
        std::lock_guard lock(failure_mu);
        if (!failure) {
          try {
            throw;
          } catch (const ConfigError&) {
            failure = std::make_exception_ptr(
                ConfigError("sweep point m=" + std::to_string(m) + " arch=" + arch_name(arch) +
                            ": " + e.what()));
          } catch (const InfeasibleCapacity&) {
            failure = std::make_exception_ptr(
                InfeasibleCapacity("sweep point m=" + std::to_string(m) + " arch=" +
                                   arch_name(arch) + ": " + e.what()));
          } catch (...) {
            failure = std::current_exception();
          }
        }
        next = total;
      }
    }
  };

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  for (std::size_t base = 0; base < total; base += archs.size()) {
    const auto& ref = rows[base].point.point;
    for (std::size_t j = 0; j < archs.size(); ++j) {
      auto& row = rows[base + j];
      row.speedup = static_cast<double>(ref.cycles) / static_cast<double>(row.point.point.cycles);
      row.norm_edp = row.point.point.edp_js / ref.edp_js;
    }
  }
  return rows;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << kSweepCsvHeader << '\n';
  for (const auto& r : rows) {
    const auto& p = r.point.point;
    os << r.m << ',' << arch_name(r.arch) << ',' << r.point.mode << ',' << p.cycles << ','
       << format_double(p.energy_j) << ',' << format_double(p.edp_js) << ','
       << p.counters.dram_read_bytes << ',' << p.counters.dram_write_bytes << ','
       << p.active_slab_cycles << ',' << p.gated_slab_cycles << ',' << format_double(r.speedup)
       << ',' << format_double(r.norm_edp) << '\n';
  }
  return os.str();
}

std::string sweep_json(const std::vector<SweepRow>& rows) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    const auto& p = r.point.point;
    out.push_back({{"m", r.m},
                   {"arch", arch_name(r.arch)},
                   {"mode", r.point.mode},
                   {"cycles", p.cycles},
                   {"energy_j", p.energy_j},
                   {"edp_js", p.edp_js},
                   {"dram_rd", p.counters.dram_read_bytes},
                   {"dram_wr", p.counters.dram_write_bytes},
                   {"active_slab_cycles", p.active_slab_cycles},
                   {"gated_slab_cycles", p.gated_slab_cycles},
                   {"speedup", r.speedup},
                   {"norm_edp", r.norm_edp}});
  }
  return out.dump(2) + "\n";
}

std::string gemm_result_json(ArchVariant arch, const GemmShape& shape, const ArchResult& r) {
  const auto& s = r.sim;
  const auto& c = s.counters;
  nlohmann::ordered_json j = {
      {"arch", arch_name(arch)},
      {"gemm", {{"m", shape.m}, {"n", shape.n}, {"k", shape.k}}},
      {"mode", s.mode},
      {"cycles", s.cycles},
      {"dram_read_bytes", c.dram_read_bytes},
      {"dram_write_bytes", c.dram_write_bytes},
      {"sram_reads", c.sram_reads()},
      {"sram_writes", c.sram_writes()},
      {"macs", c.mac_count},
      {"energy_j", s.energy_j},
      {"edp", s.edp},
  };
  if (r.chosen_shape) j["chosen_shape"] = shape_label(*r.chosen_shape);
  j["per_phase_cycles"] = s.per_phase_cycles;
  j["cold_start_cycles"] = s.cold_start_cycles;
  j["active_slab_cycles"] = s.active_slab_cycles;
  j["energy"] = {{"static_j", r.energy.static_j},
                 {"dynamic_j", r.energy.dynamic_j},
                 {"total_j", r.energy.total_j},
                 {"delay_s", r.energy.delay_s},
                 {"edp_js", r.energy.edp_js},
                 {"static_pe_j", r.energy.static_pe_j},
                 {"static_global_j", r.energy.static_global_j},
                 {"static_slab_buffers_j", r.energy.static_slab_buffers_j},
                 {"static_output_j", r.energy.static_output_j}};
  j["traffic"] = {{"global_sram_reads", c.global_sram_reads},
                  {"global_sram_writes", c.global_sram_writes},
                  {"slab_sram_reads", c.slab_sram_reads},
                  {"slab_sram_writes", c.slab_sram_writes},
                  {"output_sram_writes", c.output_sram_writes}};
  return j.dump(2) + "\n";
}

}  // namespace sisa
