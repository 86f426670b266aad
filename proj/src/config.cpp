/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "sisa/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sisa/error.hpp"

#ifndef SISA_DEFAULT_CONFIG_ROOT
#define SISA_DEFAULT_CONFIG_ROOT "."
#endif

namespace sisa {

namespace {

using nlohmann::json;

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& what) const {
    throw ConfigError(source_ + ": " + path + ": " + what);
  }

  const json& object(const json& parent, const std::string& key, const std::string& path,
                     const std::set<std::string>& allowed) const {
    const auto& v = field(parent, key, path);
    if (!v.is_object()) fail(path + "." + key, "expected an object");
    for (auto it = v.begin(); it != v.end(); ++it)
      if (!allowed.count(it.key())) fail(path + "." + key + "." + it.key(), "unknown field");
    for (const auto& k : allowed)
      if (!v.contains(k) && k != "notes") fail(path + "." + key + "." + k, "missing required field");
    return v;
  }

  const json& field(const json& parent, const std::string& key, const std::string& path) const {
    auto it = parent.find(key);
    if (it == parent.end()) fail(path + "." + key, "missing required field");
    return *it;
  }

  std::int64_t integer(const json& parent, const std::string& key, const std::string& path) const {
    const auto& v = field(parent, key, path);
    if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
    return v.get<std::int64_t>();
  }

  double number(const json& parent, const std::string& key, const std::string& path) const {
    const auto& v = field(parent, key, path);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    return v.get<double>();
  }

  bool boolean(const json& parent, const std::string& key, const std::string& path) const {
    const auto& v = field(parent, key, path);
    if (!v.is_boolean()) fail(path + "." + key, "expected true or false");
    return v.get<bool>();
  }

 private:
  std::string source_;
};

const std::set<std::string> kEnergyKeys = {
    "pe_array_total_nJ",       "global_buffer_nJ",        "slab_buffers_total_nJ",
    "output_buffer_nJ",        "gating_energy_overhead_frac", "gated_leak_frac",
    "e_mac_nJ",                "e_global_sram_access_nJ", "e_slab_sram_access_nJ",
    "e_output_sram_access_nJ", "e_dram_per_byte_nJ",      "clock_hz",
    "notes"};

EnergyConfig read_energy(const Reader& rd, const json& parent, const std::string& key) {
  const std::string path = "$.energy." + key;
  const auto& e = rd.object(parent, key, "$.energy", kEnergyKeys);
  EnergyConfig cfg;
  cfg.pe_array_total = rd.number(e, "pe_array_total_nJ", path);
  cfg.global_buffer = rd.number(e, "global_buffer_nJ", path);
  cfg.slab_buffers_total = rd.number(e, "slab_buffers_total_nJ", path);
  cfg.output_buffer = rd.number(e, "output_buffer_nJ", path);
  cfg.gating_energy_overhead_frac = rd.number(e, "gating_energy_overhead_frac", path);
  cfg.gated_leak_frac = rd.number(e, "gated_leak_frac", path);
  cfg.e_mac_nJ = rd.number(e, "e_mac_nJ", path);
  cfg.e_global_sram_access_nJ = rd.number(e, "e_global_sram_access_nJ", path);
  cfg.e_slab_sram_access_nJ = rd.number(e, "e_slab_sram_access_nJ", path);
  cfg.e_output_sram_access_nJ = rd.number(e, "e_output_sram_access_nJ", path);
  cfg.e_dram_per_byte_nJ = rd.number(e, "e_dram_per_byte_nJ", path);
  cfg.clock_hz = rd.number(e, "clock_hz", path);
  try {
    validate_energy(cfg);
  } catch (const ConfigError& err) {
    rd.fail(path, err.what());
  }
  return cfg;
}

json energy_json(const EnergyConfig& c) {
  return {{"pe_array_total_nJ", c.pe_array_total},
          {"global_buffer_nJ", c.global_buffer},
          {"slab_buffers_total_nJ", c.slab_buffers_total},
          {"output_buffer_nJ", c.output_buffer},
          {"gating_energy_overhead_frac", c.gating_energy_overhead_frac},
          {"gated_leak_frac", c.gated_leak_frac},
          {"e_mac_nJ", c.e_mac_nJ},
          {"e_global_sram_access_nJ", c.e_global_sram_access_nJ},
          {"e_slab_sram_access_nJ", c.e_slab_sram_access_nJ},
          {"e_output_sram_access_nJ", c.e_output_sram_access_nJ},
          {"e_dram_per_byte_nJ", c.e_dram_per_byte_nJ},
          {"clock_hz", c.clock_hz}};
}

}  // namespace

ArchModel SimConfig::model(ArchVariant v) const {
  ArchModel m;
  m.variant = v;
  m.redas = redas;
  switch (v) {
    case ArchVariant::Sisa:
      m.energy = energy_sisa;
      break;
    case ArchVariant::MonolithicTpu:
      m.energy = energy_tpu;
      break;
    case ArchVariant::RedasLike:
      m.energy = energy_redas;
      break;
  }
  return m;
}

SimOptions SimConfig::sim_options() const {
  SimOptions o;
  o.power_gating = power_gating;
  o.drain_overlap = drain_overlap;
  return o;
}

SimConfig parse_config(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(source + ": malformed JSON: " + e.what());
  }
  Reader rd(source);
  if (!doc.is_object()) rd.fail("$", "expected an object");
  const std::set<std::string> top = {"schema_version", "notes",  "geometry", "format",
                                     "memory",         "options", "energy",  "redas"};
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (!top.count(it.key())) rd.fail("$." + it.key(), "unknown field");
  if (rd.integer(doc, "schema_version", "$") != kConfigSchemaVersion)
    rd.fail("$.schema_version", "unsupported schema version (expected 1)");

  SimConfig cfg;
  const auto& g = rd.object(doc, "geometry", "$", {"rows", "cols", "slab_height", "num_slabs"});
  cfg.geometry = {rd.integer(g, "rows", "$.geometry"), rd.integer(g, "cols", "$.geometry"),
                  rd.integer(g, "slab_height", "$.geometry"),
                  rd.integer(g, "num_slabs", "$.geometry")};

  const auto& f = rd.object(doc, "format", "$", {"bytes_per_element"});
  cfg.format.bytes_per_element = rd.integer(f, "bytes_per_element", "$.format");

  const auto& m = rd.object(doc, "memory", "$",
                            {"global_buffer_bytes", "output_buffer_bytes", "slab_act_buffer_bytes",
                             "slab_wgt_buffer_bytes", "dram_bytes_per_cycle",
                             "global_bank_port_elems"});
  cfg.memory.global_buffer_bytes = rd.integer(m, "global_buffer_bytes", "$.memory");
  cfg.memory.output_buffer_bytes = rd.integer(m, "output_buffer_bytes", "$.memory");
  cfg.memory.slab_act_buffer_bytes = rd.integer(m, "slab_act_buffer_bytes", "$.memory");
  cfg.memory.slab_wgt_buffer_bytes = rd.integer(m, "slab_wgt_buffer_bytes", "$.memory");
  cfg.memory.dram_bytes_per_cycle = rd.number(m, "dram_bytes_per_cycle", "$.memory");
  cfg.memory.global_bank_port_elems = rd.integer(m, "global_bank_port_elems", "$.memory");

  const auto& o = rd.object(doc, "options", "$", {"power_gating", "drain_overlap"});
  cfg.power_gating = rd.boolean(o, "power_gating", "$.options");
  cfg.drain_overlap = rd.boolean(o, "drain_overlap", "$.options");

  const auto& e = rd.object(doc, "energy", "$", {"sisa", "tpu", "redas", "notes"});
  cfg.energy_sisa = read_energy(rd, e, "sisa");
  cfg.energy_tpu = read_energy(rd, e, "tpu");
  cfg.energy_redas = read_energy(rd, e, "redas");

  const auto& r = rd.object(doc, "redas", "$", {"shapes", "policy", "pe_power_factor"});
  const auto& shapes = rd.field(r, "shapes", "$.redas");
  if (!shapes.is_array() || shapes.empty()) rd.fail("$.redas.shapes", "expected a non-empty array");
  cfg.redas.shape_set.clear();
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const auto& s = shapes[i];
    const std::string path = "$.redas.shapes[" + std::to_string(i) + "]";
    if (!s.is_array() || s.size() != 2 || !s[0].is_number_integer() || !s[1].is_number_integer())
      rd.fail(path, "expected [height, width]");
    ArrayShape shape{s[0].get<std::int64_t>(), s[1].get<std::int64_t>()};
    if (shape.height < 1 || shape.width < 1 ||
        shape.height * shape.width > cfg.geometry.rows * cfg.geometry.cols)
      rd.fail(path, "shape must be positive and fit the PE budget of the geometry");
    cfg.redas.shape_set.push_back(shape);
  }
  const auto& policy = rd.field(r, "policy", "$.redas");
  if (policy == "height_fit")
    cfg.redas.policy = RedasPolicy::HeightFit;
  else if (policy == "min_latency")
    cfg.redas.policy = RedasPolicy::MinLatency;
  else
    rd.fail("$.redas.policy", "expected \"height_fit\" or \"min_latency\"");
  cfg.redas.pe_power_factor = rd.number(r, "pe_power_factor", "$.redas");
  if (!(cfg.redas.pe_power_factor > 0.0)) rd.fail("$.redas.pe_power_factor", "must be > 0");

  try {
    validate_geometry(cfg.geometry);
    validate_format(cfg.format);
    validate_memory(cfg.memory);
  } catch (const ConfigError& err) {
    throw ConfigError(source + ": " + err.what());
  }
  return cfg;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

std::string dump_config(const SimConfig& cfg) {
  json shapes = json::array();
  for (const auto& s : cfg.redas.shape_set) shapes.push_back({s.height, s.width});
  json doc = {
      {"schema_version", kConfigSchemaVersion},
      {"geometry",
       {{"rows", cfg.geometry.rows},
        {"cols", cfg.geometry.cols},
        {"slab_height", cfg.geometry.slab_height},
        {"num_slabs", cfg.geometry.num_slabs}}},
      {"format", {{"bytes_per_element", cfg.format.bytes_per_element}}},
      {"memory",
       {{"global_buffer_bytes", cfg.memory.global_buffer_bytes},
        {"output_buffer_bytes", cfg.memory.output_buffer_bytes},
        {"slab_act_buffer_bytes", cfg.memory.slab_act_buffer_bytes},
        {"slab_wgt_buffer_bytes", cfg.memory.slab_wgt_buffer_bytes},
        {"dram_bytes_per_cycle", cfg.memory.dram_bytes_per_cycle},
        {"global_bank_port_elems", cfg.memory.global_bank_port_elems}}},
      {"options", {{"power_gating", cfg.power_gating}, {"drain_overlap", cfg.drain_overlap}}},
      {"energy",
       {{"sisa", energy_json(cfg.energy_sisa)},
        {"tpu", energy_json(cfg.energy_tpu)},
        {"redas", energy_json(cfg.energy_redas)}}},
      {"redas",
       {{"shapes", shapes},
        {"policy", cfg.redas.policy == RedasPolicy::HeightFit ? "height_fit" : "min_latency"},
        {"pe_power_factor", cfg.redas.pe_power_factor}}}};
  return doc.dump(2) + "\n";
}

std::filesystem::path config_root() {
  if (const char* env = std::getenv("SISA_CONFIG_ROOT"); env && *env) return env;
  return SISA_DEFAULT_CONFIG_ROOT;
}

std::filesystem::path default_config_path() { return config_root() / "configs" / "default.json"; }

std::filesystem::path resolve_model_path(const std::string& name_or_path) {
  std::filesystem::path p(name_or_path);
  if (std::filesystem::exists(p)) return p;
  auto bundled = config_root() / "models" / (name_or_path + ".json");
  if (std::filesystem::exists(bundled)) return bundled;
  throw ConfigError("model descriptor '" + name_or_path + "' not found (looked for " +
                    bundled.string() + ")");
}

}  // namespace sisa
