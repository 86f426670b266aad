/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "sisa/workloads.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sisa/error.hpp"

namespace sisa {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& source, const std::string& path, const std::string& what) {
  throw ConfigError(source + ": " + path + ": " + what);
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& source,
                    const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) fail(source, path + "." + it.key(), "unknown field");
}

const json& require(const json& obj, const std::string& key, const std::string& source,
                    const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(source, path + "." + key, "missing required field");
  return *it;
}

std::int64_t positive_int(const json& obj, const std::string& key, const std::string& source,
                          const std::string& path) {
  const auto& v = require(obj, key, source, path);
  if (!v.is_number_integer()) fail(source, path + "." + key, "expected an integer");
  const auto x = v.get<std::int64_t>();
  if (x < 1) fail(source, path + "." + key, "must be >= 1");
  return x;
}

}  // namespace

ModelDescriptor parse_model(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(source + ": malformed JSON: " + e.what());
  }
  if (!doc.is_object()) fail(source, "$", "expected an object");
  reject_unknown(doc, {"schema_version", "name", "num_blocks", "notes", "templates"}, source, "$");

  const auto& version = require(doc, "schema_version", source, "$");
  if (!version.is_number_integer() || version.get<int>() != kModelSchemaVersion)
    fail(source, "$.schema_version", "unsupported schema version (expected 1)");

  ModelDescriptor model;
  const auto& name = require(doc, "name", source, "$");
  if (!name.is_string() || name.get<std::string>().empty())
    fail(source, "$.name", "expected a non-empty string");
  model.name = name.get<std::string>();
  model.num_blocks = positive_int(doc, "num_blocks", source, "$");
  if (doc.contains("notes") && !doc["notes"].is_string()) fail(source, "$.notes", "expected a string");

  const auto& templates = require(doc, "templates", source, "$");
  if (!templates.is_array() || templates.empty())
    fail(source, "$.templates", "expected a non-empty array");
  std::set<std::int64_t> ids;
  for (std::size_t i = 0; i < templates.size(); ++i) {
    const std::string path = "$.templates[" + std::to_string(i) + "]";
    const auto& t = templates[i];
    if (!t.is_object()) fail(source, path, "expected an object");
    reject_unknown(t, {"id", "n", "k", "weight", "layers"}, source, path);
    GemmTemplate gt;
    const auto& id = require(t, "id", source, path);
    if (!id.is_number_integer() || id.get<std::int64_t>() < 0)
      fail(source, path + ".id", "expected a non-negative integer");
    gt.id = id.get<std::int64_t>();
    if (!ids.insert(gt.id).second) fail(source, path + ".id", "duplicate template id");
    gt.n = positive_int(t, "n", source, path);
    gt.k = positive_int(t, "k", source, path);
    gt.weight = positive_int(t, "weight", source, path);
    if (t.contains("layers") && !t["layers"].is_string())
      fail(source, path + ".layers", "expected a string");
    model.gemm_templates.push_back(gt);
  }
  return model;
}

ModelDescriptor load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open model descriptor " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str(), path.string());
}

std::vector<WeightedGemm> expand(const ModelDescriptor& model, std::int64_t m) {
  if (m < 1) throw PreconditionError("expand requires m >= 1");
  std::vector<WeightedGemm> out;
  out.reserve(model.gemm_templates.size());
  for (const auto& t : model.gemm_templates) out.push_back({{m, t.n, t.k}, t.weight});
  return out;
}

SweepPoint aggregate(const std::vector<WeightedResult>& results, std::int64_t m) {
  if (results.empty()) throw PreconditionError("aggregate requires at least one result");
  SweepPoint p;
  p.m = m;
  p.per_template = results;
  for (const auto& r : results) {
    const auto w = r.weight;
    const auto wd = static_cast<double>(w);
    p.cycles += w * r.sim.cycles;
    p.static_j += wd * r.energy.static_j;
    p.dynamic_j += wd * r.energy.dynamic_j;
    p.energy_j += wd * r.energy.total_j;
    p.delay_s += wd * r.energy.delay_s;

    const auto& c = r.sim.counters;
    p.counters.dram_read_bytes += w * c.dram_read_bytes;
    p.counters.dram_write_bytes += w * c.dram_write_bytes;
    p.counters.global_sram_reads += w * c.global_sram_reads;
    p.counters.global_sram_writes += w * c.global_sram_writes;
    p.counters.slab_sram_reads += w * c.slab_sram_reads;
    p.counters.slab_sram_writes += w * c.slab_sram_writes;
    p.counters.output_sram_writes += w * c.output_sram_writes;
    p.counters.mac_count += w * c.mac_count;

    const auto active = r.sim.total_active_slab_cycles();
    const auto slabs = static_cast<std::int64_t>(r.sim.active_slab_cycles.size());
    p.active_slab_cycles += w * active;
    p.gated_slab_cycles += w * (slabs * r.sim.cycles - active);
  }
  p.edp_js = p.energy_j * p.delay_s;
  return p;
}

}  // namespace sisa
