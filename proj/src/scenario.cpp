#include "reshare/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace reshare {

using nlohmann::json;

namespace {

std::string describe(const std::vector<Violation>& violations) {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.where + ": " + v.message;
  }
  return out;
}

// Collects problems instead of stopping at the first one.
class Reader {
 public:
  std::vector<Violation> violations;

  void fail(const std::string& where, const std::string& message) {
    violations.push_back({where, message});
  }

  const json* field(const json& obj, const std::string& path,
                    const std::string& key, bool required) {
    if (!obj.is_object()) {
      fail(path, "expected an object");
      return nullptr;
    }
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
      if (required) fail(path + "." + key, "missing");
      return nullptr;
    }
    return &*it;
  }

  double number(const json& obj, const std::string& path,
                const std::string& key, double fallback, bool required) {
    const json* v = field(obj, path, key, required);
    if (!v) return fallback;
    if (!v->is_number()) {
      fail(path + "." + key, "expected a number");
      return fallback;
    }
    return v->get<double>();
  }

  std::string text(const json& obj, const std::string& path,
                   const std::string& key, const std::string& fallback,
                   bool required) {
    const json* v = field(obj, path, key, required);
    if (!v) return fallback;
    if (!v->is_string()) {
      fail(path + "." + key, "expected a string");
      return fallback;
    }
    return v->get<std::string>();
  }

  bool flag(const json& obj, const std::string& path, const std::string& key,
            bool fallback) {
    const json* v = field(obj, path, key, false);
    if (!v) return fallback;
    if (!v->is_boolean()) {
      fail(path + "." + key, "expected true or false");
      return fallback;
    }
    return v->get<bool>();
  }

  const json* array(const json& obj, const std::string& path,
                    const std::string& key, bool required) {
    const json* v = field(obj, path, key, required);
    if (v && !v->is_array()) {
      fail(path + "." + key, "expected an array");
      return nullptr;
    }
    return v;
  }
};

Topology read_topology(Reader& rd, const json& root) {
  const json* topo = rd.field(root, "$", "topology", true);
  if (!topo) return {};
  Reachability mode = Reachability::full;
  const std::string reach = rd.text(*topo, "topology", "reachability", "full", false);
  if (reach == "tree") {
    mode = Reachability::tree;
  } else if (reach != "full") {
    rd.fail("topology.reachability", "expected 'full' or 'tree'");
  }
  const json* layers = rd.array(*topo, "topology", "layers", true);
  if (!layers) return {};

  std::vector<LayerSpec> specs;
  std::vector<std::size_t> counts;
  bool explicit_ids = false;
  bool counted = false;
  for (std::size_t l = 0; l < layers->size(); ++l) {
    const json& lj = (*layers)[l];
    const std::string path = "topology.layers[" + std::to_string(l) + "]";
    LayerSpec spec;
    spec.index = static_cast<int>(l);
    spec.name = rd.text(lj, path, "name", "layer" + std::to_string(l), false);
    spec.d = rd.number(lj, path, "d", 0.0, true);
    spec.kappa_f = rd.number(lj, path, "kappa_f", 0.0, true);
    spec.kappa_p = rd.number(lj, path, "kappa_p", 0.0, true);
    if (const json* ids = rd.field(lj, path, "node_ids", false)) {
      explicit_ids = true;
      if (!ids->is_array()) {
        rd.fail(path + ".node_ids", "expected an array");
      } else {
        for (const auto& id : *ids) {
          if (!id.is_number_unsigned()) {
            rd.fail(path + ".node_ids", "node ids must be non-negative integers");
            continue;
          }
          spec.node_ids.push_back(id.get<NodeId>());
        }
      }
      counts.push_back(spec.node_ids.size());
    } else {
      counted = true;
      const double n = rd.number(lj, path, "nodes", 1.0, false);
      if (n < 1.0 || n != static_cast<double>(static_cast<std::size_t>(n))) {
        rd.fail(path + ".nodes", "node count must be a positive integer");
        counts.push_back(1);
      } else {
        counts.push_back(static_cast<std::size_t>(n));
      }
    }
    specs.push_back(std::move(spec));
  }
  if (explicit_ids && counted) {
    rd.fail("topology.layers", "use either node counts or node_ids on every layer");
    return {};
  }
  if (explicit_ids) {
    // Ids must be dense; let the validator report it rather than index badly.
    std::size_t total = 0;
    NodeId high = 0;
    for (const auto& s : specs) {
      total += s.node_ids.size();
      for (NodeId id : s.node_ids) high = std::max(high, id);
    }
    if (total == 0 || high + 1 != total) {
      rd.fail("topology", "node ids must be dense from 0");
      return {};
    }
    return Topology(std::move(specs), mode);
  }
  return Topology::layered(std::move(specs), counts, mode);
}

Catalog read_catalog(Reader& rd, const json& root) {
  Catalog catalog;
  if (const json* vnfs = rd.array(root, "$", "vnfs", true)) {
    for (std::size_t v = 0; v < vnfs->size(); ++v) {
      const std::string path = "vnfs[" + std::to_string(v) + "]";
      VnfSpec spec;
      spec.vnf_id = rd.text((*vnfs)[v], path, "vnf_id", "", true);
      spec.theta = rd.number((*vnfs)[v], path, "theta", 1.0, true);
      if (!(spec.theta > 0.0)) rd.fail(path + ".theta", "theta must be positive");
      catalog.vnfs.push_back(spec);
    }
  }
  if (const json* services = rd.array(root, "$", "services", true)) {
    for (std::size_t s = 0; s < services->size(); ++s) {
      const json& sj = (*services)[s];
      const std::string path = "services[" + std::to_string(s) + "]";
      ServiceSpec spec;
      spec.service_id = rd.text(sj, path, "service_id", "", true);
      spec.target_delay = rd.number(sj, path, "target_delay", 0.0, true);
      if (const json* chain = rd.array(sj, path, "vnf_ids", true)) {
        for (const auto& name : *chain) {
          if (!name.is_string()) {
            rd.fail(path + ".vnf_ids", "expected VNF names");
            continue;
          }
          auto idx = catalog.find_vnf(name.get<std::string>());
          if (!idx) {
            rd.fail(path + ".vnf_ids",
                    "unknown VNF '" + name.get<std::string>() + "'");
            continue;
          }
          spec.vnfs.push_back(*idx);
        }
      }
      catalog.services.push_back(std::move(spec));
    }
  }
  return catalog;
}

WorkloadSpec read_workload(Reader& rd, const json& root, const Catalog& catalog,
                           const std::filesystem::path& base_dir) {
  WorkloadSpec spec;
  const json* wl = rd.field(root, "$", "workload", true);
  if (!wl) return spec;
  const std::string kind = rd.text(*wl, "workload", "kind", "phases", false);
  const std::string leaves = rd.text(*wl, "workload", "leaves", "round_robin", false);
  if (leaves == "uniform") {
    spec.plan.leaves = LeafPolicy::uniform;
  } else if (leaves != "round_robin") {
    rd.fail("workload.leaves", "expected 'round_robin' or 'uniform'");
  }

  if (kind == "trace") {
    spec.kind = WorkloadSpec::Kind::trace;
    TraceSpec& t = spec.trace;
    std::filesystem::path p = rd.text(*wl, "workload", "path", "", true);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    t.path = p.string();
    if (const json* cols = rd.field(*wl, "workload", "columns", false)) {
      const std::string path = "workload.columns";
      t.arrival_column = rd.text(*cols, path, "arrival", t.arrival_column, false);
      t.duration_column = rd.text(*cols, path, "duration", t.duration_column, false);
      t.load_column = rd.text(*cols, path, "load", t.load_column, false);
      t.service_column = rd.text(*cols, path, "service", t.service_column, false);
      t.leaf_column = rd.text(*cols, path, "leaf", t.leaf_column, false);
    }
    t.time_scale = rd.number(*wl, "workload", "time_scale", 1.0, false);
    t.load_scale = rd.number(*wl, "workload", "load_scale", 1.0, false);
    if (!(t.time_scale > 0.0) || !(t.load_scale > 0.0)) {
      rd.fail("workload", "time_scale and load_scale must be positive");
    }
    return spec;
  }
  if (kind != "phases") {
    rd.fail("workload.kind", "expected 'phases' or 'trace'");
    return spec;
  }

  const json* phases = rd.array(*wl, "workload", "phases", true);
  if (!phases) return spec;
  for (std::size_t p = 0; p < phases->size(); ++p) {
    const json& pj = (*phases)[p];
    const std::string path = "workload.phases[" + std::to_string(p) + "]";
    Phase ph;
    ph.start = rd.number(pj, path, "start", 0.0, true);
    ph.end = rd.number(pj, path, "end", 0.0, true);
    ph.arrival_rate = rd.number(pj, path, "arrival_rate", 1.0, true);
    if (const json* d = rd.field(pj, path, "duration", false)) {
      if (!d->is_number()) {
        rd.fail(path + ".duration", "expected a number or null");
      } else {
        ph.duration = d->get<double>();
        if (*ph.duration < 0.0) rd.fail(path + ".duration", "negative duration");
      }
    }
    if (!(ph.arrival_rate > 0.0)) rd.fail(path + ".arrival_rate", "must be positive");
    if (ph.end < ph.start) rd.fail(path, "end before start");
    if (const json* mix = rd.field(pj, path, "service_mix", true)) {
      if (!mix->is_object() || mix->empty()) {
        rd.fail(path + ".service_mix", "expected a non-empty object of weights");
      } else {
        for (const auto& [name, w] : mix->items()) {
          auto s = catalog.find_service(name);
          if (!s) {
            rd.fail(path + ".service_mix", "unknown service '" + name + "'");
          } else if (!w.is_number() || !(w.get<double>() > 0.0)) {
            rd.fail(path + ".service_mix." + name, "weight must be positive");
          } else {
            ph.service_mix.emplace_back(*s, w.get<double>());
          }
        }
      }
    }
    if (const json* load = rd.array(pj, path, "load", false)) {
      if (load->size() != 2 || !(*load)[0].is_number() || !(*load)[1].is_number()) {
        rd.fail(path + ".load", "expected [min_factor, max_factor]");
      } else {
        ph.load_min_factor = (*load)[0].get<double>();
        ph.load_max_factor = (*load)[1].get<double>();
        if (ph.load_min_factor < 1.0 || ph.load_max_factor < ph.load_min_factor) {
          rd.fail(path + ".load", "factors must satisfy 1 <= min <= max");
        }
      }
    }
    spec.plan.phases.push_back(std::move(ph));
  }
  return spec;
}

}  // namespace

ScenarioError::ScenarioError(Errc code, std::vector<Violation> violations)
    : Error(code, describe(violations)), violations_(std::move(violations)) {}

Scenario parse_scenario(std::string_view text,
                        const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t pos = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + pos, '\n');
    throw ScenarioError(Errc::parse_error,
                        {{"line " + std::to_string(line), e.what()}});
  }
  if (!root.is_object()) {
    throw ScenarioError(Errc::parse_error, {{"$", "expected a JSON object"}});
  }

  Reader rd;
  Scenario sc;
  sc.name = rd.text(root, "$", "name", "scenario", false);
  sc.topology = read_topology(rd, root);
  if (const json* params = rd.field(root, "$", "params", true)) {
    sc.params.mu_bar = rd.number(*params, "params", "mu_bar", sc.params.mu_bar, true);
    sc.params.lambda_min =
        rd.number(*params, "params", "lambda_min", sc.params.lambda_min, true);
  }
  sc.catalog = read_catalog(rd, root);
  if (rd.violations.empty()) {
    auto found = validate_scenario(sc.topology, sc.catalog, sc.params);
    rd.violations.insert(rd.violations.end(), found.begin(), found.end());
  }
  sc.workload = read_workload(rd, root, sc.catalog, base_dir);

  if (const json* st = rd.field(root, "$", "strategy", false)) {
    const std::string p = "strategy";
    sc.strategy = rd.text(*st, p, "name", sc.strategy, false);
    sc.controller.epsilon_star =
        rd.number(*st, p, "epsilon_star", sc.controller.epsilon_star, false);
    sc.controller.threshold_scale =
        rd.number(*st, p, "threshold_scale", sc.controller.threshold_scale, false);
    const double lvl = rd.number(*st, p, "max_level", sc.controller.max_level, false);
    sc.controller.max_level = static_cast<int>(lvl);
    if (lvl < 1.0 || lvl != static_cast<double>(sc.controller.max_level)) {
      rd.fail(p + ".max_level", "must be a positive integer");
    }
    const double seed = rd.number(*st, p, "seed", static_cast<double>(sc.seed), false);
    if (seed < 0.0 || seed != static_cast<double>(static_cast<std::uint64_t>(seed))) {
      rd.fail(p + ".seed", "must be a non-negative integer");
    } else {
      sc.seed = static_cast<std::uint64_t>(seed);
    }
    sc.verify = rd.flag(*st, p, "verify", sc.verify);
    if (!(sc.controller.epsilon_star > 0.0)) {
      rd.fail(p + ".epsilon_star", "must be positive");
    }
    if (!(sc.controller.threshold_scale > 0.0)) {
      rd.fail(p + ".threshold_scale", "must be positive");
    }
  }
  if (const json* out = rd.field(root, "$", "output", false)) {
    sc.horizon = rd.number(*out, "output", "horizon", 0.0, false);
    if (sc.horizon < 0.0) rd.fail("output.horizon", "must be >= 0");
  }

  if (!rd.violations.empty()) {
    throw ScenarioError(Errc::invalid_scenario, std::move(rd.violations));
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::io_error, "cannot open scenario '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.parent_path());
}

EventList build_events(const Scenario& scenario, std::uint64_t seed) {
  if (scenario.workload.kind == WorkloadSpec::Kind::trace) {
    return ingest_trace(scenario.workload.trace, scenario.catalog,
                        scenario.topology, scenario.params);
  }
  return generate_events(scenario.workload.plan, scenario.topology,
                         scenario.params, seed);
}

}  // namespace reshare
