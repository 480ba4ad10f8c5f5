#include "reshare/model.hpp"

#include <algorithm>
#include <set>

#include "reshare/error.hpp"

namespace reshare {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_scenario: return "InvalidScenario";
    case Errc::infeasible_job: return "InfeasibleJob";
    case Errc::infeasible_request: return "InfeasibleRequest";
    case Errc::index_out_of_scheme: return "IndexOutOfScheme";
    case Errc::budget_below_minimum: return "BudgetBelowMinimum";
    case Errc::no_valid_range: return "NoValidRange";
    case Errc::unknown_request: return "UnknownRequest";
    case Errc::empty_vm: return "EmptyVm";
    case Errc::instance_too_large: return "InstanceTooLarge";
    case Errc::infeasible_instance: return "Infeasible";
    case Errc::invalid_plan: return "InvalidPlan";
    case Errc::parse_error: return "ParseError";
    case Errc::load_below_minimum: return "LoadBelowMinimum";
    case Errc::invariant_breach: return "InvariantBreach";
    case Errc::io_error: return "IoError";
    case Errc::usage_error: return "UsageError";
  }
  return "Unknown";
}

Topology::Topology(std::vector<LayerSpec> layers, Reachability mode)
    : layers_(std::move(layers)), mode_(mode) {
  index_nodes();
}

Topology Topology::layered(std::vector<LayerSpec> layers,
                           const std::vector<std::size_t>& counts,
                           Reachability mode) {
  NodeId next = 0;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    layers[l].index = static_cast<int>(l);
    layers[l].node_ids.clear();
    const std::size_t n = l < counts.size() ? counts[l] : 1;
    for (std::size_t k = 0; k < n; ++k) layers[l].node_ids.push_back(next++);
  }
  return Topology(std::move(layers), mode);
}

void Topology::index_nodes() {
  std::size_t total = 0;
  for (const auto& layer : layers_) total += layer.node_ids.size();
  layer_of_.assign(total, -1);
  for (const auto& layer : layers_) {
    for (NodeId id : layer.node_ids) {
      if (id < total) layer_of_[id] = layer.index;
    }
  }
  reach_.clear();
  if (layers_.empty()) return;
  const auto& leaf_ids = layers_.front().node_ids;
  reach_.resize(leaf_ids.size());
  for (std::size_t k = 0; k < leaf_ids.size(); ++k) {
    reach_[k].resize(layers_.size());
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      const auto& ids = layers_[l].node_ids;
      if (ids.empty()) continue;
      if (l == 0 && mode_ == Reachability::tree) {
        reach_[k][l] = {leaf_ids[k]};
      } else if (mode_ == Reachability::tree) {
        // One ancestor per layer, leaves spread evenly over the layer.
        std::size_t anc = k * ids.size() / leaf_ids.size();
        reach_[k][l] = {ids[anc]};
      } else {
        reach_[k][l] = ids;
        std::sort(reach_[k][l].begin(), reach_[k][l].end());
      }
    }
  }
}

bool Topology::is_leaf(NodeId node) const {
  return node < layer_of_.size() && layer_of_[node] == 0;
}

const std::vector<NodeId>& Topology::leaves() const {
  static const std::vector<NodeId> none;
  return layers_.empty() ? none : layers_.front().node_ids;
}

std::size_t Topology::max_layer_width() const noexcept {
  std::size_t n = 0;
  for (const auto& layer : layers_) n = std::max(n, layer.node_ids.size());
  return n;
}

std::span<const NodeId> Topology::reachable(NodeId leaf, int layer) const {
  const auto& leaf_ids = leaves();
  auto it = std::find(leaf_ids.begin(), leaf_ids.end(), leaf);
  if (it == leaf_ids.end()) {
    throw Error(Errc::invalid_scenario,
                "node " + std::to_string(leaf) + " is not a leaf");
  }
  const auto& row = reach_.at(static_cast<std::size_t>(it - leaf_ids.begin()));
  return row.at(static_cast<std::size_t>(layer));
}

std::optional<VnfIndex> Catalog::find_vnf(std::string_view id) const {
  for (std::size_t i = 0; i < vnfs.size(); ++i) {
    if (vnfs[i].vnf_id == id) return static_cast<VnfIndex>(i);
  }
  return std::nullopt;
}

std::optional<ServiceIndex> Catalog::find_service(std::string_view id) const {
  for (std::size_t i = 0; i < services.size(); ++i) {
    if (services[i].service_id == id) return static_cast<ServiceIndex>(i);
  }
  return std::nullopt;
}

double node_cost_full(const LayerSpec& layer, const SystemParams& params) {
  return layer.kappa_f + layer.kappa_p * params.mu_bar;
}

namespace {

std::string layer_path(std::size_t l) {
  return "topology.layers[" + std::to_string(l) + "]";
}

}  // namespace

std::vector<Violation> validate_scenario(const Topology& topology,
                                         const Catalog& catalog,
                                         const SystemParams& params) {
  std::vector<Violation> out;
  auto report = [&out](std::string where, std::string message) {
    out.push_back({std::move(where), std::move(message)});
  };

  const auto& layers = topology.layers();
  if (layers.empty()) report("topology.layers", "topology has no layers");

  std::set<NodeId> seen;
  std::size_t total = 0;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& layer = layers[l];
    if (layer.index != static_cast<int>(l)) {
      report(layer_path(l), "layer indices must be contiguous from 0");
    }
    if (layer.node_ids.empty()) report(layer_path(l), "layer has no nodes");
    if (!(layer.d >= 0.0)) report(layer_path(l) + ".d", "d must be >= 0");
    if (!(layer.kappa_f > 0.0)) {
      report(layer_path(l) + ".kappa_f", "kappa_f must be positive");
    }
    if (!(layer.kappa_p >= 0.0)) {
      report(layer_path(l) + ".kappa_p", "kappa_p must be >= 0");
    }
    for (NodeId id : layer.node_ids) {
      if (!seen.insert(id).second) {
        report(layer_path(l), "duplicate node id " + std::to_string(id));
      }
    }
    total += layer.node_ids.size();
    if (l == 0) continue;
    const auto& below = layers[l - 1];
    if (!(layer.d > below.d)) {
      report(layer_path(l) + ".d", "latency not strictly increasing");
    }
    if (!(layer.kappa_f < below.kappa_f)) {
      report(layer_path(l) + ".kappa_f", "fixed cost not strictly decreasing");
    }
    if (!(layer.kappa_p < below.kappa_p)) {
      report(layer_path(l) + ".kappa_p",
             "proportional cost not strictly decreasing");
    }
  }
  if (!seen.empty() && (*seen.rbegin() + 1 != total)) {
    report("topology", "node ids must be dense from 0");
  }
  if (out.empty()) {
    for (NodeId leaf : topology.leaves()) {
      for (int l = 0; l < topology.layer_count(); ++l) {
        if (topology.reachable(leaf, l).empty()) {
          report("topology.reachability", "leaf " + std::to_string(leaf) +
                                              " reaches no node at layer " +
                                              std::to_string(l));
        }
      }
    }
  }

  if (!(params.lambda_min > 0.0)) {
    report("params.lambda_min", "lambda_min must be positive");
  }
  if (!(params.mu_bar > params.lambda_min)) {
    report("params.mu_bar", "mu_bar must exceed lambda_min");
  }

  if (catalog.vnfs.empty()) report("vnfs", "catalog has no VNFs");
  std::set<std::string> vnf_names;
  for (std::size_t v = 0; v < catalog.vnfs.size(); ++v) {
    const auto& vnf = catalog.vnfs[v];
    const std::string where = "vnfs[" + std::to_string(v) + "]";
    if (!(vnf.theta > 0.0)) report(where + ".theta", "theta must be positive");
    if (!vnf_names.insert(vnf.vnf_id).second) {
      report(where, "duplicate vnf_id '" + vnf.vnf_id + "'");
    }
  }
  if (catalog.services.empty()) report("services", "catalog has no services");
  std::set<std::string> service_names;
  for (std::size_t s = 0; s < catalog.services.size(); ++s) {
    const auto& svc = catalog.services[s];
    const std::string where = "services[" + std::to_string(s) + "]";
    if (!service_names.insert(svc.service_id).second) {
      report(where, "duplicate service_id '" + svc.service_id + "'");
    }
    if (svc.vnfs.empty()) report(where + ".vnf_ids", "service chain is empty");
    if (!(svc.target_delay > 0.0)) {
      report(where + ".target_delay", "target_delay must be positive");
    }
    std::set<VnfIndex> chain;
    for (VnfIndex v : svc.vnfs) {
      if (v >= catalog.vnfs.size()) {
        report(where + ".vnf_ids", "unknown VNF index " + std::to_string(v));
      } else if (!chain.insert(v).second) {
        report(where + ".vnf_ids",
               "VNF '" + catalog.vnfs[v].vnf_id + "' appears twice");
      }
    }
  }
  return out;
}

}  // namespace reshare
