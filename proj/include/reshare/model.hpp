#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace reshare {

using NodeId = std::uint32_t;
using VnfIndex = std::uint32_t;
using ServiceIndex = std::uint32_t;
using RequestId = std::uint64_t;

// Units: simulation clock in seconds, latencies in ms, loads and speeds in
// packets/ms, costs are rates per second.

struct LayerSpec {
  int index = 0;
  std::string name;
  std::vector<NodeId> node_ids;
  double d = 0.0;        // forwarding latency from a leaf (ms)
  double kappa_f = 0.0;  // fixed cost per VM
  double kappa_p = 0.0;  // cost per unit of allocated speed
};

enum class Reachability { full, tree };

// Layered node graph. Layer 0 holds the leaves; node ids are dense and
// numbered layer by layer.
class Topology {
 public:
  Topology() = default;
  explicit Topology(std::vector<LayerSpec> layers,
                    Reachability mode = Reachability::full);

  // Convenience: `counts[l]` nodes at layer l, ids assigned consecutively.
  static Topology layered(std::vector<LayerSpec> layers,
                          const std::vector<std::size_t>& counts,
                          Reachability mode = Reachability::full);

  const std::vector<LayerSpec>& layers() const noexcept { return layers_; }
  const LayerSpec& layer(int index) const { return layers_.at(index); }
  int layer_count() const noexcept { return static_cast<int>(layers_.size()); }
  int top_layer() const noexcept { return layer_count() - 1; }
  Reachability mode() const noexcept { return mode_; }

  std::size_t node_count() const noexcept { return layer_of_.size(); }
  int layer_of(NodeId node) const { return layer_of_.at(node); }
  bool is_leaf(NodeId node) const;
  const std::vector<NodeId>& leaves() const;
  std::size_t max_layer_width() const noexcept;

  // Nodes at `layer` reachable from `leaf`, ascending id order.
  std::span<const NodeId> reachable(NodeId leaf, int layer) const;

 private:
  void index_nodes();

  std::vector<LayerSpec> layers_;
  Reachability mode_ = Reachability::full;
  std::vector<int> layer_of_;
  // reach_[leaf ordinal][layer] -> node ids
  std::vector<std::vector<std::vector<NodeId>>> reach_;
};

struct VnfSpec {
  std::string vnf_id;
  double theta = 1.0;  // computing units per traffic unit
};

struct ServiceSpec {
  std::string service_id;
  std::vector<VnfIndex> vnfs;  // the chain, in order
  double target_delay = 0.0;   // ms
};

struct Catalog {
  std::vector<VnfSpec> vnfs;
  std::vector<ServiceSpec> services;

  std::optional<VnfIndex> find_vnf(std::string_view id) const;
  std::optional<ServiceIndex> find_service(std::string_view id) const;
  const VnfSpec& vnf(VnfIndex v) const { return vnfs.at(v); }
  const ServiceSpec& service(ServiceIndex s) const { return services.at(s); }
};

struct SystemParams {
  double mu_bar = 100.0;     // maximum VM speed
  double lambda_min = 1.0;   // smallest per-request load, known up front
};

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

struct Request {
  RequestId id = 0;
  ServiceIndex service = 0;
  double arrival = 0.0;            // s
  double duration = kUnbounded;    // s
  double load = 0.0;               // packets/ms
  NodeId leaf = 0;

  bool unbounded() const noexcept { return duration == kUnbounded; }
  double departure() const noexcept { return arrival + duration; }
};

struct Job {
  RequestId request = 0;
  VnfIndex vnf = 0;
  double delay_budget = 0.0;  // ms
  double load = 0.0;
};

struct Violation {
  std::string where;
  std::string message;
};

std::vector<Violation> validate_scenario(const Topology& topology,
                                         const Catalog& catalog,
                                         const SystemParams& params);

// Cost rate of one VM running at full speed on `layer`.
double node_cost_full(const LayerSpec& layer, const SystemParams& params);

}  // namespace reshare
