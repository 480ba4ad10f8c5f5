#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "reshare/model.hpp"

namespace reshare {

using VmId = std::uint64_t;

// (epsilon level h, range index j). Level -1 marks VMs opened by strategies
// that do not partition by latency range.
struct RangeKey {
  int level = 0;
  int index = 0;
  auto operator<=>(const RangeKey&) const = default;
};

inline constexpr RangeKey kUnranged{-1, -1};

struct HostedJob {
  RequestId request = 0;
  double load = 0.0;
  double budget = 0.0;
};

struct Vm {
  VmId id = 0;
  NodeId node = 0;
  int layer = 0;
  VnfIndex vnf = 0;
  RangeKey key;
  std::vector<HostedJob> jobs;
  double speed = 0.0;       // mu_b
  double load = 0.0;        // Lambda(b)
  double min_budget = 0.0;  // tightest hosted budget
  double max_budget = 0.0;  // loosest hosted budget

  bool empty() const noexcept { return jobs.empty(); }
};

struct PlacedJob {
  VnfIndex vnf = 0;
  VmId vm = 0;
  double budget = 0.0;
};

struct RequestRecord {
  RequestId id = 0;
  ServiceIndex service = 0;
  int star_layer = 0;
  double load = 0.0;
  std::vector<PlacedJob> jobs;
};

struct BucketKey {
  NodeId node = 0;
  VnfIndex vnf = 0;
  RangeKey key;
  auto operator<=>(const BucketKey&) const = default;
};

// All active VMs of one strategy plus lookup indices. Speeds are kept at
// theta * Lambda(b) + 1 / min budget at all times.
class PlacementState {
 public:
  PlacementState(const Topology& topology, const Catalog& catalog,
                 const SystemParams& params);

  const Topology& topology() const noexcept { return *topology_; }
  const Catalog& catalog() const noexcept { return *catalog_; }
  const SystemParams& params() const noexcept { return params_; }

  VmId open_vm(NodeId node, VnfIndex vnf, RangeKey key);
  void add_job(VmId vm, const HostedJob& job);
  // Removes the job; destroys the VM once empty. Returns the cost change.
  double remove_job(VmId vm, RequestId request);

  const Vm& vm(VmId id) const;
  const std::map<VmId, Vm>& vms() const noexcept { return vms_; }
  std::size_t vm_count() const noexcept { return vms_.size(); }
  std::span<const VmId> bucket(const BucketKey& key) const;
  const std::map<BucketKey, std::vector<VmId>>& buckets() const noexcept {
    return buckets_;
  }

  // Sum of theta_v * lambda_r over jobs hosted at the node.
  double node_load(NodeId node) const { return node_load_.at(node); }

  void add_record(RequestRecord record);
  const RequestRecord& record(RequestId id) const;
  bool has_record(RequestId id) const { return records_.contains(id); }
  RequestRecord take_record(RequestId id);
  const std::unordered_map<RequestId, RequestRecord>& records() const noexcept {
    return records_;
  }

  double system_load() const noexcept { return system_load_; }

  // Instantaneous cost, maintained incrementally.
  double cost() const noexcept { return cost_; }
  double recompute_cost() const;
  double vm_cost(const Vm& vm) const;

  double total_speed() const;
  // Running sum of per-VM PoD over running sum of speeds.
  double pod_fraction() const;

  // End-to-end latency of an active request under current speeds.
  double request_latency(const RequestRecord& record) const;

  // Live VMs opened or changed since the previous call, sorted.
  std::vector<VmId> take_touched() const;

 private:
  Vm& mutable_vm(VmId id);
  void refresh_speed(Vm& vm);
  void tally(const Vm& vm, double sign);

  const Topology* topology_;
  const Catalog* catalog_;
  SystemParams params_;
  VmId next_id_ = 1;
  std::map<VmId, Vm> vms_;
  std::map<BucketKey, std::vector<VmId>> buckets_;
  std::vector<double> node_load_;
  std::unordered_map<RequestId, RequestRecord> records_;
  double system_load_ = 0.0;
  double cost_ = 0.0;
  double pod_total_ = 0.0;
  double speed_total_ = 0.0;
  mutable std::vector<VmId> touched_;
};

// Violations of the per-VM model constraints (speed exactness, mu <= mu_bar,
// stability, per-job budgets). Empty when the state is sound.
std::vector<std::string> check_vm_invariants(const PlacementState& state,
                                             double rel_tol = 1e-9);

// Requests whose end-to-end latency exceeds their service target.
std::vector<std::string> check_feasibility(const PlacementState& state,
                                           double rel_tol = 1e-9);

// Same checks restricted to the given VMs and the requests they host.
std::vector<std::string> check_vm_invariants(const PlacementState& state,
                                             std::span<const VmId> vms,
                                             double rel_tol = 1e-9);
std::vector<std::string> check_feasibility(const PlacementState& state,
                                           std::span<const VmId> vms,
                                           double rel_tol = 1e-9);

}  // namespace reshare
