#pragma once

#include <map>
#include <string>
#include <vector>

#include "reshare/allocation.hpp"
#include "reshare/placement.hpp"
#include "reshare/ranges.hpp"

namespace reshare {

struct PlacementResult {
  RequestId request = 0;
  NodeId node = 0;
  int layer = 0;
  std::vector<VmId> vms;  // per chain position
};

// c-REShare(eps) packing: every request goes to one node at its star layer,
// each job is best-fit into a VM of its (node, VNF, range) bucket.
class PackingEngine {
 public:
  PackingEngine(const Topology& topology, const Catalog& catalog,
                const SystemParams& params);

  // `level` tags the epsilon level the scheme belongs to; VMs of one level
  // are never packing targets for another.
  PlacementResult place_request(const Request& request, const DelayPlan& plan,
                                const RangeScheme& scheme, int level = 1);

  VmId assign_job(const Job& job, NodeId node, RangeKey key);

  // Lowest aggregate load among the nodes at `layer` reachable from the
  // request's leaf; ties to the lowest id.
  NodeId select_node(const Request& request, int layer) const;

  double remove_request(RequestId request);

  const PlacementState& state() const noexcept { return state_; }
  const std::map<int, RangeScheme>& schemes() const noexcept {
    return schemes_;
  }

  // VMs whose hosted budgets fall outside their bucket's latency range.
  std::vector<std::string> check_range_purity() const;
  std::vector<std::string> check_range_purity(std::span<const VmId> vms) const;

  // Buckets breaking count <= 2 * theta * Lambda / (lambda_min (1+eps)^j) + 1.
  std::vector<std::string> check_vm_count_bound() const;
  // Only the buckets holding the given VMs.
  std::vector<std::string> check_vm_count_bound(std::span<const VmId> vms) const;

 private:
  void check_purity(const Vm& vm, std::vector<std::string>& out) const;
  void check_bucket(const BucketKey& key, std::span<const VmId> ids,
                    std::vector<std::string>& out) const;
  bool viable(const Vm& vm, const Job& job, double theta) const;

  PlacementState state_;
  std::map<int, RangeScheme> schemes_;
};

}  // namespace reshare
