#pragma once

#include <cstdint>
#include <vector>

#include "reshare/allocation.hpp"
#include "reshare/engine.hpp"
#include "reshare/placement.hpp"

namespace reshare {

// ---------------------------------------------------------------------------
// Exhaustive optimum for tiny instances.

struct OracleRequest {
  RequestId id = 0;
  int star_layer = 0;
  std::vector<Job> jobs;
};

struct OracleInstance {
  std::vector<OracleRequest> requests;
  // When set, all jobs of one request share a layer (the engine's placement
  // space). When clear, every job picks its own layer.
  bool same_layer_per_request = true;
  std::size_t max_jobs = 6;

  std::size_t job_count() const;
};

OracleInstance make_oracle_instance(const std::vector<Request>& requests,
                                    const std::vector<DelayPlan>& plans);

struct OracleVm {
  int layer = 0;
  VnfIndex vnf = 0;
  std::vector<std::size_t> jobs;  // indices into the flattened job list
  double load = 0.0;
  double speed = 0.0;
  double min_budget = 0.0;
  double max_budget = 0.0;
};

struct OracleResult {
  double cost = 0.0;
  std::vector<OracleVm> vms;
  std::uint64_t layer_assignments = 0;
  std::uint64_t partitions_enumerated = 0;
};

// Minimum instantaneous cost over every layer choice and every set partition
// of each (VNF, layer) group into VMs run at their cheapest feasible speed.
OracleResult oracle_optimal_cost(const OracleInstance& instance,
                                 const Topology& topology,
                                 const Catalog& catalog,
                                 const SystemParams& params);

// ---------------------------------------------------------------------------
// Greedy stand-in for the relaxation-based benchmark. Each job independently
// takes the cheapest marginal option among existing same-VNF VMs at any
// layer up to the star layer and one fresh VM per such layer. Latency ranges
// are ignored, so deadlines mix freely.

class RelaxSotaPlacer {
 public:
  RelaxSotaPlacer(const Topology& topology, const Catalog& catalog,
                  const SystemParams& params);

  PlacementResult place_request(const Request& request, const DelayPlan& plan);
  double remove_request(RequestId request);

  const PlacementState& state() const noexcept { return state_; }

 private:
  NodeId least_loaded(const Request& request, int layer) const;

  PlacementState state_;
};

}  // namespace reshare
