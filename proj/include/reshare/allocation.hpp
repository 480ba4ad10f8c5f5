#pragma once

#include <vector>

#include "reshare/model.hpp"

namespace reshare {

// Per-request delay budgets. Entries of `budgets` and `solo_latency` follow
// the order of the service chain.
struct DelayPlan {
  RequestId request = 0;
  int star_layer = 0;
  std::vector<VnfIndex> vnfs;
  std::vector<double> budgets;       // D^v_r, ms
  std::vector<double> solo_latency;  // latency at full VM speed, ms

  double budget_of(VnfIndex v) const;
};

// 1 / (mu_bar - theta * load); throws InfeasibleJob when theta*load >= mu_bar.
double solo_latency(const VnfSpec& vnf, double load, const SystemParams& params);

// Highest layer whose forwarding latency leaves room for the chain's solo
// latencies. Binary search; feasibility is monotone in the layer.
int star_layer(const Request& request, const ServiceSpec& service,
               const Catalog& catalog, const Topology& topology,
               const SystemParams& params);

DelayPlan fair_allocation(const Request& request, const ServiceSpec& service,
                          int star, const Catalog& catalog,
                          const Topology& topology, const SystemParams& params);

// star_layer followed by fair_allocation.
DelayPlan plan_request(const Request& request, const Catalog& catalog,
                       const Topology& topology, const SystemParams& params);

}  // namespace reshare
