#include "reshare/allocation.hpp"

#include <algorithm>
#include <numeric>

#include "reshare/error.hpp"

namespace reshare {

double DelayPlan::budget_of(VnfIndex v) const {
  auto it = std::find(vnfs.begin(), vnfs.end(), v);
  if (it == vnfs.end()) {
    throw Error(Errc::invalid_plan, "VNF not in request chain");
  }
  return budgets[static_cast<std::size_t>(it - vnfs.begin())];
}

double solo_latency(const VnfSpec& vnf, double load,
                    const SystemParams& params) {
  const double spare = params.mu_bar - vnf.theta * load;
  if (!(spare > 0.0)) {
    throw Error(Errc::infeasible_job,
                "VNF '" + vnf.vnf_id + "' cannot serve load " +
                    std::to_string(load) + " even at full speed");
  }
  return 1.0 / spare;
}

namespace {

double chain_solo_sum(const Request& request, const ServiceSpec& service,
                      const Catalog& catalog, const SystemParams& params) {
  double sum = 0.0;
  for (VnfIndex v : service.vnfs) {
    sum += solo_latency(catalog.vnf(v), request.load, params);
  }
  return sum;
}

}  // namespace

int star_layer(const Request& request, const ServiceSpec& service,
               const Catalog& catalog, const Topology& topology,
               const SystemParams& params) {
  const double processing = chain_solo_sum(request, service, catalog, params);
  auto feasible = [&](int l) {
    return processing <= service.target_delay - topology.layer(l).d;
  };
  if (topology.layer_count() == 0 || !feasible(0)) {
    throw Error(Errc::infeasible_request,
                "request " + std::to_string(request.id) + " for service '" +
                    service.service_id +
                    "' is infeasible even at the leaf layer");
  }
  int lo = 0;  // feasible
  int hi = topology.layer_count();  // first known-infeasible (exclusive)
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    if (feasible(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

DelayPlan fair_allocation(const Request& request, const ServiceSpec& service,
                          int star, const Catalog& catalog,
                          const Topology& topology,
                          const SystemParams& params) {
  DelayPlan plan;
  plan.request = request.id;
  plan.star_layer = star;
  plan.vnfs = service.vnfs;
  plan.solo_latency.reserve(service.vnfs.size());
  for (VnfIndex v : service.vnfs) {
    plan.solo_latency.push_back(
        solo_latency(catalog.vnf(v), request.load, params));
  }
  const double total = std::accumulate(plan.solo_latency.begin(),
                                       plan.solo_latency.end(), 0.0);
  const double budget = service.target_delay - topology.layer(star).d;
  plan.budgets.reserve(service.vnfs.size());
  for (double m : plan.solo_latency) plan.budgets.push_back(m / total * budget);
  return plan;
}

DelayPlan plan_request(const Request& request, const Catalog& catalog,
                       const Topology& topology, const SystemParams& params) {
  const auto& service = catalog.service(request.service);
  const int star = star_layer(request, service, catalog, topology, params);
  return fair_allocation(request, service, star, catalog, topology, params);
}

}  // namespace reshare
