#include "reshare/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "reshare/error.hpp"

namespace reshare {

PackingEngine::PackingEngine(const Topology& topology, const Catalog& catalog,
                             const SystemParams& params)
    : state_(topology, catalog, params) {}

NodeId PackingEngine::select_node(const Request& request, int layer) const {
  const auto candidates = state_.topology().reachable(request.leaf, layer);
  if (candidates.empty()) {
    throw Error(Errc::infeasible_request,
                "no reachable node at layer " + std::to_string(layer));
  }
  NodeId best = candidates.front();
  for (NodeId node : candidates) {
    if (state_.node_load(node) < state_.node_load(best)) best = node;
  }
  return best;
}

bool PackingEngine::viable(const Vm& vm, const Job& job, double theta) const {
  const double spare = state_.params().mu_bar - theta * (vm.load + job.load);
  if (!(spare > 0.0)) return false;
  const double latency = 1.0 / spare;
  return latency <= job.delay_budget && latency <= vm.min_budget;
}

VmId PackingEngine::assign_job(const Job& job, NodeId node, RangeKey key) {
  const double theta = state_.catalog().vnf(job.vnf).theta;
  VmId best = 0;
  double best_load = -1.0;
  for (VmId id : state_.bucket(BucketKey{node, job.vnf, key})) {
    const Vm& vm = state_.vm(id);
    if (!viable(vm, job, theta)) continue;
    // Bucket ids ascend, so strict > keeps the lowest id on ties.
    if (vm.load > best_load) {
      best = id;
      best_load = vm.load;
    }
  }
  if (best == 0) best = state_.open_vm(node, job.vnf, key);
  state_.add_job(best, HostedJob{job.request, job.load, job.delay_budget});
  return best;
}

PlacementResult PackingEngine::place_request(const Request& request,
                                             const DelayPlan& plan,
                                             const RangeScheme& scheme,
                                             int level) {
  if (state_.has_record(request.id)) {
    throw Error(Errc::invalid_plan,
                "request " + std::to_string(request.id) + " already placed");
  }
  auto [it, inserted] = schemes_.try_emplace(level, scheme);
  if (!inserted && it->second.epsilon() != scheme.epsilon()) {
    it->second = scheme;
  }
  PlacementResult result;
  result.request = request.id;
  result.layer = plan.star_layer;
  result.node = select_node(request, plan.star_layer);

  RequestRecord record;
  record.id = request.id;
  record.service = request.service;
  record.star_layer = plan.star_layer;
  record.load = request.load;
  for (std::size_t k = 0; k < plan.vnfs.size(); ++k) {
    const Job job{request.id, plan.vnfs[k], plan.budgets[k], request.load};
    const RangeKey key{level, scheme.range_index(job.delay_budget)};
    const VmId vm = assign_job(job, result.node, key);
    result.vms.push_back(vm);
    record.jobs.push_back(PlacedJob{job.vnf, vm, job.delay_budget});
  }
  state_.add_record(std::move(record));
  return result;
}

double PackingEngine::remove_request(RequestId request) {
  RequestRecord record = state_.take_record(request);
  double delta = 0.0;
  for (const auto& placed : record.jobs) {
    delta += state_.remove_job(placed.vm, request);
  }
  return delta;
}

void PackingEngine::check_purity(const Vm& vm,
                                 std::vector<std::string>& out) const {
  auto it = schemes_.find(vm.key.level);
  if (it == schemes_.end()) {
    out.push_back("VM " + std::to_string(vm.id) + ": unknown epsilon level");
    return;
  }
  for (const auto& job : vm.jobs) {
    if (!it->second.contains(vm.key.index, job.budget)) {
      out.push_back("VM " + std::to_string(vm.id) + ": job of request " +
                    std::to_string(job.request) + " outside range " +
                    std::to_string(vm.key.index));
    }
  }
}

std::vector<std::string> PackingEngine::check_range_purity() const {
  std::vector<std::string> out;
  for (const auto& [id, vm] : state_.vms()) check_purity(vm, out);
  return out;
}

std::vector<std::string> PackingEngine::check_range_purity(
    std::span<const VmId> vms) const {
  std::vector<std::string> out;
  for (VmId id : vms) check_purity(state_.vm(id), out);
  return out;
}

void PackingEngine::check_bucket(const BucketKey& key,
                                 std::span<const VmId> ids,
                                 std::vector<std::string>& out) const {
  auto it = schemes_.find(key.key.level);
  if (it == schemes_.end()) return;
  const double theta = state_.catalog().vnf(key.vnf).theta;
  double load = 0.0;
  for (VmId id : ids) load += state_.vm(id).load;
  const double size = it->second.guaranteed_vm_load(key.key.index);
  const double bound = 2.0 * theta * load / size + 1.0;
  if (static_cast<double>(ids.size()) > bound * (1.0 + 1e-12)) {
    out.push_back("node " + std::to_string(key.node) + " vnf " +
                  std::to_string(key.vnf) + " range (" +
                  std::to_string(key.key.level) + "," +
                  std::to_string(key.key.index) + "): " +
                  std::to_string(ids.size()) + " VMs > bound " +
                  std::to_string(bound));
  }
}

std::vector<std::string> PackingEngine::check_vm_count_bound() const {
  std::vector<std::string> out;
  for (const auto& [key, ids] : state_.buckets()) check_bucket(key, ids, out);
  return out;
}

std::vector<std::string> PackingEngine::check_vm_count_bound(
    std::span<const VmId> vms) const {
  std::vector<BucketKey> keys;
  for (VmId id : vms) {
    const Vm& vm = state_.vm(id);
    keys.push_back(BucketKey{vm.node, vm.vnf, vm.key});
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  std::vector<std::string> out;
  for (const auto& key : keys) check_bucket(key, state_.bucket(key), out);
  return out;
}

}  // namespace reshare
