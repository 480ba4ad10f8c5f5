#include "reshare/placement.hpp"

#include <algorithm>
#include <cmath>

#include "reshare/error.hpp"

namespace reshare {

PlacementState::PlacementState(const Topology& topology,
                               const Catalog& catalog,
                               const SystemParams& params)
    : topology_(&topology),
      catalog_(&catalog),
      params_(params),
      node_load_(topology.node_count(), 0.0) {}

VmId PlacementState::open_vm(NodeId node, VnfIndex vnf, RangeKey key) {
  Vm vm;
  vm.id = next_id_++;
  vm.node = node;
  vm.layer = topology_->layer_of(node);
  vm.vnf = vnf;
  vm.key = key;
  const VmId id = vm.id;
  vms_.emplace(id, std::move(vm));
  buckets_[BucketKey{node, vnf, key}].push_back(id);
  touched_.push_back(id);
  return id;
}

Vm& PlacementState::mutable_vm(VmId id) {
  auto it = vms_.find(id);
  if (it == vms_.end()) {
    throw Error(Errc::invariant_breach, "unknown VM " + std::to_string(id));
  }
  return it->second;
}

const Vm& PlacementState::vm(VmId id) const {
  auto it = vms_.find(id);
  if (it == vms_.end()) {
    throw Error(Errc::invariant_breach, "unknown VM " + std::to_string(id));
  }
  return it->second;
}

double PlacementState::vm_cost(const Vm& vm) const {
  const auto& layer = topology_->layer(vm.layer);
  return layer.kappa_f + layer.kappa_p * vm.speed;
}

void PlacementState::refresh_speed(Vm& vm) {
  const double theta = catalog_->vnf(vm.vnf).theta;
  vm.speed = theta * vm.load + 1.0 / vm.min_budget;
}

void PlacementState::tally(const Vm& vm, double sign) {
  const double theta = catalog_->vnf(vm.vnf).theta;
  pod_total_ += sign * ((vm.speed - theta * vm.load) - 1.0 / vm.max_budget);
  speed_total_ += sign * vm.speed;
}

double PlacementState::pod_fraction() const {
  if (!(speed_total_ > 0.0)) return 0.0;
  return std::max(0.0, pod_total_ / speed_total_);
}

void PlacementState::add_job(VmId id, const HostedJob& job) {
  Vm& vm = mutable_vm(id);
  const double before = vm.empty() ? 0.0 : vm_cost(vm);
  if (!vm.empty()) tally(vm, -1.0);
  vm.min_budget = vm.empty() ? job.budget : std::min(vm.min_budget, job.budget);
  vm.max_budget = std::max(vm.max_budget, job.budget);
  vm.jobs.push_back(job);
  vm.load += job.load;
  refresh_speed(vm);
  tally(vm, 1.0);
  cost_ += vm_cost(vm) - before;
  node_load_[vm.node] += catalog_->vnf(vm.vnf).theta * job.load;
  touched_.push_back(id);
}

double PlacementState::remove_job(VmId id, RequestId request) {
  Vm& vm = mutable_vm(id);
  auto it = std::find_if(vm.jobs.begin(), vm.jobs.end(),
                         [&](const HostedJob& j) { return j.request == request; });
  if (it == vm.jobs.end()) {
    throw Error(Errc::unknown_request, "request " + std::to_string(request) +
                                           " not hosted on VM " +
                                           std::to_string(id));
  }
  const double before = vm_cost(vm);
  tally(vm, -1.0);
  const double load = it->load;
  vm.jobs.erase(it);
  node_load_[vm.node] -= catalog_->vnf(vm.vnf).theta * load;
  if (vm.jobs.empty()) {
    auto& ids = buckets_[BucketKey{vm.node, vm.vnf, vm.key}];
    ids.erase(std::find(ids.begin(), ids.end(), id));
    if (ids.empty()) buckets_.erase(BucketKey{vm.node, vm.vnf, vm.key});
    vms_.erase(id);
    cost_ -= before;
    if (vms_.empty()) pod_total_ = speed_total_ = 0.0;
    return -before;
  }
  // Recompute from the remaining jobs rather than subtracting.
  vm.load = 0.0;
  vm.min_budget = vm.jobs.front().budget;
  vm.max_budget = 0.0;
  for (const auto& j : vm.jobs) {
    vm.load += j.load;
    vm.min_budget = std::min(vm.min_budget, j.budget);
    vm.max_budget = std::max(vm.max_budget, j.budget);
  }
  refresh_speed(vm);
  tally(vm, 1.0);
  const double delta = vm_cost(vm) - before;
  cost_ += delta;
  touched_.push_back(id);
  return delta;
}

std::span<const VmId> PlacementState::bucket(const BucketKey& key) const {
  auto it = buckets_.find(key);
  if (it == buckets_.end()) return {};
  return it->second;
}

void PlacementState::add_record(RequestRecord record) {
  system_load_ += record.load;
  const RequestId id = record.id;
  records_.emplace(id, std::move(record));
}

const RequestRecord& PlacementState::record(RequestId id) const {
  auto it = records_.find(id);
  if (it == records_.end()) {
    throw Error(Errc::unknown_request,
                "request " + std::to_string(id) + " is not active");
  }
  return it->second;
}

RequestRecord PlacementState::take_record(RequestId id) {
  auto it = records_.find(id);
  if (it == records_.end()) {
    throw Error(Errc::unknown_request,
                "request " + std::to_string(id) + " is not active");
  }
  RequestRecord out = std::move(it->second);
  records_.erase(it);
  system_load_ -= out.load;
  if (records_.empty()) system_load_ = 0.0;
  return out;
}

double PlacementState::recompute_cost() const {
  double total = 0.0;
  for (const auto& [id, vm] : vms_) total += vm_cost(vm);
  return total;
}

double PlacementState::total_speed() const {
  double total = 0.0;
  for (const auto& [id, vm] : vms_) total += vm.speed;
  return total;
}

double PlacementState::request_latency(const RequestRecord& record) const {
  double forwarding = 0.0;
  double processing = 0.0;
  for (const auto& placed : record.jobs) {
    const Vm& host = vm(placed.vm);
    forwarding = std::max(forwarding, topology_->layer(host.layer).d);
    const double theta = catalog_->vnf(host.vnf).theta;
    processing += 1.0 / (host.speed - theta * host.load);
  }
  return forwarding + processing;
}

std::vector<VmId> PlacementState::take_touched() const {
  std::vector<VmId> out;
  out.swap(touched_);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  std::erase_if(out, [&](VmId id) { return !vms_.contains(id); });
  return out;
}

namespace {

bool exceeds(double value, double limit, double rel_tol) {
  return value > limit + rel_tol * std::max(std::abs(limit), 1e-300);
}

void check_vm(const PlacementState& state, VmId id, const Vm& vm,
              double rel_tol, std::vector<std::string>& out) {
  const auto tag = [id] { return "VM " + std::to_string(id) + ": "; };
  if (vm.jobs.empty()) {
    out.push_back(tag() + "active VM hosts no jobs");
    return;
  }
  const double theta = state.catalog().vnf(vm.vnf).theta;
  double load = 0.0;
  double min_budget = vm.jobs.front().budget;
  double max_budget = 0.0;
  for (const auto& job : vm.jobs) {
    load += job.load;
    min_budget = std::min(min_budget, job.budget);
    max_budget = std::max(max_budget, job.budget);
  }
  if (min_budget != vm.min_budget || max_budget != vm.max_budget) {
    out.push_back(tag() + "stale budget bounds");
  }
  const double exact = theta * load + 1.0 / min_budget;
  if (std::abs(vm.speed - exact) > rel_tol * exact) {
    out.push_back(tag() + "speed " + std::to_string(vm.speed) +
                  " differs from exact " + std::to_string(exact));
  }
  if (exceeds(vm.speed, state.params().mu_bar, rel_tol)) {
    out.push_back(tag() + "speed exceeds mu_bar");
  }
  if (!(theta * vm.load < vm.speed)) {
    out.push_back(tag() + "unstable queue");
  }
  const double latency = 1.0 / (vm.speed - theta * vm.load);
  for (const auto& job : vm.jobs) {
    if (exceeds(latency, job.budget, rel_tol)) {
      out.push_back(tag() + "job of request " + std::to_string(job.request) +
                    " misses its budget");
    }
  }
}

void check_request(const PlacementState& state, const RequestRecord& record,
                   double rel_tol, std::vector<std::string>& out) {
  const double target = state.catalog().service(record.service).target_delay;
  const double latency = state.request_latency(record);
  if (exceeds(latency, target, rel_tol)) {
    out.push_back("request " + std::to_string(record.id) + ": latency " +
                  std::to_string(latency) + " ms exceeds target " +
                  std::to_string(target) + " ms");
  }
}

}  // namespace

std::vector<std::string> check_vm_invariants(const PlacementState& state,
                                             double rel_tol) {
  std::vector<std::string> out;
  for (const auto& [id, vm] : state.vms()) check_vm(state, id, vm, rel_tol, out);
  return out;
}

std::vector<std::string> check_vm_invariants(const PlacementState& state,
                                             std::span<const VmId> vms,
                                             double rel_tol) {
  std::vector<std::string> out;
  for (VmId id : vms) check_vm(state, id, state.vm(id), rel_tol, out);
  return out;
}

std::vector<std::string> check_feasibility(const PlacementState& state,
                                           std::span<const VmId> vms,
                                           double rel_tol) {
  std::vector<RequestId> ids;
  for (VmId id : vms) {
    for (const auto& job : state.vm(id).jobs) ids.push_back(job.request);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<std::string> out;
  for (RequestId r : ids) {
    if (state.has_record(r)) check_request(state, state.record(r), rel_tol, out);
  }
  return out;
}

std::vector<std::string> check_feasibility(const PlacementState& state,
                                           double rel_tol) {
  std::vector<std::string> out;
  for (const auto& [id, record] : state.records()) {
    check_request(state, record, rel_tol, out);
  }
  return out;
}

}  // namespace reshare
