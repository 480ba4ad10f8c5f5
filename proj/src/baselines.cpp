#include "reshare/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include "reshare/error.hpp"

namespace reshare {

std::size_t OracleInstance::job_count() const {
  std::size_t n = 0;
  for (const auto& r : requests) n += r.jobs.size();
  return n;
}

OracleInstance make_oracle_instance(const std::vector<Request>& requests,
                                    const std::vector<DelayPlan>& plans) {
  if (requests.size() != plans.size()) {
    throw Error(Errc::invalid_plan, "one delay plan per request expected");
  }
  OracleInstance instance;
  for (std::size_t i = 0; i < requests.size(); ++i) {
    OracleRequest r;
    r.id = requests[i].id;
    r.star_layer = plans[i].star_layer;
    for (std::size_t k = 0; k < plans[i].vnfs.size(); ++k) {
      r.jobs.push_back(Job{requests[i].id, plans[i].vnfs[k],
                           plans[i].budgets[k], requests[i].load});
    }
    instance.requests.push_back(std::move(r));
  }
  return instance;
}

namespace {

struct FlatJob {
  Job job;
  int star = 0;
  std::size_t unit = 0;  // index of the layer-choice unit it follows
};

struct GroupBest {
  double cost = std::numeric_limits<double>::infinity();
  std::vector<std::vector<std::size_t>> blocks;
};

class Search {
 public:
  Search(std::vector<FlatJob> jobs, std::size_t units,
         const Topology& topology, const Catalog& catalog,
         const SystemParams& params)
      : jobs_(std::move(jobs)),
        units_(units),
        topology_(topology),
        catalog_(catalog),
        params_(params) {}

  OracleResult run() {
    std::vector<int> unit_star(units_, std::numeric_limits<int>::max());
    for (const auto& fj : jobs_) {
      unit_star[fj.unit] = std::min(unit_star[fj.unit], fj.star);
    }
    std::vector<int> choice(units_, 0);
    OracleResult result;
    result.cost = std::numeric_limits<double>::infinity();
    while (true) {
      ++result.layer_assignments;
      evaluate(choice, result);
      std::size_t u = 0;
      while (u < units_ && choice[u] == unit_star[u]) choice[u++] = 0;
      if (u == units_) break;
      ++choice[u];
    }
    result.partitions_enumerated = partitions_;
    if (!std::isfinite(result.cost)) {
      throw Error(Errc::infeasible_instance,
                  "no feasible assignment for the oracle instance");
    }
    return result;
  }

 private:
  void evaluate(const std::vector<int>& choice, OracleResult& result) {
    std::map<std::pair<int, VnfIndex>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < jobs_.size(); ++i) {
      groups[{choice[jobs_[i].unit], jobs_[i].job.vnf}].push_back(i);
    }
    double total = 0.0;
    std::vector<std::pair<std::pair<int, VnfIndex>, const GroupBest*>> parts;
    for (const auto& [key, members] : groups) {
      const GroupBest& best = solve(key.first, key.second, members);
      total += best.cost;
      if (!std::isfinite(total)) return;
      parts.emplace_back(key, &best);
    }
    if (!(total < result.cost)) return;
    result.cost = total;
    result.vms.clear();
    for (const auto& [key, best] : parts) {
      for (const auto& block : best->blocks) {
        result.vms.push_back(describe(key.first, key.second, block));
      }
    }
  }

  OracleVm describe(int layer, VnfIndex vnf,
                    const std::vector<std::size_t>& block) const {
    OracleVm vm;
    vm.layer = layer;
    vm.vnf = vnf;
    vm.jobs = block;
    vm.min_budget = std::numeric_limits<double>::infinity();
    for (std::size_t i : block) {
      vm.load += jobs_[i].job.load;
      vm.min_budget = std::min(vm.min_budget, jobs_[i].job.delay_budget);
      vm.max_budget = std::max(vm.max_budget, jobs_[i].job.delay_budget);
    }
    vm.speed = catalog_.vnf(vnf).theta * vm.load + 1.0 / vm.min_budget;
    return vm;
  }

  // Cost of one VM hosting `block`, or +inf when it would exceed mu_bar.
  double block_cost(int layer, VnfIndex vnf,
                    const std::vector<std::size_t>& block) const {
    const OracleVm vm = describe(layer, vnf, block);
    if (vm.speed > params_.mu_bar) {
      return std::numeric_limits<double>::infinity();
    }
    const auto& spec = topology_.layer(layer);
    return spec.kappa_f + spec.kappa_p * vm.speed;
  }

  const GroupBest& solve(int layer, VnfIndex vnf,
                         const std::vector<std::size_t>& members) {
    std::uint64_t mask = 0;
    for (std::size_t i : members) mask |= std::uint64_t{1} << i;
    const auto key = std::make_tuple(layer, vnf, mask);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    // Restricted growth strings enumerate each set partition once.
    GroupBest best;
    const std::size_t n = members.size();
    std::vector<std::size_t> label(n, 0);
    std::vector<std::size_t> high(n, 0);
    while (true) {
      ++partitions_;
      std::size_t blocks = 0;
      for (std::size_t i = 0; i < n; ++i) blocks = std::max(blocks, label[i] + 1);
      std::vector<std::vector<std::size_t>> split(blocks);
      for (std::size_t i = 0; i < n; ++i) split[label[i]].push_back(members[i]);
      double cost = 0.0;
      for (const auto& block : split) {
        cost += block_cost(layer, vnf, block);
        if (!std::isfinite(cost)) break;
      }
      if (cost < best.cost) {
        best.cost = cost;
        best.blocks = std::move(split);
      }
      // Next string: bump the rightmost label that may still grow,
      // label[i] <= 1 + max(label[0..i-1]).
      bool advanced = false;
      for (std::size_t i = n; i-- > 1;) {
        if (label[i] <= high[i - 1]) {
          ++label[i];
          high[i] = std::max(high[i - 1], label[i]);
          for (std::size_t k = i + 1; k < n; ++k) {
            label[k] = 0;
            high[k] = high[i];
          }
          advanced = true;
          break;
        }
      }
      if (!advanced) break;
    }
    return memo_.emplace(key, std::move(best)).first->second;
  }

  std::vector<FlatJob> jobs_;
  std::size_t units_;
  const Topology& topology_;
  const Catalog& catalog_;
  const SystemParams& params_;
  std::map<std::tuple<int, VnfIndex, std::uint64_t>, GroupBest> memo_;
  std::uint64_t partitions_ = 0;
};

}  // namespace

OracleResult oracle_optimal_cost(const OracleInstance& instance,
                                 const Topology& topology,
                                 const Catalog& catalog,
                                 const SystemParams& params) {
  const std::size_t n = instance.job_count();
  if (n > instance.max_jobs || n > 20) {
    throw Error(Errc::instance_too_large,
                std::to_string(n) + " jobs exceed the oracle limit of " +
                    std::to_string(std::min<std::size_t>(instance.max_jobs, 20)));
  }
  if (n == 0) return OracleResult{0.0, {}, 1, 0};

  std::vector<FlatJob> jobs;
  std::size_t units = 0;
  for (const auto& r : instance.requests) {
    if (r.star_layer < 0 || r.star_layer > topology.top_layer()) {
      throw Error(Errc::invalid_plan, "star layer outside the topology");
    }
    for (const auto& job : r.jobs) {
      FlatJob fj;
      fj.job = job;
      fj.star = r.star_layer;
      fj.unit = instance.same_layer_per_request ? units : units + jobs.size();
      jobs.push_back(fj);
    }
    if (instance.same_layer_per_request && !r.jobs.empty()) ++units;
  }
  if (!instance.same_layer_per_request) {
    for (std::size_t i = 0; i < jobs.size(); ++i) jobs[i].unit = i;
    units = jobs.size();
  }
  return Search(std::move(jobs), units, topology, catalog, params).run();
}

// ---------------------------------------------------------------------------

RelaxSotaPlacer::RelaxSotaPlacer(const Topology& topology,
                                 const Catalog& catalog,
                                 const SystemParams& params)
    : state_(topology, catalog, params) {}

NodeId RelaxSotaPlacer::least_loaded(const Request& request, int layer) const {
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

PlacementResult RelaxSotaPlacer::place_request(const Request& request,
                                               const DelayPlan& plan) {
  if (state_.has_record(request.id)) {
    throw Error(Errc::invalid_plan,
                "request " + std::to_string(request.id) + " already placed");
  }
  const auto& topology = state_.topology();
  const double mu_bar = state_.params().mu_bar;

  PlacementResult result;
  result.request = request.id;
  result.layer = plan.star_layer;
  result.node = least_loaded(request, plan.star_layer);

  RequestRecord record;
  record.id = request.id;
  record.service = request.service;
  record.star_layer = plan.star_layer;
  record.load = request.load;

  for (std::size_t k = 0; k < plan.vnfs.size(); ++k) {
    const Job job{request.id, plan.vnfs[k], plan.budgets[k], request.load};
    const double theta = state_.catalog().vnf(job.vnf).theta;

    VmId best_vm = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int layer = 0; layer <= plan.star_layer; ++layer) {
      const auto& spec = topology.layer(layer);
      for (NodeId node : topology.reachable(request.leaf, layer)) {
        for (VmId id : state_.bucket(BucketKey{node, job.vnf, kUnranged})) {
          const Vm& vm = state_.vm(id);
          const double min_budget = std::min(vm.min_budget, job.delay_budget);
          const double speed = theta * (vm.load + job.load) + 1.0 / min_budget;
          if (speed > mu_bar) continue;
          const double marginal = spec.kappa_p * (speed - vm.speed);
          if (marginal < best_cost ||
              (marginal == best_cost && id < best_vm)) {
            best_cost = marginal;
            best_vm = id;
          }
        }
      }
    }
    int fresh_layer = -1;
    for (int layer = 0; layer <= plan.star_layer; ++layer) {
      const auto& spec = topology.layer(layer);
      const double marginal =
          spec.kappa_f +
          spec.kappa_p * (theta * job.load + 1.0 / job.delay_budget);
      // Existing VMs win ties.
      if (marginal < best_cost) {
        best_cost = marginal;
        best_vm = 0;
        fresh_layer = layer;
      }
    }
    if (best_vm == 0) {
      if (fresh_layer < 0) {
        throw Error(Errc::infeasible_job, "no feasible VM for job");
      }
      best_vm = state_.open_vm(least_loaded(request, fresh_layer), job.vnf,
                               kUnranged);
    }
    state_.add_job(best_vm, HostedJob{job.request, job.load, job.delay_budget});
    result.vms.push_back(best_vm);
    record.jobs.push_back(PlacedJob{job.vnf, best_vm, job.delay_budget});
  }

  // Every job sits at or below the star layer, so forwarding never exceeds
  // d(star) and the budgets still sum within the target.
  const double latency = state_.request_latency(record);
  const double target = state_.catalog().service(request.service).target_delay;
  state_.add_record(std::move(record));
  if (latency > target * (1.0 + 1e-9)) {
    remove_request(request.id);
    throw Error(Errc::infeasible_request,
                "request " + std::to_string(request.id) +
                    " misses its target after placement");
  }
  return result;
}

double RelaxSotaPlacer::remove_request(RequestId request) {
  RequestRecord record = state_.take_record(request);
  double delta = 0.0;
  for (const auto& placed : record.jobs) {
    delta += state_.remove_job(placed.vm, request);
  }
  return delta;
}

}  // namespace reshare
