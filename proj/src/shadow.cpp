#include "reshare/shadow.hpp"

#include <cmath>

#include "reshare/error.hpp"

namespace reshare {

namespace {
constexpr int kUnitBits = 60;
}  // namespace

ShadowLedger::ShadowLedger(int level, RangeScheme scheme,
                           const Topology& topology, const Catalog& catalog,
                           const SystemParams& params)
    : level_(level),
      scheme_(scheme),
      topology_(&topology),
      catalog_(&catalog),
      params_(params),
      full_per_layer_(static_cast<std::size_t>(topology.layer_count()), 0) {}

double ShadowLedger::capacity(VnfIndex vnf, int range) const {
  // theta_v * cap = mu_bar - 1 / D_j, so a full VM exactly meets D_j.
  return scheme_.full_vm_load(range) / catalog_->vnf(vnf).theta;
}

ShadowLedger::Units ShadowLedger::to_units(double load) const {
  return static_cast<Units>(std::ldexp(load / params_.lambda_min, kUnitBits));
}

void ShadowLedger::refresh(const Key& key, Bucket& bucket) {
  const double load =
      params_.lambda_min *
      std::ldexp(static_cast<double>(bucket.units), -kUnitBits);
  bucket.load = load;
  const auto full =
      static_cast<std::int64_t>(std::floor(load / capacity(key.vnf, key.range)));
  full_per_layer_[static_cast<std::size_t>(key.layer)] += full - bucket.full;
  bucket.full = full;
}

double ShadowLedger::add(const Request& request, const DelayPlan& plan) {
  if (log_.contains(request.id)) {
    throw Error(Errc::invalid_plan, "request " + std::to_string(request.id) +
                                        " already in the shadow ledger");
  }
  Entry entry;
  entry.layer = plan.star_layer;
  entry.units = to_units(request.load);
  for (std::size_t k = 0; k < plan.vnfs.size(); ++k) {
    const Key key{plan.star_layer, plan.vnfs[k],
                  scheme_.range_index(plan.budgets[k])};
    Bucket& bucket = buckets_[key];
    bucket.units += entry.units;
    ++bucket.members;
    refresh(key, bucket);
    entry.keys.push_back(key);
  }
  log_.emplace(request.id, std::move(entry));
  return full_cost();
}

double ShadowLedger::remove(RequestId request) {
  auto it = log_.find(request);
  if (it == log_.end()) {
    throw Error(Errc::unknown_request, "request " + std::to_string(request) +
                                           " not in the shadow ledger");
  }
  for (const Key& key : it->second.keys) {
    auto bit = buckets_.find(key);
    Bucket& bucket = bit->second;
    bucket.units -= it->second.units;
    refresh(key, bucket);
    if (--bucket.members == 0) buckets_.erase(bit);
  }
  log_.erase(it);
  return full_cost();
}

double ShadowLedger::full_cost() const {
  double total = 0.0;
  for (std::size_t l = 0; l < full_per_layer_.size(); ++l) {
    total += static_cast<double>(full_per_layer_[l]) *
             node_cost_full(topology_->layer(static_cast<int>(l)), params_);
  }
  return total;
}

double ShadowLedger::reset(int level, RangeScheme scheme) {
  const double archived = full_cost();
  level_ = level;
  scheme_ = scheme;
  buckets_.clear();
  log_.clear();
  std::fill(full_per_layer_.begin(), full_per_layer_.end(), 0);
  return archived;
}

int ShadowLedger::layer_of(RequestId request) const {
  auto it = log_.find(request);
  if (it == log_.end()) {
    throw Error(Errc::unknown_request, "request " + std::to_string(request) +
                                           " not in the shadow ledger");
  }
  return it->second.layer;
}

double ShadowLedger::bucket_load(const Key& key) const {
  auto it = buckets_.find(key);
  return it == buckets_.end() ? 0.0 : it->second.load;
}

std::int64_t ShadowLedger::full_vms(const Key& key) const {
  auto it = buckets_.find(key);
  return it == buckets_.end() ? 0 : it->second.full;
}

}  // namespace reshare
