#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <vector>

#include "reshare/allocation.hpp"
#include "reshare/ranges.hpp"

namespace reshare {

// Fractional shadow assignment over top jobs. Loads are aggregated per
// (layer, VNF, range); only the full VMs of each bucket are priced, which
// gives the lower-bound cost used both as OPT proxy and controller signal.
class ShadowLedger {
 public:
  struct Key {
    int layer = 0;
    VnfIndex vnf = 0;
    int range = 0;
    auto operator<=>(const Key&) const = default;
  };

  ShadowLedger(int level, RangeScheme scheme, const Topology& topology,
               const Catalog& catalog, const SystemParams& params);

  // Places every top job of the request at its star layer; returns the
  // updated full-VM cost.
  double add(const Request& request, const DelayPlan& plan);
  double remove(RequestId request);

  double full_cost() const;

  // Starts an empty ledger for `level`; returns the cost it held before.
  double reset(int level, RangeScheme scheme);

  int level() const noexcept { return level_; }
  const RangeScheme& scheme() const noexcept { return scheme_; }
  bool contains(RequestId request) const { return log_.contains(request); }
  int layer_of(RequestId request) const;

  double bucket_load(const Key& key) const;
  std::int64_t full_vms(const Key& key) const;
  // Per-bucket load a VM at full speed carries under the top-job delay.
  double capacity(VnfIndex vnf, int range) const;
  std::size_t bucket_count() const noexcept { return buckets_.size(); }

 private:
  // Loads in units of lambda_min * 2^-60, so bucket sums are exact and
  // independent of add/remove order.
  __extension__ typedef __int128 Units;

  struct Bucket {
    Units units = 0;
    std::size_t members = 0;
    double load = 0.0;
    std::int64_t full = 0;
  };
  struct Entry {
    int layer = 0;
    std::vector<Key> keys;
    Units units = 0;
  };

  Units to_units(double load) const;
  void refresh(const Key& key, Bucket& bucket);

  int level_;
  RangeScheme scheme_;
  const Topology* topology_;
  const Catalog* catalog_;
  SystemParams params_;
  std::map<Key, Bucket> buckets_;
  std::unordered_map<RequestId, Entry> log_;
  std::vector<std::int64_t> full_per_layer_;
};

}  // namespace reshare
