#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "reshare/model.hpp"

namespace reshare {

// Z = [(2n+2)(1+eps*) + 1] ln(mu_bar/lambda_min) |V| sum_i kappa^l(i), with
// n the widest layer and the sum over every node of the topology.
double compute_z(const SystemParams& params, const Topology& topology,
                 std::size_t vnf_count, double epsilon_star);

enum class EpsilonDecision { keep, decrease_eps, increase_eps };

const char* decision_name(EpsilonDecision d) noexcept;

struct Thresholds {
  double c = 0.0;
  double s = 0.0;
};

// Load-driven epsilon ladder eps_p = eps* / 2^(p-1). Levels are 1-based.
class EpsilonController {
 public:
  static constexpr int kDefaultMaxLevel = 12;

  EpsilonController(double epsilon_star, double z,
                    int max_level = kDefaultMaxLevel);

  int level() const noexcept { return level_; }
  int interval() const noexcept { return interval_; }
  double epsilon() const noexcept { return epsilon_at(level_); }
  double epsilon_at(int level) const noexcept;
  double epsilon_star() const noexcept { return epsilon_star_; }
  double z() const noexcept { return z_; }
  int max_level() const noexcept { return max_level_; }

  Thresholds thresholds() const;
  double load_threshold(int level) const;   // T_p
  double archived_cost(int level) const;    // Y~_p, 0 if never archived
  double archived_sum() const;              // sum over p < level

  // Call after the shadow ledger reflects the event. `interval_cost` is the
  // current interval's shadow full-VM cost, `system_load` the sum of active
  // request loads.
  EpsilonDecision on_event(double interval_cost, double system_load);

 private:
  double epsilon_star_;
  double z_;
  int max_level_;
  int level_ = 1;
  int interval_ = 1;
  std::vector<double> load_thresholds_;  // index = level
  std::vector<double> archived_;         // index = level
};

}  // namespace reshare
