#include "reshare/adaptive.hpp"

#include <algorithm>
#include <cmath>

#include "reshare/error.hpp"

namespace reshare {

double compute_z(const SystemParams& params, const Topology& topology,
                 std::size_t vnf_count, double epsilon_star) {
  const double n = static_cast<double>(topology.max_layer_width());
  double kappa_sum = 0.0;
  for (const auto& layer : topology.layers()) {
    kappa_sum += static_cast<double>(layer.node_ids.size()) *
                 node_cost_full(layer, params);
  }
  return ((2.0 * n + 2.0) * (1.0 + epsilon_star) + 1.0) *
         std::log(params.mu_bar / params.lambda_min) *
         static_cast<double>(vnf_count) * kappa_sum;
}

const char* decision_name(EpsilonDecision d) noexcept {
  switch (d) {
    case EpsilonDecision::keep: return "keep";
    case EpsilonDecision::decrease_eps: return "decrease";
    case EpsilonDecision::increase_eps: return "increase";
  }
  return "keep";
}

EpsilonController::EpsilonController(double epsilon_star, double z,
                                     int max_level)
    : epsilon_star_(epsilon_star),
      z_(z),
      max_level_(std::max(1, max_level)),
      load_thresholds_(static_cast<std::size_t>(max_level_) + 2, 0.0),
      archived_(static_cast<std::size_t>(max_level_) + 2, 0.0) {
  if (!(epsilon_star > 0.0)) {
    throw Error(Errc::invalid_scenario, "epsilon_star must be positive");
  }
}

double EpsilonController::epsilon_at(int level) const noexcept {
  return std::ldexp(epsilon_star_, -(level - 1));
}

Thresholds EpsilonController::thresholds() const {
  const double eps = epsilon();
  Thresholds t;
  t.c = z_ / (eps * std::log1p(eps));
  double sum = 0.0;
  for (int p = 1; p < level_; ++p) {
    sum += (2.0 + 3.0 * epsilon_at(p)) * archived_[static_cast<std::size_t>(p)];
  }
  t.s = sum / eps;
  return t;
}

double EpsilonController::load_threshold(int level) const {
  return load_thresholds_.at(static_cast<std::size_t>(level));
}

double EpsilonController::archived_cost(int level) const {
  return archived_.at(static_cast<std::size_t>(level));
}

double EpsilonController::archived_sum() const {
  double sum = 0.0;
  for (int p = 1; p < level_; ++p) sum += archived_[static_cast<std::size_t>(p)];
  return sum;
}

EpsilonDecision EpsilonController::on_event(double interval_cost,
                                            double system_load) {
  const auto t = thresholds();
  if (level_ < max_level_ && interval_cost >= std::max(t.c, t.s)) {
    load_thresholds_[static_cast<std::size_t>(level_ + 1)] = system_load;
    archived_[static_cast<std::size_t>(level_)] = interval_cost;
    ++level_;
    ++interval_;
    return EpsilonDecision::decrease_eps;
  }
  if (system_load < load_thresholds_[static_cast<std::size_t>(level_)]) {
    // T_1 = 0, so this branch never fires at level 1.
    archived_[static_cast<std::size_t>(level_)] = interval_cost;
    --level_;
    ++interval_;
    return EpsilonDecision::increase_eps;
  }
  return EpsilonDecision::keep;
}

}  // namespace reshare
