#pragma once

#include <optional>
#include <vector>

#include "reshare/model.hpp"

namespace reshare {

// Largest j with lambda_min * (1+eps)^(j+1) < mu_bar, or nullopt when not
// even j = 0 qualifies.
std::optional<int> scheme_size(double mu_bar, double lambda_min,
                               double epsilon);

struct RangeInterval {
  double lower = 0.0;
  double upper = 0.0;
  bool lower_closed = false;
};

// Geometric latency ranges L_0..L_J over per-job delay budgets, plus one
// overflow range J+1 = (D_J, inf) collecting budgets looser than the scheme.
class RangeScheme {
 public:
  // Relative guard applied at interval endpoints.
  static constexpr double kBoundaryGuard = 1e-12;

  RangeScheme(double epsilon, const SystemParams& params);

  double epsilon() const noexcept { return epsilon_; }
  double mu_bar() const noexcept { return mu_bar_; }
  double lambda_min() const noexcept { return lambda_min_; }
  int max_index() const noexcept { return max_index_; }
  int overflow_index() const noexcept { return max_index_ + 1; }
  int range_count() const noexcept { return max_index_ + 2; }

  // lambda_min * (1+eps)^k.
  double load_at(int k) const;

  RangeInterval range_bounds(int j) const;  // j in [0, J]
  bool contains(int j, double delay_budget) const;  // j in [0, J+1]
  int range_index(double delay_budget) const;
  bool above_scheme(double delay_budget) const;

  // Relaxed delay of a top job in range j; +inf for the overflow range.
  double top_delay(int j) const;

  // Load (theta-free) a full-speed VM can carry while meeting top_delay(j).
  double full_vm_load(int j) const;

  // Load a VM can always take on before any job in range j is at risk.
  double guaranteed_vm_load(int j) const;

 private:
  void check_index(int j, int last) const {
    if (j < 0 || j > last) index_error(j, last);
  }
  [[noreturn]] void index_error(int j, int last) const;

  double epsilon_;
  double mu_bar_;
  double lambda_min_;
  int max_index_;
  std::vector<double> loads_;  // load_at(0..J+1)
  std::vector<double> tops_;   // top_delay(0..J+1)
};

}  // namespace reshare
