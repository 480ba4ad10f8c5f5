#include "reshare/ranges.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "reshare/error.hpp"

namespace reshare {

std::optional<int> scheme_size(double mu_bar, double lambda_min,
                               double epsilon) {
  if (!(epsilon > 0.0) || !(lambda_min > 0.0) || !(mu_bar > lambda_min)) {
    return std::nullopt;
  }
  auto fits = [&](int j) {
    return lambda_min * std::pow(1.0 + epsilon, j + 1) < mu_bar;
  };
  if (!fits(0)) return std::nullopt;
  int j = static_cast<int>(
      std::floor(std::log(mu_bar / lambda_min) / std::log1p(epsilon))) - 1;
  if (j < 0) j = 0;
  while (j > 0 && !fits(j)) --j;
  while (fits(j + 1)) ++j;
  return j;
}

RangeScheme::RangeScheme(double epsilon, const SystemParams& params)
    : epsilon_(epsilon),
      mu_bar_(params.mu_bar),
      lambda_min_(params.lambda_min),
      max_index_(0) {
  auto j = scheme_size(mu_bar_, lambda_min_, epsilon_);
  if (!j) {
    throw Error(Errc::no_valid_range,
                "no latency range fits below mu_bar for epsilon " +
                    std::to_string(epsilon));
  }
  max_index_ = *j;
  for (int k = 0; k <= max_index_ + 1; ++k) {
    loads_.push_back(lambda_min_ * std::pow(1.0 + epsilon_, k));
  }
  for (int k = 0; k <= max_index_; ++k) {
    tops_.push_back(1.0 / (mu_bar_ - loads_[k + 1]));
  }
  tops_.push_back(std::numeric_limits<double>::infinity());
}

double RangeScheme::load_at(int k) const {
  if (k >= 0 && k < static_cast<int>(loads_.size())) return loads_[k];
  return lambda_min_ * std::pow(1.0 + epsilon_, k);
}

void RangeScheme::index_error(int j, int last) const {
  throw Error(Errc::index_out_of_scheme,
              "range index " + std::to_string(j) + " outside [0, " +
                  std::to_string(last) + "]");
}

RangeInterval RangeScheme::range_bounds(int j) const {
  check_index(j, max_index_);
  return {1.0 / (mu_bar_ - load_at(j)), 1.0 / (mu_bar_ - load_at(j + 1)),
          j == 0};
}

double RangeScheme::top_delay(int j) const {
  check_index(j, overflow_index());
  return tops_[j];
}

bool RangeScheme::contains(int j, double d) const {
  check_index(j, overflow_index());
  constexpr double g = kBoundaryGuard;
  if (j == 0) {
    const auto b = range_bounds(0);
    return d >= b.lower * (1.0 - g) && d <= b.upper * (1.0 + g);
  }
  const double below = top_delay(j - 1) * (1.0 + g);
  if (j == overflow_index()) return d > below;
  return d > below && d <= top_delay(j) * (1.0 + g);
}

bool RangeScheme::above_scheme(double d) const {
  return d > top_delay(max_index_) * (1.0 + kBoundaryGuard);
}

int RangeScheme::range_index(double d) const {
  const double floor_delay = 1.0 / (mu_bar_ - lambda_min_);
  if (!(d >= floor_delay * (1.0 - kBoundaryGuard))) {
    throw Error(Errc::budget_below_minimum,
                "delay budget " + std::to_string(d) +
                    " is below the smallest range");
  }
  if (above_scheme(d)) return overflow_index();
  // Closed form first, then settle on the exact computed endpoints.
  int j = 0;
  const double spare = mu_bar_ - 1.0 / d;
  if (spare > lambda_min_) {
    j = static_cast<int>(
        std::floor(std::log(spare / lambda_min_) / std::log1p(epsilon_)));
  }
  if (j < 0) j = 0;
  if (j > max_index_) j = max_index_;
  while (j > 0 && !(d > top_delay(j - 1) * (1.0 + kBoundaryGuard))) --j;
  while (j < max_index_ && d > top_delay(j) * (1.0 + kBoundaryGuard)) ++j;
  return j;
}

double RangeScheme::full_vm_load(int j) const {
  check_index(j, overflow_index());
  if (j == overflow_index()) return mu_bar_;
  return load_at(j + 1);
}

double RangeScheme::guaranteed_vm_load(int j) const {
  check_index(j, overflow_index());
  return load_at(j);
}

}  // namespace reshare
