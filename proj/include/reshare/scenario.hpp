#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "reshare/error.hpp"
#include "reshare/model.hpp"
#include "reshare/workload.hpp"

namespace reshare {

struct ControllerConfig {
  double epsilon_star = 1.0;
  // Multiplies Z; 1 keeps the analytical thresholds.
  double threshold_scale = 1.0;
  int max_level = 12;
};

struct WorkloadSpec {
  enum class Kind { phases, trace };
  Kind kind = Kind::phases;
  PhasePlan plan;
  TraceSpec trace;  // path resolved against the scenario file
};

struct Scenario {
  std::string name;
  Topology topology;
  Catalog catalog;
  SystemParams params;
  WorkloadSpec workload;
  ControllerConfig controller;
  std::string strategy = "reshare";
  std::uint64_t seed = 1;
  bool verify = false;
  double horizon = 0.0;  // s; 0 means the last event time
};

// Carries every problem found while reading a scenario.
class ScenarioError : public Error {
 public:
  ScenarioError(Errc code, std::vector<Violation> violations);
  const std::vector<Violation>& violations() const noexcept {
    return violations_;
  }

 private:
  std::vector<Violation> violations_;
};

// JSON with sections topology, params, vnfs, services, workload, strategy
// and output. Relative trace paths resolve against `base_dir`.
Scenario parse_scenario(std::string_view text,
                        const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

EventList build_events(const Scenario& scenario, std::uint64_t seed);

}  // namespace reshare
