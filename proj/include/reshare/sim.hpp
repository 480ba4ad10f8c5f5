#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "reshare/adaptive.hpp"
#include "reshare/allocation.hpp"
#include "reshare/placement.hpp"
#include "reshare/scenario.hpp"
#include "reshare/workload.hpp"

namespace reshare {

enum class StrategyKind { reshare, c_reshare, relax_sota, shadow_only, oracle };

struct StrategySpec {
  StrategyKind kind = StrategyKind::reshare;
  double epsilon = 1.0;  // c-reshare only

  // "reshare", "c-reshare:<eps>", "relax-sota", "shadow-only", "oracle".
  std::string label() const;
  // Accepts the labels above; a bare "c-reshare" takes `epsilon`.
  static StrategySpec parse(std::string_view text, double epsilon = 1.0);
};

struct Transition {
  double time = 0.0;
  EpsilonDecision decision = EpsilonDecision::keep;
  int from_level = 1;
  int to_level = 1;
  double from_epsilon = 0.0;
  double to_epsilon = 0.0;
  double shadow_cost = 0.0;   // interval cost that triggered it
  double system_load = 0.0;
  double engine_cost = 0.0;   // instantaneous cost right after the event
  double archived_sum = 0.0;  // sum of archived interval costs below to_level
};

// Spare capacity of a VM beyond what its loosest hosted job needs:
// (mu - theta * Lambda) - 1 / max budget. Throws EmptyVm.
double pod_of_vm(const Vm& vm, double theta);
// Sum of per-VM PoD over sum of speeds; 0 when no VM is active.
double pod_fraction(const PlacementState& state);

class Strategy {
 public:
  virtual ~Strategy() = default;

  virtual void arrive(const Request& request, const DelayPlan& plan,
                      double time) = 0;
  virtual void depart(RequestId request, double time) = 0;

  virtual double cost() const = 0;
  virtual double shadow_cost() const = 0;
  virtual std::size_t vm_count() const = 0;
  virtual double pod_fraction() const = 0;
  // Epsilon in force; NaN for strategies without ranges.
  virtual double epsilon() const;
  virtual std::optional<Transition> take_transition() { return std::nullopt; }
  // Broken invariants after the last event. `arrival_only` enables the
  // VM-count bound, which only holds before any departure. Unless `full`,
  // only VMs changed since the previous call (and their requests) are
  // examined; every call consumes the change list.
  virtual std::vector<std::string> verify(bool arrival_only, bool full) const;
  virtual const PlacementState* state() const { return nullptr; }
};

std::unique_ptr<Strategy> make_strategy(const StrategySpec& spec,
                                        const Scenario& scenario);

struct SimOptions {
  bool verify = false;          // check invariants after every event
  std::size_t verify_stride = 64;  // full sweep every n-th event; 0 = never
  double horizon = 0.0;         // s; 0 uses the scenario's, then the last event
  bool timing = false;          // record per-event wall time
};

struct MetricsRecord {
  double time = 0.0;
  std::size_t active_requests = 0;
  double system_load = 0.0;
  double cost = 0.0;
  double cumulative_cost = 0.0;
  double shadow_cost = 0.0;
  std::size_t vm_count = 0;
  double pod_fraction = 0.0;
  double epsilon = 0.0;
  std::string transition;  // "", "decrease" or "increase"
  // Not written to CSV.
  std::size_t chain_length = 0;
  std::size_t vms_before = 0;
  double elapsed_ns = 0.0;
};

struct RunSummary {
  std::string scenario;
  std::string strategy;
  bool proxy = false;  // greedy stand-in for the relaxation benchmark
  std::uint64_t seed = 0;
  std::size_t events = 0;
  std::size_t requests = 0;
  double horizon = 0.0;
  double cumulative_cost = 0.0;
  double final_cost = 0.0;
  double peak_cost = 0.0;
  std::size_t peak_vms = 0;
  double peak_load = 0.0;
  double peak_load_time = 0.0;
  double pod_at_peak_load = 0.0;
  double peak_pod_fraction = 0.0;
  std::size_t invariant_checks = 0;
  std::vector<Transition> transitions;
};

struct RunResult {
  std::vector<MetricsRecord> metrics;
  RunSummary summary;
};

// Throws Error(InvariantBreach) naming the first broken check.
RunResult simulate(const Scenario& scenario, const StrategySpec& spec,
                   const EventList& events, std::uint64_t seed,
                   const SimOptions& options = {});

void write_metrics_csv(std::ostream& out,
                       const std::vector<MetricsRecord>& metrics);
std::string summary_json(const RunSummary& summary);

}  // namespace reshare
