#include "reshare/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include <json.hpp>

#include "reshare/allocation.hpp"
#include "reshare/baselines.hpp"
#include "reshare/engine.hpp"
#include "reshare/error.hpp"
#include "reshare/ranges.hpp"
#include "reshare/shadow.hpp"

namespace reshare {

std::string StrategySpec::label() const {
  switch (kind) {
    case StrategyKind::reshare: return "reshare";
    case StrategyKind::c_reshare: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "c-reshare:%g", epsilon);
      return buf;
    }
    case StrategyKind::relax_sota: return "relax-sota";
    case StrategyKind::shadow_only: return "shadow-only";
    case StrategyKind::oracle: return "oracle";
  }
  return "reshare";
}

StrategySpec StrategySpec::parse(std::string_view text, double epsilon) {
  StrategySpec spec;
  spec.epsilon = epsilon;
  if (text == "reshare") {
    spec.kind = StrategyKind::reshare;
  } else if (text == "relax-sota") {
    spec.kind = StrategyKind::relax_sota;
  } else if (text == "shadow-only" || text == "shadow") {
    spec.kind = StrategyKind::shadow_only;
  } else if (text == "oracle") {
    spec.kind = StrategyKind::oracle;
  } else if (text.starts_with("c-reshare")) {
    spec.kind = StrategyKind::c_reshare;
    auto rest = text.substr(9);
    if (!rest.empty()) {
      if (rest.front() != ':') {
        throw Error(Errc::usage_error, "unknown strategy '" + std::string(text) + "'");
      }
      const std::string num(rest.substr(1));
      char* end = nullptr;
      spec.epsilon = std::strtod(num.c_str(), &end);
      if (num.empty() || *end != '\0') {
        throw Error(Errc::usage_error, "bad epsilon in '" + std::string(text) + "'");
      }
    }
    if (!(spec.epsilon > 0.0)) {
      throw Error(Errc::usage_error, "epsilon must be positive");
    }
  } else {
    throw Error(Errc::usage_error, "unknown strategy '" + std::string(text) + "'");
  }
  return spec;
}

double pod_of_vm(const Vm& vm, double theta) {
  if (vm.empty()) {
    throw Error(Errc::empty_vm, "VM " + std::to_string(vm.id) + " hosts no job");
  }
  return (vm.speed - theta * vm.load) - 1.0 / vm.max_budget;
}

double pod_fraction(const PlacementState& state) {
  double pod = 0.0;
  double speed = 0.0;
  for (const auto& [id, vm] : state.vms()) {
    pod += pod_of_vm(vm, state.catalog().vnf(vm.vnf).theta);
    speed += vm.speed;
  }
  return speed > 0.0 ? pod / speed : 0.0;
}

double Strategy::epsilon() const {
  return std::numeric_limits<double>::quiet_NaN();
}

std::vector<std::string> Strategy::verify(bool, bool) const { return {}; }

namespace {

void append(std::vector<std::string>& out, std::vector<std::string> more) {
  out.insert(out.end(), std::make_move_iterator(more.begin()),
             std::make_move_iterator(more.end()));
}

std::vector<std::string> state_checks(const PlacementState& state,
                                      std::span<const VmId> touched,
                                      bool full) {
  auto out = full ? check_vm_invariants(state)
                  : check_vm_invariants(state, touched);
  append(out, full ? check_feasibility(state) : check_feasibility(state, touched));
  if (!full) return out;
  const double kept = state.cost();
  const double fresh = state.recompute_cost();
  if (std::abs(kept - fresh) > 1e-9 * std::max(1.0, std::abs(fresh))) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "cost drift: running %.17g vs recomputed %.17g",
                  kept, fresh);
    out.emplace_back(buf);
  }
  const double pod = state.pod_fraction();
  const double pod_fresh = reshare::pod_fraction(state);
  if (std::abs(pod - pod_fresh) > 1e-9) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "PoD drift: running %.17g vs recomputed %.17g",
                  pod, pod_fresh);
    out.emplace_back(buf);
  }
  return out;
}

std::vector<std::string> engine_checks(const PackingEngine& engine,
                                       bool arrival_only, bool full) {
  const auto touched = engine.state().take_touched();
  auto out = state_checks(engine.state(), touched, full);
  append(out, full ? engine.check_range_purity()
                   : engine.check_range_purity(touched));
  if (arrival_only) {
    append(out, full ? engine.check_vm_count_bound()
                     : engine.check_vm_count_bound(touched));
  }
  return out;
}

class CReshareStrategy : public Strategy {
 public:
  CReshareStrategy(const Scenario& sc, double eps)
      : scheme_(eps, sc.params),
        engine_(sc.topology, sc.catalog, sc.params),
        shadow_(1, scheme_, sc.topology, sc.catalog, sc.params) {}

  void arrive(const Request& r, const DelayPlan& plan, double) override {
    engine_.place_request(r, plan, scheme_, 1);
    shadow_.add(r, plan);
  }
  void depart(RequestId id, double) override {
    engine_.remove_request(id);
    shadow_.remove(id);
  }
  double cost() const override { return engine_.state().cost(); }
  double shadow_cost() const override { return shadow_.full_cost(); }
  std::size_t vm_count() const override { return engine_.state().vm_count(); }
  double pod_fraction() const override {
    return engine_.state().pod_fraction();
  }
  double epsilon() const override { return scheme_.epsilon(); }
  const PlacementState* state() const override { return &engine_.state(); }

  std::vector<std::string> verify(bool arrival_only, bool full) const override {
    return engine_checks(engine_, arrival_only, full);
  }

 private:
  RangeScheme scheme_;
  PackingEngine engine_;
  ShadowLedger shadow_;
};

class ReshareStrategy : public Strategy {
 public:
  explicit ReshareStrategy(const Scenario& sc)
      : sc_(sc),
        engine_(sc.topology, sc.catalog, sc.params),
        controller_(sc.controller.epsilon_star,
                    compute_z(sc.params, sc.topology, sc.catalog.vnfs.size(),
                              sc.controller.epsilon_star) *
                        sc.controller.threshold_scale,
                    sc.controller.max_level),
        shadow_(1, RangeScheme(sc.controller.epsilon_star, sc.params),
                sc.topology, sc.catalog, sc.params) {}

  void arrive(const Request& r, const DelayPlan& plan, double time) override {
    engine_.place_request(r, plan, shadow_.scheme(), controller_.level());
    decide(time, shadow_.add(r, plan));
  }
  void depart(RequestId id, double time) override {
    engine_.remove_request(id);
    // Requests that arrived in an earlier interval left that ledger already.
    decide(time, shadow_.contains(id) ? shadow_.remove(id) : shadow_.full_cost());
  }
  double cost() const override { return engine_.state().cost(); }
  double shadow_cost() const override { return shadow_.full_cost(); }
  std::size_t vm_count() const override { return engine_.state().vm_count(); }
  double pod_fraction() const override {
    return engine_.state().pod_fraction();
  }
  double epsilon() const override { return controller_.epsilon(); }
  const PlacementState* state() const override { return &engine_.state(); }
  std::optional<Transition> take_transition() override {
    auto t = pending_;
    pending_.reset();
    return t;
  }

  std::vector<std::string> verify(bool arrival_only, bool full) const override {
    return engine_checks(engine_, arrival_only, full);
  }

  const EpsilonController& controller() const { return controller_; }

 private:
  void decide(double time, double interval_cost) {
    const int from = controller_.level();
    const double from_eps = controller_.epsilon();
    const double load = engine_.state().system_load();
    const auto decision = controller_.on_event(interval_cost, load);
    if (decision == EpsilonDecision::keep) return;
    shadow_.reset(controller_.level(),
                  RangeScheme(controller_.epsilon(), sc_.params));
    Transition t;
    t.time = time;
    t.decision = decision;
    t.from_level = from;
    t.to_level = controller_.level();
    t.from_epsilon = from_eps;
    t.to_epsilon = controller_.epsilon();
    t.shadow_cost = interval_cost;
    t.system_load = load;
    t.engine_cost = engine_.state().cost();
    t.archived_sum = controller_.archived_sum();
    pending_ = t;
  }

  const Scenario& sc_;
  PackingEngine engine_;
  EpsilonController controller_;
  ShadowLedger shadow_;
  std::optional<Transition> pending_;
};

class RelaxSotaStrategy : public Strategy {
 public:
  explicit RelaxSotaStrategy(const Scenario& sc)
      : placer_(sc.topology, sc.catalog, sc.params),
        shadow_(1, RangeScheme(sc.controller.epsilon_star, sc.params),
                sc.topology, sc.catalog, sc.params) {}

  void arrive(const Request& r, const DelayPlan& plan, double) override {
    placer_.place_request(r, plan);
    shadow_.add(r, plan);
  }
  void depart(RequestId id, double) override {
    placer_.remove_request(id);
    shadow_.remove(id);
  }
  double cost() const override { return placer_.state().cost(); }
  double shadow_cost() const override { return shadow_.full_cost(); }
  std::size_t vm_count() const override { return placer_.state().vm_count(); }
  double pod_fraction() const override {
    return placer_.state().pod_fraction();
  }
  const PlacementState* state() const override { return &placer_.state(); }
  std::vector<std::string> verify(bool, bool full) const override {
    return state_checks(placer_.state(), placer_.state().take_touched(), full);
  }

 private:
  RelaxSotaPlacer placer_;
  ShadowLedger shadow_;
};

class ShadowStrategy : public Strategy {
 public:
  explicit ShadowStrategy(const Scenario& sc)
      : shadow_(1, RangeScheme(sc.controller.epsilon_star, sc.params),
                sc.topology, sc.catalog, sc.params) {}

  void arrive(const Request& r, const DelayPlan& plan, double) override {
    shadow_.add(r, plan);
  }
  void depart(RequestId id, double) override { shadow_.remove(id); }
  double cost() const override { return shadow_.full_cost(); }
  double shadow_cost() const override { return shadow_.full_cost(); }
  std::size_t vm_count() const override { return 0; }
  double pod_fraction() const override { return 0.0; }
  double epsilon() const override { return shadow_.scheme().epsilon(); }

 private:
  ShadowLedger shadow_;
};

class OracleStrategy : public Strategy {
 public:
  explicit OracleStrategy(const Scenario& sc)
      : sc_(sc),
        shadow_(1, RangeScheme(sc.controller.epsilon_star, sc.params),
                sc.topology, sc.catalog, sc.params) {}

  void arrive(const Request& r, const DelayPlan& plan, double) override {
    active_.emplace(r.id, std::make_pair(r, plan));
    shadow_.add(r, plan);
    solve();
  }
  void depart(RequestId id, double) override {
    active_.erase(id);
    shadow_.remove(id);
    solve();
  }
  double cost() const override { return result_.cost; }
  double shadow_cost() const override { return shadow_.full_cost(); }
  std::size_t vm_count() const override { return result_.vms.size(); }

  std::vector<std::string> verify(bool, bool) const override {
    // Jobs are flattened in request-id order, then chain order.
    struct Slot {
      const Request* request = nullptr;
      double budget = 0.0;
      int vm = -1;
    };
    std::vector<Slot> slots;
    for (const auto& [id, rp] : active_) {
      for (double b : rp.second.budgets) slots.push_back({&rp.first, b, -1});
    }
    std::vector<std::string> out;
    std::vector<double> latency(result_.vms.size(), 0.0);
    for (std::size_t k = 0; k < result_.vms.size(); ++k) {
      const OracleVm& vm = result_.vms[k];
      const double theta = sc_.catalog.vnf(vm.vnf).theta;
      latency[k] = 1.0 / (vm.speed - theta * vm.load);
      if (vm.speed > sc_.params.mu_bar * (1.0 + 1e-9) || !(latency[k] > 0.0)) {
        out.push_back("oracle VM " + std::to_string(k) + ": infeasible speed");
      }
      for (std::size_t j : vm.jobs) {
        if (j >= slots.size() || slots[j].vm >= 0) {
          out.push_back("oracle VM " + std::to_string(k) + ": bad job index");
          continue;
        }
        slots[j].vm = static_cast<int>(k);
        if (latency[k] > slots[j].budget * (1.0 + 1e-9)) {
          out.push_back("oracle VM " + std::to_string(k) + ": budget missed");
        }
      }
    }
    std::size_t j = 0;
    for (const auto& [id, rp] : active_) {
      double forwarding = 0.0;
      double processing = 0.0;
      for (std::size_t k = 0; k < rp.second.budgets.size(); ++k, ++j) {
        if (slots[j].vm < 0) {
          out.push_back("request " + std::to_string(id) + ": job not hosted");
          continue;
        }
        const auto& vm = result_.vms[static_cast<std::size_t>(slots[j].vm)];
        forwarding = std::max(forwarding, sc_.topology.layer(vm.layer).d);
        processing += latency[static_cast<std::size_t>(slots[j].vm)];
      }
      const double target = sc_.catalog.service(rp.first.service).target_delay;
      if (forwarding + processing > target * (1.0 + 1e-9)) {
        out.push_back("request " + std::to_string(id) + ": latency exceeds target");
      }
    }
    return out;
  }
  double pod_fraction() const override {
    double pod = 0.0;
    double speed = 0.0;
    for (const auto& vm : result_.vms) {
      pod += (vm.speed - sc_.catalog.vnf(vm.vnf).theta * vm.load) -
             1.0 / vm.max_budget;
      speed += vm.speed;
    }
    return speed > 0.0 ? pod / speed : 0.0;
  }

 private:
  void solve() {
    std::vector<Request> requests;
    std::vector<DelayPlan> plans;
    for (const auto& [id, rp] : active_) {
      requests.push_back(rp.first);
      plans.push_back(rp.second);
    }
    result_ = oracle_optimal_cost(make_oracle_instance(requests, plans),
                                  sc_.topology, sc_.catalog, sc_.params);
  }

  const Scenario& sc_;
  ShadowLedger shadow_;
  std::map<RequestId, std::pair<Request, DelayPlan>> active_;
  OracleResult result_;
};

}  // namespace

std::unique_ptr<Strategy> make_strategy(const StrategySpec& spec,
                                        const Scenario& scenario) {
  switch (spec.kind) {
    case StrategyKind::reshare:
      return std::make_unique<ReshareStrategy>(scenario);
    case StrategyKind::c_reshare:
      return std::make_unique<CReshareStrategy>(scenario, spec.epsilon);
    case StrategyKind::relax_sota:
      return std::make_unique<RelaxSotaStrategy>(scenario);
    case StrategyKind::shadow_only:
      return std::make_unique<ShadowStrategy>(scenario);
    case StrategyKind::oracle:
      return std::make_unique<OracleStrategy>(scenario);
  }
  throw Error(Errc::usage_error, "unknown strategy");
}

namespace {

void check_fair_allocation(const Request& r, const DelayPlan& plan,
                           const Scenario& sc) {
  double sum = 0.0;
  for (double b : plan.budgets) sum += b;
  const double target = sc.catalog.service(r.service).target_delay;
  const double expect = target - sc.topology.layer(plan.star_layer).d;
  if (std::abs(sum - expect) > 1e-9 * target) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "request %llu: budgets sum to %.17g, expected %.17g",
                  static_cast<unsigned long long>(r.id), sum, expect);
    throw Error(Errc::invariant_breach, buf);
  }
}

}  // namespace

RunResult simulate(const Scenario& scenario, const StrategySpec& spec,
                   const EventList& events, std::uint64_t seed,
                   const SimOptions& options) {
  auto strategy = make_strategy(spec, scenario);
  RunResult result;
  RunSummary& sum = result.summary;
  sum.scenario = scenario.name;
  sum.strategy = spec.label();
  sum.proxy = spec.kind == StrategyKind::relax_sota;
  sum.seed = seed;
  sum.requests = events.requests.size();

  double horizon = options.horizon > 0.0 ? options.horizon : scenario.horizon;
  if (!(horizon > 0.0)) {
    horizon = events.events.empty() ? 0.0 : events.events.back().time;
  }
  sum.horizon = horizon;

  double cumulative = 0.0;
  double prev_time = 0.0;
  double prev_cost = 0.0;
  double load = 0.0;
  std::size_t active = 0;
  bool arrival_only = true;

  const std::size_t n = events.events.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Event& ev = events.events[i];
    if (ev.time > horizon) break;
    cumulative += prev_cost * (ev.time - prev_time);
    prev_time = ev.time;

    const Request& req = events.request(ev.request);
    MetricsRecord rec;
    rec.time = ev.time;
    rec.chain_length = scenario.catalog.service(req.service).vnfs.size();
    rec.vms_before = strategy->vm_count();

    const auto start = std::chrono::steady_clock::now();
    if (ev.kind == EventKind::arrival) {
      const DelayPlan plan =
          plan_request(req, scenario.catalog, scenario.topology, scenario.params);
      check_fair_allocation(req, plan, scenario);
      strategy->arrive(req, plan, ev.time);
      ++active;
      load += req.load;
    } else {
      arrival_only = false;
      strategy->depart(req.id, ev.time);
      --active;
      load -= req.load;
    }
    if (options.timing) {
      rec.elapsed_ns = std::chrono::duration<double, std::nano>(
                           std::chrono::steady_clock::now() - start)
                           .count();
    }
    ++sum.events;

    const bool sweep = options.verify_stride > 0 &&
                       (i % options.verify_stride == 0 || i + 1 == n);
    const bool check = options.verify || sweep;
    if (check) {
      ++sum.invariant_checks;
      auto broken = strategy->verify(arrival_only, sweep);
      if (!broken.empty()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "t=%.9g: ", ev.time);
        throw Error(Errc::invariant_breach, buf + broken.front());
      }
    }

    rec.active_requests = active;
    rec.system_load = active == 0 ? 0.0 : load;
    rec.cost = strategy->cost();
    rec.cumulative_cost = cumulative;
    rec.shadow_cost = strategy->shadow_cost();
    rec.vm_count = strategy->vm_count();
    rec.pod_fraction = strategy->pod_fraction();
    rec.epsilon = strategy->epsilon();
    if (auto t = strategy->take_transition()) {
      rec.transition = decision_name(t->decision);
      sum.transitions.push_back(*t);
    }

    if (rec.cost > sum.peak_cost) sum.peak_cost = rec.cost;
    if (rec.vm_count > sum.peak_vms) sum.peak_vms = rec.vm_count;
    if (rec.pod_fraction > sum.peak_pod_fraction) {
      sum.peak_pod_fraction = rec.pod_fraction;
    }
    if (rec.system_load > sum.peak_load) {
      sum.peak_load = rec.system_load;
      sum.peak_load_time = rec.time;
      sum.pod_at_peak_load = rec.pod_fraction;
    }
    prev_cost = rec.cost;
    result.metrics.push_back(std::move(rec));
  }
  if (horizon > prev_time) cumulative += prev_cost * (horizon - prev_time);
  sum.cumulative_cost = cumulative;
  sum.final_cost = prev_cost;
  return result;
}

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

void write_metrics_csv(std::ostream& out,
                       const std::vector<MetricsRecord>& metrics) {
  out << "time,active_requests,system_load,cost,cumulative_cost,shadow_cost,"
         "vm_count,pod_fraction,epsilon,transition\n";
  for (const auto& m : metrics) {
    out << fmt(m.time) << ',' << m.active_requests << ',' << fmt(m.system_load)
        << ',' << fmt(m.cost) << ',' << fmt(m.cumulative_cost) << ','
        << fmt(m.shadow_cost) << ',' << m.vm_count << ','
        << fmt(m.pod_fraction) << ',' << fmt(m.epsilon) << ',' << m.transition
        << '\n';
  }
}

std::string summary_json(const RunSummary& s) {
  nlohmann::ordered_json j;
  j["scenario"] = s.scenario;
  j["strategy"] = s.strategy;
  j["proxy"] = s.proxy;
  j["seed"] = s.seed;
  j["events"] = s.events;
  j["requests"] = s.requests;
  j["horizon"] = s.horizon;
  j["cumulative_cost"] = s.cumulative_cost;
  j["final_cost"] = s.final_cost;
  j["peak_cost"] = s.peak_cost;
  j["peak_vms"] = s.peak_vms;
  j["peak_load"] = s.peak_load;
  j["peak_load_time"] = s.peak_load_time;
  j["pod_at_peak_load"] = s.pod_at_peak_load;
  j["peak_pod_fraction"] = s.peak_pod_fraction;
  j["invariant_checks"] = s.invariant_checks;
  auto& arr = j["transitions"] = nlohmann::ordered_json::array();
  for (const auto& t : s.transitions) {
    nlohmann::ordered_json tj;
    tj["time"] = t.time;
    tj["direction"] = decision_name(t.decision);
    tj["from_level"] = t.from_level;
    tj["to_level"] = t.to_level;
    tj["from_epsilon"] = t.from_epsilon;
    tj["to_epsilon"] = t.to_epsilon;
    tj["shadow_cost"] = t.shadow_cost;
    tj["system_load"] = t.system_load;
    tj["engine_cost"] = t.engine_cost;
    tj["archived_sum"] = t.archived_sum;
    arr.push_back(std::move(tj));
  }
  return j.dump(2) + "\n";
}

}  // namespace reshare
