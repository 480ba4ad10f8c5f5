#include "reshare/reshare.h"

#include <exception>
#include <filesystem>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "reshare/allocation.hpp"
#include "reshare/baselines.hpp"
#include "reshare/engine.hpp"
#include "reshare/error.hpp"
#include "reshare/ranges.hpp"
#include "reshare/scenario.hpp"
#include "reshare/shadow.hpp"
#include "reshare/sim.hpp"

struct reshare_scenario {
  reshare::Scenario scenario;
};

struct reshare_run {
  reshare::RunResult result;
  std::string summary;
};

namespace {

thread_local std::string last_error;

reshare_status status_of(reshare::Errc code) {
  using reshare::Errc;
  switch (code) {
    case Errc::invalid_scenario:
    case Errc::parse_error:
    case Errc::load_below_minimum:
    case Errc::no_valid_range:
      return RESHARE_E_SCENARIO;
    case Errc::invariant_breach:
      return RESHARE_E_INVARIANT;
    case Errc::io_error:
      return RESHARE_E_IO;
    case Errc::usage_error:
    case Errc::instance_too_large:
      return RESHARE_E_ARGUMENT;
    case Errc::infeasible_job:
    case Errc::infeasible_request:
    case Errc::infeasible_instance:
    case Errc::budget_below_minimum:
      return RESHARE_E_INFEASIBLE;
    default:
      return RESHARE_E_INTERNAL;
  }
}

template <class F>
reshare_status guarded(F&& body) {
  last_error.clear();
  try {
    body();
    return RESHARE_OK;
  } catch (const reshare::Error& e) {
    last_error = std::string(reshare::errc_name(e.code())) + ": " + e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return RESHARE_E_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return RESHARE_E_INTERNAL;
  }
}

reshare_status null_argument(const char* what) {
  last_error = std::string("null argument: ") + what;
  return RESHARE_E_ARGUMENT;
}

}  // namespace

extern "C" {

const char* reshare_version(void) { return "1.0.0"; }

const char* reshare_last_error(void) { return last_error.c_str(); }

const char* reshare_status_name(reshare_status status) {
  switch (status) {
    case RESHARE_OK: return "ok";
    case RESHARE_E_SCENARIO: return "scenario";
    case RESHARE_E_INVARIANT: return "invariant";
    case RESHARE_E_IO: return "io";
    case RESHARE_E_ARGUMENT: return "argument";
    case RESHARE_E_INFEASIBLE: return "infeasible";
    case RESHARE_E_INTERNAL: return "internal";
  }
  return "unknown";
}

reshare_status reshare_scenario_load(const char* path, reshare_scenario** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new reshare_scenario{reshare::load_scenario(path)};
  });
}

reshare_status reshare_scenario_parse(const char* json_text,
                                      const char* base_dir,
                                      reshare_scenario** out) {
  if (!json_text) return null_argument("json_text");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new reshare_scenario{reshare::parse_scenario(
        json_text, base_dir ? std::filesystem::path(base_dir)
                            : std::filesystem::path())};
  });
}

void reshare_scenario_free(reshare_scenario* scenario) { delete scenario; }

const char* reshare_scenario_name(const reshare_scenario* s) {
  return s ? s->scenario.name.c_str() : "";
}

const char* reshare_scenario_strategy(const reshare_scenario* s) {
  return s ? s->scenario.strategy.c_str() : "";
}

uint64_t reshare_scenario_seed(const reshare_scenario* s) {
  return s ? s->scenario.seed : 0;
}

int reshare_scenario_verify(const reshare_scenario* s) {
  return s && s->scenario.verify ? 1 : 0;
}

size_t reshare_scenario_node_count(const reshare_scenario* s) {
  return s ? s->scenario.topology.node_count() : 0;
}

size_t reshare_scenario_service_count(const reshare_scenario* s) {
  return s ? s->scenario.catalog.services.size() : 0;
}

reshare_status reshare_scenario_request_count(const reshare_scenario* s,
                                              uint64_t seed, size_t* out) {
  if (!s) return null_argument("scenario");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = reshare::build_events(s->scenario, seed).requests.size();
  });
}

reshare_status reshare_run_execute(const reshare_scenario* s,
                                   const char* strategy, double epsilon,
                                   uint64_t seed, int verify,
                                   reshare_run** out) {
  if (!s) return null_argument("scenario");
  if (!strategy) return null_argument("strategy");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    const auto spec = reshare::StrategySpec::parse(strategy, epsilon);
    const auto events = reshare::build_events(s->scenario, seed);
    reshare::SimOptions options;
    options.verify = verify != 0;
    auto run = std::make_unique<reshare_run>();
    run->result = reshare::simulate(s->scenario, spec, events, seed, options);
    run->summary = reshare::summary_json(run->result.summary);
    *out = run.release();
  });
}

void reshare_run_free(reshare_run* run) { delete run; }

reshare_status reshare_run_write(const reshare_run* run, const char* dir) {
  if (!run) return null_argument("run");
  if (!dir) return null_argument("dir");
  return guarded([&] {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
      throw reshare::Error(reshare::Errc::io_error,
                           "cannot create '" + std::string(dir) + "': " +
                               ec.message());
    }
    const std::filesystem::path base(dir);
    std::ofstream csv(base / "metrics.csv", std::ios::binary);
    std::ofstream json(base / "summary.json", std::ios::binary);
    if (!csv || !json) {
      throw reshare::Error(reshare::Errc::io_error,
                           "cannot write into '" + std::string(dir) + "'");
    }
    reshare::write_metrics_csv(csv, run->result.metrics);
    json << run->summary;
    csv.flush();
    json.flush();
    if (!csv || !json) {
      throw reshare::Error(reshare::Errc::io_error,
                           "write failed in '" + std::string(dir) + "'");
    }
  });
}

const char* reshare_run_summary_json(const reshare_run* run) {
  return run ? run->summary.c_str() : "";
}

const char* reshare_run_strategy(const reshare_run* run) {
  return run ? run->result.summary.strategy.c_str() : "";
}

size_t reshare_run_event_count(const reshare_run* run) {
  return run ? run->result.summary.events : 0;
}

double reshare_run_cumulative_cost(const reshare_run* run) {
  return run ? run->result.summary.cumulative_cost : 0.0;
}

double reshare_run_final_cost(const reshare_run* run) {
  return run ? run->result.summary.final_cost : 0.0;
}

double reshare_run_peak_cost(const reshare_run* run) {
  return run ? run->result.summary.peak_cost : 0.0;
}

double reshare_run_pod_at_peak_load(const reshare_run* run) {
  return run ? run->result.summary.pod_at_peak_load : 0.0;
}

double reshare_run_peak_pod_fraction(const reshare_run* run) {
  return run ? run->result.summary.peak_pod_fraction : 0.0;
}

size_t reshare_run_transition_count(const reshare_run* run) {
  return run ? run->result.summary.transitions.size() : 0;
}

reshare_status reshare_run_transition(const reshare_run* run, size_t index,
                                      reshare_transition* out) {
  if (!run) return null_argument("run");
  if (!out) return null_argument("out");
  const auto& ts = run->result.summary.transitions;
  if (index >= ts.size()) {
    last_error = "transition index " + std::to_string(index) + " out of range";
    return RESHARE_E_ARGUMENT;
  }
  const auto& t = ts[index];
  out->time = t.time;
  out->direction = t.decision == reshare::EpsilonDecision::decrease_eps
                       ? RESHARE_DECREASE
                       : RESHARE_INCREASE;
  out->from_level = t.from_level;
  out->to_level = t.to_level;
  out->from_epsilon = t.from_epsilon;
  out->to_epsilon = t.to_epsilon;
  out->shadow_cost = t.shadow_cost;
  out->system_load = t.system_load;
  out->engine_cost = t.engine_cost;
  out->archived_sum = t.archived_sum;
  last_error.clear();
  return RESHARE_OK;
}

reshare_status reshare_oracle(const reshare_scenario* s, uint64_t seed,
                              reshare_oracle_report* out) {
  if (!s) return null_argument("scenario");
  if (!out) return null_argument("out");
  return guarded([&] {
    const auto& sc = s->scenario;
    const auto events = reshare::build_events(sc, seed);
    const double horizon =
        sc.horizon > 0.0
            ? sc.horizon
            : (events.events.empty() ? 0.0 : events.events.back().time);
    std::vector<reshare::Request> active;
    std::vector<reshare::DelayPlan> plans;
    for (const auto& r : events.requests) {
      if (r.arrival > horizon || r.departure() <= horizon) continue;
      active.push_back(r);
      plans.push_back(
          reshare::plan_request(r, sc.catalog, sc.topology, sc.params));
    }
    const auto instance = reshare::make_oracle_instance(active, plans);
    const auto opt =
        reshare::oracle_optimal_cost(instance, sc.topology, sc.catalog, sc.params);

    const reshare::RangeScheme scheme(sc.controller.epsilon_star, sc.params);
    reshare::ShadowLedger shadow(1, scheme, sc.topology, sc.catalog, sc.params);
    reshare::PackingEngine engine(sc.topology, sc.catalog, sc.params);
    for (std::size_t i = 0; i < active.size(); ++i) {
      shadow.add(active[i], plans[i]);
      engine.place_request(active[i], plans[i], scheme);
    }
    out->requests = active.size();
    out->jobs = instance.job_count();
    out->oracle_cost = opt.cost;
    out->shadow_cost = shadow.full_cost();
    out->engine_cost = engine.state().cost();
    out->partitions = opt.partitions_enumerated;
  });
}

}  // extern "C"
