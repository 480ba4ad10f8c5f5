// Command-line front end; talks to the simulator only through the C API.
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "reshare/reshare.h"

namespace {

enum Exit { kOk = 0, kScenario = 1, kInvariant = 2, kIo = 3 };

int exit_code(reshare_status status) {
  switch (status) {
    case RESHARE_OK: return kOk;
    case RESHARE_E_INVARIANT: return kInvariant;
    case RESHARE_E_IO: return kIo;
    default: return kScenario;
  }
}

int report(reshare_status status) {
  std::fprintf(stderr, "error (%s): %s\n", reshare_status_name(status),
               reshare_last_error());
  return exit_code(status);
}

struct ScenarioDeleter {
  void operator()(reshare_scenario* s) const { reshare_scenario_free(s); }
};
struct RunDeleter {
  void operator()(reshare_run* r) const { reshare_run_free(r); }
};
using ScenarioPtr = std::unique_ptr<reshare_scenario, ScenarioDeleter>;
using RunPtr = std::unique_ptr<reshare_run, RunDeleter>;

struct Options {
  std::string scenario;
  std::string strategy;
  double epsilon = 1.0;
  long long seed = -1;
  std::string out;
  bool verify = false;
  std::vector<std::string> sweep;
};

const std::vector<std::string> kCompareSet = {
    "reshare",         "c-reshare:1",     "c-reshare:0.5",
    "c-reshare:0.25",  "c-reshare:0.125", "relax-sota",
    "shadow-only"};

struct Job {
  std::string strategy;
  RunPtr run;
  reshare_status status = RESHARE_OK;
  std::string error;
};

// One thread per strategy; each run is independent.
void run_all(const reshare_scenario* sc, std::vector<Job>& jobs, double epsilon,
             std::uint64_t seed, bool verify) {
  std::vector<std::thread> threads;
  for (auto& job : jobs) {
    threads.emplace_back([&job, sc, epsilon, seed, verify] {
      reshare_run* run = nullptr;
      job.status = reshare_run_execute(sc, job.strategy.c_str(), epsilon, seed,
                                       verify ? 1 : 0, &run);
      job.run.reset(run);
      if (job.status != RESHARE_OK) job.error = reshare_last_error();
    });
  }
  for (auto& t : threads) t.join();
}

std::string subdir_name(std::string label) {
  for (char& c : label) {
    if (c == ':') c = '_';
  }
  return label;
}

int load(const Options& o, ScenarioPtr& out) {
  reshare_scenario* raw = nullptr;
  const auto status = reshare_scenario_load(o.scenario.c_str(), &raw);
  out.reset(raw);
  return status == RESHARE_OK ? kOk : report(status);
}

std::uint64_t seed_of(const Options& o, const reshare_scenario* sc) {
  return o.seed >= 0 ? static_cast<std::uint64_t>(o.seed)
                     : reshare_scenario_seed(sc);
}

int cmd_validate(const Options& o) {
  ScenarioPtr sc;
  if (int rc = load(o, sc)) return rc;
  size_t requests = 0;
  const auto status =
      reshare_scenario_request_count(sc.get(), seed_of(o, sc.get()), &requests);
  if (status != RESHARE_OK) return report(status);
  std::printf("ok: %s (%zu nodes, %zu services, %zu requests)\n",
              reshare_scenario_name(sc.get()),
              reshare_scenario_node_count(sc.get()),
              reshare_scenario_service_count(sc.get()), requests);
  return kOk;
}

int finish(std::vector<Job>& jobs, const std::string& out, bool table) {
  int rc = kOk;
  if (table) {
    std::printf("%-18s %16s %14s %12s %12s\n", "strategy", "cumulative_cost",
                "final_cost", "pod_at_peak", "transitions");
  }
  for (auto& job : jobs) {
    if (job.status != RESHARE_OK) {
      std::fprintf(stderr, "error (%s) in %s: %s\n",
                   reshare_status_name(job.status), job.strategy.c_str(),
                   job.error.c_str());
      if (rc == kOk) rc = exit_code(job.status);
      continue;
    }
    if (table) {
      std::printf("%-18s %16.6f %14.6f %12.6f %12zu\n",
                  reshare_run_strategy(job.run.get()),
                  reshare_run_cumulative_cost(job.run.get()),
                  reshare_run_final_cost(job.run.get()),
                  reshare_run_pod_at_peak_load(job.run.get()),
                  reshare_run_transition_count(job.run.get()));
    }
    if (!out.empty()) {
      std::string dir = out;
      if (jobs.size() > 1) {
        dir = (std::filesystem::path(out) / subdir_name(job.strategy)).string();
      }
      const auto status = reshare_run_write(job.run.get(), dir.c_str());
      if (status != RESHARE_OK) {
        const int code = report(status);
        if (rc == kOk) rc = code;
      }
    }
  }
  return rc;
}

int cmd_run(const Options& o) {
  ScenarioPtr sc;
  if (int rc = load(o, sc)) return rc;
  const bool verify = o.verify || reshare_scenario_verify(sc.get()) != 0;
  const std::uint64_t seed = seed_of(o, sc.get());
  std::vector<Job> jobs;
  if (!o.sweep.empty()) {
    for (const auto& s : o.sweep) jobs.push_back(Job{s, nullptr});
  } else {
    jobs.push_back(Job{o.strategy.empty() ? reshare_scenario_strategy(sc.get())
                                          : o.strategy,
                       nullptr});
  }
  run_all(sc.get(), jobs, o.epsilon, seed, verify);
  if (jobs.size() == 1 && jobs[0].status == RESHARE_OK && o.out.empty()) {
    std::fputs(reshare_run_summary_json(jobs[0].run.get()), stdout);
    return kOk;
  }
  return finish(jobs, o.out, jobs.size() > 1);
}

int cmd_compare(const Options& o) {
  const auto& list = o.sweep.empty() ? kCompareSet : o.sweep;
  if (list.size() < 2) {
    std::fprintf(stderr, "error (usage): compare needs at least two strategies\n");
    return kScenario;
  }
  ScenarioPtr sc;
  if (int rc = load(o, sc)) return rc;
  const bool verify = o.verify || reshare_scenario_verify(sc.get()) != 0;
  const std::uint64_t seed = seed_of(o, sc.get());
  std::vector<Job> jobs;
  for (const auto& s : list) jobs.push_back(Job{s, nullptr});
  run_all(sc.get(), jobs, o.epsilon, seed, verify);

  int rc = kOk;
  for (const auto& job : jobs) {
    if (job.status == RESHARE_OK) continue;
    std::fprintf(stderr, "error (%s) in %s: %s\n",
                 reshare_status_name(job.status), job.strategy.c_str(),
                 job.error.c_str());
    if (rc == kOk) rc = exit_code(job.status);
  }
  if (rc != kOk) return rc;

  // Savings are quoted for the first strategy against each of the others.
  const Job& lead = jobs.front();
  const double lead_cost = reshare_run_cumulative_cost(lead.run.get());
  double shadow = 0.0;
  for (const auto& job : jobs) {
    if (std::string(reshare_run_strategy(job.run.get())) == "shadow-only") {
      shadow = reshare_run_cumulative_cost(job.run.get());
    }
  }
  std::printf("{\n  \"scenario\": \"%s\",\n  \"seed\": %llu,\n",
              reshare_scenario_name(sc.get()),
              static_cast<unsigned long long>(seed));
  std::printf("  \"reference\": \"%s\",\n  \"strategies\": [\n",
              reshare_run_strategy(lead.run.get()));
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const reshare_run* r = jobs[i].run.get();
    const double cost = reshare_run_cumulative_cost(r);
    std::printf("    {\"strategy\": \"%s\", \"cumulative_cost\": %.12g, "
                "\"ratio_to_reference\": %.12g, ",
                reshare_run_strategy(r), cost,
                lead_cost > 0.0 ? cost / lead_cost : 0.0);
    if (shadow > 0.0) {
      std::printf("\"ratio_to_shadow\": %.12g, ", cost / shadow);
    }
    std::printf("\"savings_percent\": %.12g, \"pod_at_peak_load\": %.12g, "
                "\"transitions\": %zu}%s\n",
                cost > 0.0 ? 100.0 * (cost - lead_cost) / cost : 0.0,
                reshare_run_pod_at_peak_load(r),
                reshare_run_transition_count(r),
                i + 1 < jobs.size() ? "," : "");
  }
  std::printf("  ]\n}\n");
  return finish(jobs, o.out, false);
}

int cmd_oracle(const Options& o) {
  ScenarioPtr sc;
  if (int rc = load(o, sc)) return rc;
  reshare_oracle_report rep{};
  const auto status = reshare_oracle(sc.get(), seed_of(o, sc.get()), &rep);
  if (status != RESHARE_OK) return report(status);
  std::printf(
      "{\n  \"requests\": %zu,\n  \"jobs\": %zu,\n  \"oracle_cost\": %.12g,\n"
      "  \"shadow_cost\": %.12g,\n  \"engine_cost\": %.12g,\n"
      "  \"partitions\": %llu\n}\n",
      rep.requests, rep.jobs, rep.oracle_cost, rep.shadow_cost,
      rep.engine_cost, static_cast<unsigned long long>(rep.partitions));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online VNF embedding simulator"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&o](CLI::App* sub) {
    sub->add_option("--scenario", o.scenario, "Scenario JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "Workload seed (default: from scenario)");
  };
  auto add_run_opts = [&o](CLI::App* sub) {
    sub->add_option("--epsilon", o.epsilon,
                    "Epsilon for a bare c-reshare strategy")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", o.out, "Output directory");
    sub->add_flag("--verify", o.verify, "Check every invariant after each event");
    sub->add_option("--sweep", o.sweep, "Strategies to run side by side")
        ->delimiter(',');
  };

  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  add_common(validate);

  auto* run = app.add_subcommand("run", "Simulate one strategy (or a sweep)");
  add_common(run);
  add_run_opts(run);
  run->add_option("--strategy", o.strategy,
                  "reshare | c-reshare[:eps] | relax-sota | shadow-only | oracle");

  auto* compare = app.add_subcommand("compare", "Tabulate several strategies");
  add_common(compare);
  add_run_opts(compare);

  auto* oracle = app.add_subcommand("oracle", "Exhaustive optimum of a tiny scenario");
  add_common(oracle);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kScenario;
  }

  if (*validate) return cmd_validate(o);
  if (*run) return cmd_run(o);
  if (*compare) return cmd_compare(o);
  return cmd_oracle(o);
}
