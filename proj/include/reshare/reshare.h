/* C interface to the VNF embedding simulator. All handles are opaque;
 * functions returning reshare_status leave a message for
 * reshare_last_error() on failure. Strings returned by accessors stay valid
 * until the owning handle is freed. */
#ifndef RESHARE_H
#define RESHARE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RESHARE_API __declspec(dllexport)
#else
#define RESHARE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum reshare_status {
  RESHARE_OK = 0,
  RESHARE_E_SCENARIO = 1,  /* invalid or unparsable scenario, bad trace */
  RESHARE_E_INVARIANT = 2, /* a runtime check failed */
  RESHARE_E_IO = 3,
  RESHARE_E_ARGUMENT = 4,  /* null handle, unknown strategy, bad value */
  RESHARE_E_INFEASIBLE = 5,
  RESHARE_E_INTERNAL = 6
} reshare_status;

typedef enum reshare_direction {
  RESHARE_DECREASE = 1, /* epsilon halved */
  RESHARE_INCREASE = 2  /* epsilon doubled */
} reshare_direction;

typedef struct reshare_scenario reshare_scenario;
typedef struct reshare_run reshare_run;

typedef struct reshare_transition {
  double time;
  int direction;
  int from_level;
  int to_level;
  double from_epsilon;
  double to_epsilon;
  double shadow_cost;
  double system_load;
  double engine_cost;
  double archived_sum;
} reshare_transition;

typedef struct reshare_oracle_report {
  size_t requests;
  size_t jobs;
  double oracle_cost;
  double shadow_cost;
  double engine_cost; /* c-REShare at the scenario's epsilon_star */
  uint64_t partitions;
} reshare_oracle_report;

RESHARE_API const char* reshare_version(void);
/* Thread-local; empty when the last call succeeded. */
RESHARE_API const char* reshare_last_error(void);
RESHARE_API const char* reshare_status_name(reshare_status status);

RESHARE_API reshare_status reshare_scenario_load(const char* path,
                                                 reshare_scenario** out);
RESHARE_API reshare_status reshare_scenario_parse(const char* json_text,
                                                  const char* base_dir,
                                                  reshare_scenario** out);
RESHARE_API void reshare_scenario_free(reshare_scenario* scenario);

RESHARE_API const char* reshare_scenario_name(const reshare_scenario* s);
/* Strategy named in the file, "reshare" when absent. */
RESHARE_API const char* reshare_scenario_strategy(const reshare_scenario* s);
RESHARE_API uint64_t reshare_scenario_seed(const reshare_scenario* s);
RESHARE_API int reshare_scenario_verify(const reshare_scenario* s);
RESHARE_API size_t reshare_scenario_node_count(const reshare_scenario* s);
RESHARE_API size_t reshare_scenario_service_count(const reshare_scenario* s);
/* Number of requests the workload yields for `seed`. */
RESHARE_API reshare_status reshare_scenario_request_count(
    const reshare_scenario* s, uint64_t seed, size_t* out);

/* `strategy` accepts "reshare", "c-reshare:<eps>", "c-reshare" (uses
 * `epsilon`), "relax-sota", "shadow-only" and "oracle". `verify` != 0 checks all
 * invariants after every event. */
RESHARE_API reshare_status reshare_run_execute(const reshare_scenario* s,
                                               const char* strategy,
                                               double epsilon, uint64_t seed,
                                               int verify, reshare_run** out);
RESHARE_API void reshare_run_free(reshare_run* run);

/* Writes metrics.csv and summary.json into `dir`, creating it. */
RESHARE_API reshare_status reshare_run_write(const reshare_run* run,
                                             const char* dir);
RESHARE_API const char* reshare_run_summary_json(const reshare_run* run);
RESHARE_API const char* reshare_run_strategy(const reshare_run* run);
RESHARE_API size_t reshare_run_event_count(const reshare_run* run);
RESHARE_API double reshare_run_cumulative_cost(const reshare_run* run);
RESHARE_API double reshare_run_final_cost(const reshare_run* run);
RESHARE_API double reshare_run_peak_cost(const reshare_run* run);
RESHARE_API double reshare_run_pod_at_peak_load(const reshare_run* run);
RESHARE_API double reshare_run_peak_pod_fraction(const reshare_run* run);
RESHARE_API size_t reshare_run_transition_count(const reshare_run* run);
RESHARE_API reshare_status reshare_run_transition(const reshare_run* run,
                                                  size_t index,
                                                  reshare_transition* out);

/* Exhaustive optimum over the requests still active at the horizon. */
RESHARE_API reshare_status reshare_oracle(const reshare_scenario* s,
                                          uint64_t seed,
                                          reshare_oracle_report* out);

#ifdef __cplusplus
}
#endif

#endif
