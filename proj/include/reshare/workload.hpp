#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reshare/error.hpp"
#include "reshare/model.hpp"

namespace reshare {

enum class LeafPolicy { round_robin, uniform };

// One stretch of arrivals at a constant rate. Arrivals fall at
// start + k / rate for every k with that time before `end`.
struct Phase {
  double start = 0.0;             // s
  double end = 0.0;               // s
  double arrival_rate = 1.0;      // requests per s
  std::optional<double> duration; // s; unset means the request never leaves
  std::vector<std::pair<ServiceIndex, double>> service_mix;  // weights
  double load_min_factor = 1.0;   // loads drawn uniformly in
  double load_max_factor = 1.0;   // lambda_min * [min, max]
};

struct PhasePlan {
  std::vector<Phase> phases;
  LeafPolicy leaves = LeafPolicy::round_robin;
};

enum class EventKind { arrival = 0, departure = 1 };

struct Event {
  double time = 0.0;
  EventKind kind = EventKind::arrival;
  RequestId request = 0;
};

struct EventList {
  std::vector<Request> requests;  // index = id - 1
  std::vector<Event> events;

  const Request& request(RequestId id) const { return requests.at(id - 1); }
  bool arrival_only() const;
};

// Orders by (time, arrivals before departures, request id).
void sort_events(std::vector<Event>& events);

EventList generate_events(const PhasePlan& plan, const Topology& topology,
                          const SystemParams& params, std::uint64_t seed);

// Malformed trace row; `row` is 1-based and counts the header.
class TraceError : public Error {
 public:
  TraceError(Errc code, std::size_t row, const std::string& what)
      : Error(code, "row " + std::to_string(row) + ": " + what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

struct TraceSpec {
  std::string path;
  std::string arrival_column = "arrival";
  std::string duration_column = "duration";
  std::string load_column = "load";
  std::string service_column = "service";
  std::string leaf_column;         // empty: leaves assigned round robin
  double time_scale = 1.0;         // trace time unit -> s
  double load_scale = 1.0;         // trace load unit -> packets/ms
};

// CSV with a header row; CRLF endings are accepted. Empty or "inf" duration
// means unbounded. Rows are 1-based counting the header.
EventList ingest_trace(const TraceSpec& spec, const Catalog& catalog,
                       const Topology& topology, const SystemParams& params);
EventList parse_trace(const std::string& text, const TraceSpec& spec,
                      const Catalog& catalog, const Topology& topology,
                      const SystemParams& params);

// Builds arrivals and departures from a request list; ids are reassigned in
// arrival order starting at 1.
EventList make_event_list(std::vector<Request> requests);

}  // namespace reshare
