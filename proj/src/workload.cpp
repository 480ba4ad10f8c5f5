#include "reshare/workload.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <tuple>

namespace reshare {

bool EventList::arrival_only() const {
  return std::none_of(events.begin(), events.end(), [](const Event& e) {
    return e.kind == EventKind::departure;
  });
}

void sort_events(std::vector<Event>& events) {
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    return std::tuple(a.time, static_cast<int>(a.kind), a.request) <
           std::tuple(b.time, static_cast<int>(b.kind), b.request);
  });
}

EventList make_event_list(std::vector<Request> requests) {
  std::stable_sort(requests.begin(), requests.end(),
                   [](const Request& a, const Request& b) {
                     return a.arrival < b.arrival;
                   });
  EventList out;
  RequestId next = 1;
  for (auto& r : requests) {
    r.id = next++;
    out.events.push_back(Event{r.arrival, EventKind::arrival, r.id});
    if (!r.unbounded()) {
      out.events.push_back(Event{r.departure(), EventKind::departure, r.id});
    }
  }
  out.requests = std::move(requests);
  sort_events(out.events);
  return out;
}

namespace {

// Uniform in [0, 1) from the top 53 bits, identical on every platform.
double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

ServiceIndex pick_service(const Phase& phase, std::mt19937_64& rng) {
  double total = 0.0;
  for (const auto& [s, w] : phase.service_mix) total += w;
  const double u = unit_draw(rng) * total;
  double acc = 0.0;
  for (const auto& [s, w] : phase.service_mix) {
    acc += w;
    if (u < acc) return s;
  }
  return phase.service_mix.back().first;
}

}  // namespace

EventList generate_events(const PhasePlan& plan, const Topology& topology,
                          const SystemParams& params, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto& leaves = topology.leaves();
  if (leaves.empty()) throw Error(Errc::invalid_scenario, "no leaves");

  std::vector<Request> requests;
  std::size_t counter = 0;
  for (std::size_t p = 0; p < plan.phases.size(); ++p) {
    const Phase& phase = plan.phases[p];
    const std::string where = "phase " + std::to_string(p);
    if (!(phase.arrival_rate > 0.0) || !(phase.end >= phase.start)) {
      throw Error(Errc::invalid_scenario, where + ": bad rate or interval");
    }
    if (phase.service_mix.empty()) {
      throw Error(Errc::invalid_scenario, where + ": empty service mix");
    }
    if (phase.load_min_factor < 1.0 ||
        phase.load_max_factor < phase.load_min_factor) {
      throw Error(Errc::invalid_scenario,
                  where + ": load factors must satisfy 1 <= min <= max");
    }
    if (phase.duration && !(*phase.duration >= 0.0)) {
      throw Error(Errc::invalid_scenario, where + ": negative duration");
    }
    if (p > 0 && phase.start < plan.phases[p - 1].end) {
      throw Error(Errc::invalid_scenario,
                  where + ": overlaps or precedes the previous phase");
    }
    const auto count = static_cast<std::size_t>(
        std::llround((phase.end - phase.start) * phase.arrival_rate));
    for (std::size_t k = 0; k < count; ++k) {
      Request r;
      r.arrival = phase.start + static_cast<double>(k) / phase.arrival_rate;
      r.duration = phase.duration ? *phase.duration : kUnbounded;
      r.service = pick_service(phase, rng);
      const double f = phase.load_min_factor +
                       (phase.load_max_factor - phase.load_min_factor) *
                           unit_draw(rng);
      r.load = params.lambda_min * f;
      if (plan.leaves == LeafPolicy::round_robin) {
        r.leaf = leaves[counter % leaves.size()];
      } else {
        r.leaf = leaves[static_cast<std::size_t>(unit_draw(rng) *
                                                 static_cast<double>(leaves.size()))];
      }
      ++counter;
      requests.push_back(r);
    }
  }
  return make_event_list(std::move(requests));
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cell);
      cell.clear();
    } else {
      cell += c;
    }
  }
  out.push_back(cell);
  for (auto& s : out) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  }
  return out;
}

double parse_number(const std::string& cell, std::size_t row,
                    const std::string& column) {
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw TraceError(Errc::parse_error, row,
                     "column '" + column + "' is not a number: '" + cell + "'");
  }
  return value;
}

}  // namespace

EventList parse_trace(const std::string& text, const TraceSpec& spec,
                      const Catalog& catalog, const Topology& topology,
                      const SystemParams& params) {
  std::istringstream in(text);
  std::string line;
  std::size_t row = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    header = split_csv(line);
  }
  if (header.empty()) throw TraceError(Errc::parse_error, row, "missing header");

  auto column = [&](const std::string& name, bool required) -> long {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      if (required) {
        throw TraceError(Errc::parse_error, row, "missing column '" + name + "'");
      }
      return -1;
    }
    return static_cast<long>(it - header.begin());
  };
  const long c_arrival = column(spec.arrival_column, true);
  const long c_duration = column(spec.duration_column, true);
  const long c_load = column(spec.load_column, true);
  const long c_service = column(spec.service_column, true);
  const long c_leaf = spec.leaf_column.empty() ? -1 : column(spec.leaf_column, true);

  const auto& leaves = topology.leaves();
  std::vector<Request> requests;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw TraceError(Errc::parse_error, row,
                       "expected " + std::to_string(header.size()) +
                           " fields, found " + std::to_string(cells.size()));
    }
    Request r;
    r.arrival = parse_number(cells[c_arrival], row, spec.arrival_column) *
                spec.time_scale;
    if (r.arrival < 0.0) {
      throw TraceError(Errc::parse_error, row, "negative arrival time");
    }
    const std::string& dur = cells[c_duration];
    if (dur.empty() || dur == "inf" || dur == "INF") {
      r.duration = kUnbounded;
    } else {
      r.duration = parse_number(dur, row, spec.duration_column) * spec.time_scale;
      if (r.duration < 0.0) {
        throw TraceError(Errc::parse_error, row, "negative duration");
      }
    }
    r.load = parse_number(cells[c_load], row, spec.load_column) * spec.load_scale;
    if (r.load < params.lambda_min) {
      throw TraceError(Errc::load_below_minimum, row,
                       "load " + std::to_string(r.load) + " below lambda_min " +
                           std::to_string(params.lambda_min));
    }
    const auto service = catalog.find_service(cells[c_service]);
    if (!service) {
      throw TraceError(Errc::parse_error, row,
                       "unknown service '" + cells[c_service] + "'");
    }
    r.service = *service;
    if (c_leaf >= 0) {
      const double ordinal = parse_number(cells[c_leaf], row, spec.leaf_column);
      if (ordinal < 0.0 || ordinal >= static_cast<double>(leaves.size()) ||
          ordinal != std::floor(ordinal)) {
        throw TraceError(Errc::parse_error, row, "leaf ordinal out of range");
      }
      r.leaf = leaves[static_cast<std::size_t>(ordinal)];
    } else {
      r.leaf = leaves[requests.size() % leaves.size()];
    }
    requests.push_back(r);
  }
  return make_event_list(std::move(requests));
}

EventList ingest_trace(const TraceSpec& spec, const Catalog& catalog,
                       const Topology& topology, const SystemParams& params) {
  std::ifstream in(spec.path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open trace '" + spec.path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_trace(buf.str(), spec, catalog, topology, params);
}

}  // namespace reshare
