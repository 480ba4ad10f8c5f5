#include <gtest/gtest.h>

#include <algorithm>

#include "reshare/error.hpp"
#include "reshare/scenario.hpp"
#include "reshare/workload.hpp"
#include "support.hpp"

using namespace reshare;
using namespace reshare::testing;

namespace {

Phase phase(double start, double end, double rate, std::optional<double> dur) {
  Phase p;
  p.start = start;
  p.end = end;
  p.arrival_rate = rate;
  p.duration = dur;
  p.service_mix = {{0, 1.0}, {1, 1.0}};
  p.load_min_factor = 1.0;
  p.load_max_factor = 2.0;
  return p;
}

PhasePlan vehicular_plan() {
  PhasePlan plan;
  plan.phases = {phase(0, 15, 1, std::nullopt), phase(800, 1000, 5, 200.0)};
  return plan;
}

Catalog two_services() { return catalog({1.0}, {{0}, {0}}, {20.0, 1000.0}); }

const char* kTrace =
    "arrival,duration,load,service\n"
    "0,10,1.5,s0\n"
    "2.5,,1.0,s1\n"
    "1,4,3,s0\n";

TraceSpec spec() { return TraceSpec{}; }

std::size_t trace_error_row(const std::string& text, Errc expect) {
  try {
    parse_trace(text, spec(), two_services(), three_layer(), params());
  } catch (const TraceError& e) {
    EXPECT_EQ(e.code(), expect);
    return e.row();
  }
  ADD_FAILURE() << "no trace error";
  return 0;
}

}  // namespace

TEST(Workload, VehicularCounts) {
  const auto ev = generate_events(vehicular_plan(), three_layer(), params(), 1);
  std::size_t arrivals = 0;
  std::size_t departures = 0;
  for (const auto& e : ev.events) {
    EXPECT_GE(e.time, 0.0);
    EXPECT_LE(e.time, 1200.0);
    (e.kind == EventKind::arrival ? arrivals : departures)++;
  }
  EXPECT_EQ(arrivals, 1015u);
  EXPECT_EQ(departures, 1000u);
  EXPECT_FALSE(ev.arrival_only());
}

TEST(Workload, EmptyPlan) {
  const auto ev = generate_events(PhasePlan{}, three_layer(), params(), 1);
  EXPECT_TRUE(ev.events.empty());
  EXPECT_TRUE(ev.requests.empty());
}

TEST(Workload, SameSeedSameList) {
  const auto a = generate_events(vehicular_plan(), three_layer(), params(), 7);
  const auto b = generate_events(vehicular_plan(), three_layer(), params(), 7);
  const auto c = generate_events(vehicular_plan(), three_layer(), params(), 8);
  ASSERT_EQ(a.requests.size(), b.requests.size());
  bool differs = false;
  for (std::size_t i = 0; i < a.requests.size(); ++i) {
    EXPECT_EQ(a.requests[i].load, b.requests[i].load);
    EXPECT_EQ(a.requests[i].service, b.requests[i].service);
    differs |= a.requests[i].load != c.requests[i].load;
  }
  EXPECT_TRUE(differs);
}

TEST(Workload, LoadsWithinFactors) {
  const auto ev = generate_events(vehicular_plan(), three_layer(), params(), 3);
  for (const auto& r : ev.requests) {
    EXPECT_GE(r.load, 1.0);
    EXPECT_LE(r.load, 2.0);
  }
}

TEST(Workload, RejectsOverlap) {
  PhasePlan plan;
  plan.phases = {phase(0, 15, 1, std::nullopt), phase(10, 20, 1, 5.0)};
  EXPECT_THROW(generate_events(plan, three_layer(), params(), 1), Error);
}

TEST(WorkloadProperty, EventOrderAndPairing) {
  const auto ev = generate_events(vehicular_plan(), three_layer({3, 1, 1}),
                                  params(), 5);
  std::vector<int> seen(ev.requests.size() + 1, 0);
  for (std::size_t i = 0; i < ev.events.size(); ++i) {
    const auto& e = ev.events[i];
    if (i > 0) {
      const auto& p = ev.events[i - 1];
      const auto key = [](const Event& x) {
        return std::make_tuple(x.time, static_cast<int>(x.kind), x.request);
      };
      ASSERT_LT(key(p), key(e));
    }
    if (e.kind == EventKind::arrival) {
      ASSERT_EQ(seen[e.request], 0);
      seen[e.request] = 1;
    } else {
      ASSERT_EQ(seen[e.request], 1);
      seen[e.request] = 2;
    }
  }
  for (RequestId id = 1; id <= ev.requests.size(); ++id) {
    EXPECT_EQ(seen[id], ev.request(id).unbounded() ? 1 : 2);
  }
}

TEST(Trace, ThreeRows) {
  const auto ev =
      parse_trace(kTrace, spec(), two_services(), three_layer(), params());
  ASSERT_EQ(ev.requests.size(), 3u);
  EXPECT_EQ(ev.events.size(), 5u);
  // Ids follow arrival order.
  EXPECT_DOUBLE_EQ(ev.request(2).arrival, 1.0);
  EXPECT_TRUE(ev.request(3).unbounded());
}

TEST(Trace, CrlfAndQuotes) {
  const std::string text =
      "arrival,duration,load,service\r\n0,1,1,\"s0\"\r\n\r\n";
  const auto ev = parse_trace(text, spec(), two_services(), three_layer(), params());
  EXPECT_EQ(ev.requests.size(), 1u);
}

TEST(Trace, TimeScaleHalves) {
  auto s = spec();
  s.time_scale = 0.5;
  const auto a = parse_trace(kTrace, spec(), two_services(), three_layer(), params());
  const auto b = parse_trace(kTrace, s, two_services(), three_layer(), params());
  ASSERT_EQ(a.events.size(), b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    EXPECT_DOUBLE_EQ(b.events[i].time, 0.5 * a.events[i].time);
  }
}

TEST(Trace, Errors) {
  EXPECT_EQ(trace_error_row("arrival,duration,load,service\n0,-1,1,s0\n",
                            Errc::parse_error),
            2u);
  EXPECT_EQ(trace_error_row("arrival,duration,load,service\n0,1,1,s0\n0,1,0.5,s0\n",
                            Errc::load_below_minimum),
            3u);
  EXPECT_EQ(trace_error_row("arrival,duration,load,service\n0,1,1,nope\n",
                            Errc::parse_error),
            2u);
  EXPECT_EQ(trace_error_row("arrival,duration,load,service\nx,1,1,s0\n",
                            Errc::parse_error),
            2u);
  EXPECT_EQ(trace_error_row("arrival,load,service\n", Errc::parse_error), 1u);
}

namespace {

const char* kScenario = R"({
  "name": "mini",
  "topology": {"reachability": "tree", "layers": [
    {"name": "edge", "nodes": 2, "d": 0, "kappa_f": 7.5, "kappa_p": 0.075},
    {"name": "cloud", "nodes": 1, "d": 30, "kappa_f": 1, "kappa_p": 0.01}]},
  "params": {"mu_bar": 100, "lambda_min": 1},
  "vnfs": [{"vnf_id": "a", "theta": 1}, {"vnf_id": "b", "theta": 2}],
  "services": [{"service_id": "s", "vnf_ids": ["a", "b"], "target_delay": 40}],
  "workload": {"kind": "phases", "leaves": "round_robin", "phases": [
    {"start": 0, "end": 10, "arrival_rate": 2, "duration": 3,
     "service_mix": {"s": 1}, "load": [1, 3]}]},
  "strategy": {"name": "c-reshare:0.5", "seed": 4},
  "output": {"horizon": 20}
})";

}  // namespace

TEST(Scenario, Parses) {
  const auto sc = parse_scenario(kScenario);
  EXPECT_EQ(sc.name, "mini");
  EXPECT_EQ(sc.topology.node_count(), 3u);
  EXPECT_EQ(sc.catalog.services[0].vnfs.size(), 2u);
  EXPECT_EQ(sc.strategy, "c-reshare:0.5");
  EXPECT_EQ(sc.seed, 4u);
  EXPECT_DOUBLE_EQ(sc.horizon, 20.0);
  EXPECT_EQ(build_events(sc, sc.seed).requests.size(), 20u);
}

TEST(Scenario, SyntaxErrorNamesLine) {
  std::string text = kScenario;
  text.replace(text.find("\"mu_bar\": 100"), 13, "\"mu_bar\": 1 00");
  try {
    parse_scenario(text);
    FAIL();
  } catch (const ScenarioError& e) {
    EXPECT_EQ(e.code(), Errc::parse_error);
    ASSERT_FALSE(e.violations().empty());
    EXPECT_EQ(e.violations()[0].where, "line 6");
  }
}

TEST(Scenario, CollectsViolations) {
  std::string text = kScenario;
  text.replace(text.find("\"b\", \"theta\": 2"), 15, "\"b\", \"theta\": 0");
  text.replace(text.find("[\"a\", \"b\"]"), 10, "[\"a\", \"zz\"]");
  try {
    parse_scenario(text);
    FAIL();
  } catch (const ScenarioError& e) {
    EXPECT_EQ(e.code(), Errc::invalid_scenario);
    EXPECT_GE(e.violations().size(), 2u);
  }
}

TEST(Scenario, MissingFile) {
  try {
    load_scenario("/nonexistent/dir/x.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::io_error);
  }
}
