#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "reshare/model.hpp"

namespace reshare::testing {

inline LayerSpec layer(std::string name, double d, double kf, double kp) {
  LayerSpec l;
  l.name = std::move(name);
  l.d = d;
  l.kappa_f = kf;
  l.kappa_p = kp;
  return l;
}

// d = (0, 15, 30) ms, proportional cost 1/100 of the fixed one.
inline Topology three_layer(std::vector<std::size_t> counts = {1, 1, 1},
                            Reachability mode = Reachability::full) {
  return Topology::layered({layer("edge", 0, 7.5, 0.075),
                            layer("aggregation", 15, 2.5, 0.025),
                            layer("cloud", 30, 1.0, 0.01)},
                           counts, mode);
}

inline SystemParams params(double mu_bar = 100.0, double lambda_min = 1.0) {
  SystemParams p;
  p.mu_bar = mu_bar;
  p.lambda_min = lambda_min;
  return p;
}

// One service per chain; VNF i gets thetas[i].
inline Catalog catalog(const std::vector<double>& thetas,
                       const std::vector<std::vector<VnfIndex>>& chains,
                       const std::vector<double>& targets) {
  Catalog c;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    c.vnfs.push_back({"v" + std::to_string(i), thetas[i]});
  }
  for (std::size_t s = 0; s < chains.size(); ++s) {
    c.services.push_back({"s" + std::to_string(s), chains[s], targets[s]});
  }
  return c;
}

inline Request request(RequestId id, ServiceIndex service, double load,
                       NodeId leaf = 0, double arrival = 0.0) {
  Request r;
  r.id = id;
  r.service = service;
  r.load = load;
  r.leaf = leaf;
  r.arrival = arrival;
  return r;
}

inline bool close_rel(double a, double b, double rel = 1e-9) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= rel * scale;
}

}  // namespace reshare::testing
