#pragma once

#include <string>
#include <vector>

#include "sjfa/aging.hpp"
#include "sjfa/arrival.hpp"
#include "sjfa/measures.hpp"

namespace sjfa {

struct ExampleParams {
  double eta = 1.2;
  double lambda = 0.1;
  double c = 1.0;
};

/// A named closed-form configuration: its work arrivals, aging rule and
/// arrival path alpha. alpha comes from the closed form when the parameters
/// match it (c = 1 for the linear examples) and from quadrature of pi otherwise.
struct Example {
  std::string key;
  ExampleParams params;
  InstantaneousArrival arrival;
  AgingRule rule;
  MeasurePath alpha;
  bool closed_form = false;
};

/// Keys: uniform_linear, triangular_linear, pareto_linear, pareto_exponential.
Example make_example(const std::string& key, const ExampleParams& params, double horizon);
const std::vector<std::string>& example_keys();

}  // namespace sjfa
