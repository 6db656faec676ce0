#include "sjfa/examples.hpp"

#include "sjfa/errors.hpp"
#include "sjfa/fluid.hpp"
#include "sjfa/oracles.hpp"

namespace sjfa {

const std::vector<std::string>& example_keys() {
  static const std::vector<std::string> keys{"uniform_linear", "triangular_linear", "pareto_linear",
                                             "pareto_exponential"};
  return keys;
}

Example make_example(const std::string& key, const ExampleParams& p, double horizon) {
  using oracles::Which;
  const auto finish = [&](InstantaneousArrival arr, AgingRule rule, bool closed, MeasurePath::Eval eval) {
    MeasurePath alpha =
        closed ? MeasurePath::analytic(std::move(eval), horizon) : alpha_path_from_pi(arr, rule, horizon);
    return Example{key, p, std::move(arr), std::move(rule), std::move(alpha), closed};
  };
  const double eta = p.eta;
  const double lambda = p.lambda;
  if (key == "uniform_linear")
    return finish(InstantaneousArrival::uniform(), AgingRule::linear(p.c), p.c == 1.0,
                  [](double t, double x) { return oracles::uniform_linear(t, x, Which::alpha); });
  if (key == "triangular_linear")
    return finish(InstantaneousArrival::triangular_wave(), AgingRule::linear(p.c), p.c == 1.0,
                  [](double t, double x) { return oracles::triangular_alpha(t, x); });
  if (key == "pareto_linear")
    return finish(InstantaneousArrival::pareto(eta), AgingRule::linear(p.c), p.c == 1.0,
                  [eta](double t, double x) { return oracles::pareto_linear(t, x, Which::alpha, eta); });
  if (key == "pareto_exponential")
    return finish(InstantaneousArrival::pareto(eta), AgingRule::exponential(lambda), true,
                  [eta, lambda](double t, double x) {
                    return oracles::pareto_exponential(t, x, Which::alpha, eta, lambda);
                  });
  throw ConfigError("unknown example '" + key + "'");
}

}  // namespace sjfa
