#include "sjfa/config.hpp"

#include <fstream>
#include <sstream>

#include "sjfa/errors.hpp"
#include "sjfa/fluid.hpp"
#include "sjfa/rng.hpp"

namespace sjfa {

using nlohmann::json;

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::fluid:
      return "fluid";
    case Mode::simulate:
      return "simulate";
    case Mode::compare:
      return "compare";
  }
  return "?";
}

namespace {

// Reader that tracks the JSON pointer of the node it looks at.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return j_; }
  bool has(const std::string& key) const { return j_.is_object() && j_.contains(key); }
  Node at(const std::string& key) const {
    if (!has(key)) fail(path_ + "/" + key, "is required");
    return {j_.at(key), path_ + "/" + key};
  }

  [[noreturn]] static void fail(const std::string& path, const std::string& what) {
    throw ConfigError("key " + (path.empty() ? std::string("/") : path) + " " + what);
  }
  [[noreturn]] void fail(const std::string& what) const { fail(path_, what); }

  double number() const {
    if (!j_.is_number()) fail("must be a number");
    return j_.get<double>();
  }
  double positive() const {
    const double v = number();
    if (!(v > 0.0)) fail("must be positive");
    return v;
  }
  std::int64_t integer() const {
    if (!j_.is_number_integer()) fail("must be an integer");
    return j_.get<std::int64_t>();
  }
  std::uint64_t u64() const {
    if (!j_.is_number_unsigned() && !(j_.is_number_integer() && j_.get<std::int64_t>() >= 0))
      fail("must be a nonnegative integer");
    return j_.get<std::uint64_t>();
  }
  std::string string() const {
    if (!j_.is_string()) fail("must be a string");
    return j_.get<std::string>();
  }
  std::vector<double> numbers() const {
    if (!j_.is_array()) fail("must be an array of numbers");
    std::vector<double> out;
    for (std::size_t k = 0; k < j_.size(); ++k) out.push_back(Node(j_[k], path_ + "/" + std::to_string(k)).number());
    return out;
  }

 private:
  const json& j_;
  std::string path_;
};

void check_keys(const Node& n, std::initializer_list<const char*> allowed) {
  if (!n.raw().is_object()) n.fail("must be an object");
  for (const auto& [key, value] : n.raw().items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) Node::fail(n.path() + "/" + key, "is not a recognised key");
  }
}

Grid read_grid(const Node& n) {
  Grid g;
  if (n.raw().is_array()) {
    g = n.numbers();
  } else {
    check_keys(n, {"start", "stop", "count"});
    const std::int64_t count = n.at("count").integer();
    if (count < 1) n.at("count").fail("must be >= 1");
    g = linspace(n.at("start").number(), n.at("stop").number(), static_cast<std::size_t>(count));
  }
  if (g.empty()) n.fail("must be nonempty");
  if (!is_sorted_strict(g)) n.fail("must be strictly increasing");
  return g;
}

}  // namespace

RunConfig RunConfig::from_json(const json& j, const std::filesystem::path& base_dir) {
  const Node root(j, "");
  check_keys(root, {"mode", "arrival", "aging", "service", "horizon", "grids", "fluid", "n_scale", "seed", "rng",
                    "trace", "compare", "threads"});
  RunConfig c;

  const std::string mode = root.at("mode").string();
  if (mode == "fluid") {
    c.mode = Mode::fluid;
  } else if (mode == "simulate") {
    c.mode = Mode::simulate;
  } else if (mode == "compare") {
    c.mode = Mode::compare;
  } else {
    root.at("mode").fail("must be one of fluid, simulate, compare");
  }

  if (root.has("rng") && root.at("rng").string() != SplitMix64::kName)
    root.at("rng").fail(std::string("names an unsupported generator; only ") + SplitMix64::kName + " is available");

  c.horizon = root.at("horizon").positive();

  if (root.has("arrival")) {
    const Node a = root.at("arrival");
    if (a.raw().is_string()) {
      const std::string s = a.string();
      if (s == "none") {
        c.arrival.kind = ArrivalSpec::Kind::none;
      } else {
        c.arrival.kind = ArrivalSpec::Kind::example;
        c.arrival.example = s;
      }
    } else {
      check_keys(a, {"example", "eta", "lambda", "c", "table", "none"});
      if (a.has("example")) {
        c.arrival.kind = ArrivalSpec::Kind::example;
        c.arrival.example = a.at("example").string();
      } else if (a.has("table")) {
        c.arrival.kind = ArrivalSpec::Kind::table;
        const Node t = a.at("table");
        check_keys(t, {"x", "mass"});
        c.arrival.table_x = t.at("x").numbers();
        c.arrival.table_mass = t.at("mass").numbers();
        if (c.arrival.table_x.size() != c.arrival.table_mass.size() || c.arrival.table_x.size() < 2)
          t.fail("needs x and mass arrays of equal length >= 2");
      } else if (a.has("none")) {
        c.arrival.kind = ArrivalSpec::Kind::none;
      } else {
        a.fail("needs one of example, table, none");
      }
      if (a.has("eta")) c.arrival.params.eta = a.at("eta").number();
      if (a.has("lambda")) c.arrival.params.lambda = a.at("lambda").positive();
      if (a.has("c")) c.arrival.params.c = a.at("c").number();
    }
    if (c.arrival.kind == ArrivalSpec::Kind::example) {
      bool known = false;
      for (const auto& k : example_keys()) known = known || k == c.arrival.example;
      if (!known) root.at("arrival").fail("names unknown example '" + c.arrival.example + "'");
      if (c.arrival.example == "pareto_linear" || c.arrival.example == "pareto_exponential") {
        if (!(c.arrival.params.eta > 1.0)) root.at("arrival").fail("needs eta > 1 for Pareto work");
      }
    }
  }

  if (root.has("aging")) {
    const Node a = root.at("aging");
    check_keys(a, {"kind", "c", "lambda"});
    c.aging.given = true;
    c.aging.kind = a.at("kind").string();
    if (c.aging.kind == "linear") {
      c.aging.c = a.at("c").number();
      if (c.aging.c < 0.0) a.at("c").fail("must be >= 0");
    } else if (c.aging.kind == "exponential") {
      c.aging.lambda = a.at("lambda").positive();
    } else {
      a.at("kind").fail("must be linear or exponential (custom rules are programmatic only)");
    }
    if (c.arrival.kind == ArrivalSpec::Kind::example) {
      const bool exp_example = c.arrival.example == "pareto_exponential";
      if (exp_example != (c.aging.kind == "exponential"))
        a.at("kind").fail("conflicts with the aging rule of example '" + c.arrival.example + "'");
      if (exp_example) {
        c.arrival.params.lambda = c.aging.lambda;
      } else {
        c.arrival.params.c = c.aging.c;
      }
    }
  }

  if (root.has("service")) {
    const Node s = root.at("service");
    check_keys(s, {"rate"});
    const Node r = s.at("rate");
    if (r.raw().is_number()) {
      c.service_starts = {0.0};
      c.service_rates = {r.positive()};
    } else {
      check_keys(r, {"starts", "rates"});
      c.service_starts = r.at("starts").numbers();
      c.service_rates = r.at("rates").numbers();
      if (c.service_starts.empty() || c.service_starts.size() != c.service_rates.size())
        r.fail("needs starts and rates arrays of equal nonzero length");
      if (c.service_starts.front() != 0.0) r.at("starts").fail("must begin at 0");
      if (!is_sorted_strict(c.service_starts)) r.at("starts").fail("must be strictly increasing");
      for (std::size_t k = 0; k < c.service_rates.size(); ++k)
        if (!(c.service_rates[k] > 0.0)) r.at("rates").fail("must all be positive");
    }
  }

  if (root.has("grids")) {
    const Node g = root.at("grids");
    check_keys(g, {"t", "x", "levels"});
    if (g.has("t")) c.tgrid = read_grid(g.at("t"));
    if (g.has("x")) c.xgrid = read_grid(g.at("x"));
    if (g.has("levels")) c.levels = read_grid(g.at("levels"));
  }
  if (c.tgrid.empty()) c.tgrid = linspace(0.0, c.horizon, 101);
  if (c.xgrid.empty()) c.xgrid = linspace(-c.horizon - 0.5, 2.0, 201);
  if (c.tgrid.front() < 0.0 || c.tgrid.back() > c.horizon * (1.0 + 1e-12))
    Node::fail("/grids/t", "must lie inside [0, horizon]");

  if (root.has("fluid")) {
    const Node f = root.at("fluid");
    check_keys(f, {"step"});
    if (f.has("step")) c.fluid_step = f.at("step").positive();
  }

  if (root.has("n_scale")) {
    const std::int64_t n = root.at("n_scale").integer();
    if (n < 1) root.at("n_scale").fail("must be >= 1");
    c.n_scale = static_cast<int>(n);
  }
  if (root.has("seed")) c.seed = root.at("seed").u64();
  if (root.has("threads")) {
    const std::int64_t t = root.at("threads").integer();
    if (t < 1) root.at("threads").fail("must be >= 1");
    c.threads = static_cast<unsigned>(t);
  }
  if (root.has("trace")) {
    std::filesystem::path p = root.at("trace").string();
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    c.trace = p.string();
  }

  if (root.has("compare")) {
    const Node cmp = root.at("compare");
    check_keys(cmp, {"n_list", "replications", "fluid_ref"});
    if (cmp.has("n_list")) {
      for (double v : cmp.at("n_list").numbers()) {
        if (!(v >= 1.0) || v != static_cast<double>(static_cast<int>(v))) cmp.at("n_list").fail("must hold integers >= 1");
        c.n_list.push_back(static_cast<int>(v));
      }
    }
    if (cmp.has("replications")) {
      const std::int64_t r = cmp.at("replications").integer();
      if (r < 1) cmp.at("replications").fail("must be >= 1");
      c.replications = static_cast<int>(r);
    }
    if (cmp.has("fluid_ref")) {
      c.fluid_ref = cmp.at("fluid_ref").string();
      if (c.fluid_ref != "solve") {
        std::filesystem::path p = c.fluid_ref;
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        c.fluid_ref = p.string();
      }
    }
  }

  // Mode-specific requirements.
  if (c.mode == Mode::compare) {
    if (c.n_list.empty()) Node::fail("/compare/n_list", "is required in compare mode");
    if (c.fluid_ref.empty()) Node::fail("/compare/fluid_ref", "is required in compare mode (\"solve\" or a fluid CSV)");
    if (c.tgrid.front() != 0.0) Node::fail("/grids/t", "must start at 0 in compare mode");
  }
  if (c.mode == Mode::simulate || c.mode == Mode::compare) {
    if (c.arrival.kind == ArrivalSpec::Kind::none && c.trace.empty() && !root.has("arrival"))
      Node::fail("/arrival", "is required to simulate (or give /trace)");
    if (c.mode == Mode::simulate && c.tgrid.front() != 0.0) Node::fail("/grids/t", "must start at 0 in simulate mode");
  }
  if (c.mode == Mode::fluid && !root.has("arrival")) Node::fail("/arrival", "is required in fluid mode");
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return from_json(j, path.parent_path());
}

json RunConfig::to_json() const {
  json j;
  j["mode"] = mode_name(mode);
  j["rng"] = SplitMix64::kName;
  j["horizon"] = horizon;
  switch (arrival.kind) {
    case ArrivalSpec::Kind::example:
      j["arrival"] = {{"example", arrival.example},
                      {"eta", arrival.params.eta},
                      {"lambda", arrival.params.lambda},
                      {"c", arrival.params.c}};
      break;
    case ArrivalSpec::Kind::table:
      j["arrival"] = {{"table", {{"x", arrival.table_x}, {"mass", arrival.table_mass}}}};
      break;
    case ArrivalSpec::Kind::none:
      j["arrival"] = {{"none", true}};
      break;
  }
  if (aging.given) {
    if (aging.kind == "linear") {
      j["aging"] = {{"kind", "linear"}, {"c", aging.c}};
    } else {
      j["aging"] = {{"kind", "exponential"}, {"lambda", aging.lambda}};
    }
  }
  j["service"] = {{"rate", {{"starts", service_starts}, {"rates", service_rates}}}};
  j["grids"] = {{"t", tgrid}, {"x", xgrid}};
  if (!levels.empty()) j["grids"]["levels"] = levels;
  if (fluid_step > 0.0) j["fluid"] = {{"step", fluid_step}};
  j["n_scale"] = n_scale;
  j["seed"] = seed;
  j["threads"] = threads;
  if (!trace.empty()) j["trace"] = std::filesystem::absolute(trace).string();
  if (mode == Mode::compare || !n_list.empty()) {
    j["compare"] = {{"n_list", n_list}, {"replications", replications}};
    if (!fluid_ref.empty())
      j["compare"]["fluid_ref"] = fluid_ref == "solve" ? fluid_ref : std::filesystem::absolute(fluid_ref).string();
  }
  return j;
}

Model build_model(const RunConfig& cfg) {
  ServiceProfile service = cfg.service_rates.size() == 1 ? ServiceProfile::constant(cfg.service_rates.front())
                                                         : ServiceProfile::piecewise(cfg.service_starts, cfg.service_rates);
  AgingRule rule = cfg.aging.kind == "exponential" ? AgingRule::exponential(cfg.aging.lambda)
                                                   : AgingRule::linear(cfg.aging.c);
  switch (cfg.arrival.kind) {
    case ArrivalSpec::Kind::example: {
      Example e = make_example(cfg.arrival.example, cfg.arrival.params, cfg.horizon);
      return {std::move(e.arrival), std::move(e.rule), std::move(service), std::move(e.alpha), e.closed_form};
    }
    case ArrivalSpec::Kind::table: {
      InstantaneousArrival arr = InstantaneousArrival::piecewise_linear(cfg.arrival.table_x, cfg.arrival.table_mass);
      MeasurePath alpha = alpha_path_from_pi(arr, rule, cfg.horizon);
      return {std::move(arr), std::move(rule), std::move(service), std::move(alpha), false};
    }
    case ArrivalSpec::Kind::none:
      break;
  }
  return {InstantaneousArrival::none(), std::move(rule), std::move(service), MeasurePath::zero(cfg.horizon), true};
}

SimConfig sim_config(const RunConfig& cfg, const Model& model) {
  SimConfig s;
  s.n_scale = cfg.n_scale;
  s.arrival = model.arrival;
  s.service = model.service;
  s.rule = model.rule;
  s.horizon = cfg.horizon;
  s.seed = cfg.seed;
  if (!cfg.trace.empty()) {
    std::ifstream in(cfg.trace);
    if (!in) throw ConfigError("cannot open trace file " + cfg.trace);
    s.trace = read_trace_csv(in);
    if (s.trace.empty()) throw ConfigError("trace file " + cfg.trace + " has no jobs");
  }
  return s;
}

}  // namespace sjfa
