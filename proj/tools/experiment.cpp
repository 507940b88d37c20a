#include "experiment.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "adaptnet/error.hpp"
#include "adaptnet/rng.hpp"

namespace adaptnet::cli {
namespace {

constexpr std::uint64_t kTopologySalt = 0x101;
constexpr std::uint64_t kParameterSalt = 0x202;
constexpr std::uint64_t kNoiseSalt = 0x303;

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::kConfig, msg); }

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

TopologySpec topology_spec_from_json(const Json& j) {
  TopologySpec s;
  s.kind = get_or<std::string>(j, "kind", j.contains("edges") ? "edges" : "ring");
  s.n = j.at("n").get<std::size_t>();
  if (s.kind == "geometric") {
    s.radius = j.at("radius").get<double>();
  } else if (s.kind == "edges") {
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) config_error("edge must be [i, j]");
      s.edges.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
    }
  } else if (s.kind != "ring" && s.kind != "complete" && s.kind != "path" && s.kind != "star") {
    config_error("unknown topology kind '" + s.kind + "'");
  }
  if (s.n == 0) config_error("topology needs n >= 1");
  return s;
}

Json to_json(const TopologySpec& s) {
  Json j = {{"kind", s.kind}, {"n", s.n}};
  if (s.kind == "geometric") j["radius"] = s.radius;
  if (s.kind == "edges") {
    Json e = Json::array();
    for (const auto& [a, b] : s.edges) e.push_back({a, b});
    j["edges"] = e;
  }
  return j;
}

}  // namespace

ExperimentConfig config_from_json(const Json& j) {
  try {
    ExperimentConfig c;
    if (!j.is_object()) config_error("config must be a JSON object");
    c.name = get_or<std::string>(j, "name", c.name);
    c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
    c.topology = topology_spec_from_json(j.at("topology"));
    if (j.contains("compare_topologies")) {
      for (const auto& t : j.at("compare_topologies")) {
        c.compare_topologies.push_back(topology_spec_from_json(t));
        if (c.compare_topologies.back().n != c.topology.n) {
          config_error("compare_topologies must cover the same agents");
        }
      }
    }

    const Json& m = j.at("model");
    c.model.kind = get_or<std::string>(m, "kind", "identity");
    if (c.model.kind == "identity") {
      c.model.m = m.at("M").get<std::size_t>();
      if (c.model.m == 0) config_error("model M must be positive");
      if (m.contains("w_star")) c.model.w_star = m.at("w_star").get<std::vector<double>>();
      if (!c.model.w_star.empty() && c.model.w_star.size() != c.model.m) {
        config_error("w_star length differs from M");
      }
      const Json& n = m.at("noise");
      c.model.noise.profile = get_or<std::string>(n, "profile", "log_uniform");
      if (c.model.noise.profile == "log_uniform") {
        c.model.noise.lo = get_or<double>(n, "min", c.model.noise.lo);
        c.model.noise.hi = get_or<double>(n, "max", c.model.noise.hi);
        if (!(c.model.noise.lo > 0.0 && c.model.noise.hi >= c.model.noise.lo)) {
          config_error("noise range needs 0 < min <= max");
        }
      } else if (c.model.noise.profile == "values") {
        c.model.noise.values = n.at("values").get<std::vector<double>>();
        if (c.model.noise.values.size() != c.topology.n) config_error("noise values must list one variance per agent");
      } else {
        config_error("unknown noise profile '" + c.model.noise.profile + "'");
      }
    } else if (c.model.kind == "explicit") {
      c.model.explicit_model = m;
      c.model.explicit_model.erase("kind");
      c.model.m = m.at("M").get<std::size_t>();
    } else {
      config_error("unknown model kind '" + c.model.kind + "'");
    }

    const Json& p = j.at("policy");
    c.policy.rule = p.at("rule").get<std::string>();
    if (c.policy.rule == "hastings") {
      c.policy.target = p.at("target").get<std::vector<double>>();
    } else if (c.policy.rule == "matrix") {
      c.policy.matrix = p.at("A");
    } else if (c.policy.rule != "metropolis" && c.policy.rule != "uniform_averaging" &&
               c.policy.rule != "hastings_optimal") {
      config_error("unknown policy rule '" + c.policy.rule + "'");
    }

    c.strategy = strategy_from_string(get_or<std::string>(j, "strategy", "atc"));
    if (c.strategy == StrategyKind::kCustom) config_error("strategy must be consensus, atc or cta");

    const Json& s = j.at("step_size");
    if (s.contains("mus")) {
      c.step.mus = s.at("mus").get<std::vector<double>>();
      if (c.step.mus.size() != c.topology.n) config_error("mus must list one step size per agent");
    } else {
      c.step.mu = s.at("mu").get<double>();
      if (!(c.step.mu > 0.0)) config_error("mu must be positive");
    }

    if (j.contains("sim")) {
      const Json& sim = j.at("sim");
      c.sim.trials = get_or<std::size_t>(sim, "trials", c.sim.trials);
      c.sim.iters = get_or<std::size_t>(sim, "iters", 0);
      c.sim.steady_window = get_or<double>(sim, "steady_window", c.sim.steady_window);
      c.sim.paired_streams = get_or<bool>(sim, "paired_streams", c.sim.paired_streams);
      c.sim.record_stride = get_or<std::size_t>(sim, "record_stride", c.sim.record_stride);
      c.sim.workers = get_or<unsigned>(sim, "workers", c.sim.workers);
    } else {
      c.sim.iters = 0;
    }
    c.sim.seed = c.seed;
    c.allow_unstable = get_or<bool>(j, "allow_unstable", false);
    if (j.contains("outputs")) {
      const Json& o = j.at("outputs");
      c.outputs.curves = get_or<std::string>(o, "curves", c.outputs.curves);
      c.outputs.report = get_or<std::string>(o, "report", c.outputs.report);
      c.outputs.theory = get_or<std::string>(o, "theory", c.outputs.theory);
    }
    return c;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kConfig) throw;
    throw Error(ErrorKind::kConfig, e.what());
  } catch (const std::exception& e) {
    throw Error(ErrorKind::kConfig, std::string("malformed config: ") + e.what());
  }
}

Json to_json(const ExperimentConfig& c) {
  Json j;
  j["name"] = c.name;
  j["seed"] = c.seed;
  j["topology"] = to_json(c.topology);
  if (!c.compare_topologies.empty()) {
    Json arr = Json::array();
    for (const auto& t : c.compare_topologies) arr.push_back(to_json(t));
    j["compare_topologies"] = arr;
  }
  if (c.model.kind == "explicit") {
    Json m = c.model.explicit_model;
    m["kind"] = "explicit";
    j["model"] = m;
  } else {
    Json m = {{"kind", "identity"}, {"M", c.model.m}};
    if (!c.model.w_star.empty()) m["w_star"] = c.model.w_star;
    if (c.model.noise.profile == "values") {
      m["noise"] = {{"profile", "values"}, {"values", c.model.noise.values}};
    } else {
      m["noise"] = {{"profile", "log_uniform"}, {"min", c.model.noise.lo}, {"max", c.model.noise.hi}};
    }
    j["model"] = m;
  }
  Json p = {{"rule", c.policy.rule}};
  if (c.policy.rule == "hastings") p["target"] = c.policy.target;
  if (c.policy.rule == "matrix") p["A"] = c.policy.matrix;
  j["policy"] = p;
  j["strategy"] = std::string(to_string(c.strategy));
  j["step_size"] = c.step.mus.empty() ? Json{{"mu", c.step.mu}} : Json{{"mus", c.step.mus}};
  j["sim"] = {{"trials", c.sim.trials},
              {"iters", c.sim.iters},
              {"steady_window", c.sim.steady_window},
              {"paired_streams", c.sim.paired_streams},
              {"record_stride", c.sim.record_stride},
              {"workers", c.sim.workers}};
  j["allow_unstable"] = c.allow_unstable;
  j["outputs"] = {{"curves", c.outputs.curves}, {"report", c.outputs.report}, {"theory", c.outputs.theory}};
  return j;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    config_error("cannot parse '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

Topology build_topology(const TopologySpec& spec, std::uint64_t seed) {
  if (spec.kind == "ring") return ring(spec.n);
  if (spec.kind == "complete") return complete(spec.n);
  if (spec.kind == "path") return path(spec.n);
  if (spec.kind == "star") return star(spec.n);
  if (spec.kind == "geometric") {
    return random_geometric(spec.n, spec.radius, stream_seed(seed, 0, kTopologySalt));
  }
  return Topology::from_edges(spec.n, spec.edges);
}

LinearModel build_model(const ExperimentConfig& c, std::size_t agents) {
  if (c.model.kind == "explicit") {
    LinearModel m = model_from_json(c.model.explicit_model);
    if (m.agents() != agents) config_error("model agent count differs from topology");
    return m;
  }
  Vector w_star;
  if (c.model.w_star.empty()) {
    w_star = random_parameter(c.model.m, stream_seed(c.seed, 0, kParameterSalt));
  } else {
    w_star = Eigen::Map<const Vector>(c.model.w_star.data(), static_cast<Eigen::Index>(c.model.w_star.size()));
  }
  Vector noise;
  if (c.model.noise.profile == "values") {
    noise = Eigen::Map<const Vector>(c.model.noise.values.data(), static_cast<Eigen::Index>(agents));
  } else {
    noise = log_uniform_noise_profile(agents, c.model.noise.lo, c.model.noise.hi,
                                      stream_seed(c.seed, 0, kNoiseSalt));
  }
  return identity_regressor_model(w_star, noise);
}

std::size_t auto_iterations(double mu_max, double lambda_l, double window) {
  const double t = 20.0 / (mu_max * lambda_l) / (1.0 - window);
  return std::max<std::size_t>(10, static_cast<std::size_t>(std::ceil(t)));
}

Experiment build_experiment(const ExperimentConfig& c, const TopologySpec& spec) {
  Topology topology = build_topology(spec, c.seed);
  LinearModel model = build_model(c, topology.size());
  const auto n = static_cast<Eigen::Index>(topology.size());
  Vector mus = c.step.mus.empty()
                   ? Vector::Constant(n, c.step.mu)
                   : Vector(Eigen::Map<const Vector>(c.step.mus.data(), n));

  Matrix a;
  const auto& rule = c.policy.rule;
  if (rule == "metropolis") {
    a = build_metropolis(topology);
  } else if (rule == "uniform_averaging") {
    a = build_uniform_averaging(topology);
  } else if (rule == "hastings") {
    if (static_cast<Eigen::Index>(c.policy.target.size()) != n) config_error("Hastings target needs one entry per agent");
    a = build_hastings(topology, Eigen::Map<const Vector>(c.policy.target.data(), n));
  } else if (rule == "hastings_optimal") {
    std::vector<Matrix> hessians;
    for (std::size_t k = 0; k < model.agents(); ++k) hessians.push_back(model.hessian(k));
    const auto opt = optimal_theta(hessians, noise_blocks(model), mus.maxCoeff());
    a = build_hastings(topology, opt.theta);
  } else {
    a = matrix_from_json(c.policy.matrix);
  }
  CombinationPolicy policy = assemble(c.strategy, a, topology);
  PerronData perron = perron_data(policy, mus);
  TheoryReport theory = analyze(policy, perron, model);
  SimConfig sim = c.sim;
  sim.seed = c.seed;
  if (sim.iters == 0) sim.iters = auto_iterations(perron.mu_max, theory.constants.lambda_l, sim.steady_window);
  return {std::move(topology), std::move(model), std::move(policy), std::move(perron),
          std::move(theory), sim};
}

Json theory_json(const Experiment& e) {
  Json j = to_json(e.theory);
  j["strategy"] = std::string(to_string(e.policy.kind));
  j["agents"] = e.topology.size();
  j["M"] = e.model.dim();
  j["stable"] = e.theory.mu_max < e.theory.mu_bound;
  return j;
}

std::vector<std::string> preset_names() { return {"fig4", "partial_obs", "topology_invariance"}; }

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  if (name == "fig4") {
    c.seed = 30;
    c.topology = {"geometric", 30, 0.35, {}};
    c.model.kind = "identity";
    c.model.m = 10;
    c.model.noise = {"log_uniform", 1e-3, 1e-1, {}};
    c.policy.rule = "hastings_optimal";
    c.strategy = StrategyKind::kAtc;
    c.step.mu = 5e-4;
    c.sim.trials = 200;
    c.sim.iters = 0;
    c.sim.record_stride = 10;
  } else if (name == "partial_obs") {
    c.seed = 37;
    c.topology = {"complete", 2, 0.0, {}};
    c.model.kind = "explicit";
    c.model.m = 2;
    c.model.explicit_model = {
        {"M", 2},
        {"w_star", {0.8, -0.6}},
        {"agents",
         {{{"R_u", {{1.0, 0.0}, {0.0, 0.0}}}, {"sigma_n2", 0.01}},
          {{"R_u", {{0.0, 0.0}, {0.0, 1.0}}}, {"sigma_n2", 0.04}}}}};
    c.policy.rule = "metropolis";
    c.strategy = StrategyKind::kAtc;
    c.step.mu = 1e-3;
    c.sim.trials = 200;
    c.sim.iters = 0;
  } else if (name == "topology_invariance") {
    c.seed = 8;
    c.topology = {"ring", 10, 0.0, {}};
    c.compare_topologies = {{"geometric", 10, 0.5, {}}};
    c.model.kind = "identity";
    c.model.m = 5;
    c.model.noise = {"log_uniform", 1e-3, 1e-1, {}};
    c.policy.rule = "hastings_optimal";
    c.strategy = StrategyKind::kAtc;
    c.step.mu = 5e-4;
    c.sim.trials = 100;
    c.sim.iters = 0;
  } else {
    config_error("unknown preset '" + name + "'");
  }
  c.sim.seed = c.seed;
  return c;
}

}  // namespace adaptnet::cli
