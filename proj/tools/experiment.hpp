#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adaptnet/model.hpp"
#include "adaptnet/policy.hpp"
#include "adaptnet/serialization.hpp"
#include "adaptnet/sim.hpp"
#include "adaptnet/theory.hpp"
#include "adaptnet/topology.hpp"

namespace adaptnet::cli {

struct TopologySpec {
  std::string kind = "ring";  ///< ring | complete | path | star | geometric | edges
  std::size_t n = 1;
  double radius = 0.0;
  std::vector<Edge> edges;
};

struct NoiseSpec {
  std::string profile = "log_uniform";  ///< log_uniform | values
  double lo = 1e-3;
  double hi = 1e-1;
  std::vector<double> values;
};

struct ModelSpec {
  std::string kind = "identity";  ///< identity | explicit
  std::size_t m = 1;
  std::vector<double> w_star;  ///< empty: drawn from the top-level seed
  NoiseSpec noise;
  Json explicit_model;  ///< kind == explicit: {"M", "w_star", "agents"}
};

struct PolicySpec {
  /// metropolis | uniform_averaging | hastings | hastings_optimal | matrix
  std::string rule = "metropolis";
  std::vector<double> target;
  Json matrix;
};

struct StepSpec {
  double mu = 1e-3;
  std::vector<double> mus;  ///< per-agent override
};

struct OutputSpec {
  std::string curves = "curves.csv";
  std::string report = "report.json";
  std::string theory = "theory.json";
};

/// Everything one experiment needs; all randomness derives from `seed`.
struct ExperimentConfig {
  std::string name = "experiment";
  std::uint64_t seed = 1;
  TopologySpec topology;
  std::vector<TopologySpec> compare_topologies;
  ModelSpec model;
  PolicySpec policy;
  StrategyKind strategy = StrategyKind::kAtc;
  StepSpec step;
  SimConfig sim;  ///< sim.iters == 0 sizes the run automatically
  bool allow_unstable = false;
  OutputSpec outputs;
};

/// Throws Error(kConfig) on schema violations.
ExperimentConfig config_from_json(const Json& j);
Json to_json(const ExperimentConfig& c);
ExperimentConfig load_config(const std::string& path);

/// Fully built network for one topology.
struct Experiment {
  Topology topology;
  LinearModel model;
  CombinationPolicy policy;
  PerronData perron;
  TheoryReport theory;
  SimConfig sim;  ///< iters resolved
};

Topology build_topology(const TopologySpec& spec, std::uint64_t seed);
LinearModel build_model(const ExperimentConfig& c, std::size_t agents);
Experiment build_experiment(const ExperimentConfig& c, const TopologySpec& topology);
inline Experiment build_experiment(const ExperimentConfig& c) {
  return build_experiment(c, c.topology);
}

/// ceil(20 / (mu_max * lambda_L) / (1 - window)): twenty time constants
/// before the steady-state window opens.
std::size_t auto_iterations(double mu_max, double lambda_l, double window);

/// Theory block shared by `theory` and `run`.
Json theory_json(const Experiment& e);

ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace adaptnet::cli
