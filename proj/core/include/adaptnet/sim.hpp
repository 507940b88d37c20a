#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adaptnet/model.hpp"
#include "adaptnet/policy.hpp"
#include "adaptnet/strategy.hpp"

namespace adaptnet {

struct SimConfig {
  std::size_t trials = 100;
  std::size_t iters = 1000;
  std::uint64_t seed = 1;
  /// Fraction of the recorded points averaged for steady-state values.
  double steady_window = 0.1;
  /// Feed the centralized recursion the same samples as the network.
  bool paired_streams = false;
  /// Record every `record_stride`-th iteration.
  std::size_t record_stride = 1;
  /// Worker threads; 0 uses the hardware concurrency.
  unsigned workers = 0;

  void validate() const;
};

/// Trials are split into at most this many lanes (trial t goes to lane
/// t mod lanes). Lanes are summed in order, so results do not depend on the
/// worker count, and lane-level curves give batch-means error bars.
inline constexpr std::size_t kMaxLanes = 8;

inline constexpr double kDivergenceNorm = 1e12;

struct SteadyState {
  double mean = 0.0;
  double stderr_mean = 0.0;
};

/// Trial-averaged learning curves. Point j of every series corresponds to
/// iteration `iteration[j]` (the state after that many steps).
struct LearningCurves {
  std::size_t agents = 0;
  std::size_t dim = 0;
  std::size_t trials = 0;
  SimConfig config;
  Vector w_limit;
  std::vector<std::uint64_t> iteration;
  std::vector<std::vector<double>> msd;              ///< [agent][point] E||w* - w_k||^2
  std::vector<double> centralized_msd;               ///< E||w* - w_cent||^2
  std::vector<double> reference_err;                 ///< ||w* - wbar_c||^2
  std::vector<std::vector<double>> centroid_offset;  ///< [agent][point] E||w_k - w_c||^2
  std::vector<std::vector<double>> mean_error_sq;    ///< [agent][point] ||E(w* - w_k)||^2
  /// Per-lane averages, [lane][agent][point] and [lane][point].
  std::vector<std::vector<std::vector<double>>> lane_msd;
  std::vector<std::vector<double>> lane_centralized_msd;
  std::vector<std::size_t> lane_trials;
  /// Trial-level steady-state statistics over `config.steady_window`.
  std::vector<SteadyState> steady_msd;
  SteadyState steady_centralized;
  std::vector<SteadyState> steady_offset;
  std::vector<std::string> warnings;

  std::size_t points() const { return iteration.size(); }
};

struct RunInputs {
  const CombinationPolicy& policy;
  const PerronData& perron;
  const GradientModel& model;
  /// Defaults to every agent at zero.
  std::optional<NetworkState> initial;
  /// When set, the run warns if mu_max is within 10% of (or above) it.
  std::optional<double> step_bound;
};

/// Monte Carlo driver: every trial evolves the distributed, centralized and
/// reference recursions from its own counter-derived stream and the squared
/// errors against the limit point are averaged over trials. Throws
/// DivergenceError (lowest trial index first) if an iterate becomes
/// non-finite or exceeds kDivergenceNorm.
LearningCurves run(const RunInputs& inputs, const SimConfig& config);

/// Mean of the last ceil(window * size) points; stderr from their spread.
SteadyState steady_state_estimate(std::span<const double> curve, double window);

/// Agent k's steady MSD over `window` with the error bar from lane-to-lane
/// variation (trial-level batches).
SteadyState steady_state_estimate(const LearningCurves& curves, std::size_t agent,
                                  double window);
SteadyState steady_state_centralized(const LearningCurves& curves, double window);

/// Per-step ratio exp(slope) of a least-squares line through
/// log(series[i]), i in [i_start, i_end). Throws kDomain on nonpositive
/// values.
double fit_geometric_rate(std::span<const double> series, std::size_t i_start,
                          std::size_t i_end);

struct AgentDecomposition {
  double offset = 0.0;  ///< steady E||w_k - w_c||^2
  double msd = 0.0;
  double ratio = 0.0;   ///< offset / msd
  std::optional<double> ratio_half_mu;
  std::optional<double> response;  ///< ratio_half_mu / ratio (about 1/2)
};

struct DecompositionReport {
  std::vector<AgentDecomposition> agents;
  std::optional<double> mean_response;
};

/// Centroid-offset diagnostics; `half_mu` is a second run at half the step
/// size on the same network.
DecompositionReport decomposition_diagnostics(const LearningCurves& curves,
                                              const LearningCurves* half_mu = nullptr);

}  // namespace adaptnet
