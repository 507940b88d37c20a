#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "adaptnet/model.hpp"
#include "adaptnet/policy.hpp"
#include "adaptnet/rng.hpp"

namespace adaptnet {

/// Per-agent iterates w_{k,i}, stored agent-major (agent k occupies
/// w[k*dim, (k+1)*dim)).
struct NetworkState {
  std::size_t agents = 0;
  std::size_t dim = 0;
  std::vector<double> w;
  std::uint64_t iter = 0;

  /// Every agent starts at `w0`.
  static NetworkState uniform(std::size_t agents, const Vector& w0);
  static NetworkState zeros(std::size_t agents, std::size_t dim);

  std::span<double> agent(std::size_t k) { return {w.data() + k * dim, dim}; }
  std::span<const double> agent(std::size_t k) const { return {w.data() + k * dim, dim}; }
  Vector agent_vector(std::size_t k) const;
};

struct CentralState {
  Vector w;
  std::uint64_t iter = 0;
};

struct ReferenceState {
  Vector w;
  std::uint64_t iter = 0;
};

/// Reusable stepping engine for the general three-matrix recursion
///   phi_k = sum_l a1(l,k) w_l
///   psi_k = sum_l a0(l,k) phi_l - mu_k * shat_k(phi_k)
///   w_k   = sum_l a2(l,k) psi_l
/// Combination matrices are stored as sparse columns; identity factors are
/// skipped. One sample per agent per step is drawn in agent order 0..N-1.
class DistributedEngine {
 public:
  DistributedEngine(const CombinationPolicy& policy, const PerronData& perron,
                    const GradientModel& model);

  void step(NetworkState& state, Rng& rng);

  std::size_t agents() const { return n_; }
  std::size_t dim() const { return m_; }

 private:
  struct Combiner {
    bool identity = true;
    std::vector<std::vector<std::pair<std::size_t, double>>> cols;
  };
  static Combiner make_combiner(const Matrix& a);
  void combine(const Combiner& c, const std::vector<double>& in, std::vector<double>& out) const;

  const GradientModel* model_;
  std::size_t n_;
  std::size_t m_;
  std::vector<double> mus_;
  Combiner c1_, c0_, c2_;
  std::vector<double> phi_, psi_, grad_, tmp_;
};

/// w_cent <- w_cent - mu_max * sum_k p_k shat_k(w_cent), one sample per agent.
class CentralizedEngine {
 public:
  CentralizedEngine(const PerronData& perron, const GradientModel& model);
  void step(CentralState& state, Rng& rng);

 private:
  const GradientModel* model_;
  double mu_max_;
  std::vector<double> p_;
  std::vector<double> grad_, acc_;
};

NetworkState step_distributed(const NetworkState& state, const CombinationPolicy& policy,
                              const PerronData& perron, const GradientModel& model, Rng& rng);

CentralState step_centralized(const CentralState& state, const PerronData& perron,
                              const GradientModel& model, Rng& rng);

/// Deterministic recursion w <- w - mu_max * sum_k p_k s_k(w) on true gradients.
ReferenceState step_reference(const ReferenceState& state, const PerronData& perron,
                              const GradientModel& model);

/// sum_k theta_k w_{k,0}
ReferenceState reference_init(const NetworkState& initial, const Vector& theta);

}  // namespace adaptnet
