#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "adaptnet/numerics.hpp"
#include "adaptnet/rng.hpp"

namespace adaptnet {

/// Streaming-data problem as seen by the strategy engines: per-agent mean
/// update vectors s_k(w), their sampled versions, and second-order data at
/// the limit point.
class GradientModel {
 public:
  virtual ~GradientModel() = default;

  virtual std::size_t agents() const = 0;
  virtual std::size_t dim() const = 0;

  /// Draws one fresh sample for agent k and writes the stochastic gradient
  /// at `w` into `out`. The number of random draws must not depend on `w`,
  /// so two engines fed copies of one stream consume it identically.
  virtual void sample_gradient(std::size_t k, std::span<const double> w, Rng& rng,
                               std::span<double> out) const = 0;

  virtual Vector true_gradient(std::size_t k, const Vector& w) const = 0;
  /// Jacobian of s_k at w.
  virtual Matrix jacobian(std::size_t k, const Vector& w) const = 0;
  /// Jacobian of s_k at the limit point.
  virtual Matrix hessian(std::size_t k) const = 0;
  /// Gradient-noise covariance R_{v,k} at the limit point.
  virtual Matrix noise_covariance(std::size_t k) const = 0;
};

struct LmsAgent {
  Matrix r_u;           ///< regressor covariance R_{u,k}
  double sigma_n2 = 0;  ///< measurement noise variance
};

/// d_k(i) = u_{k,i} w* + n_k(i) with Gaussian regressors u ~ N(0, R_{u,k})
/// and Gaussian noise n ~ N(0, sigma_n2).
class LinearModel final : public GradientModel {
 public:
  struct Sample {
    Vector u;
    double d = 0.0;
  };

  LinearModel(Vector w_star, std::vector<LmsAgent> agents);

  std::size_t agents() const override { return agents_.size(); }
  std::size_t dim() const override { return static_cast<std::size_t>(w_star_.size()); }
  const Vector& w_star() const { return w_star_; }
  const LmsAgent& agent(std::size_t k) const { return agents_.at(k); }
  const std::vector<LmsAgent>& agent_data() const { return agents_; }

  Sample sample(std::size_t k, Rng& rng) const;
  /// -2 u^T (d - u w)
  Vector stochastic_gradient(std::size_t k, const Vector& w, const Sample& s) const;

  void sample_gradient(std::size_t k, std::span<const double> w, Rng& rng,
                       std::span<double> out) const override;
  /// 2 R_{u,k} (w - w*)
  Vector true_gradient(std::size_t k, const Vector& w) const override;
  Matrix jacobian(std::size_t k, const Vector& w) const override;
  /// 2 R_{u,k}
  Matrix hessian(std::size_t k) const override;
  /// 4 sigma_n2 R_{u,k}
  Matrix noise_covariance(std::size_t k) const override;

  /// sigma_n2 + (w - w*)^T R_u (w - w*)
  double cost(std::size_t k, const Vector& w) const;

 private:
  void fill_regressor(std::size_t k, Rng& rng, std::span<double> u) const;

  Vector w_star_;
  std::vector<LmsAgent> agents_;
  std::vector<Matrix> factors_;  // F F^T = R_u
  std::vector<bool> identity_;
  std::vector<double> noise_sd_;
};

struct AssumptionConstants {
  double lambda_l = 0.0;
  double lambda_u = 0.0;
  double alpha = 0.0;
  double sigma_v2 = 0.0;
};

struct Observability {
  bool ok = false;
  double lambda_min = 0.0;
};

/// sum_k weights_k * hessian(k)
Matrix network_hessian(const GradientModel& model, const Vector& weights);

/// Block-diagonal network noise covariance, one M x M block per agent.
std::vector<Matrix> noise_blocks(const GradientModel& model);

/// lambda_min(sum_k p_k R_{u,k}) and whether it clears 1e-10.
Observability check_network_observability(const LinearModel& model, const Vector& p);

/// lambda_U = 2 max_k lambda_max(R_k); lambda_L = lambda_min(H_c);
/// alpha = 4 max_k [Tr(R_k)^2 + Tr(R_k^2)] (Gaussian bound on
/// E||R_k - u^T u||_F^2); sigma_v2 = 4 max_k sigma_k^2 Tr(R_k).
/// Throws kObservability when lambda_L <= 1e-10.
AssumptionConstants assumption_constants(const LinearModel& model, const Vector& p);

/// Solves sum_k p_k s_k(w) = 0 by damped Newton from w = 0. Throws
/// kObservability if the aggregate Jacobian is singular.
Vector limit_point(const GradientModel& model, const Vector& p, double tol = 1e-12,
                   int max_iter = 100);

/// sigma_n2 values log-uniform in [lo, hi].
Vector log_uniform_noise_profile(std::size_t n, double lo, double hi, std::uint64_t seed);

/// Standard normal entries from `seed`.
Vector random_parameter(std::size_t m, std::uint64_t seed);

/// Every agent gets R_u = I_M; sigma_n2 from `noise`.
LinearModel identity_regressor_model(const Vector& w_star, const Vector& noise);

}  // namespace adaptnet
