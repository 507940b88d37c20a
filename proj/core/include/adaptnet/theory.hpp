#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adaptnet/model.hpp"
#include "adaptnet/policy.hpp"

namespace adaptnet {

/// sum_k p_k^2 R_{v,k}: the aggregate (p^T (x) I) R_v (p (x) I) for a
/// block-diagonal network noise covariance.
Matrix aggregate_noise(const std::vector<Matrix>& rv_blocks, const Vector& p);

/// First-order steady-state weighted MSE, mu_max * Tr(X * sum_k p_k^2 R_{v,k})
/// where H_c^T X + X H_c = sigma. Higher-order terms in mu_max are not
/// modeled.
double predict_weighted_mse(const Matrix& hc, const std::vector<Matrix>& rv_blocks,
                            const Vector& p, double mu_max, const Matrix& sigma);

/// Sigma = I specialization using X = H_c^{-1} / 2 directly.
double predict_msd_identity(const Matrix& hc, const std::vector<Matrix>& rv_blocks,
                            const Vector& p, double mu_max);

/// Centralized recursion's first-order weighted MSE; identical to the
/// distributed prediction at this order.
double predict_centralized_mse(const Matrix& hc, const std::vector<Matrix>& rv_blocks,
                               const Vector& p, double mu_max, const Matrix& sigma);

struct OptimalWeights {
  Vector theta;
  double msd = 0.0;  ///< (mu/2) [sum_l 1 / Tr(H^{-1} R_{v,l})]^{-1}
};

/// theta_k proportional to 1 / Tr(H^{-1} R_{v,k}) for a Hessian H shared by
/// all agents under a common step size. Throws kDomain when some trace
/// vanishes (a noiseless agent makes the weights degenerate).
OptimalWeights optimal_theta(const Matrix& h, const std::vector<Matrix>& rv_blocks,
                             double mu);

/// Same, but checks that the per-agent Hessians agree (kContract otherwise).
OptimalWeights optimal_theta(const std::vector<Matrix>& hessians,
                             const std::vector<Matrix>& rv_blocks, double mu);

/// [rho(I - mu_max H_c)]^2
double convergence_rate(const Matrix& hc, double mu_max);

/// lambda_L / (||p||_1^2 (lambda_U^2 / 2 + 2 alpha))
double stable_step_bound(const AssumptionConstants& c, const Vector& p);

struct TheoryReport {
  Matrix hc;
  Matrix x;  ///< Lyapunov solution for Sigma = I
  Vector theta;
  Vector p;
  double mu_max = 0.0;
  double msd_first_order = 0.0;
  double weighted_mse_half_hc = 0.0;  ///< Sigma = H_c / 2
  double centralized_msd = 0.0;
  double rate = 0.0;
  double mu_bound = 0.0;
  double lambda2 = 0.0;  ///< |lambda_2(A)|
  AssumptionConstants constants;
  std::optional<Vector> theta_opt;
  std::optional<double> msd_opt;
  std::string omitted = "first-order terms only; O(mu^{3/2}) remainder and rate correction not modeled";
};

/// Full closed-form analysis of a configured network. The optimal weights
/// are included when all agents share one Hessian and one step size.
TheoryReport analyze(const CombinationPolicy& policy, const PerronData& perron,
                     const LinearModel& model);

}  // namespace adaptnet
