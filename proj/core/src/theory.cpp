#include "adaptnet/theory.hpp"

#include <cmath>
#include <sstream>

#include "adaptnet/error.hpp"

namespace adaptnet {
namespace {

void check_blocks(const std::vector<Matrix>& rv_blocks, const Vector& p, Eigen::Index m) {
  if (static_cast<Eigen::Index>(rv_blocks.size()) != p.size()) {
    throw Error(ErrorKind::kContract, "one noise block per agent required");
  }
  for (const auto& b : rv_blocks) {
    if (b.rows() != m || b.cols() != m) throw Error(ErrorKind::kContract, "noise block has wrong size");
  }
}

}  // namespace

Matrix aggregate_noise(const std::vector<Matrix>& rv_blocks, const Vector& p) {
  if (rv_blocks.empty()) throw Error(ErrorKind::kContract, "no noise blocks");
  check_blocks(rv_blocks, p, rv_blocks.front().rows());
  return weighted_sum(rv_blocks, p.cwiseProduct(p));
}

double predict_weighted_mse(const Matrix& hc, const std::vector<Matrix>& rv_blocks,
                            const Vector& p, double mu_max, const Matrix& sigma) {
  check_blocks(rv_blocks, p, hc.rows());
  const Matrix x = solve_lyapunov_continuous(hc, sigma);
  return mu_max * (x * aggregate_noise(rv_blocks, p)).trace();
}

double predict_msd_identity(const Matrix& hc, const std::vector<Matrix>& rv_blocks,
                            const Vector& p, double mu_max) {
  check_blocks(rv_blocks, p, hc.rows());
  const double min_re = min_real_eigenvalue(hc);
  if (!(min_re > 1e-10)) throw StabilityError("H_c is not stable", min_re);
  const Matrix rv = aggregate_noise(rv_blocks, p);
  return 0.5 * mu_max * hc.partialPivLu().solve(rv).trace();
}

double predict_centralized_mse(const Matrix& hc, const std::vector<Matrix>& rv_blocks,
                               const Vector& p, double mu_max, const Matrix& sigma) {
  return predict_weighted_mse(hc, rv_blocks, p, mu_max, sigma);
}

OptimalWeights optimal_theta(const Matrix& h, const std::vector<Matrix>& rv_blocks, double mu) {
  if (rv_blocks.empty()) throw Error(ErrorKind::kContract, "no noise blocks");
  const auto lu = h.partialPivLu();
  Vector inv_tr(static_cast<Eigen::Index>(rv_blocks.size()));
  for (std::size_t k = 0; k < rv_blocks.size(); ++k) {
    const double tr = lu.solve(rv_blocks[k]).trace();
    if (!(tr > 0.0) || !std::isfinite(tr)) {
      std::ostringstream os;
      os << "agent " << k << " has Tr(H^-1 R_v) = " << tr << "; optimal weights are degenerate";
      throw Error(ErrorKind::kDomain, os.str());
    }
    inv_tr(static_cast<Eigen::Index>(k)) = 1.0 / tr;
  }
  const double total = inv_tr.sum();
  return {inv_tr / total, 0.5 * mu / total};
}

OptimalWeights optimal_theta(const std::vector<Matrix>& hessians,
                             const std::vector<Matrix>& rv_blocks, double mu) {
  if (hessians.empty() || hessians.size() != rv_blocks.size()) {
    throw Error(ErrorKind::kContract, "one Hessian per agent required");
  }
  const Matrix& h = hessians.front();
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  for (const auto& hk : hessians) {
    if (hk.rows() != h.rows() || hk.cols() != h.cols() ||
        (hk - h).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw Error(ErrorKind::kContract, "optimal weights need identical agent Hessians");
    }
  }
  return optimal_theta(h, rv_blocks, mu);
}

double convergence_rate(const Matrix& hc, double mu_max) {
  const Matrix b = Matrix::Identity(hc.rows(), hc.cols()) - mu_max * hc;
  const double rho = spectral_radius(b);
  return rho * rho;
}

double stable_step_bound(const AssumptionConstants& c, const Vector& p) {
  const double l1 = p.lpNorm<1>();
  return c.lambda_l / (l1 * l1 * (0.5 * c.lambda_u * c.lambda_u + 2.0 * c.alpha));
}

TheoryReport analyze(const CombinationPolicy& policy, const PerronData& perron,
                     const LinearModel& model) {
  TheoryReport r;
  r.theta = perron.theta;
  r.p = perron.p;
  r.mu_max = perron.mu_max;
  r.hc = network_hessian(model, perron.p);
  const auto rv = noise_blocks(model);
  const auto m = r.hc.rows();
  r.x = solve_lyapunov_continuous(r.hc, Matrix::Identity(m, m));
  r.msd_first_order = perron.mu_max * (r.x * aggregate_noise(rv, perron.p)).trace();
  r.weighted_mse_half_hc = predict_weighted_mse(r.hc, rv, perron.p, perron.mu_max, 0.5 * r.hc);
  r.centralized_msd = predict_centralized_mse(r.hc, rv, perron.p, perron.mu_max, Matrix::Identity(m, m));
  r.rate = convergence_rate(r.hc, perron.mu_max);
  r.constants = assumption_constants(model, perron.p);
  r.mu_bound = stable_step_bound(r.constants, perron.p);
  r.lambda2 = second_eigenvalue_magnitude(policy.a);

  std::vector<Matrix> hessians;
  for (std::size_t k = 0; k < model.agents(); ++k) hessians.push_back(model.hessian(k));
  const bool uniform_mu = (perron.mus.array() == perron.mu_max).all();
  bool shared_h = true;
  for (const auto& h : hessians) shared_h = shared_h && h == hessians.front();
  bool noisy = true;
  for (const auto& b : rv) noisy = noisy && b.trace() > 0.0;
  if (uniform_mu && shared_h && noisy) {
    const auto opt = optimal_theta(hessians, rv, perron.mu_max);
    r.theta_opt = opt.theta;
    r.msd_opt = opt.msd;
  }
  return r;
}

}  // namespace adaptnet
