#include "adaptnet/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "adaptnet/error.hpp"

namespace adaptnet {

LinearModel::LinearModel(Vector w_star, std::vector<LmsAgent> agents)
    : w_star_(std::move(w_star)), agents_(std::move(agents)) {
  const Eigen::Index m = w_star_.size();
  if (m == 0) throw Error(ErrorKind::kModel, "parameter dimension must be positive");
  if (agents_.empty()) throw Error(ErrorKind::kModel, "model needs at least one agent");
  if (!w_star_.allFinite()) throw Error(ErrorKind::kModel, "w* has non-finite entries");
  for (std::size_t k = 0; k < agents_.size(); ++k) {
    const auto& a = agents_[k];
    std::ostringstream where;
    where << "agent " << k << ": ";
    if (a.r_u.rows() != m || a.r_u.cols() != m) {
      throw Error(ErrorKind::kModel, where.str() + "R_u must be M x M");
    }
    if (!a.r_u.allFinite() || !is_symmetric(a.r_u, 1e-12)) {
      throw Error(ErrorKind::kModel, where.str() + "R_u must be finite and symmetric");
    }
    if (!(a.sigma_n2 >= 0.0) || !std::isfinite(a.sigma_n2)) {
      throw Error(ErrorKind::kModel, where.str() + "noise variance must be nonnegative");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(a.r_u);
    const Vector lam = es.eigenvalues();
    if (lam(0) < -1e-12 * std::max(1.0, std::abs(lam(m - 1)))) {
      std::ostringstream os;
      os << where.str() << "R_u is not positive semidefinite (min eigenvalue " << lam(0) << ")";
      throw Error(ErrorKind::kModel, os.str());
    }
    const bool eye = a.r_u == Matrix::Identity(m, m);
    identity_.push_back(eye);
    if (eye) {
      factors_.push_back(Matrix::Identity(m, m));
    } else {
      factors_.push_back(es.eigenvectors() * lam.cwiseMax(0.0).cwiseSqrt().asDiagonal());
    }
    noise_sd_.push_back(std::sqrt(a.sigma_n2));
  }
}

void LinearModel::fill_regressor(std::size_t k, Rng& rng, std::span<double> u) const {
  const std::size_t m = dim();
  if (identity_[k]) {
    for (std::size_t j = 0; j < m; ++j) u[j] = standard_normal(rng);
    return;
  }
  // z is drawn in full before mixing so the stream layout matches the identity case.
  double z[64];
  std::vector<double> big;
  double* zp = z;
  if (m > 64) {
    big.resize(m);
    zp = big.data();
  }
  for (std::size_t j = 0; j < m; ++j) zp[j] = standard_normal(rng);
  const Matrix& f = factors_[k];
  for (std::size_t r = 0; r < m; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < m; ++c) acc += f(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * zp[c];
    u[r] = acc;
  }
}

LinearModel::Sample LinearModel::sample(std::size_t k, Rng& rng) const {
  if (k >= agents_.size()) throw Error(ErrorKind::kInvalidArgument, "agent index out of range");
  Sample s;
  s.u.resize(w_star_.size());
  fill_regressor(k, rng, std::span<double>(s.u.data(), dim()));
  s.d = s.u.dot(w_star_) + noise_sd_[k] * standard_normal(rng);
  return s;
}

Vector LinearModel::stochastic_gradient(std::size_t, const Vector& w, const Sample& s) const {
  if (w.size() != w_star_.size() || s.u.size() != w_star_.size()) {
    throw Error(ErrorKind::kContract, "stochastic_gradient dimension mismatch");
  }
  return -2.0 * s.u * (s.d - s.u.dot(w));
}

void LinearModel::sample_gradient(std::size_t k, std::span<const double> w, Rng& rng,
                                  std::span<double> out) const {
  const std::size_t m = dim();
  double ubuf[64];
  std::vector<double> big;
  double* u = ubuf;
  if (m > 64) {
    big.resize(m);
    u = big.data();
  }
  fill_regressor(k, rng, std::span<double>(u, m));
  // d - u w = u (w* - w) + n
  double e = noise_sd_[k] * standard_normal(rng);
  const double* ws = w_star_.data();
  for (std::size_t j = 0; j < m; ++j) e += u[j] * (ws[j] - w[j]);
  for (std::size_t j = 0; j < m; ++j) out[j] = -2.0 * u[j] * e;
}

Vector LinearModel::true_gradient(std::size_t k, const Vector& w) const {
  return 2.0 * agent(k).r_u * (w - w_star_);
}

Matrix LinearModel::jacobian(std::size_t k, const Vector&) const { return hessian(k); }

Matrix LinearModel::hessian(std::size_t k) const { return 2.0 * agent(k).r_u; }

Matrix LinearModel::noise_covariance(std::size_t k) const {
  const auto& a = agent(k);
  return 4.0 * a.sigma_n2 * a.r_u;
}

double LinearModel::cost(std::size_t k, const Vector& w) const {
  const Vector d = w - w_star_;
  return agent(k).sigma_n2 + d.dot(agent(k).r_u * d);
}

Matrix network_hessian(const GradientModel& model, const Vector& weights) {
  if (static_cast<std::size_t>(weights.size()) != model.agents()) {
    throw Error(ErrorKind::kContract, "weight vector length differs from agent count");
  }
  const auto m = static_cast<Eigen::Index>(model.dim());
  Matrix h = Matrix::Zero(m, m);
  for (std::size_t k = 0; k < model.agents(); ++k) h += weights(static_cast<Eigen::Index>(k)) * model.hessian(k);
  return h;
}

std::vector<Matrix> noise_blocks(const GradientModel& model) {
  std::vector<Matrix> out;
  out.reserve(model.agents());
  for (std::size_t k = 0; k < model.agents(); ++k) out.push_back(model.noise_covariance(k));
  return out;
}

Observability check_network_observability(const LinearModel& model, const Vector& p) {
  if (static_cast<std::size_t>(p.size()) != model.agents()) {
    throw Error(ErrorKind::kContract, "p length differs from agent count");
  }
  const auto m = static_cast<Eigen::Index>(model.dim());
  Matrix r = Matrix::Zero(m, m);
  for (std::size_t k = 0; k < model.agents(); ++k) r += p(static_cast<Eigen::Index>(k)) * model.agent(k).r_u;
  const double lmin = std::max(0.0, min_symmetric_eigenvalue(r));
  return {lmin > 1e-10, lmin};
}

AssumptionConstants assumption_constants(const LinearModel& model, const Vector& p) {
  AssumptionConstants c;
  const Matrix hc = network_hessian(model, p);
  c.lambda_l = min_symmetric_eigenvalue(0.5 * (hc + hc.transpose()));
  if (!(c.lambda_l > 1e-10)) {
    std::ostringstream os;
    os << "sum_k p_k H_k is not positive definite (lambda_min = " << c.lambda_l << ")";
    throw Error(ErrorKind::kObservability, os.str());
  }
  for (const auto& a : model.agent_data()) {
    const double tr = a.r_u.trace();
    const double tr2 = (a.r_u * a.r_u).trace();
    c.lambda_u = std::max(c.lambda_u, 2.0 * max_symmetric_eigenvalue(a.r_u));
    c.alpha = std::max(c.alpha, 4.0 * (tr * tr + tr2));
    c.sigma_v2 = std::max(c.sigma_v2, 4.0 * a.sigma_n2 * tr);
  }
  return c;
}

Vector limit_point(const GradientModel& model, const Vector& p, double tol, int max_iter) {
  if (static_cast<std::size_t>(p.size()) != model.agents()) {
    throw Error(ErrorKind::kContract, "p length differs from agent count");
  }
  const auto m = static_cast<Eigen::Index>(model.dim());
  auto residual = [&](const Vector& w) {
    Vector g = Vector::Zero(m);
    for (std::size_t k = 0; k < model.agents(); ++k) g += p(static_cast<Eigen::Index>(k)) * model.true_gradient(k, w);
    return g;
  };
  Vector w = Vector::Zero(m);
  Vector g = residual(w);
  for (int it = 0; it < max_iter; ++it) {
    Matrix j = Matrix::Zero(m, m);
    for (std::size_t k = 0; k < model.agents(); ++k) j += p(static_cast<Eigen::Index>(k)) * model.jacobian(k, w);
    const double lmin = min_symmetric_eigenvalue(0.5 * (j + j.transpose()));
    if (!(lmin > 1e-10)) {
      std::ostringstream os;
      os << "aggregate Jacobian is singular (lambda_min = " << lmin << "); limit point not unique";
      throw Error(ErrorKind::kObservability, os.str());
    }
    const Vector step = j.partialPivLu().solve(g);
    double t = 1.0;
    Vector next = w - step;
    Vector gn = residual(next);
    while (gn.norm() > g.norm() && t > 1e-8) {
      t *= 0.5;
      next = w - t * step;
      gn = residual(next);
    }
    w = next;
    g = gn;
    if (t * step.norm() <= tol * std::max(1.0, w.norm())) return w;
  }
  throw IterationLimitError("limit_point Newton iteration did not converge", g.norm());
}

Vector log_uniform_noise_profile(std::size_t n, double lo, double hi, std::uint64_t seed) {
  if (!(lo > 0.0) || !(hi >= lo)) {
    throw Error(ErrorKind::kInvalidArgument, "noise profile needs 0 < lo <= hi");
  }
  Rng rng(seed);
  Vector out(static_cast<Eigen::Index>(n));
  const double a = std::log(lo), b = std::log(hi);
  for (Eigen::Index k = 0; k < out.size(); ++k) out(k) = std::exp(a + (b - a) * uniform01(rng));
  return out;
}

Vector random_parameter(std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  Vector w(static_cast<Eigen::Index>(m));
  for (Eigen::Index j = 0; j < w.size(); ++j) w(j) = standard_normal(rng);
  return w;
}

LinearModel identity_regressor_model(const Vector& w_star, const Vector& noise) {
  std::vector<LmsAgent> agents;
  const Eigen::Index m = w_star.size();
  for (Eigen::Index k = 0; k < noise.size(); ++k) {
    agents.push_back({Matrix::Identity(m, m), noise(k)});
  }
  return LinearModel(w_star, std::move(agents));
}

}  // namespace adaptnet
