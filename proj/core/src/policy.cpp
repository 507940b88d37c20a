#include "adaptnet/policy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "adaptnet/error.hpp"

namespace adaptnet {
namespace {

void require_square_nonneg(const Matrix& a, std::string_view name) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error(ErrorKind::kStructure, std::string(name) + " must be square and non-empty");
  }
  if (!a.allFinite() || (a.array() < 0.0).any()) {
    throw Error(ErrorKind::kStructure, std::string(name) + " must be finite and nonnegative");
  }
}

Matrix renormalize_columns(Matrix a) {
  for (Eigen::Index k = 0; k < a.cols(); ++k) a.col(k) /= a.col(k).sum();
  return a;
}

Matrix pattern_product(const Matrix& x, const Matrix& y) {
  return (x * y).unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; });
}

void require_size(const Matrix& a, const Topology& t, std::string_view name) {
  if (static_cast<std::size_t>(a.rows()) != t.size()) {
    std::ostringstream os;
    os << name << " is " << a.rows() << "x" << a.cols() << " but topology has "
       << t.size() << " agents";
    throw Error(ErrorKind::kStructure, os.str());
  }
}

}  // namespace

std::string_view to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::kConsensus: return "consensus";
    case StrategyKind::kAtc: return "atc";
    case StrategyKind::kCta: return "cta";
    case StrategyKind::kCustom: return "custom";
  }
  return "custom";
}

StrategyKind strategy_from_string(std::string_view name) {
  if (name == "consensus") return StrategyKind::kConsensus;
  if (name == "atc") return StrategyKind::kAtc;
  if (name == "cta") return StrategyKind::kCta;
  if (name == "custom") return StrategyKind::kCustom;
  throw Error(ErrorKind::kInvalidArgument, "unknown strategy '" + std::string(name) + "'");
}

void validate_left_stochastic(const Matrix& a, std::string_view name) {
  require_square_nonneg(a, name);
  for (Eigen::Index k = 0; k < a.cols(); ++k) {
    const double s = a.col(k).sum();
    if (std::abs(s - 1.0) > kStochasticTol) {
      std::ostringstream os;
      os << name << " column " << k << " sums to " << s << ", not 1";
      throw Error(ErrorKind::kStructure, os.str());
    }
  }
}

void validate_support(const Matrix& a, const Topology& t, std::string_view name) {
  require_size(a, t, name);
  for (Eigen::Index k = 0; k < a.cols(); ++k) {
    for (Eigen::Index l = 0; l < a.rows(); ++l) {
      if (a(l, k) != 0.0 && !t.adjacent(static_cast<std::size_t>(l), static_cast<std::size_t>(k))) {
        std::ostringstream os;
        os << name << "(" << l << "," << k << ") = " << a(l, k)
           << " but agent " << l << " is not a neighbor of " << k;
        throw Error(ErrorKind::kStructure, os.str());
      }
    }
  }
}

bool is_primitive(const Matrix& a, int j_max) {
  require_square_nonneg(a, "A");
  const Eigen::Index n = a.rows();
  if (j_max <= 0) j_max = static_cast<int>(n * n - 2 * n + 2);
  // A^j > 0 for some j <= j_max forces A^{j_max} > 0 (a positive power rules
  // out zero rows, so every later power stays positive); compute A^{j_max}'s
  // sparsity pattern by binary exponentiation.
  const Matrix base = a.unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; });
  Matrix result = Matrix::Identity(n, n);
  Matrix power = base;
  for (int e = j_max; e > 0; e >>= 1) {
    if (e & 1) result = pattern_product(result, power);
    if (e > 1) power = pattern_product(power, power);
  }
  return (result.array() > 0.0).all();
}

Vector perron_vector(const Matrix& a, const PerronOptions& options) {
  if (!is_primitive(a)) {
    throw Error(ErrorKind::kStructure, "combination matrix is not primitive");
  }
  if (!(options.tol > 0.0)) throw Error(ErrorKind::kInvalidArgument, "tol must be positive");
  const Eigen::Index n = a.rows();
  Vector theta = Vector::Constant(n, 1.0 / static_cast<double>(n));
  Vector next(n);
  double residual = (a * theta - theta).lpNorm<Eigen::Infinity>();
  bool converged = residual <= options.tol;
  for (int it = 0; it < options.max_iter; ++it) {
    next.noalias() = a * theta;
    next /= next.sum();
    const double r = (a * next - next).lpNorm<Eigen::Infinity>();
    if (converged && r >= residual) break;
    theta.swap(next);
    residual = r;
    if (residual <= options.tol) converged = true;
  }
  if (!converged) {
    std::ostringstream os;
    os << "power iteration stopped after " << options.max_iter
       << " steps with residual " << residual;
    throw IterationLimitError(os.str(), residual);
  }
  return theta;
}

PerronData compute_p(const Matrix& a2, const Vector& theta, const Vector& mus) {
  if (a2.rows() != theta.size() || a2.cols() != theta.size() || mus.size() != theta.size()) {
    throw Error(ErrorKind::kInvalidArgument, "compute_p dimension mismatch");
  }
  if ((mus.array() < 0.0).any() || !mus.allFinite()) {
    throw Error(ErrorKind::kInvalidArgument, "step sizes must be finite and nonnegative");
  }
  const double mu_max = mus.maxCoeff();
  if (!(mu_max > 0.0)) throw Error(ErrorKind::kInvalidArgument, "all step sizes are zero");
  PerronData out;
  out.theta = theta;
  out.pi = a2 * theta;
  out.mus = mus;
  out.mu_max = mu_max;
  out.p = (mus.array() / mu_max * out.pi.array()).matrix();
  return out;
}

Matrix build_hastings(const Topology& t, const Vector& target) {
  const std::size_t n = t.size();
  if (static_cast<std::size_t>(target.size()) != n) {
    throw Error(ErrorKind::kInvalidArgument, "Hastings target length differs from agent count");
  }
  if (!target.allFinite() || (target.array() <= 0.0).any()) {
    throw Error(ErrorKind::kInvalidArgument, "Hastings target entries must be positive");
  }
  if (!is_connected(t)) {
    throw Error(ErrorKind::kConnectivity, "Hastings rule needs a connected topology");
  }
  Matrix a = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const double nk = static_cast<double>(t.degree(k));
    double off = 0.0;
    for (std::size_t l : t.neighbors(k)) {
      if (l == k) continue;
      const double nl = static_cast<double>(t.degree(l));
      // target_k^{-1} / max(|N_k| target_k^{-1}, |N_l| target_l^{-1}), written
      // so equal targets reproduce the Metropolis weights bit-for-bit.
      const double w = 1.0 / std::max(nk, nl * (target(k) / target(l)));
      a(l, k) = w;
      off += w;
    }
    a(k, k) = 1.0 - off;
  }
  return a;
}

Matrix build_metropolis(const Topology& t) {
  const std::size_t n = t.size();
  Matrix a = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const double nk = static_cast<double>(t.degree(k));
    double off = 0.0;
    for (std::size_t l : t.neighbors(k)) {
      if (l == k) continue;
      const double w = 1.0 / std::max(nk, static_cast<double>(t.degree(l)));
      a(l, k) = w;
      off += w;
    }
    a(k, k) = 1.0 - off;
  }
  return a;
}

Matrix build_uniform_averaging(const Topology& t) {
  const std::size_t n = t.size();
  Matrix a = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const double w = 1.0 / static_cast<double>(t.degree(k));
    for (std::size_t l : t.neighbors(k)) a(l, k) = w;
  }
  return a;
}

CombinationPolicy assemble(StrategyKind kind, const Matrix& a, const Topology& support) {
  if (kind == StrategyKind::kCustom) {
    throw Error(ErrorKind::kInvalidArgument, "custom policies need assemble_custom");
  }
  validate_left_stochastic(a, "A");
  validate_support(a, support, "A");
  const Matrix m = renormalize_columns(a);
  if (!is_primitive(m)) throw Error(ErrorKind::kStructure, "A is not primitive");
  const Matrix eye = Matrix::Identity(m.rows(), m.cols());
  CombinationPolicy out{kind, eye, eye, eye, m, support};
  switch (kind) {
    case StrategyKind::kConsensus: out.a0 = m; break;
    case StrategyKind::kAtc: out.a2 = m; break;
    case StrategyKind::kCta: out.a1 = m; break;
    case StrategyKind::kCustom: break;
  }
  return out;
}

CombinationPolicy assemble_custom(const Matrix& a1, const Matrix& a0, const Matrix& a2,
                                  const Topology& support) {
  validate_left_stochastic(a1, "A1");
  validate_left_stochastic(a0, "A0");
  validate_left_stochastic(a2, "A2");
  validate_support(a1, support, "A1");
  validate_support(a0, support, "A0");
  validate_support(a2, support, "A2");
  CombinationPolicy out;
  out.kind = StrategyKind::kCustom;
  out.a1 = renormalize_columns(a1);
  out.a0 = renormalize_columns(a0);
  out.a2 = renormalize_columns(a2);
  out.a = out.a1 * out.a0 * out.a2;
  out.support = support;
  if (!is_primitive(out.a)) {
    throw Error(ErrorKind::kStructure, "product A1*A0*A2 is not primitive");
  }
  return out;
}

double second_eigenvalue_magnitude(const Matrix& a) {
  Eigen::VectorXd mags = eigenvalues(a).cwiseAbs();
  if (mags.size() < 2) return 0.0;
  std::sort(mags.data(), mags.data() + mags.size(), std::greater<>());
  return mags(1);
}

PerronData perron_data(const CombinationPolicy& policy, const Vector& mus,
                       const PerronOptions& options) {
  return compute_p(policy.a2, perron_vector(policy.a, options), mus);
}

}  // namespace adaptnet
