#include "adaptnet/numerics.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "adaptnet/error.hpp"

namespace adaptnet {
namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << what << " must be a non-empty square matrix, got " << m.rows() << "x"
       << m.cols();
    throw Error(ErrorKind::kInvalidArgument, os.str());
  }
  if (!m.allFinite()) {
    throw Error(ErrorKind::kInvalidArgument,
                std::string(what) + " has non-finite entries");
  }
}

Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, Eigen::Index dim) {
  return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

Matrix solve_dense(const Matrix& k, const Vector& rhs, Eigen::Index dim) {
  Eigen::FullPivLU<Matrix> lu(k);
  if (!lu.isInvertible()) {
    throw Error(ErrorKind::kNumerical, "vectorized Lyapunov system is singular");
  }
  Vector x = lu.solve(rhs);
  if (!x.allFinite()) {
    throw Error(ErrorKind::kNumerical, "Lyapunov solve produced non-finite values");
  }
  return unvec(x, dim);
}

}  // namespace

Eigen::VectorXcd eigenvalues(const Matrix& m) {
  require_square(m, "matrix");
  Eigen::EigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::kNumerical, "eigenvalue iteration did not converge");
  }
  return es.eigenvalues();
}

double spectral_radius(const Matrix& m) {
  return eigenvalues(m).cwiseAbs().maxCoeff();
}

double min_real_eigenvalue(const Matrix& m) {
  return eigenvalues(m).real().minCoeff();
}

double min_symmetric_eigenvalue(const Matrix& m) {
  require_square(m, "matrix");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double max_symmetric_eigenvalue(const Matrix& m) {
  require_square(m, "matrix");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(m.rows() - 1);
}

bool is_symmetric(const Matrix& m, double tol) {
  return m.rows() == m.cols() && (m - m.transpose()).cwiseAbs().maxCoeff() <= tol;
}

Matrix matrix_exponential(const Matrix& m) {
  require_square(m, "matrix");
  return m.exp();
}

Matrix solve_lyapunov_continuous(const Matrix& h, const Matrix& sigma) {
  require_square(h, "H");
  require_square(sigma, "Sigma");
  if (sigma.rows() != h.rows()) {
    throw Error(ErrorKind::kInvalidArgument, "H and Sigma dimensions differ");
  }
  const double min_re = min_real_eigenvalue(h);
  if (!(min_re > 1e-10)) {
    std::ostringstream os;
    os << "H is not stable: min Re(lambda) = " << min_re;
    throw StabilityError(os.str(), min_re);
  }
  const Eigen::Index n = h.rows();
  const Matrix eye = Matrix::Identity(n, n);
  const Matrix ht = h.transpose();
  const Matrix k = Eigen::kroneckerProduct(eye, ht).eval() +
                   Eigen::kroneckerProduct(ht, eye).eval();
  Matrix x = solve_dense(k, vec(sigma), n);
  if (is_symmetric(sigma, 1e-12 * std::max(1.0, sigma.cwiseAbs().maxCoeff()))) {
    x = 0.5 * (x + x.transpose()).eval();
  }
  return x;
}

Matrix solve_lyapunov_discrete(const Matrix& b, const Matrix& q) {
  require_square(b, "B");
  require_square(q, "Q");
  if (q.rows() != b.rows()) {
    throw Error(ErrorKind::kInvalidArgument, "B and Q dimensions differ");
  }
  const double rho = spectral_radius(b);
  if (!(rho < 1.0)) {
    std::ostringstream os;
    os << "B is not stable: spectral radius = " << rho;
    throw StabilityError(os.str(), rho);
  }
  const Eigen::Index n = b.rows();
  const Matrix k = Matrix::Identity(n * n, n * n) - Eigen::kroneckerProduct(b, b).eval();
  Matrix x = solve_dense(k, vec(q), n);
  if (is_symmetric(q, 1e-12 * std::max(1.0, q.cwiseAbs().maxCoeff()))) {
    x = 0.5 * (x + x.transpose()).eval();
  }
  return x;
}

Matrix lyapunov_quadrature_oracle(const Matrix& h, const Matrix& sigma,
                                  const QuadratureOptions& options) {
  require_square(h, "H");
  require_square(sigma, "Sigma");
  const double min_re = min_real_eigenvalue(h);
  if (!(min_re > 1e-10)) {
    throw StabilityError("H is not stable", min_re);
  }
  const Eigen::Index n = h.rows();
  constexpr double kTailBound = 1e-14;

  auto tail = [&](double t) {
    const Matrix e = matrix_exponential(-h * t);
    return (e * e.transpose()).norm();  // Frobenius bound on ||e||_2^2
  };

  double t_max = options.t_max;
  if (t_max <= 0.0) {
    t_max = 1.0 / min_re;
    while (tail(t_max) > kTailBound) t_max *= 2.0;
  } else if (tail(t_max) > kTailBound) {
    throw Error(ErrorKind::kAccuracy,
                "t_max too short: ||e^{-H t_max}||^2 exceeds 1e-14");
  }

  int steps = std::max(options.steps, 4);
  if (steps % 4 != 0) steps += 4 - steps % 4;  // half-resolution pass needs even count too
  const double dt = t_max / steps;

  // f(t) = e^{-H^T t} Sigma e^{-H t}; propagate e^{-H t} by repeated multiplication.
  const Matrix step = matrix_exponential(-h * dt);
  Matrix prop = Matrix::Identity(n, n);
  Matrix fine = Matrix::Zero(n, n);
  Matrix coarse = Matrix::Zero(n, n);
  for (int j = 0; j <= steps; ++j) {
    const Matrix f = prop.transpose() * sigma * prop;
    const double wf = (j == 0 || j == steps) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
    fine.noalias() += wf * f;
    if (j % 2 == 0) {
      const int jc = j / 2;
      const int half = steps / 2;
      const double wc = (jc == 0 || jc == half) ? 1.0 : (jc % 2 == 1 ? 4.0 : 2.0);
      coarse.noalias() += wc * f;
    }
    prop = (prop * step).eval();
  }
  fine *= dt / 3.0;
  coarse *= 2.0 * dt / 3.0;

  const double scale = std::max(fine.norm(), std::numeric_limits<double>::min());
  const double err_estimate = (fine - coarse).norm() / 15.0;
  if (err_estimate > options.tolerance * scale) {
    std::ostringstream os;
    os << "Simpson step count " << steps << " gives relative error estimate "
       << err_estimate / scale << " > " << options.tolerance;
    throw Error(ErrorKind::kAccuracy, os.str());
  }
  return fine;
}

}  // namespace adaptnet
