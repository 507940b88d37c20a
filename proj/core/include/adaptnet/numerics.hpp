#pragma once

#include <Eigen/Dense>

#include <complex>

namespace adaptnet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Eigenvalues of a general real square matrix.
Eigen::VectorXcd eigenvalues(const Matrix& m);

/// max |lambda| over the spectrum of `m`.
double spectral_radius(const Matrix& m);

/// Smallest real part over the spectrum of `m`.
double min_real_eigenvalue(const Matrix& m);

/// Smallest eigenvalue of a symmetric matrix (only the lower triangle is read).
double min_symmetric_eigenvalue(const Matrix& m);
double max_symmetric_eigenvalue(const Matrix& m);

/// e^m by scaling and squaring with a Pade approximant.
Matrix matrix_exponential(const Matrix& m);

/// Solves H^T X + X H = Sigma for X.
///
/// Requires every eigenvalue of H to have real part above 1e-10; borderline
/// inputs are rejected with a StabilityError carrying the minimum real part.
/// The solution is obtained from the Kronecker-vectorized system
/// (I (x) H^T + H^T (x) I) vec(X) = vec(Sigma) and returned symmetrized.
Matrix solve_lyapunov_continuous(const Matrix& h, const Matrix& sigma);

/// Solves Pi = B Pi B^T + Q through (I - B (x) B) vec(Pi) = vec(Q).
/// Requires spectral_radius(B) < 1.
Matrix solve_lyapunov_discrete(const Matrix& b, const Matrix& q);

struct QuadratureOptions {
  /// Upper integration limit; <= 0 picks the smallest power-of-two multiple
  /// of 1/min Re(lambda) with ||e^{-H t_max}||_2^2 <= 1e-14.
  double t_max = 0.0;
  /// Composite Simpson panel count (rounded up to even).
  int steps = 1 << 14;
  /// Relative Richardson error estimate the result must meet.
  double tolerance = 1e-10;
};

/// Independent reference for the continuous Lyapunov solution:
/// integral over [0, t_max] of e^{-H^T t} Sigma e^{-H t} dt by composite Simpson.
/// Throws kAccuracy when the truncation or the step count cannot meet
/// `options.tolerance`.
Matrix lyapunov_quadrature_oracle(const Matrix& h, const Matrix& sigma,
                                  const QuadratureOptions& options = {});

/// sum_k weights[k] * blocks[k], with all blocks the same shape.
template <typename Range>
Matrix weighted_sum(const Range& blocks, const Vector& weights) {
  Matrix out;
  Eigen::Index k = 0;
  for (const auto& b : blocks) {
    if (k == 0) out = Matrix::Zero(b.rows(), b.cols());
    out.noalias() += weights(k) * b;
    ++k;
  }
  return out;
}

bool is_symmetric(const Matrix& m, double tol);

}  // namespace adaptnet
