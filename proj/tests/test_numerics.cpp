#include <cmath>

#include "adaptnet/error.hpp"
#include "adaptnet/numerics.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace adaptnet;
using doctest::Approx;

namespace {

Matrix diag(std::initializer_list<double> v) {
  Vector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) d(i++) = x;
  return d.asDiagonal();
}

// Random matrix whose eigenvalues have real parts in about [0.5, 3].
Matrix random_stable(Eigen::Index m, Rng& rng) {
  Matrix g(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) g(i, j) = standard_normal(rng);
  g *= 0.5 / std::sqrt(static_cast<double>(m));
  const double shift = 0.5 - min_real_eigenvalue(g) + 0.5 * uniform01(rng);
  return g + shift * Matrix::Identity(m, m);
}

}  // namespace

TEST_SUITE("numerics") {
  TEST_CASE("continuous lyapunov examples") {
    const Matrix i2 = Matrix::Identity(2, 2);
    CHECK((solve_lyapunov_continuous(i2, i2) - 0.5 * i2).norm() < 1e-15);
    CHECK((solve_lyapunov_continuous(diag({1, 2}), i2) - diag({0.5, 0.25})).norm() < 1e-15);
    const Matrix h = diag({2, 4});
    CHECK((solve_lyapunov_continuous(h, h / 2) - 0.25 * i2).norm() < 1e-15);
  }

  TEST_CASE("continuous lyapunov rejects unstable H") {
    CHECK_THROWS_AS(solve_lyapunov_continuous(diag({1, 0}), Matrix::Identity(2, 2)), StabilityError);
    CHECK_THROWS_AS(solve_lyapunov_continuous(diag({1, -1}), Matrix::Identity(2, 2)), StabilityError);
  }

  TEST_CASE("continuous lyapunov residual, symmetry, PSD") {
    Rng rng(3);
    for (int rep = 0; rep < 40; ++rep) {
      const Eigen::Index m = 1 + rep % 8;
      const Matrix h = random_stable(m, rng);
      const Matrix s = testing::random_spd(m, rng, 0.0);
      const Matrix x = solve_lyapunov_continuous(h, s);
      CHECK((h.transpose() * x + x * h - s).norm() <= 1e-10 * s.norm());
      CHECK((x - x.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK(min_symmetric_eigenvalue(x) >= -1e-12);
    }
  }

  TEST_CASE("quadrature oracle") {
    const Matrix i2 = Matrix::Identity(2, 2);
    CHECK((lyapunov_quadrature_oracle(i2, i2) - 0.5 * i2).norm() < 1e-10);
    CHECK((lyapunov_quadrature_oracle(diag({1, 2}), i2) - diag({0.5, 0.25})).norm() < 1e-10);
    Rng rng(17);
    const Matrix h = random_stable(5, rng);
    const Matrix s = Matrix::Identity(5, 5);
    CHECK(testing::rel_frob(lyapunov_quadrature_oracle(h, s), solve_lyapunov_continuous(h, s)) < 1e-8);
  }

  TEST_CASE("quadrature oracle reports a truncated horizon") {
    QuadratureOptions o;
    o.t_max = 1.0;
    CHECK_THROWS_AS(lyapunov_quadrature_oracle(Matrix::Identity(2, 2), Matrix::Identity(2, 2), o), Error);
  }

  TEST_CASE("discrete lyapunov") {
    Rng rng(1);
    const Matrix q = testing::random_spd(3, rng);
    CHECK((solve_lyapunov_discrete(Matrix::Zero(3, 3), q) - q).norm() < 1e-15);
    CHECK(solve_lyapunov_discrete(Matrix::Constant(1, 1, 0.5), Matrix::Ones(1, 1))(0, 0) == Approx(4.0 / 3.0));

    const double mu = 1e-3;
    const Matrix b = Matrix::Identity(2, 2) - mu * 2.0 * Matrix::Identity(2, 2);
    const Matrix pi = solve_lyapunov_discrete(b, mu * mu * Matrix::Identity(2, 2));
    // Geometric series mu^2 / (1 - (1 - 2 mu)^2) = mu / (4 (1 - mu)).
    const double exact = mu * mu / (1.0 - (1.0 - 2.0 * mu) * (1.0 - 2.0 * mu));
    CHECK(pi(0, 0) == Approx(exact).epsilon(1e-10));
    CHECK(pi(0, 0) == Approx(mu / 4.0).epsilon(2 * mu));
    CHECK(std::abs(pi(0, 1)) < 1e-18);

    CHECK_THROWS_AS(solve_lyapunov_discrete(Matrix::Identity(1, 1), Matrix::Ones(1, 1)), StabilityError);
  }

  TEST_CASE("discrete lyapunov residual") {
    Rng rng(9);
    for (int rep = 0; rep < 20; ++rep) {
      const Eigen::Index m = 1 + rep % 6;
      Matrix b = random_stable(m, rng);
      b /= 1.1 * spectral_radius(b);
      const Matrix q = testing::random_spd(m, rng);
      const Matrix p = solve_lyapunov_discrete(b, q);
      CHECK((p - b * p * b.transpose() - q).norm() <= 1e-10 * q.norm());
    }
  }

  TEST_CASE("spectral radius") {
    CHECK(spectral_radius(Matrix::Identity(3, 3)) == Approx(1.0));
    CHECK(spectral_radius(diag({-3, 2})) == Approx(3.0));
    Matrix rot(2, 2);
    rot << 0, 1, -1, 0;
    CHECK(spectral_radius(rot) == Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("matrix exponential") {
    CHECK((matrix_exponential(Matrix::Zero(3, 3)) - Matrix::Identity(3, 3)).norm() == 0.0);
    const Matrix e = matrix_exponential(diag({1, 2}));
    CHECK(e(0, 0) == Approx(std::exp(1.0)).epsilon(1e-15));
    CHECK(e(1, 1) == Approx(std::exp(2.0)).epsilon(1e-15));
    CHECK(e(0, 1) == 0.0);
    Matrix n(2, 2);
    n << 0, 1, 0, 0;
    Matrix expect(2, 2);
    expect << 1, 1, 0, 1;
    CHECK((matrix_exponential(n) - expect).norm() < 1e-15);
    // Rotation generator: exp(t J) = [[cos t, sin t], [-sin t, cos t]].
    Matrix j(2, 2);
    j << 0, 0.7, -0.7, 0;
    const Matrix r = matrix_exponential(j);
    CHECK(r(0, 0) == Approx(std::cos(0.7)).epsilon(1e-14));
    CHECK(r(0, 1) == Approx(std::sin(0.7)).epsilon(1e-14));
  }

  TEST_CASE("weighted sum") {
    const std::vector<Matrix> blocks = {Matrix::Identity(2, 2), diag({1, 3})};
    CHECK((weighted_sum(blocks, Vector{{0.5, 0.5}}) - diag({1, 2})).norm() == 0.0);
  }
}
