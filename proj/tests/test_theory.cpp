#include "adaptnet/error.hpp"
#include "adaptnet/model.hpp"
#include "adaptnet/policy.hpp"
#include "adaptnet/theory.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace adaptnet;
using doctest::Approx;

namespace {

std::vector<Matrix> random_blocks(std::size_t n, Eigen::Index m, Rng& rng) {
  std::vector<Matrix> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(testing::random_spd(m, rng, 0.01));
  return out;
}

double sum_p2_trace(const std::vector<Matrix>& rv, const Vector& p) {
  double s = 0.0;
  for (std::size_t k = 0; k < rv.size(); ++k) s += p(static_cast<Eigen::Index>(k)) * p(static_cast<Eigen::Index>(k)) * rv[k].trace();
  return s;
}

}  // namespace

TEST_SUITE("theory") {
  TEST_CASE("no gradient noise predicts zero") {
    const std::vector<Matrix> rv(3, Matrix::Zero(4, 4));
    CHECK(predict_weighted_mse(2.0 * Matrix::Identity(4, 4), rv, Vector::Constant(3, 1.0 / 3.0), 1e-3,
                               Matrix::Identity(4, 4)) == 0.0);
  }

  TEST_CASE("single LMS agent") {
    const Matrix h = 2.0 * Matrix::Identity(10, 10);
    const std::vector<Matrix> rv = {0.4 * Matrix::Identity(10, 10)};
    const Vector p = Vector::Ones(1);
    CHECK(predict_weighted_mse(h, rv, p, 1e-3, Matrix::Identity(10, 10)) == Approx(1e-3).epsilon(1e-13));
    CHECK(predict_msd_identity(h, rv, p, 1e-3) == Approx(1e-3).epsilon(1e-13));
  }

  TEST_CASE("special weightings agree with closed forms") {
    Rng rng(31);
    for (int rep = 0; rep < 30; ++rep) {
      const Eigen::Index m = 1 + rep % 6;
      const std::size_t n = 1 + static_cast<std::size_t>(rep % 5);
      const Matrix hc = 2.0 * testing::random_spd(m, rng);
      const auto rv = random_blocks(n, m, rng);
      const Vector p = testing::random_simplex(static_cast<Eigen::Index>(n), rng);
      const double mu = 1e-3;
      const Matrix agg = aggregate_noise(rv, p);
      const double identity = predict_msd_identity(hc, rv, p, mu);
      CHECK(std::abs(predict_weighted_mse(hc, rv, p, mu, Matrix::Identity(m, m)) - identity) <= 1e-10 * identity);
      CHECK(identity == Approx(0.5 * mu * (hc.inverse() * agg).trace()).epsilon(1e-10));
      const double half = predict_weighted_mse(hc, rv, p, mu, hc / 2.0);
      CHECK(half == Approx(mu / 4.0 * sum_p2_trace(rv, p)).epsilon(1e-10));
      CHECK(predict_centralized_mse(hc, rv, p, mu, Matrix::Identity(m, m)) == Approx(identity).epsilon(1e-12));
      CHECK(predict_msd_identity(hc, rv, p, 2 * mu) == 2.0 * identity);
    }
  }

  TEST_CASE("homogeneous agents gain N-fold") {
    Rng rng(2);
    const Matrix h = 2.0 * testing::random_spd(3, rng);
    const Matrix r = testing::random_spd(3, rng);
    for (std::size_t n : {1u, 4u, 10u}) {
      const std::vector<Matrix> rv(n, r);
      const Vector p = Vector::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n));
      CHECK(predict_msd_identity(h, rv, p, 1e-3) ==
            Approx(1e-3 / (2.0 * static_cast<double>(n)) * (h.inverse() * r).trace()).epsilon(1e-12));
    }
  }

  TEST_CASE("optimal theta") {
    const Matrix h = Matrix::Identity(2, 2);
    const std::vector<Matrix> same(4, Matrix::Identity(2, 2));
    const auto u = optimal_theta(h, same, 1e-3);
    for (Eigen::Index k = 0; k < 4; ++k) CHECK(u.theta(k) == Approx(0.25));

    const std::vector<Matrix> rv = {0.5 * Matrix::Identity(2, 2), 1.5 * Matrix::Identity(2, 2)};  // traces 1, 3
    const auto o = optimal_theta(h, rv, 1e-3);
    CHECK(o.theta(0) == Approx(0.75).epsilon(1e-14));
    CHECK(o.theta(1) == Approx(0.25).epsilon(1e-14));
    CHECK(o.msd == Approx(0.5e-3 / (1.0 + 1.0 / 3.0)));

    const std::vector<Matrix> silent = {Matrix::Zero(2, 2), Matrix::Identity(2, 2)};
    CHECK_THROWS_AS(optimal_theta(h, silent, 1e-3), Error);
    CHECK_THROWS_AS(optimal_theta(std::vector<Matrix>{h, 2 * h}, rv, 1e-3), Error);
  }

  TEST_CASE("optimal theta minimizes the first-order MSD") {
    Rng rng(19);
    const Eigen::Index n = 6;
    const Matrix h = 2.0 * testing::random_spd(3, rng);
    const auto rv = random_blocks(static_cast<std::size_t>(n), 3, rng);
    const double mu = 1e-3;
    const auto o = optimal_theta(h, rv, mu);
    CHECK(predict_msd_identity(h, rv, o.theta, mu) == Approx(o.msd).epsilon(1e-12));
    for (int rep = 0; rep < 100; ++rep) {
      Vector t = o.theta + 0.1 * (testing::random_simplex(n, rng, 0.0) - Vector::Constant(n, 1.0 / n));
      t = t.cwiseMax(1e-6);
      t /= t.sum();
      CHECK(predict_msd_identity(h, rv, t, mu) >= o.msd - 1e-12);
    }
  }

  TEST_CASE("convergence rate") {
    const Matrix h2 = 2.0 * Matrix::Identity(3, 3);
    CHECK(convergence_rate(h2, 0.01) == Approx(0.9604).epsilon(1e-14));
    CHECK(convergence_rate(h2, 0.0) == 1.0);
    Matrix d = Matrix::Zero(2, 2);
    d.diagonal() << 2, 4;
    CHECK(convergence_rate(d, 0.01) == Approx(0.9604).epsilon(1e-14));
  }

  TEST_CASE("stable step bound") {
    AssumptionConstants c{2.0, 2.0, 0.0, 0.0};
    CHECK(stable_step_bound(c, Vector::Ones(1)) == Approx(1.0));
    c.alpha = 1e12;
    CHECK(stable_step_bound(c, Vector::Ones(1)) < 1e-11);
    c.alpha = 3.0;
    const Vector p{{0.5, 0.5}};
    CHECK(stable_step_bound(c, 2.0 * p) == Approx(stable_step_bound(c, p) / 4.0));
  }

  TEST_CASE("analyze on a single agent") {
    const LinearModel m = identity_regressor_model(Vector::Ones(10), Vector::Constant(1, 0.1));
    const auto pol = assemble(StrategyKind::kAtc, Matrix::Identity(1, 1), ring(1));
    const auto r = analyze(pol, perron_data(pol, Vector::Constant(1, 1e-3)), m);
    CHECK(r.msd_first_order == Approx(1e-3).epsilon(1e-13));
    CHECK(r.centralized_msd == Approx(1e-3).epsilon(1e-13));
    CHECK(r.rate == Approx(0.998 * 0.998));
    CHECK((r.x - 0.25 * Matrix::Identity(10, 10)).norm() < 1e-15);
    CHECK(r.mu_max < r.mu_bound);
    REQUIRE(r.theta_opt);
    CHECK((*r.theta_opt)(0) == 1.0);
  }

  TEST_CASE("analyze omits optimal weights for non-uniform steps") {
    const LinearModel m = identity_regressor_model(Vector::Ones(2), Vector{{0.1, 0.2}});
    const auto pol = assemble(StrategyKind::kAtc, build_metropolis(complete(2)), complete(2));
    const auto r = analyze(pol, perron_data(pol, Vector{{1e-3, 5e-4}}), m);
    CHECK_FALSE(r.theta_opt);
    CHECK(r.p(1) == Approx(0.25));
  }

  TEST_CASE("topology invariance of the first-order report") {
    Rng rng(41);
    const auto a = testing::random_connected(10, rng);
    const auto b = random_geometric(10, 0.5, 3);
    const LinearModel m = identity_regressor_model(random_parameter(5, 2), log_uniform_noise_profile(10, 1e-3, 1e-1, 5));
    const Vector target = testing::random_simplex(10, rng);
    const Vector mus = Vector::Constant(10, 5e-4);
    const auto pa = assemble(StrategyKind::kAtc, build_hastings(a, target), a);
    const auto pb = assemble(StrategyKind::kAtc, build_hastings(b, target), b);
    const auto ra = analyze(pa, perron_data(pa, mus), m);
    const auto rb = analyze(pb, perron_data(pb, mus), m);
    CHECK(std::abs(ra.msd_first_order - rb.msd_first_order) <= 1e-12 * ra.msd_first_order);
    CHECK(std::abs(ra.weighted_mse_half_hc - rb.weighted_mse_half_hc) <= 1e-12 * ra.weighted_mse_half_hc);
    CHECK((ra.hc - rb.hc).norm() <= 1e-12);
    CHECK((ra.p - rb.p).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(ra.lambda2 != rb.lambda2);
  }
}
