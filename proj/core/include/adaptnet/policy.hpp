#pragma once

#include <optional>
#include <string_view>

#include "adaptnet/numerics.hpp"
#include "adaptnet/topology.hpp"

namespace adaptnet {

/// Which slot of the (A1, A0, A2) triple carries the combination matrix.
enum class StrategyKind { kConsensus, kAtc, kCta, kCustom };

std::string_view to_string(StrategyKind kind);
StrategyKind strategy_from_string(std::string_view name);

inline constexpr double kStochasticTol = 1e-12;

/// Left-stochastic combination triple and its product a = a1 * a0 * a2.
/// Column k of each factor holds the weights agent k gives its neighbors.
struct CombinationPolicy {
  StrategyKind kind = StrategyKind::kCustom;
  Matrix a1;
  Matrix a0;
  Matrix a2;
  Matrix a;
  Topology support;
};

struct PerronData {
  Vector theta;  ///< right eigenvector of A at 1, entries sum to one
  Vector pi;     ///< A2 * theta
  Vector p;      ///< (mu_k / mu_max) * pi_k
  double mu_max = 0.0;
  Vector mus;
};

/// Throws kStructure unless `a` is square, nonnegative, and has every column
/// summing to one within kStochasticTol.
void validate_left_stochastic(const Matrix& a, std::string_view name = "A");

/// Throws kStructure if `a` has a nonzero weight a(l,k) with l outside N_k.
void validate_support(const Matrix& a, const Topology& t, std::string_view name = "A");

/// True iff A^j is entrywise positive for some j <= j_max (0 selects the
/// Wielandt bound N^2 - 2N + 2).
bool is_primitive(const Matrix& a, int j_max = 0);

struct PerronOptions {
  double tol = 1e-12;
  int max_iter = 100000;
};

/// Power iteration with sum normalization, started from the uniform vector.
/// Once ||A theta - theta||_inf <= tol the iteration keeps running while the
/// residual still decreases, so the returned vector sits at the rounding
/// floor rather than just under `tol`.
Vector perron_vector(const Matrix& a, const PerronOptions& options = {});

PerronData compute_p(const Matrix& a2, const Vector& theta, const Vector& mus);

/// Hastings rule: for l in N_k \ {k},
///   a(l,k) = target_k^{-1} / max(|N_k| target_k^{-1}, |N_l| target_l^{-1}),
/// diagonal filled so each column sums to one. The result has `target` as
/// its Perron vector.
Matrix build_hastings(const Topology& t, const Vector& target);

/// a(l,k) = 1 / max(|N_k|, |N_l|) off the diagonal.
Matrix build_metropolis(const Topology& t);

/// a(l,k) = 1 / |N_k| for l in N_k.
Matrix build_uniform_averaging(const Topology& t);

/// Places `a` in the slot selected by `kind` (Consensus: A0, ATC: A2, CTA: A1).
CombinationPolicy assemble(StrategyKind kind, const Matrix& a, const Topology& support);

/// Arbitrary triple; primitivity is checked on the product.
CombinationPolicy assemble_custom(const Matrix& a1, const Matrix& a0, const Matrix& a2,
                                  const Topology& support);

/// |lambda_2(A)|, the second largest eigenvalue modulus (0 for 1x1).
double second_eigenvalue_magnitude(const Matrix& a);

/// Perron data for `policy` under per-agent step sizes.
PerronData perron_data(const CombinationPolicy& policy, const Vector& mus,
                       const PerronOptions& options = {});

}  // namespace adaptnet
