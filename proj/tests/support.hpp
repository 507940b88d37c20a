#pragma once

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "adaptnet/numerics.hpp"
#include "adaptnet/rng.hpp"
#include "adaptnet/topology.hpp"

namespace testing {

using adaptnet::Matrix;
using adaptnet::Vector;

inline double rel_frob(const Matrix& a, const Matrix& b) { return (a - b).norm() / b.norm(); }

// Union-find, independent of the BFS in the library.
inline bool connected_oracle(const adaptnet::Topology& t) {
  std::vector<std::size_t> parent(t.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [i, j] : t.edges()) parent[find(i)] = find(j);
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (find(k) != find(0)) return false;
  }
  return true;
}

// Dense eigensolver: eigenvector for the eigenvalue closest to 1, unit sum.
inline Vector perron_oracle(const Matrix& a) {
  Eigen::EigenSolver<Matrix> es(a);
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < a.rows(); ++i) {
    if (std::abs(es.eigenvalues()(i) - 1.0) < std::abs(es.eigenvalues()(best) - 1.0)) best = i;
  }
  Vector v = es.eigenvectors().col(best).real();
  return v / v.sum();
}

inline Matrix random_spd(Eigen::Index m, adaptnet::Rng& rng, double floor = 0.1) {
  Matrix g(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) g(i, j) = adaptnet::standard_normal(rng);
  return g * g.transpose() / static_cast<double>(m) + floor * Matrix::Identity(m, m);
}

// Random connected graph: a random spanning tree plus extra edges.
inline adaptnet::Topology random_connected(std::size_t n, adaptnet::Rng& rng) {
  std::vector<adaptnet::Edge> e;
  for (std::size_t k = 1; k < n; ++k) {
    e.emplace_back(static_cast<std::size_t>(adaptnet::uniform01(rng) * static_cast<double>(k)), k);
  }
  const std::size_t extra = n;
  for (std::size_t i = 0; i < extra; ++i) {
    const auto a = static_cast<std::size_t>(adaptnet::uniform01(rng) * static_cast<double>(n));
    const auto b = static_cast<std::size_t>(adaptnet::uniform01(rng) * static_cast<double>(n));
    e.emplace_back(a, b);
  }
  return adaptnet::Topology::from_edges(n, e);
}

inline Vector random_simplex(Eigen::Index n, adaptnet::Rng& rng, double lo = 0.05) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = lo + adaptnet::uniform01(rng);
  return v / v.sum();
}

}  // namespace testing
