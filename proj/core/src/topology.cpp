#include "adaptnet/topology.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

#include "adaptnet/error.hpp"
#include "adaptnet/rng.hpp"

namespace adaptnet {

Topology Topology::from_edges(std::size_t n, std::span<const Edge> edges) {
  if (n == 0) throw Error(ErrorKind::kInvalidArgument, "topology needs at least one agent");
  std::vector<std::vector<std::size_t>> nbrs(n);
  for (std::size_t k = 0; k < n; ++k) nbrs[k].push_back(k);
  for (const auto& [i, j] : edges) {
    if (i >= n || j >= n) {
      std::ostringstream os;
      os << "edge (" << i << "," << j << ") out of range for n=" << n;
      throw Error(ErrorKind::kInvalidArgument, os.str());
    }
    if (i == j) continue;
    nbrs[i].push_back(j);
    nbrs[j].push_back(i);
  }
  for (auto& v : nbrs) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return Topology(std::move(nbrs));
}

const std::vector<std::size_t>& Topology::neighbors(std::size_t k) const {
  if (k >= neighbors_.size()) throw Error(ErrorKind::kInvalidArgument, "agent index out of range");
  return neighbors_[k];
}

bool Topology::adjacent(std::size_t l, std::size_t k) const {
  const auto& nk = neighbors(k);
  return std::binary_search(nk.begin(), nk.end(), l);
}

std::vector<Edge> Topology::edges() const {
  std::vector<Edge> out;
  for (std::size_t i = 0; i < neighbors_.size(); ++i) {
    for (std::size_t j : neighbors_[i]) {
      if (j > i) out.emplace_back(i, j);
    }
  }
  return out;
}

Topology ring(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::kInvalidArgument, "ring needs n >= 1");
  std::vector<Edge> e;
  for (std::size_t k = 0; k < n; ++k) e.emplace_back(k, (k + 1) % n);
  return Topology::from_edges(n, e);
}

Topology complete(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Topology::from_edges(n, e);
}

Topology path(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t k = 0; k + 1 < n; ++k) e.emplace_back(k, k + 1);
  return Topology::from_edges(n, e);
}

Topology star(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t k = 1; k < n; ++k) e.emplace_back(0, k);
  return Topology::from_edges(n, e);
}

GeometricLayout random_geometric_layout(std::size_t n, double radius,
                                        std::uint64_t seed, int max_retries) {
  if (n == 0) throw Error(ErrorKind::kInvalidArgument, "random_geometric needs n >= 1");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorKind::kInvalidArgument, "random_geometric radius must be positive");
  }
  Rng rng(seed);
  std::vector<std::pair<double, double>> pos(n);
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    for (auto& [x, y] : pos) {
      x = uniform01(rng);
      y = uniform01(rng);
    }
    std::vector<Edge> e;
    const double r2 = radius * radius;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double dx = pos[i].first - pos[j].first;
        const double dy = pos[i].second - pos[j].second;
        if (dx * dx + dy * dy <= r2) e.emplace_back(i, j);
      }
    }
    Topology t = Topology::from_edges(n, e);
    if (is_connected(t)) return {std::move(t), pos, attempt + 1};
  }
  std::ostringstream os;
  os << "no connected geometric graph for n=" << n << ", radius=" << radius
     << " after " << max_retries + 1 << " attempts";
  throw Error(ErrorKind::kConnectivity, os.str());
}

Topology random_geometric(std::size_t n, double radius, std::uint64_t seed,
                          int max_retries) {
  return random_geometric_layout(n, radius, seed, max_retries).topology;
}

bool is_connected(const Topology& t) {
  const std::size_t n = t.size();
  if (n == 0) return false;
  std::vector<bool> seen(n, false);
  std::queue<std::size_t> q;
  q.push(0);
  seen[0] = true;
  std::size_t reached = 1;
  while (!q.empty()) {
    const std::size_t k = q.front();
    q.pop();
    for (std::size_t l : t.neighbors(k)) {
      if (!seen[l]) {
        seen[l] = true;
        ++reached;
        q.push(l);
      }
    }
  }
  return reached == n;
}

}  // namespace adaptnet
