#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace adaptnet {

using Edge = std::pair<std::size_t, std::size_t>;

/// Undirected communication graph over agents 0..n-1. Every neighborhood
/// N_k is sorted ascending and contains k itself.
class Topology {
 public:
  Topology() = default;

  /// Builds from an undirected edge list. Self-loops in `edges` are accepted
  /// and ignored (every agent gets one anyway); duplicates collapse.
  static Topology from_edges(std::size_t n, std::span<const Edge> edges);

  std::size_t size() const noexcept { return neighbors_.size(); }
  const std::vector<std::size_t>& neighbors(std::size_t k) const;
  /// |N_k|, self included.
  std::size_t degree(std::size_t k) const { return neighbors(k).size(); }
  bool adjacent(std::size_t l, std::size_t k) const;

  /// Distinct undirected edges (i < j), lexicographically ordered.
  std::vector<Edge> edges() const;

  friend bool operator==(const Topology&, const Topology&) = default;

 private:
  explicit Topology(std::vector<std::vector<std::size_t>> neighbors)
      : neighbors_(std::move(neighbors)) {}

  std::vector<std::vector<std::size_t>> neighbors_;
};

/// Cycle over n agents.
Topology ring(std::size_t n);
Topology complete(std::size_t n);
Topology path(std::size_t n);
/// Star centered at agent 0.
Topology star(std::size_t n);

inline constexpr int kGeometricRetries = 100;

/// Agents placed uniformly in the unit square; an edge joins every pair at
/// Euclidean distance <= radius. Disconnected placements are redrawn from the
/// same stream, up to `max_retries` extra attempts.
Topology random_geometric(std::size_t n, double radius, std::uint64_t seed,
                          int max_retries = kGeometricRetries);

/// Node coordinates used by random_geometric for the accepted attempt.
struct GeometricLayout {
  Topology topology;
  std::vector<std::pair<double, double>> positions;
  int attempts;
};
GeometricLayout random_geometric_layout(std::size_t n, double radius,
                                        std::uint64_t seed,
                                        int max_retries = kGeometricRetries);

/// Breadth-first search from agent 0 reaches every agent.
bool is_connected(const Topology& t);

}  // namespace adaptnet
