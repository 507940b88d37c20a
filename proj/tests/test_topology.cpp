#include <set>

#include "adaptnet/error.hpp"
#include "adaptnet/topology.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace adaptnet;

namespace {

void check_invariants(const Topology& t) {
  for (std::size_t k = 0; k < t.size(); ++k) {
    CHECK(t.adjacent(k, k));
    for (auto l : t.neighbors(k)) {
      CHECK(l < t.size());
      CHECK(t.adjacent(k, l));
    }
  }
}

}  // namespace

TEST_SUITE("topology") {
  TEST_CASE("ring neighborhoods") {
    CHECK(ring(1).neighbors(0) == std::vector<std::size_t>{0});
    const auto r3 = ring(3);
    for (std::size_t k = 0; k < 3; ++k) CHECK(r3.neighbors(k) == std::vector<std::size_t>{0, 1, 2});
    const auto r5 = ring(5);
    CHECK(std::set<std::size_t>(r5.neighbors(0).begin(), r5.neighbors(0).end()) ==
          std::set<std::size_t>{4, 0, 1});
    for (std::size_t k = 0; k < 5; ++k) CHECK(r5.degree(k) == 3);
    CHECK_THROWS_AS(ring(0), Error);
  }

  TEST_CASE("ring is connected for every n") {
    for (std::size_t n = 1; n <= 40; ++n) {
      CHECK(is_connected(ring(n)));
      check_invariants(ring(n));
    }
  }

  TEST_CASE("is_connected") {
    const std::vector<Edge> none;
    CHECK_FALSE(is_connected(Topology::from_edges(2, none)));
    CHECK(is_connected(ring(5)));
    const std::vector<Edge> split = {{0, 1}, {2, 3}};
    CHECK_FALSE(is_connected(Topology::from_edges(4, split)));
  }

  TEST_CASE("from_edges validates and normalizes") {
    const std::vector<Edge> dup = {{1, 0}, {0, 1}, {1, 1}};
    const auto t = Topology::from_edges(2, dup);
    CHECK(t.edges() == std::vector<Edge>{{0, 1}});
    check_invariants(t);
    const std::vector<Edge> bad = {{0, 5}};
    CHECK_THROWS_AS(Topology::from_edges(3, bad), Error);
  }

  TEST_CASE("builders") {
    CHECK(complete(4).edges().size() == 6);
    CHECK(path(3).edges() == std::vector<Edge>{{0, 1}, {1, 2}});
    CHECK(star(3).edges() == std::vector<Edge>{{0, 1}, {0, 2}});
    for (const auto& t : {complete(5), path(5), star(5)}) {
      CHECK(is_connected(t));
      check_invariants(t);
    }
  }

  TEST_CASE("geometric degenerate cases") {
    const auto one = random_geometric(1, 0.3, 7);
    CHECK(one.size() == 1);
    CHECK(one.neighbors(0) == std::vector<std::size_t>{0});
    const auto dense = random_geometric(4, 1.5, 1);
    CHECK(dense == complete(4));
  }

  TEST_CASE("geometric seed 42 matches an independent placement") {
    const auto layout = random_geometric_layout(30, 0.35, 42);
    CHECK(is_connected(layout.topology));
    CHECK(testing::connected_oracle(layout.topology));

    // Regenerate: the same stream of x, y draws, retrying on disconnect.
    Rng rng(42);
    std::vector<Edge> expected;
    for (int attempt = 0; attempt < layout.attempts; ++attempt) {
      std::vector<double> x(30), y(30);
      for (std::size_t i = 0; i < 30; ++i) {
        x[i] = uniform01(rng);
        y[i] = uniform01(rng);
      }
      expected.clear();
      for (std::size_t i = 0; i < 30; ++i)
        for (std::size_t j = i + 1; j < 30; ++j)
          if (std::hypot(x[i] - x[j], y[i] - y[j]) <= 0.35) expected.emplace_back(i, j);
    }
    CHECK(layout.topology.edges() == expected);
    CHECK(random_geometric(30, 0.35, 42) == layout.topology);
  }

  TEST_CASE("geometric invariants across seeds") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto t = random_geometric(12, 0.5, seed);
      check_invariants(t);
      CHECK(testing::connected_oracle(t));
    }
  }

  TEST_CASE("geometric retry budget") {
    try {
      random_geometric(50, 0.01, 3, 2);
      FAIL("expected a connectivity error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kConnectivity);
      const std::string msg = e.what();
      CHECK(msg.find("n=50") != std::string::npos);
      CHECK(msg.find("radius=0.01") != std::string::npos);
    }
  }
}
