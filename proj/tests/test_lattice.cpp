#include <doctest.h>

#include <set>

#include "hcdc/lattice.hpp"

using namespace hcdc;

namespace {

// Pascal's rule, independent of binom().
BigInt pascal(int n, int k) {
  std::vector<std::vector<BigInt>> t(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) {
    t[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(i + 1), 1);
    for (int j = 1; j < i; ++j) {
      t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          t[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] +
          t[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)];
    }
  }
  return t[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

}  // namespace

TEST_CASE("point_to_index uses dimension 0 as least significant") {
  const auto p3 = HypercubeParams::with_minimal_t(3, 3, 1, 1, SMode::S1);
  CHECK(point_to_index({{0, 0, 0}}, p3) == 0);
  CHECK(point_to_index({{2, 1, 2}}, p3) == 23);
  CHECK(index_to_point(23, p3) == LatticePoint{{2, 1, 2}});

  const auto p2 = HypercubeParams::with_minimal_t(3, 2, 1, 1, SMode::SD);
  CHECK(point_to_index({{1, 1}}, p2) == 4);

  CHECK_THROWS_AS(point_to_index({{3, 0, 0}}, p3), std::out_of_range);
  CHECK_THROWS_AS(point_to_index({{0, 0}}, p3), std::out_of_range);
  CHECK_THROWS_AS(point_to_index({{-1, 0, 0}}, p3), std::out_of_range);
}

TEST_CASE("index and point round-trip for every lattice up to 5^5") {
  for (int x = 1; x <= 5; ++x) {
    for (int d = 2; d <= 5; ++d) {
      const auto params = HypercubeParams::with_minimal_t(x, d, 1, 1, SMode::S1);
      for (std::size_t n = 0; n < params.num_points(); ++n) {
        const LatticePoint p = index_to_point(n, params);
        REQUIRE(point_to_index(p, params) == n);
        for (int m = 0; m < d; ++m) REQUIRE(coord_of(n, m, params) == p.coords[static_cast<std::size_t>(m)]);
      }
    }
  }
}

TEST_CASE("with_coord replaces a single coordinate") {
  const auto params = HypercubeParams::with_minimal_t(4, 3, 1, 1, SMode::S1);
  for (std::size_t n = 0; n < params.num_points(); ++n) {
    for (int m = 0; m < 3; ++m) {
      for (int c = 0; c < 4; ++c) {
        LatticePoint p = index_to_point(n, params);
        p.coords[static_cast<std::size_t>(m)] = c;
        REQUIRE(with_coord(n, m, c, params) == point_to_index(p, params));
      }
    }
  }
}

TEST_CASE("nodes_through_point picks one node per dimension group") {
  const auto nodes = nodes_through_point({{1, 1}});
  REQUIRE(nodes.size() == 2);
  CHECK(nodes[0].flat(3) == 1);
  CHECK(nodes[1].flat(3) == 4);

  // x=3, d=3: the 27 T-sets are exactly the triples with one node per group.
  const auto params = HypercubeParams::with_minimal_t(3, 3, 1, 1, SMode::S1);
  std::set<std::vector<int>> seen;
  for (std::size_t n = 0; n < params.num_points(); ++n) {
    const auto t = nodes_through_index(n, params);
    REQUIRE(t.size() == 3);
    for (int m = 0; m < 3; ++m) CHECK(t[static_cast<std::size_t>(m)] / 3 == m);
    seen.insert(t);
  }
  std::set<std::vector<int>> triples;
  for (int a = 0; a < 3; ++a) {
    for (int b = 3; b < 6; ++b) {
      for (int c = 6; c < 9; ++c) triples.insert({a, b, c});
    }
  }
  CHECK(seen == triples);
}

TEST_CASE("NodeId flat ids") {
  for (int k = 0; k < 12; ++k) CHECK(NodeId::from_flat(k, 4).flat(4) == k);
  CHECK(NodeId::from_flat(5, 3) == NodeId{1, 2});
}

TEST_CASE("gamma counts differing coordinates") {
  CHECK(gamma(LatticePoint{{1, 2, 0}}, LatticePoint{{1, 2, 0}}) == 0);
  CHECK(gamma(LatticePoint{{0, 0, 0}}, LatticePoint{{1, 0, 2}}) == 2);
  // x=3, d=2, 1-based labels: phi_5 sits at point (1,1), w_9 at (2,2).
  const auto params = HypercubeParams::with_minimal_t(3, 2, 1, 1, SMode::SD);
  CHECK(gamma(std::size_t{4}, std::size_t{8}, params) == 2);
  for (std::size_t p = 0; p < 9; ++p) {
    for (std::size_t q = 0; q < 9; ++q) CHECK(gamma(p, q, params) == gamma(q, p, params));
  }
}

TEST_CASE("gamma partitions every (function point, file point) pair") {
  for (int x = 1; x <= 4; ++x) {
    for (int d = 2; d <= 4; ++d) {
      const auto params = HypercubeParams::with_minimal_t(x, d, 1, 1, SMode::SD);
      std::vector<BigInt> counts(static_cast<std::size_t>(d + 1), 0);
      for (std::size_t p = 0; p < params.num_points(); ++p) {
        for (std::size_t q = 0; q < params.num_points(); ++q) ++counts[static_cast<std::size_t>(gamma(p, q, params))];
      }
      BigInt total = 0;
      for (int g = 0; g <= d; ++g) {
        const BigInt expect = binom(d, g) * ipow(x * (x - 1), static_cast<unsigned>(g)) *
                              ipow(x, static_cast<unsigned>(d - g));
        CHECK(counts[static_cast<std::size_t>(g)] == expect);
        total += expect;
      }
      CHECK(total == ipow(x, static_cast<unsigned>(2 * d)));
    }
  }
}

TEST_CASE("minimal_t is the lcm of the packet counts") {
  CHECK(minimal_t(2) == 3);
  CHECK(minimal_t(3) == 30);
  CHECK(minimal_t(4) == 105);
  for (int d = 2; d <= 8; ++d) {
    const std::size_t t = minimal_t(d);
    CHECK(t % static_cast<std::size_t>(d - 1) == 0);
    for (int g = 2; g <= d; ++g) CHECK(t % static_cast<std::size_t>(2 * g - 1) == 0);
  }
}

TEST_CASE("binom is exact") {
  CHECK(binom(9, 3) == 84);
  CHECK(binom(7, 0) == 1);
  CHECK(binom(6, 4) == 15);
  CHECK(binom(3, 5) == 0);
  for (int n = 0; n <= 64; ++n) {
    for (int k = 0; k <= n; ++k) REQUIRE(binom(n, k) == pascal(n, k));
  }
  CHECK(binom(64, 32).str() == "1832624140942590534");
}

TEST_CASE("HypercubeParams derived sizes and validation") {
  const auto s1 = HypercubeParams::with_minimal_t(3, 3, 2, 3, SMode::S1);
  CHECK(s1.num_nodes() == 9);
  CHECK(s1.num_files() == 54);
  CHECK(s1.num_functions() == 27);
  CHECK(s1.t_bytes() == 30);
  const auto sd = HypercubeParams::with_minimal_t(3, 2, 1, 2, SMode::SD);
  CHECK(sd.num_functions() == 18);
  CHECK(sd.reducers_per_function() == 2);

  CHECK_THROWS_AS(HypercubeParams(3, 1, 1, 1, SMode::S1, 3), ConfigError);
  CHECK_THROWS_AS(HypercubeParams(0, 2, 1, 1, SMode::S1, 3), ConfigError);
  CHECK_THROWS_AS(HypercubeParams(3, 2, 0, 1, SMode::S1, 3), ConfigError);
  CHECK_THROWS_AS(HypercubeParams(3, 2, 1, 0, SMode::S1, 3), ConfigError);
  CHECK_THROWS_AS(HypercubeParams(3, 3, 1, 1, SMode::S1, 20), ConfigError);
  CHECK_NOTHROW(HypercubeParams(3, 3, 1, 1, SMode::S1, 60));
}
