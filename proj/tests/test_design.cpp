#include <doctest.h>

#include <algorithm>
#include <set>

#include "hcdc/design.hpp"

using namespace hcdc;

namespace {

// Hyperplane membership straight from the point coordinates.
bool on_hyperplane(const HypercubeParams& params, int k, std::size_t file) {
  const LatticePoint p = index_to_point(file / static_cast<std::size_t>(params.eta1()), params);
  return p.coords[static_cast<std::size_t>(k / params.x())] == k % params.x();
}

void check_common_invariants(const Placement& pl) {
  const auto& params = pl.params();
  std::size_t total = 0;
  for (int k = 0; k < params.num_nodes(); ++k) {
    const auto files = pl.files_of_node(k);
    CHECK(files.size() == static_cast<std::size_t>(params.eta1()) * params.num_points() / static_cast<std::size_t>(params.x()));
    CHECK(std::is_sorted(files.begin(), files.end()));
    total += files.size();
    for (std::size_t j = 0; j < params.num_files(); ++j) {
      const bool listed = std::binary_search(files.begin(), files.end(), j);
      REQUIRE(listed == on_hyperplane(params, k, j));
      REQUIRE(pl.node_has_file(k, j) == listed);
    }
  }
  CHECK(total == static_cast<std::size_t>(params.d()) * params.num_files());
  for (std::size_t n = 0; n < params.num_points(); ++n) {
    const auto tset = pl.nodes_of_batch(n);
    CHECK(tset.size() == static_cast<std::size_t>(params.d()));
    for (std::size_t t = 0; t < static_cast<std::size_t>(params.eta1()); ++t) {
      const std::size_t j = n * static_cast<std::size_t>(params.eta1()) + t;
      for (int k = 0; k < params.num_nodes(); ++k) {
        CHECK(pl.node_has_file(k, j) == (std::find(tset.begin(), tset.end(), k) != tset.end()));
      }
    }
  }
}

}  // namespace

TEST_CASE("s=1 placement for the 3x3x3 cube") {
  const auto params = HypercubeParams::with_minimal_t(3, 3, 1, 1, SMode::S1);
  const Placement pl = build_placement_s1(params);
  CHECK(params.num_nodes() == 9);
  CHECK(params.num_files() == 27);
  CHECK(params.num_functions() == 9);
  // Node 4 (0-based) is the middle node of the second group: middle coordinate 1.
  const auto files = pl.files_of_node(4);
  REQUIRE(files.size() == 9);
  for (std::size_t j : files) CHECK(index_to_point(j, params).coords[1] == 1);
  check_common_invariants(pl);
  for (int k = 0; k < 9; ++k) {
    REQUIRE(pl.functions_of_node(k).size() == 1);
    CHECK(pl.functions_of_node(k)[0] == static_cast<std::size_t>(k));
  }
}

TEST_CASE("s=1 placement invariants over a parameter grid") {
  for (int x = 1; x <= 4; ++x) {
    for (int d = 2; d <= 4; ++d) {
      for (int e1 = 1; e1 <= 2; ++e1) {
        for (int e2 = 1; e2 <= 2; ++e2) {
          const Placement pl = build_placement_s1(HypercubeParams::with_minimal_t(x, d, e1, e2, SMode::S1));
          check_common_invariants(pl);
          CHECK(pl.s() == 1);
          std::vector<int> owner(pl.params().num_functions(), -1);
          for (int k = 0; k < pl.params().num_nodes(); ++k) {
            CHECK(pl.functions_of_node(k).size() == static_cast<std::size_t>(e2));
            for (std::size_t q : pl.functions_of_node(k)) {
              CHECK(owner[q] == -1);
              owner[q] = k;
            }
          }
          CHECK(std::count(owner.begin(), owner.end(), -1) == 0);
        }
      }
    }
  }
}

TEST_CASE("x=2, d=2 s=1: every file at exactly two nodes") {
  const Placement pl = build_placement_s1(HypercubeParams::with_minimal_t(2, 2, 1, 1, SMode::S1));
  CHECK(pl.params().num_nodes() == 4);
  CHECK(pl.params().num_files() == 4);
  for (std::size_t j = 0; j < 4; ++j) {
    int holders = 0;
    for (int k = 0; k < 4; ++k) holders += pl.node_has_file(k, j) ? 1 : 0;
    CHECK(holders == 2);
  }
}

TEST_CASE("s=d placement: functions live on lattice points") {
  const Placement pl = build_placement_sd(HypercubeParams::with_minimal_t(3, 2, 1, 1, SMode::SD));
  CHECK(pl.params().num_files() == 9);
  CHECK(pl.params().num_functions() == 9);
  const auto r0 = pl.reducers_of_function(0);
  CHECK(std::vector<int>(r0.begin(), r0.end()) == std::vector<int>{0, 3});
  CHECK(pl.s() == 2);

  for (int x = 1; x <= 4; ++x) {
    for (int d = 2; d <= 4; ++d) {
      for (int e2 = 1; e2 <= 2; ++e2) {
        const Placement p = build_placement_sd(HypercubeParams::with_minimal_t(x, d, 1, e2, SMode::SD));
        check_common_invariants(p);
        std::size_t total = 0;
        for (int k = 0; k < p.params().num_nodes(); ++k) total += p.functions_of_node(k).size();
        CHECK(total == static_cast<std::size_t>(d) * p.params().num_functions());
        for (std::size_t q = 0; q < p.params().num_functions(); ++q) {
          REQUIRE(p.reducers_of_function(q).size() == static_cast<std::size_t>(d));
          for (int k : p.reducers_of_function(q)) CHECK(p.node_reduces(k, q));
        }
      }
    }
  }
}

TEST_CASE("placement builders reject the wrong mode") {
  CHECK_THROWS_AS(build_placement_s1(HypercubeParams::with_minimal_t(2, 2, 1, 1, SMode::SD)), ConfigError);
  CHECK_THROWS_AS(build_placement_sd(HypercubeParams::with_minimal_t(2, 2, 1, 1, SMode::S1)), ConfigError);
}

TEST_CASE("min_requirements against the binomial baseline") {
  auto r = min_requirements(9, 3, 1);
  CHECK(r.n_hc == 27);
  CHECK(r.n_li == 84);
  CHECK(r.q_hc == 9);
  CHECK(r.q_li == 9);
  r = min_requirements(6, 2, 2);
  CHECK(r.n_hc == 9);
  CHECK(r.q_hc == 9);
  CHECK(r.n_li == 15);
  CHECK(r.q_li == 15);
  r = min_requirements(4, 2, 1);
  CHECK(r.n_hc == 4);
  CHECK(r.n_li == 6);

  CHECK_THROWS_AS(min_requirements(9, 2, 1), ConfigError);
  CHECK_THROWS_AS(min_requirements(9, 3, 2), ConfigError);
}

TEST_CASE("hypercube needs no more files than the binomial placement") {
  for (int K = 2; K <= 24; ++K) {
    for (int r = 2; r <= K; ++r) {
      if (K % r != 0 || K / r < 2) continue;
      const auto req = min_requirements(K, r, 1);
      CHECK(req.n_hc <= req.n_li);
      if (r >= 3 || K / r >= 3) CHECK(req.n_hc < req.n_li);
    }
  }
}

TEST_CASE("placement JSON lists sets on request") {
  const Placement pl = build_placement_s1(HypercubeParams::with_minimal_t(2, 2, 1, 1, SMode::S1));
  const auto full = pl.to_json(true);
  CHECK(full["K"] == 4);
  CHECK(full["batches"].size() == 4);
  CHECK(full["nodes"][0]["files"].size() == 2);
  const auto brief = pl.to_json(false);
  CHECK_FALSE(brief.contains("batches"));
  CHECK(brief["nodes"][0]["num_files"] == 2);
}
