#pragma once

// File placement and reduce-function assignment for the s=1 and s=d schemes.
//
// File batch n (lattice index) holds files [n*eta1, (n+1)*eta1) and is stored
// by exactly the d nodes of its T-set. With s=1, node k reduces functions
// [k*eta2, (k+1)*eta2). With s=d, function batch n holds functions
// [n*eta2, (n+1)*eta2) and is reduced by the T-set of n.

#include <cstddef>
#include <span>
#include <vector>

#include <json.hpp>

#include "hcdc/common.hpp"
#include "hcdc/lattice.hpp"

namespace hcdc {

class Placement {
 public:
  const HypercubeParams& params() const { return params_; }
  int s() const { return params_.reducers_per_function(); }

  // M_k, sorted.
  std::span<const std::size_t> files_of_node(int k) const { return files_of_node_[idx(k)]; }
  // W_k, sorted.
  std::span<const std::size_t> functions_of_node(int k) const { return functions_of_node_[idx(k)]; }
  // T_n, ordered by flat node id.
  std::vector<int> nodes_of_batch(std::size_t n) const { return nodes_through_index(n, params_); }
  std::span<const int> reducers_of_function(std::size_t q) const { return reducers_[q]; }

  std::size_t batch_of_file(std::size_t j) const { return j / static_cast<std::size_t>(params_.eta1()); }
  // Lattice point of a function batch; s=d only.
  std::size_t point_of_function(std::size_t q) const { return q / static_cast<std::size_t>(params_.eta2()); }

  bool node_has_file(int k, std::size_t j) const;
  bool node_reduces(int k, std::size_t q) const;

  // Placement document for `plan`; T-sets and per-node sets are listed only
  // when include_sets is true.
  nlohmann::json to_json(bool include_sets) const;

 private:
  friend Placement build_placement_s1(const HypercubeParams&);
  friend Placement build_placement_sd(const HypercubeParams&);
  explicit Placement(const HypercubeParams& params);
  std::size_t idx(int k) const { return static_cast<std::size_t>(k); }

  HypercubeParams params_;
  std::vector<std::vector<std::size_t>> files_of_node_;
  std::vector<std::vector<std::size_t>> functions_of_node_;
  std::vector<std::vector<int>> reducers_;
};

// Throw ConfigError when params.s_mode() does not match.
Placement build_placement_s1(const HypercubeParams& params);
Placement build_placement_sd(const HypercubeParams& params);
Placement build_placement(const HypercubeParams& params);

// Minimum file/function counts for the hypercube scheme ((K/r)^r, (K/s)^s)
// and for the binomial-placement baseline (C(K,r), C(K,s)).
struct Requirements {
  BigInt n_hc;
  BigInt q_hc;
  BigInt n_li;
  BigInt q_li;
};

// Requires r | K and s in {1, r}; throws ConfigError otherwise.
Requirements min_requirements(int K, int r, int s);

}  // namespace hcdc
