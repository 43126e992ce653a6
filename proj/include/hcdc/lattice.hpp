#pragma once

// Hypercube lattice geometry: design parameters, lattice points, node ids
// and the index arithmetic everything else builds on.
//
// Conventions: a lattice point p in [0,x)^d has flat index
// n = sum_m p[m] * x^m (dimension 0 least significant). Node (dim, coord)
// has flat id k = dim * x + coord; the x nodes of one dimension form a group.
// Node (m, c) stores every file batch whose point has p[m] == c.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hcdc/common.hpp"

namespace hcdc {

enum class SMode { S1, SD };

const char* to_string(SMode mode);

class HypercubeParams {
 public:
  // Throws ConfigError naming the violated constraint.
  HypercubeParams(int x, int d, int eta1, int eta2, SMode s_mode, std::size_t t_bytes);

  // Same, with t_bytes = minimal_t(d).
  static HypercubeParams with_minimal_t(int x, int d, int eta1, int eta2, SMode s_mode);

  int x() const { return x_; }
  int d() const { return d_; }
  int eta1() const { return eta1_; }
  int eta2() const { return eta2_; }
  SMode s_mode() const { return s_mode_; }
  std::size_t t_bytes() const { return t_bytes_; }

  int num_nodes() const { return x_ * d_; }  // K
  std::size_t num_points() const { return num_points_; }  // x^d
  std::size_t num_files() const { return num_points_ * static_cast<std::size_t>(eta1_); }  // N
  std::size_t num_functions() const;  // Q
  int reducers_per_function() const { return s_mode_ == SMode::S1 ? 1 : d_; }  // s

  // x^m
  std::size_t stride(int dim) const { return strides_[static_cast<std::size_t>(dim)]; }

  bool operator==(const HypercubeParams&) const = default;

 private:
  int x_;
  int d_;
  int eta1_;
  int eta2_;
  SMode s_mode_;
  std::size_t t_bytes_;
  std::size_t num_points_;
  std::vector<std::size_t> strides_;
};

struct LatticePoint {
  std::vector<int> coords;

  bool operator==(const LatticePoint&) const = default;
};

struct NodeId {
  int dim = 0;
  int coord = 0;

  int flat(int x) const { return dim * x + coord; }
  static NodeId from_flat(int k, int x) { return {k / x, k % x}; }

  bool operator==(const NodeId&) const = default;
};

// Throws std::out_of_range on a bad coordinate or dimension count.
std::size_t point_to_index(const LatticePoint& p, const HypercubeParams& params);
LatticePoint index_to_point(std::size_t n, const HypercubeParams& params);

// Coordinate of flat point n along dim, and n with that coordinate replaced.
inline int coord_of(std::size_t n, int dim, const HypercubeParams& params) {
  return static_cast<int>((n / params.stride(dim)) % static_cast<std::size_t>(params.x()));
}
inline std::size_t with_coord(std::size_t n, int dim, int c, const HypercubeParams& params) {
  const auto old = static_cast<std::size_t>(coord_of(n, dim, params));
  return n - old * params.stride(dim) + static_cast<std::size_t>(c) * params.stride(dim);
}

// The T-set of a point: one node per dimension group, ordered by flat id.
std::vector<NodeId> nodes_through_point(const LatticePoint& p);
std::vector<int> nodes_through_index(std::size_t n, const HypercubeParams& params);

// Number of coordinates where p and q differ.
int gamma(const LatticePoint& p, const LatticePoint& q);
int gamma(std::size_t p, std::size_t q, const HypercubeParams& params);

// Smallest T (bytes) that splits evenly into d-1 packets and into 2g-1
// packets for every 2 <= g <= d.
std::size_t minimal_t(int d);

// Exact binomial coefficient; 0 when k > n or k < 0.
BigInt binom(long long n, long long k);

BigInt ipow(long long base, unsigned exp);

}  // namespace hcdc
