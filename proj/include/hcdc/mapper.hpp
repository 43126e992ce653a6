#pragma once

// Map phase: synthetic intermediate values, the three computation rules and
// per-node IV storage.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hcdc/common.hpp"
#include "hcdc/design.hpp"

namespace hcdc {

struct IvKey {
  std::uint32_t func = 0;
  std::uint32_t file = 0;

  auto operator<=>(const IvKey&) const = default;
};

enum class MapPolicy { NecessaryOnly, AllLocal };

const char* to_string(MapPolicy policy);

// Stand-in for g_{i,j}(w_j). In synthetic mode v_{i,j} = SHAKE256(seed, i, j);
// in file mode v_{i,j} = SHAKE256(seed, i, w_j) over an actual file blob.
class IvSource {
 public:
  IvSource(std::uint64_t seed, std::size_t t_bytes);
  IvSource(std::uint64_t seed, std::size_t t_bytes, std::vector<Payload> file_blobs);

  // File mode with num_files generated blobs of file_bytes each.
  static IvSource generated_files(std::uint64_t seed, std::size_t t_bytes, std::size_t num_files,
                                  std::size_t file_bytes);

  std::uint64_t seed() const { return seed_; }
  std::size_t t_bytes() const { return t_bytes_; }
  bool file_mode() const { return !files_.empty(); }

  void fill(std::size_t func, std::size_t file, std::span<std::uint8_t> out) const;
  Payload operator()(std::size_t func, std::size_t file) const;

 private:
  std::uint64_t seed_;
  std::size_t t_bytes_;
  std::vector<Payload> files_;
};

Payload synth_iv(std::uint64_t seed, std::size_t func, std::size_t file, std::size_t t_bytes);

// Keys node k evaluates, sorted by (func, file).
std::vector<IvKey> map_necessary_s1(const Placement& pl, int k);
std::vector<IvKey> map_necessary_sd(const Placement& pl, int k);
std::vector<IvKey> map_all(const Placement& pl, int k);
std::vector<IvKey> map_keys(const Placement& pl, int k, MapPolicy policy);

// Everything one node holds: values it computed (dense over its local files
// x all Q functions) and values delivered to it (dense over the functions it
// reduces x all N files).
class NodeStore {
 public:
  NodeStore(const Placement& pl, int k);

  int node() const { return node_; }
  std::size_t t_bytes() const { return t_bytes_; }

  bool has_computed(IvKey key) const;
  // Throws MissingIv.
  std::span<const std::uint8_t> computed(IvKey key) const;
  void store_computed(IvKey key, std::span<const std::uint8_t> value);
  std::span<std::uint8_t> computed_slot(IvKey key);

  // Throws DeliveryError on a duplicate, a key the node does not reduce, or
  // a key it could compute itself.
  void deliver(IvKey key, std::span<const std::uint8_t> value);
  bool has_delivered(IvKey key) const;
  // Test hook for fault injection.
  std::span<std::uint8_t> delivered_mut(IvKey key);

  // Reduce-side view: computed when the file is local, else delivered.
  bool has(IvKey key) const;
  std::span<const std::uint8_t> get(IvKey key) const;

  std::size_t computed_count() const { return computed_count_; }
  std::size_t delivered_count() const { return delivered_count_; }

 private:
  std::size_t computed_offset(IvKey key) const;
  std::size_t delivered_offset(IvKey key) const;

  int node_;
  std::size_t t_bytes_;
  std::size_t num_functions_;
  std::size_t num_files_;
  std::vector<std::int32_t> file_slot_;  // -1 when not local
  std::vector<std::int32_t> func_slot_;  // -1 when not reduced here
  std::vector<bool> computed_flag_;
  std::vector<std::uint8_t> computed_bytes_;
  std::vector<bool> delivered_flag_;
  std::vector<std::uint8_t> delivered_bytes_;
  std::size_t computed_count_ = 0;
  std::size_t delivered_count_ = 0;
};

struct IvStore {
  std::vector<NodeStore> nodes;
  // Total map-function evaluations across all nodes.
  std::uint64_t computations = 0;

  NodeStore& node(int k) { return nodes[static_cast<std::size_t>(k)]; }
  const NodeStore& node(int k) const { return nodes[static_cast<std::size_t>(k)]; }
};

IvStore run_map(const Placement& pl, const IvSource& source, MapPolicy policy);

// computations / (Q N)
Rational computation_load(const Placement& pl, const IvStore& store);

}  // namespace hcdc
