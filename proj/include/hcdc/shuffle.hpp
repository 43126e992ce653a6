#pragma once

// Shuffle phase. s=1 runs one XOR multicast per lattice point. s=d runs
// three rounds by gamma (number of coordinates where the function point and
// file point differ): gamma=0 needs nothing, gamma=1 reuses the XOR
// multicast per lattice point, gamma>=2 exchanges random GF(2^8) linear
// combinations inside groups of 2*gamma nodes.

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hcdc/common.hpp"
#include "hcdc/design.hpp"
#include "hcdc/mapper.hpp"

namespace hcdc {

enum class RoundKind { S1Group, Gamma1, GammaGE2 };

const char* to_string(RoundKind kind);

// A gamma>=2 group: gamma chosen dimensions, an unordered coordinate pair on
// each, and a fixed coordinate on every other dimension. Its members are the
// 2*gamma nodes {(m, a_m), (m, b_m)}.
struct GroupDescriptor {
  std::vector<int> dims;                         // ascending
  std::vector<std::pair<int, int>> coord_pairs;  // one per dims entry, first < second
  std::vector<int> fixed_coords;                 // one per dimension, -1 on chosen dims

  int gamma() const { return static_cast<int>(dims.size()); }
  std::vector<int> nodes(int x) const;
  std::string to_string() const;

  bool operator==(const GroupDescriptor&) const = default;
};

// Every gamma>=2 group of the lattice in canonical order (gamma, dims,
// pairs, fixed coordinates).
std::vector<GroupDescriptor> enumerate_groups(const HypercubeParams& params);

struct Multicast {
  int sender = 0;
  std::vector<int> group;  // ascending flat ids, includes sender
  RoundKind round = RoundKind::S1Group;
  std::size_t point = 0;  // lattice index for S1Group / Gamma1
  GroupDescriptor descriptor;  // GammaGE2 only
  Payload payload;

  std::size_t payload_bits() const { return payload.size() * 8; }
  std::string round_tag() const;
};

class TransmissionLog {
 public:
  void append(Multicast message);
  const std::vector<Multicast>& messages() const { return messages_; }
  std::size_t size() const { return messages_.size(); }
  const BigInt& total_bits() const { return total_bits_; }

  // total_bits / (Q N T_bits)
  Rational load(const HypercubeParams& params) const;

  // Messages sent by each node.
  std::vector<std::size_t> sent_per_node(int num_nodes) const;

  // One {round, sender, group, bits} object per line.
  std::string to_jsonl() const;
  nlohmann::json to_json() const;

 private:
  std::vector<Multicast> messages_;
  BigInt total_bits_ = 0;
};

struct ShuffleOptions {
  std::uint64_t seed = 0;  // keys the GF(2^8) coefficient draws
  int retry_budget = 16;   // per gamma>=2 group
  // When set, every decoded value is checked and DecodeMismatch thrown.
  const IvSource* oracle = nullptr;
};

struct ShuffleResult {
  TransmissionLog log;
  std::uint64_t retries = 0;            // singular redraws, all groups
  std::uint64_t max_group_retries = 0;  // worst single group
  std::uint64_t coded_groups = 0;       // gamma>=2 groups processed
  std::uint64_t deliveries = 0;         // (node, key) pairs delivered
};

// Delivers every missing value into store; throws MissingIv, DecodeMismatch,
// SingularSystem or DeliveryError.
ShuffleResult shuffle_s1(const Placement& pl, IvStore& store, const ShuffleOptions& options = {});
ShuffleResult shuffle_sd(const Placement& pl, IvStore& store, const ShuffleOptions& options = {});
ShuffleResult run_shuffle(const Placement& pl, IvStore& store, const ShuffleOptions& options = {});

struct NodeDelivery {
  int node = 0;
  std::size_t required = 0;    // |W_k| * N
  std::size_t present = 0;
  std::size_t mismatches = 0;  // present but not byte-identical to the oracle
};

struct DeliveryReport {
  std::vector<NodeDelivery> nodes;

  bool complete() const;
  std::size_t total_mismatches() const;
  std::size_t total_missing() const;
};

// Checks that every node holds all N values of every function it reduces.
DeliveryReport verify_delivery(const Placement& pl, const IvStore& store, const IvSource& oracle);

// Flips one byte of the first delivered value found (lowest node, then key).
// Returns the affected node and key.
std::pair<int, IvKey> inject_fault(const Placement& pl, IvStore& store);

}  // namespace hcdc
