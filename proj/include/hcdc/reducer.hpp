#pragma once

// Reduce phase and the central oracle used to check it.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "hcdc/common.hpp"
#include "hcdc/design.hpp"
#include "hcdc/mapper.hpp"

namespace hcdc {

using Digest = std::array<std::uint8_t, 32>;

// SHA-256 over (func, N, v_{func,0} .. v_{func,N-1}).
struct ReduceDigest {
  std::size_t func = 0;
  Digest digest{};

  bool operator==(const ReduceDigest&) const = default;
};

std::string to_hex(const Digest& d);

// ivs_by_file[j] is v_{func,j}; an empty payload counts as missing and
// raises IncompleteInputs naming the absent file ids.
ReduceDigest reduce(std::size_t func, std::span<const Payload> ivs_by_file);

// Digests for every function node k reduces, read from its store.
std::vector<ReduceDigest> reduce_node(const Placement& pl, const IvStore& store, int k);

// Ground truth: all Q digests computed centrally from the source, no shuffle.
std::vector<ReduceDigest> oracle_run(const IvSource& source, std::size_t num_functions, std::size_t num_files);
std::vector<ReduceDigest> oracle_run(const HypercubeParams& params, std::uint64_t seed);

nlohmann::json digests_to_json(std::span<const ReduceDigest> digests);

// Next-round file blob from a reduce digest.
Payload expand_digest(const Digest& digest, std::size_t bytes);

}  // namespace hcdc
