#pragma once

// Map -> Shuffle -> Reduce -> verify, end to end, plus chained s=d rounds.

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hcdc/common.hpp"
#include "hcdc/design.hpp"
#include "hcdc/mapper.hpp"
#include "hcdc/reducer.hpp"
#include "hcdc/shuffle.hpp"

namespace hcdc {

struct PipelineOptions {
  MapPolicy policy = MapPolicy::NecessaryOnly;
  std::uint64_t seed = 0;  // GF(2^8) coefficient seed
  int retry_budget = 16;
  bool inject_fault = false;  // corrupt one delivered byte before verification
};

struct PipelineResult {
  Rational r;  // measured computation load
  Rational L;  // measured communication load
  std::vector<std::size_t> computed_per_node;
  ShuffleResult shuffle;
  DeliveryReport delivery;
  std::vector<ReduceDigest> oracle;
  // node_digests[k] are node k's digests in W_k order.
  std::vector<std::vector<ReduceDigest>> node_digests;
  std::size_t digest_checks = 0;
  std::size_t digest_mismatches = 0;
  std::optional<std::pair<int, IvKey>> injected;

  bool verified() const {
    return delivery.complete() && delivery.total_mismatches() == 0 && digest_mismatches == 0;
  }
};

PipelineResult run_pipeline(const Placement& pl, const IvSource& source, const PipelineOptions& options);

struct ChainRoundResult {
  std::uint64_t seed = 0;
  Rational r;
  Rational L;
  std::uint64_t retries = 0;
  bool pipeline_verified = false;
  bool matches_chained_oracle = false;
  std::vector<ReduceDigest> digests;  // agreed digest per function

  bool verified() const { return pipeline_verified && matches_chained_oracle; }
};

// s=d with eta1 == eta2 only. Round t+1 reads file j = expand(digest of
// function j from round t); every round is checked against an independently
// chained oracle. One seed per round.
std::vector<ChainRoundResult> chain_round(const HypercubeParams& params, MapPolicy policy,
                                          std::span<const std::uint64_t> seeds);
std::vector<ChainRoundResult> chain_round(const HypercubeParams& params, MapPolicy policy, std::uint64_t seed,
                                          int rounds);

}  // namespace hcdc
