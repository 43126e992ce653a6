#include "hcdc/pipeline.hpp"

#include <string>

namespace hcdc {

PipelineResult run_pipeline(const Placement& pl, const IvSource& source, const PipelineOptions& options) {
  const HypercubeParams& params = pl.params();
  PipelineResult out;

  IvStore store = run_map(pl, source, options.policy);
  for (const auto& node : store.nodes) out.computed_per_node.push_back(node.computed_count());
  out.r = computation_load(pl, store);

  ShuffleOptions sopt;
  sopt.seed = options.seed;
  sopt.retry_budget = options.retry_budget;
  out.shuffle = run_shuffle(pl, store, sopt);
  out.L = out.shuffle.log.load(params);

  if (options.inject_fault) out.injected = inject_fault(pl, store);
  out.delivery = verify_delivery(pl, store, source);

  out.oracle = oracle_run(source, params.num_functions(), params.num_files());
  for (int k = 0; k < params.num_nodes(); ++k) {
    std::vector<ReduceDigest> digests;
    if (out.delivery.nodes[static_cast<std::size_t>(k)].present == out.delivery.nodes[static_cast<std::size_t>(k)].required) {
      digests = reduce_node(pl, store, k);
    }
    for (const auto& d : digests) {
      ++out.digest_checks;
      if (d.digest != out.oracle[d.func].digest) ++out.digest_mismatches;
    }
    out.node_digests.push_back(std::move(digests));
  }
  return out;
}

std::vector<ChainRoundResult> chain_round(const HypercubeParams& params, MapPolicy policy,
                                          std::span<const std::uint64_t> seeds) {
  if (params.s_mode() != SMode::SD) throw ConfigError("chained rounds require s=d");
  if (params.eta1() != params.eta2()) throw ConfigError("chained rounds require eta1 == eta2 (Q = N)");
  const Placement pl = build_placement_sd(params);
  const std::size_t n_files = params.num_files();
  const std::size_t t_bytes = params.t_bytes();

  std::vector<ChainRoundResult> rounds;
  std::vector<Payload> pipeline_files;
  std::vector<Payload> oracle_files;
  for (std::uint64_t seed : seeds) {
    const IvSource source = pipeline_files.empty() ? IvSource(seed, t_bytes) : IvSource(seed, t_bytes, pipeline_files);
    const IvSource reference = oracle_files.empty() ? IvSource(seed, t_bytes) : IvSource(seed, t_bytes, oracle_files);

    PipelineOptions opt;
    opt.policy = policy;
    opt.seed = seed;
    const PipelineResult run = run_pipeline(pl, source, opt);
    const std::vector<ReduceDigest> chained = oracle_run(reference, params.num_functions(), n_files);

    ChainRoundResult round;
    round.seed = seed;
    round.r = run.r;
    round.L = run.L;
    round.retries = run.shuffle.retries;
    round.pipeline_verified = run.verified();
    // Consensus digest per function from its reducers.
    round.digests.assign(params.num_functions(), ReduceDigest{});
    std::vector<bool> seen(params.num_functions(), false);
    bool consistent = true;
    for (const auto& node : run.node_digests) {
      for (const auto& d : node) {
        if (!seen[d.func]) {
          round.digests[d.func] = d;
          seen[d.func] = true;
        } else if (round.digests[d.func] != d) {
          consistent = false;
        }
      }
    }
    for (bool s : seen) consistent = consistent && s;
    round.matches_chained_oracle = consistent && round.digests == chained;

    pipeline_files.clear();
    oracle_files.clear();
    for (std::size_t j = 0; j < n_files; ++j) {
      pipeline_files.push_back(expand_digest(round.digests[j].digest, t_bytes));
      oracle_files.push_back(expand_digest(chained[j].digest, t_bytes));
    }
    rounds.push_back(std::move(round));
  }
  return rounds;
}

std::vector<ChainRoundResult> chain_round(const HypercubeParams& params, MapPolicy policy, std::uint64_t seed,
                                          int rounds) {
  if (rounds < 1) throw ConfigError("rounds must be >= 1 (got " + std::to_string(rounds) + ")");
  const std::vector<std::uint64_t> seeds(static_cast<std::size_t>(rounds), seed);
  return chain_round(params, policy, seeds);
}

}  // namespace hcdc
