#include "hcdc/design.hpp"

#include <algorithm>
#include <string>

namespace hcdc {

Placement::Placement(const HypercubeParams& params) : params_(params) {
  const int K = params.num_nodes();
  const auto eta1 = static_cast<std::size_t>(params.eta1());
  files_of_node_.resize(static_cast<std::size_t>(K));
  functions_of_node_.resize(static_cast<std::size_t>(K));
  for (std::size_t n = 0; n < params.num_points(); ++n) {
    for (int k : nodes_through_index(n, params)) {
      auto& files = files_of_node_[idx(k)];
      for (std::size_t t = 0; t < eta1; ++t) files.push_back(n * eta1 + t);
    }
  }
  reducers_.resize(params.num_functions());
}

bool Placement::node_has_file(int k, std::size_t j) const {
  const NodeId node = NodeId::from_flat(k, params_.x());
  return coord_of(batch_of_file(j), node.dim, params_) == node.coord;
}

bool Placement::node_reduces(int k, std::size_t q) const {
  const auto& r = reducers_[q];
  return std::find(r.begin(), r.end(), k) != r.end();
}

Placement build_placement_s1(const HypercubeParams& params) {
  if (params.s_mode() != SMode::S1) throw ConfigError("build_placement_s1 requires s=1");
  Placement pl(params);
  const auto eta2 = static_cast<std::size_t>(params.eta2());
  for (int k = 0; k < params.num_nodes(); ++k) {
    auto& w = pl.functions_of_node_[static_cast<std::size_t>(k)];
    for (std::size_t t = 0; t < eta2; ++t) {
      const std::size_t q = static_cast<std::size_t>(k) * eta2 + t;
      w.push_back(q);
      pl.reducers_[q] = {k};
    }
  }
  return pl;
}

Placement build_placement_sd(const HypercubeParams& params) {
  if (params.s_mode() != SMode::SD) throw ConfigError("build_placement_sd requires s=d");
  Placement pl(params);
  const auto eta2 = static_cast<std::size_t>(params.eta2());
  for (std::size_t n = 0; n < params.num_points(); ++n) {
    const std::vector<int> tset = nodes_through_index(n, params);
    for (std::size_t t = 0; t < eta2; ++t) {
      const std::size_t q = n * eta2 + t;
      pl.reducers_[q] = tset;
      for (int k : tset) pl.functions_of_node_[static_cast<std::size_t>(k)].push_back(q);
    }
  }
  return pl;
}

Placement build_placement(const HypercubeParams& params) {
  return params.s_mode() == SMode::S1 ? build_placement_s1(params) : build_placement_sd(params);
}

nlohmann::json Placement::to_json(bool include_sets) const {
  using nlohmann::json;
  json doc;
  doc["x"] = params_.x();
  doc["d"] = params_.d();
  doc["eta1"] = params_.eta1();
  doc["eta2"] = params_.eta2();
  doc["s"] = s();
  doc["T_bytes"] = params_.t_bytes();
  doc["K"] = params_.num_nodes();
  doc["N"] = params_.num_files();
  doc["Q"] = params_.num_functions();
  json nodes = json::array();
  for (int k = 0; k < params_.num_nodes(); ++k) {
    const NodeId id = NodeId::from_flat(k, params_.x());
    json node{{"id", k}, {"dim", id.dim}, {"coord", id.coord},
              {"num_files", files_of_node(k).size()}, {"num_functions", functions_of_node(k).size()}};
    if (include_sets) {
      node["files"] = std::vector<std::size_t>(files_of_node(k).begin(), files_of_node(k).end());
      node["functions"] =
          std::vector<std::size_t>(functions_of_node(k).begin(), functions_of_node(k).end());
    }
    nodes.push_back(std::move(node));
  }
  doc["nodes"] = std::move(nodes);
  if (include_sets) {
    json batches = json::array();
    for (std::size_t n = 0; n < params_.num_points(); ++n) {
      batches.push_back({{"point", index_to_point(n, params_).coords}, {"T", nodes_of_batch(n)}});
    }
    doc["batches"] = std::move(batches);
  }
  return doc;
}

Requirements min_requirements(int K, int r, int s) {
  if (K < 1 || r < 1 || r > K) throw ConfigError("min_requirements requires 1 <= r <= K");
  if (K % r != 0) {
    throw ConfigError("r=" + std::to_string(r) + " does not divide K=" + std::to_string(K));
  }
  if (s != 1 && s != r) throw ConfigError("s must be 1 or r (got " + std::to_string(s) + ")");
  const auto ur = static_cast<unsigned>(r);
  const auto us = static_cast<unsigned>(s);
  return {ipow(K / r, ur), ipow(K / s, us), binom(K, r), binom(K, s)};
}

}  // namespace hcdc
