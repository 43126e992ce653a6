#include "hcdc/reducer.hpp"

#include <string>

#include "hcdc/hash.hpp"

namespace hcdc {

namespace {

constexpr std::array<std::uint8_t, 8> kReduceTag = {'h', 'c', 'd', 'c', '-', 'r', 'd', 0};
constexpr std::array<std::uint8_t, 8> kChainTag = {'h', 'c', 'd', 'c', '-', 'c', 'h', 0};

class DigestBuilder {
 public:
  DigestBuilder(std::size_t func, std::size_t num_files) {
    std::array<std::uint8_t, 24> head{};
    std::copy(kReduceTag.begin(), kReduceTag.end(), head.begin());
    put_le64(head.data() + 8, func);
    put_le64(head.data() + 16, num_files);
    h_.update(head);
  }
  void add(std::span<const std::uint8_t> iv) { h_.update(iv); }
  Digest finish() { return h_.finish(); }

 private:
  Sha256 h_;
};

}  // namespace

std::string to_hex(const Digest& d) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s;
  s.reserve(64);
  for (auto b : d) {
    s += kHex[b >> 4];
    s += kHex[b & 0xF];
  }
  return s;
}

ReduceDigest reduce(std::size_t func, std::span<const Payload> ivs_by_file) {
  std::vector<std::size_t> missing;
  for (std::size_t j = 0; j < ivs_by_file.size(); ++j) {
    if (ivs_by_file[j].empty()) missing.push_back(j);
  }
  if (!missing.empty()) {
    std::string list;
    for (std::size_t j : missing) list += (list.empty() ? "" : ",") + std::to_string(j);
    throw IncompleteInputs("reducer", "function " + std::to_string(func) + " missing files {" + list + "}");
  }
  DigestBuilder b(func, ivs_by_file.size());
  for (const auto& iv : ivs_by_file) b.add(iv);
  return {func, b.finish()};
}

std::vector<ReduceDigest> reduce_node(const Placement& pl, const IvStore& store, int k) {
  const std::size_t N = pl.params().num_files();
  const NodeStore& node = store.node(k);
  std::vector<ReduceDigest> out;
  for (std::size_t i : pl.functions_of_node(k)) {
    std::string missing;
    for (std::size_t j = 0; j < N; ++j) {
      if (!node.has({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)})) {
        missing += (missing.empty() ? "" : ",") + std::to_string(j);
      }
    }
    if (!missing.empty()) {
      throw IncompleteInputs("reducer", "node " + std::to_string(k) + " function " + std::to_string(i) +
                                            " missing files {" + missing + "}");
    }
    DigestBuilder b(i, N);
    for (std::size_t j = 0; j < N; ++j) b.add(node.get({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)}));
    out.push_back({i, b.finish()});
  }
  return out;
}

std::vector<ReduceDigest> oracle_run(const IvSource& source, std::size_t num_functions, std::size_t num_files) {
  std::vector<ReduceDigest> out;
  out.reserve(num_functions);
  Payload iv(source.t_bytes());
  for (std::size_t i = 0; i < num_functions; ++i) {
    DigestBuilder b(i, num_files);
    for (std::size_t j = 0; j < num_files; ++j) {
      source.fill(i, j, iv);
      b.add(iv);
    }
    out.push_back({i, b.finish()});
  }
  return out;
}

std::vector<ReduceDigest> oracle_run(const HypercubeParams& params, std::uint64_t seed) {
  return oracle_run(IvSource(seed, params.t_bytes()), params.num_functions(), params.num_files());
}

nlohmann::json digests_to_json(std::span<const ReduceDigest> digests) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& d : digests) arr.push_back({{"func", d.func}, {"digest", to_hex(d.digest)}});
  return arr;
}

Payload expand_digest(const Digest& digest, std::size_t bytes) {
  std::array<std::uint8_t, 40> in{};
  std::copy(kChainTag.begin(), kChainTag.end(), in.begin());
  std::copy(digest.begin(), digest.end(), in.begin() + 8);
  Payload out(bytes);
  shake256(in, out);
  return out;
}

}  // namespace hcdc
