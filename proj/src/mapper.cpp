#include "hcdc/mapper.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "hcdc/hash.hpp"

namespace hcdc {

namespace {

constexpr std::array<std::uint8_t, 8> kIvTag = {'h', 'c', 'd', 'c', '-', 'i', 'v', 0};
constexpr std::array<std::uint8_t, 8> kFileTag = {'h', 'c', 'd', 'c', '-', 'f', 'i', 0};

std::string key_str(IvKey key) {
  return "v(" + std::to_string(key.func) + "," + std::to_string(key.file) + ")";
}

}  // namespace

const char* to_string(MapPolicy policy) {
  return policy == MapPolicy::NecessaryOnly ? "necessary" : "all";
}

IvSource::IvSource(std::uint64_t seed, std::size_t t_bytes) : seed_(seed), t_bytes_(t_bytes) {}

IvSource::IvSource(std::uint64_t seed, std::size_t t_bytes, std::vector<Payload> file_blobs)
    : seed_(seed), t_bytes_(t_bytes), files_(std::move(file_blobs)) {}

IvSource IvSource::generated_files(std::uint64_t seed, std::size_t t_bytes, std::size_t num_files,
                                   std::size_t file_bytes) {
  std::vector<Payload> files(num_files, Payload(file_bytes));
  std::array<std::uint8_t, 24> in{};
  std::copy(kFileTag.begin(), kFileTag.end(), in.begin());
  put_le64(in.data() + 8, seed);
  for (std::size_t j = 0; j < num_files; ++j) {
    put_le64(in.data() + 16, j);
    shake256(in, files[j]);
  }
  return IvSource(seed, t_bytes, std::move(files));
}

void IvSource::fill(std::size_t func, std::size_t file, std::span<std::uint8_t> out) const {
  if (files_.empty()) {
    std::array<std::uint8_t, 32> in{};
    std::copy(kIvTag.begin(), kIvTag.end(), in.begin());
    put_le64(in.data() + 8, seed_);
    put_le64(in.data() + 16, func);
    put_le64(in.data() + 24, file);
    shake256(in, out);
    return;
  }
  const Payload& blob = files_.at(file);
  std::vector<std::uint8_t> in(24 + blob.size());
  std::copy(kIvTag.begin(), kIvTag.end(), in.begin());
  put_le64(in.data() + 8, seed_);
  put_le64(in.data() + 16, func);
  std::copy(blob.begin(), blob.end(), in.begin() + 24);
  shake256(in, out);
}

Payload IvSource::operator()(std::size_t func, std::size_t file) const {
  Payload out(t_bytes_);
  fill(func, file, out);
  return out;
}

Payload synth_iv(std::uint64_t seed, std::size_t func, std::size_t file, std::size_t t_bytes) {
  return IvSource(seed, t_bytes)(func, file);
}

std::vector<IvKey> map_necessary_s1(const Placement& pl, int k) {
  const HypercubeParams& params = pl.params();
  if (params.s_mode() != SMode::S1) throw ConfigError("map_necessary_s1 requires s=1");
  const NodeId self = NodeId::from_flat(k, params.x());
  std::vector<IvKey> keys;
  for (std::size_t j : pl.files_of_node(k)) {
    const std::size_t point = pl.batch_of_file(j);
    for (std::size_t i : pl.functions_of_node(k)) {
      keys.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
    }
    // Nodes outside k's group that do not store j.
    for (int m = 0; m < params.d(); ++m) {
      if (m == self.dim) continue;
      const int have = coord_of(point, m, params);
      for (int c = 0; c < params.x(); ++c) {
        if (c == have) continue;
        for (std::size_t i : pl.functions_of_node(m * params.x() + c)) {
          keys.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
        }
      }
    }
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

std::vector<IvKey> map_necessary_sd(const Placement& pl, int k) {
  const HypercubeParams& params = pl.params();
  if (params.s_mode() != SMode::SD) throw ConfigError("map_necessary_sd requires s=d");
  const NodeId self = NodeId::from_flat(k, params.x());
  const auto eta2 = static_cast<std::size_t>(params.eta2());
  std::vector<IvKey> keys;
  for (std::size_t j : pl.files_of_node(k)) {
    const std::size_t file_point = pl.batch_of_file(j);
    for (std::size_t p = 0; p < params.num_points(); ++p) {
      // Skip function points that differ from the file point only along our
      // own dimension: that value is exchanged between other nodes only.
      if (gamma(p, file_point, params) == 1 &&
          coord_of(p, self.dim, params) != coord_of(file_point, self.dim, params)) {
        continue;
      }
      for (std::size_t t = 0; t < eta2; ++t) {
        keys.push_back({static_cast<std::uint32_t>(p * eta2 + t), static_cast<std::uint32_t>(j)});
      }
    }
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

std::vector<IvKey> map_all(const Placement& pl, int k) {
  std::vector<IvKey> keys;
  const std::size_t Q = pl.params().num_functions();
  keys.reserve(Q * pl.files_of_node(k).size());
  for (std::size_t i = 0; i < Q; ++i) {
    for (std::size_t j : pl.files_of_node(k)) {
      keys.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
    }
  }
  return keys;
}

std::vector<IvKey> map_keys(const Placement& pl, int k, MapPolicy policy) {
  if (policy == MapPolicy::AllLocal) return map_all(pl, k);
  return pl.params().s_mode() == SMode::S1 ? map_necessary_s1(pl, k) : map_necessary_sd(pl, k);
}

NodeStore::NodeStore(const Placement& pl, int k)
    : node_(k),
      t_bytes_(pl.params().t_bytes()),
      num_functions_(pl.params().num_functions()),
      num_files_(pl.params().num_files()),
      file_slot_(num_files_, -1),
      func_slot_(num_functions_, -1) {
  const auto files = pl.files_of_node(k);
  for (std::size_t s = 0; s < files.size(); ++s) file_slot_[files[s]] = static_cast<std::int32_t>(s);
  const auto funcs = pl.functions_of_node(k);
  for (std::size_t s = 0; s < funcs.size(); ++s) func_slot_[funcs[s]] = static_cast<std::int32_t>(s);
  computed_flag_.assign(files.size() * num_functions_, false);
  computed_bytes_.assign(files.size() * num_functions_ * t_bytes_, 0);
  delivered_flag_.assign(funcs.size() * num_files_, false);
  delivered_bytes_.assign(funcs.size() * num_files_ * t_bytes_, 0);
}

std::size_t NodeStore::computed_offset(IvKey key) const {
  if (key.file >= num_files_ || key.func >= num_functions_) return SIZE_MAX;
  const std::int32_t slot = file_slot_[key.file];
  if (slot < 0) return SIZE_MAX;
  return static_cast<std::size_t>(slot) * num_functions_ + key.func;
}

std::size_t NodeStore::delivered_offset(IvKey key) const {
  if (key.file >= num_files_ || key.func >= num_functions_) return SIZE_MAX;
  const std::int32_t slot = func_slot_[key.func];
  if (slot < 0) return SIZE_MAX;
  return static_cast<std::size_t>(slot) * num_files_ + key.file;
}

bool NodeStore::has_computed(IvKey key) const {
  const std::size_t off = computed_offset(key);
  return off != SIZE_MAX && computed_flag_[off];
}

std::span<const std::uint8_t> NodeStore::computed(IvKey key) const {
  if (!has_computed(key)) {
    throw MissingIv("mapper", "node " + std::to_string(node_) + " never computed " + key_str(key));
  }
  return {computed_bytes_.data() + computed_offset(key) * t_bytes_, t_bytes_};
}

std::span<std::uint8_t> NodeStore::computed_slot(IvKey key) {
  const std::size_t off = computed_offset(key);
  if (off == SIZE_MAX) {
    throw MissingIv("mapper", "node " + std::to_string(node_) + " does not store file of " + key_str(key));
  }
  if (!computed_flag_[off]) {
    computed_flag_[off] = true;
    ++computed_count_;
  }
  return {computed_bytes_.data() + off * t_bytes_, t_bytes_};
}

void NodeStore::store_computed(IvKey key, std::span<const std::uint8_t> value) {
  auto slot = computed_slot(key);
  std::copy(value.begin(), value.end(), slot.begin());
}

void NodeStore::deliver(IvKey key, std::span<const std::uint8_t> value) {
  const std::size_t off = delivered_offset(key);
  const std::string who = "node " + std::to_string(node_);
  if (off == SIZE_MAX) throw DeliveryError("shuffle", who + " does not reduce " + key_str(key));
  if (file_slot_[key.file] >= 0) {
    throw DeliveryError("shuffle", who + " already stores the file of " + key_str(key));
  }
  if (delivered_flag_[off]) throw DeliveryError("shuffle", "duplicate delivery of " + key_str(key) + " to " + who);
  if (value.size() != t_bytes_) throw DeliveryError("shuffle", "wrong payload length for " + key_str(key));
  delivered_flag_[off] = true;
  ++delivered_count_;
  std::copy(value.begin(), value.end(), delivered_bytes_.begin() + static_cast<std::ptrdiff_t>(off * t_bytes_));
}

bool NodeStore::has_delivered(IvKey key) const {
  const std::size_t off = delivered_offset(key);
  return off != SIZE_MAX && delivered_flag_[off];
}

std::span<std::uint8_t> NodeStore::delivered_mut(IvKey key) {
  if (!has_delivered(key)) throw MissingIv("shuffle", "node " + std::to_string(node_) + " has no delivered " + key_str(key));
  return {delivered_bytes_.data() + delivered_offset(key) * t_bytes_, t_bytes_};
}

bool NodeStore::has(IvKey key) const {
  if (key.file < num_files_ && file_slot_[key.file] >= 0) return has_computed(key);
  return has_delivered(key);
}

std::span<const std::uint8_t> NodeStore::get(IvKey key) const {
  if (key.file < num_files_ && file_slot_[key.file] >= 0) return computed(key);
  if (!has_delivered(key)) {
    throw MissingIv("reducer", "node " + std::to_string(node_) + " lacks " + key_str(key));
  }
  return {delivered_bytes_.data() + delivered_offset(key) * t_bytes_, t_bytes_};
}

IvStore run_map(const Placement& pl, const IvSource& source, MapPolicy policy) {
  IvStore store;
  store.nodes.reserve(static_cast<std::size_t>(pl.params().num_nodes()));
  for (int k = 0; k < pl.params().num_nodes(); ++k) {
    NodeStore node(pl, k);
    for (IvKey key : map_keys(pl, k, policy)) source.fill(key.func, key.file, node.computed_slot(key));
    store.computations += node.computed_count();
    store.nodes.push_back(std::move(node));
  }
  return store;
}

Rational computation_load(const Placement& pl, const IvStore& store) {
  const auto& params = pl.params();
  return Rational(BigInt(store.computations),
                  BigInt(params.num_functions()) * BigInt(params.num_files()));
}

}  // namespace hcdc
