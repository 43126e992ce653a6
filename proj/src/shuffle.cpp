#include "hcdc/shuffle.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

#include "hcdc/gf256.hpp"

namespace hcdc {

namespace {

std::string key_str(IvKey key) {
  return "v(" + std::to_string(key.func) + "," + std::to_string(key.file) + ")";
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Counter-based coefficient source keyed by (seed, group, retry, sender).
class CoefficientStream {
 public:
  CoefficientStream(std::uint64_t seed, std::uint64_t group, std::uint64_t retry, std::uint64_t sender) {
    std::uint64_t s = seed;
    for (std::uint64_t part : {group, retry, sender}) {
      s = splitmix64(s) ^ part;
    }
    state_ = splitmix64(s);
  }

  std::uint8_t next() {
    if (avail_ == 0) {
      word_ = splitmix64(state_);
      avail_ = 8;
    }
    const auto b = static_cast<std::uint8_t>(word_);
    word_ >>= 8;
    --avail_;
    return b;
  }

 private:
  std::uint64_t state_ = 0;
  std::uint64_t word_ = 0;
  int avail_ = 0;
};

void check_decoded(const ShuffleOptions& options, int node, IvKey key, std::span<const std::uint8_t> value) {
  if (options.oracle == nullptr) return;
  const Payload expect = (*options.oracle)(key.func, key.file);
  if (!std::equal(expect.begin(), expect.end(), value.begin(), value.end())) {
    throw DecodeMismatch("shuffle", "node " + std::to_string(node) + " decoded a wrong " + key_str(key));
  }
}

// XOR multicast inside one T-set. wants[z] lists the values member z needs,
// every other member has computed them. Each value splits into |group|-1
// packets; the l-th of the other members (ascending id) owns packet l of z's
// values. Member k sends the XOR over z != k of its packet segments for z.
void xor_group(const std::vector<int>& members, const std::vector<std::vector<IvKey>>& wants,
               RoundKind round, std::size_t point, IvStore& store, const ShuffleOptions& options,
               ShuffleResult& result) {
  const std::size_t g = members.size();
  const std::size_t t_bytes = store.nodes.front().t_bytes();
  const std::size_t packet = t_bytes / (g - 1);
  const std::size_t count = wants.front().size();
  for (const auto& w : wants) {
    if (w.size() != count) throw std::logic_error("xor_group: unequal request sizes");
  }
  if (count == 0) return;
  const std::size_t seg_len = count * packet;

  // Packet index that sender `k` owns for receiver `z`.
  auto owner_slot = [&](std::size_t z, std::size_t k) { return k < z ? k : k - 1; };

  auto xor_segment = [&](std::span<std::uint8_t> dst, const NodeStore& holder, std::size_t z, std::size_t k) {
    const std::size_t l = owner_slot(z, k);
    for (std::size_t v = 0; v < count; ++v) {
      const auto value = holder.computed(wants[z][v]);
      for (std::size_t b = 0; b < packet; ++b) dst[v * packet + b] ^= value[l * packet + b];
    }
  };

  std::vector<Payload> sent(g);
  for (std::size_t k = 0; k < g; ++k) {
    Payload msg(seg_len, 0);
    const NodeStore& sender = store.node(members[k]);
    for (std::size_t z = 0; z < g; ++z) {
      if (z != k) xor_segment(msg, sender, z, k);
    }
    sent[k] = msg;
    result.log.append({members[k], members, round, point, {}, std::move(msg)});
  }

  for (std::size_t z = 0; z < g; ++z) {
    const NodeStore& receiver = store.node(members[z]);
    std::vector<Payload> values(count, Payload(t_bytes, 0));
    for (std::size_t k = 0; k < g; ++k) {
      if (k == z) continue;
      Payload seg = sent[k];
      for (std::size_t other = 0; other < g; ++other) {
        if (other != z && other != k) xor_segment(seg, receiver, other, k);
      }
      const std::size_t l = owner_slot(z, k);
      for (std::size_t v = 0; v < count; ++v) {
        std::copy_n(seg.begin() + static_cast<std::ptrdiff_t>(v * packet), packet,
                    values[v].begin() + static_cast<std::ptrdiff_t>(l * packet));
      }
    }
    NodeStore& target = store.node(members[z]);
    for (std::size_t v = 0; v < count; ++v) {
      check_decoded(options, members[z], wants[z][v], values[v]);
      target.deliver(wants[z][v], values[v]);
      ++result.deliveries;
    }
  }
}

std::vector<IvKey> keys_for(std::span<const std::size_t> funcs, std::size_t file_point, const HypercubeParams& params) {
  std::vector<IvKey> keys;
  const auto eta1 = static_cast<std::size_t>(params.eta1());
  for (std::size_t i : funcs) {
    for (std::size_t t = 0; t < eta1; ++t) {
      keys.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(file_point * eta1 + t)});
    }
  }
  return keys;
}

// Values for member z of T_n: functions `funcs` applied to the files at the
// x-1 points that differ from n only along z's dimension.
std::vector<IvKey> line_request(std::span<const std::size_t> funcs, std::size_t n, int dim,
                                const HypercubeParams& params) {
  std::vector<IvKey> keys;
  const int own = coord_of(n, dim, params);
  for (int c = 0; c < params.x(); ++c) {
    if (c == own) continue;
    auto part = keys_for(funcs, with_coord(n, dim, c, params), params);
    keys.insert(keys.end(), part.begin(), part.end());
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

std::vector<std::size_t> functions_at_point(std::size_t p, const HypercubeParams& params) {
  std::vector<std::size_t> f;
  const auto eta2 = static_cast<std::size_t>(params.eta2());
  for (std::size_t t = 0; t < eta2; ++t) f.push_back(p * eta2 + t);
  return f;
}

// One (function point, file point) pair of a coded group.
struct PointPair {
  std::size_t func_point;
  std::size_t file_point;
};

void coded_group(const GroupDescriptor& desc, std::uint64_t ordinal, const HypercubeParams& params,
                 IvStore& store, const ShuffleOptions& options, ShuffleResult& result) {
  const int g = desc.gamma();
  const int x = params.x();
  const std::size_t pieces = static_cast<std::size_t>(2 * g - 1);
  const std::size_t packet = params.t_bytes() / pieces;
  const auto eta1 = static_cast<std::size_t>(params.eta1());
  const auto eta2 = static_cast<std::size_t>(params.eta2());
  const std::size_t slices = eta1 * eta2;
  const std::vector<int> members = desc.nodes(x);

  // Base point carries the fixed coordinates (chosen dims at 0).
  std::size_t base = 0;
  for (int m = 0; m < params.d(); ++m) {
    if (desc.fixed_coords[static_cast<std::size_t>(m)] >= 0) {
      base += static_cast<std::size_t>(desc.fixed_coords[static_cast<std::size_t>(m)]) * params.stride(m);
    }
  }
  const std::size_t num_pairs = std::size_t{1} << g;
  std::vector<PointPair> pairs;
  for (std::size_t mask = 0; mask < num_pairs; ++mask) {
    std::size_t p = base;
    std::size_t q = base;
    for (int t = 0; t < g; ++t) {
      const int m = desc.dims[static_cast<std::size_t>(t)];
      auto [a, b] = desc.coord_pairs[static_cast<std::size_t>(t)];
      if ((mask >> t) & 1U) std::swap(a, b);
      p = with_coord(p, m, a, params);
      q = with_coord(q, m, b, params);
    }
    pairs.push_back({p, q});
  }

  // Packet index within a slice: pair * pieces + piece.
  const std::size_t slice_packets = num_pairs * pieces;
  std::vector<std::vector<std::size_t>> known(members.size());
  std::vector<std::vector<std::size_t>> wanted(members.size());
  for (std::size_t u = 0; u < members.size(); ++u) {
    const NodeId node = NodeId::from_flat(members[u], x);
    for (std::size_t pr = 0; pr < num_pairs; ++pr) {
      const bool holds = coord_of(pairs[pr].file_point, node.dim, params) == node.coord;
      const bool needs = coord_of(pairs[pr].func_point, node.dim, params) == node.coord;
      if (holds == needs) throw std::logic_error("coded_group: packet both/neither known and wanted");
      auto& list = holds ? known[u] : wanted[u];
      for (std::size_t piece = 0; piece < pieces; ++piece) list.push_back(pr * pieces + piece);
    }
  }
  const std::size_t combos = num_pairs / 2;

  auto key_of = [&](std::size_t pr, std::size_t slice) {
    const std::size_t f_off = slice / eta1;
    const std::size_t j_off = slice % eta1;
    return IvKey{static_cast<std::uint32_t>(pairs[pr].func_point * eta2 + f_off),
                 static_cast<std::uint32_t>(pairs[pr].file_point * eta1 + j_off)};
  };
  // held[u] row e holds packet known[u][e] for every slice back to back, so
  // all slices ride through the same row operations.
  const std::size_t width = slices * packet;
  std::vector<gf256::Matrix> held;
  std::vector<std::vector<std::int32_t>> held_pos(members.size(), std::vector<std::int32_t>(slice_packets, -1));
  for (std::size_t u = 0; u < members.size(); ++u) {
    const NodeStore& holder = store.node(members[u]);
    gf256::Matrix m(known[u].size(), width);
    for (std::size_t e = 0; e < known[u].size(); ++e) {
      const std::size_t pkt = known[u][e];
      held_pos[u][pkt] = static_cast<std::int32_t>(e);
      for (std::size_t slice = 0; slice < slices; ++slice) {
        const auto bytes = holder.computed(key_of(pkt / pieces, slice)).subspan((pkt % pieces) * packet, packet);
        std::copy(bytes.begin(), bytes.end(), m.row(e).begin() + static_cast<std::ptrdiff_t>(slice * packet));
      }
    }
    held.push_back(std::move(m));
  }

  for (std::uint64_t retry = 0;; ++retry) {
    if (retry > static_cast<std::uint64_t>(options.retry_budget)) {
      throw SingularSystem("shuffle", "group " + desc.to_string() + " singular after " +
                                          std::to_string(options.retry_budget) + " retries");
    }
    // Sender u transmits `combos` rows; coef[u] is combos x |known[u]|.
    std::vector<gf256::Matrix> coef;
    std::vector<gf256::Matrix> sent;
    for (std::size_t u = 0; u < members.size(); ++u) {
      const std::size_t nk = known[u].size();
      CoefficientStream rng(options.seed, ordinal, retry, static_cast<std::uint64_t>(members[u]));
      gf256::Matrix c(combos, nk);
      for (std::size_t r = 0; r < combos; ++r) {
        for (std::size_t e = 0; e < nk; ++e) c.at(r, e) = rng.next();
      }
      sent.push_back(gf256::multiply(c, held[u]));
      coef.push_back(std::move(c));
    }

    // Every member solves for its wanted packets.
    bool singular = false;
    std::vector<gf256::Matrix> solved(members.size());
    for (std::size_t z = 0; z < members.size() && !singular; ++z) {
      const std::size_t nu = wanted[z].size();
      std::vector<std::int32_t> unknown_pos(slice_packets, -1);
      for (std::size_t e = 0; e < nu; ++e) unknown_pos[wanted[z][e]] = static_cast<std::int32_t>(e);
      gf256::Matrix a(nu, nu);
      gf256::Matrix rhs(nu, width);
      std::size_t row = 0;
      for (std::size_t u = 0; u < members.size(); ++u) {
        if (u == z) continue;
        for (std::size_t r = 0; r < combos; ++r, ++row) {
          if (row >= nu) throw std::logic_error("coded_group: more equations than unknowns");
          auto out = rhs.row(row);
          const auto msg = sent[u].row(r);
          std::copy(msg.begin(), msg.end(), out.begin());
          for (std::size_t e = 0; e < known[u].size(); ++e) {
            const std::size_t pkt = known[u][e];
            const std::uint8_t c = coef[u].at(r, e);
            if (unknown_pos[pkt] >= 0) {
              a.at(row, static_cast<std::size_t>(unknown_pos[pkt])) = c;
            } else {
              gf256::mul_add(out, held[z].row(static_cast<std::size_t>(held_pos[z][pkt])), c);
            }
          }
        }
      }
      if (row != nu) throw std::logic_error("coded_group: system is not square");
      auto x_sol = gf256::solve(a, rhs);
      if (!x_sol) {
        singular = true;
        break;
      }
      solved[z] = std::move(*x_sol);
    }
    if (singular) {
      ++result.retries;
      result.max_group_retries = std::max(result.max_group_retries, retry + 1);
      continue;
    }

    for (std::size_t u = 0; u < members.size(); ++u) {
      const auto bytes = sent[u].row(0);
      Payload payload(bytes.data(), bytes.data() + combos * width);
      Multicast msg{members[u], members, RoundKind::GammaGE2, 0, desc, std::move(payload)};
      result.log.append(std::move(msg));
    }
    for (std::size_t z = 0; z < members.size(); ++z) {
      NodeStore& target = store.node(members[z]);
      for (std::size_t slice = 0; slice < slices; ++slice) {
        const gf256::Matrix& sol = solved[z];
        // wanted[z] lists whole pairs, pieces in order.
        for (std::size_t e = 0; e < wanted[z].size(); e += pieces) {
          const IvKey key = key_of(wanted[z][e] / pieces, slice);
          Payload value(params.t_bytes());
          for (std::size_t piece = 0; piece < pieces; ++piece) {
            const auto r = sol.row(e + piece).subspan(slice * packet, packet);
            std::copy(r.begin(), r.end(), value.begin() + static_cast<std::ptrdiff_t>(piece * packet));
          }
          check_decoded(options, members[z], key, value);
          target.deliver(key, value);
          ++result.deliveries;
        }
      }
    }
    ++result.coded_groups;
    return;
  }
}

}  // namespace

const char* to_string(RoundKind kind) {
  switch (kind) {
    case RoundKind::S1Group: return "s1";
    case RoundKind::Gamma1: return "gamma1";
    case RoundKind::GammaGE2: return "gamma2+";
  }
  return "?";
}

std::vector<int> GroupDescriptor::nodes(int x) const {
  std::vector<int> out;
  for (std::size_t t = 0; t < dims.size(); ++t) {
    out.push_back(dims[t] * x + coord_pairs[t].first);
    out.push_back(dims[t] * x + coord_pairs[t].second);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string GroupDescriptor::to_string() const {
  std::string s;
  for (std::size_t m = 0; m < fixed_coords.size(); ++m) {
    if (m) s += ',';
    if (fixed_coords[m] >= 0) {
      s += std::to_string(fixed_coords[m]);
    } else {
      const auto t = static_cast<std::size_t>(std::find(dims.begin(), dims.end(), static_cast<int>(m)) - dims.begin());
      s += '{' + std::to_string(coord_pairs[t].first) + '|' + std::to_string(coord_pairs[t].second) + '}';
    }
  }
  return '(' + s + ')';
}

std::vector<GroupDescriptor> enumerate_groups(const HypercubeParams& params) {
  const int d = params.d();
  const int x = params.x();
  std::vector<std::pair<int, int>> all_pairs;
  for (int a = 0; a < x; ++a) {
    for (int b = a + 1; b < x; ++b) all_pairs.emplace_back(a, b);
  }
  std::vector<GroupDescriptor> out;
  if (all_pairs.empty()) return out;
  for (int g = 2; g <= d; ++g) {
    // dims subsets of size g in lexicographic order
    std::vector<int> sel(static_cast<std::size_t>(d), 0);
    std::fill(sel.begin(), sel.begin() + g, 1);
    do {
      std::vector<int> dims;
      std::vector<int> rest;
      for (int m = 0; m < d; ++m) (sel[static_cast<std::size_t>(m)] ? dims : rest).push_back(m);
      const std::size_t pair_combos = [&] {
        std::size_t c = 1;
        for (int t = 0; t < g; ++t) c *= all_pairs.size();
        return c;
      }();
      std::size_t fixed_combos = 1;
      for (std::size_t t = 0; t < rest.size(); ++t) fixed_combos *= static_cast<std::size_t>(x);
      for (std::size_t pc = 0; pc < pair_combos; ++pc) {
        for (std::size_t fc = 0; fc < fixed_combos; ++fc) {
          GroupDescriptor desc;
          desc.dims = dims;
          desc.fixed_coords.assign(static_cast<std::size_t>(d), -1);
          // Most significant digit first so the order is lexicographic.
          std::size_t rem = pc;
          desc.coord_pairs.resize(dims.size());
          for (std::size_t t = dims.size(); t-- > 0;) {
            desc.coord_pairs[t] = all_pairs[rem % all_pairs.size()];
            rem /= all_pairs.size();
          }
          rem = fc;
          for (std::size_t t = rest.size(); t-- > 0;) {
            desc.fixed_coords[static_cast<std::size_t>(rest[t])] = static_cast<int>(rem % static_cast<std::size_t>(x));
            rem /= static_cast<std::size_t>(x);
          }
          out.push_back(std::move(desc));
        }
      }
    } while (std::prev_permutation(sel.begin(), sel.end()));
  }
  return out;
}

std::string Multicast::round_tag() const {
  switch (round) {
    case RoundKind::S1Group: return "s1:" + std::to_string(point);
    case RoundKind::Gamma1: return "gamma1:" + std::to_string(point);
    case RoundKind::GammaGE2: return "gamma" + std::to_string(descriptor.gamma()) + ":" + descriptor.to_string();
  }
  return "?";
}

void TransmissionLog::append(Multicast message) {
  if (std::find(message.group.begin(), message.group.end(), message.sender) == message.group.end()) {
    throw std::logic_error("multicast sender outside its group");
  }
  total_bits_ += message.payload_bits();
  messages_.push_back(std::move(message));
}

Rational TransmissionLog::load(const HypercubeParams& params) const {
  const BigInt denom = BigInt(params.num_functions()) * BigInt(params.num_files()) * BigInt(params.t_bytes()) * 8;
  return Rational(total_bits_, denom);
}

std::vector<std::size_t> TransmissionLog::sent_per_node(int num_nodes) const {
  std::vector<std::size_t> out(static_cast<std::size_t>(num_nodes), 0);
  for (const auto& m : messages_) ++out[static_cast<std::size_t>(m.sender)];
  return out;
}

nlohmann::json TransmissionLog::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& m : messages_) {
    arr.push_back({{"round", m.round_tag()}, {"sender", m.sender}, {"group", m.group}, {"bits", m.payload_bits()}});
  }
  return arr;
}

std::string TransmissionLog::to_jsonl() const {
  std::string out;
  for (const auto& m : messages_) {
    nlohmann::json line{{"round", m.round_tag()}, {"sender", m.sender}, {"group", m.group}, {"bits", m.payload_bits()}};
    out += line.dump();
    out += '\n';
  }
  return out;
}

ShuffleResult shuffle_s1(const Placement& pl, IvStore& store, const ShuffleOptions& options) {
  const HypercubeParams& params = pl.params();
  if (params.s_mode() != SMode::S1) throw ConfigError("shuffle_s1 requires s=1");
  ShuffleResult result;
  for (std::size_t n = 0; n < params.num_points(); ++n) {
    const std::vector<int> members = pl.nodes_of_batch(n);
    std::vector<std::vector<IvKey>> wants;
    for (int z : members) {
      wants.push_back(line_request(pl.functions_of_node(z), n, NodeId::from_flat(z, params.x()).dim, params));
    }
    xor_group(members, wants, RoundKind::S1Group, n, store, options, result);
  }
  return result;
}

ShuffleResult shuffle_sd(const Placement& pl, IvStore& store, const ShuffleOptions& options) {
  const HypercubeParams& params = pl.params();
  if (params.s_mode() != SMode::SD) throw ConfigError("shuffle_sd requires s=d");
  ShuffleResult result;
  // gamma = 0: every reducer stores the file, nothing to send.
  // gamma = 1
  for (std::size_t p = 0; p < params.num_points(); ++p) {
    const std::vector<int> members = pl.nodes_of_batch(p);
    const std::vector<std::size_t> funcs = functions_at_point(p, params);
    std::vector<std::vector<IvKey>> wants;
    for (int z : members) {
      wants.push_back(line_request(funcs, p, NodeId::from_flat(z, params.x()).dim, params));
    }
    xor_group(members, wants, RoundKind::Gamma1, p, store, options, result);
  }
  // gamma >= 2
  const std::vector<GroupDescriptor> groups = enumerate_groups(params);
  for (std::size_t ordinal = 0; ordinal < groups.size(); ++ordinal) {
    coded_group(groups[ordinal], ordinal, params, store, options, result);
  }
  return result;
}

ShuffleResult run_shuffle(const Placement& pl, IvStore& store, const ShuffleOptions& options) {
  return pl.params().s_mode() == SMode::S1 ? shuffle_s1(pl, store, options) : shuffle_sd(pl, store, options);
}

bool DeliveryReport::complete() const {
  return std::all_of(nodes.begin(), nodes.end(), [](const NodeDelivery& n) { return n.present == n.required; });
}

std::size_t DeliveryReport::total_mismatches() const {
  std::size_t t = 0;
  for (const auto& n : nodes) t += n.mismatches;
  return t;
}

std::size_t DeliveryReport::total_missing() const {
  std::size_t t = 0;
  for (const auto& n : nodes) t += n.required - n.present;
  return t;
}

DeliveryReport verify_delivery(const Placement& pl, const IvStore& store, const IvSource& oracle) {
  const HypercubeParams& params = pl.params();
  DeliveryReport report;
  Payload expect(params.t_bytes());
  for (int k = 0; k < params.num_nodes(); ++k) {
    const NodeStore& node = store.node(k);
    NodeDelivery nd;
    nd.node = k;
    for (std::size_t i : pl.functions_of_node(k)) {
      for (std::size_t j = 0; j < params.num_files(); ++j) {
        ++nd.required;
        const IvKey key{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)};
        if (!node.has(key)) continue;
        ++nd.present;
        oracle.fill(i, j, expect);
        const auto got = node.get(key);
        if (!std::equal(expect.begin(), expect.end(), got.begin(), got.end())) ++nd.mismatches;
      }
    }
    report.nodes.push_back(nd);
  }
  return report;
}

std::pair<int, IvKey> inject_fault(const Placement& pl, IvStore& store) {
  const HypercubeParams& params = pl.params();
  for (int k = 0; k < params.num_nodes(); ++k) {
    for (std::size_t i : pl.functions_of_node(k)) {
      for (std::size_t j = 0; j < params.num_files(); ++j) {
        const IvKey key{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)};
        if (store.node(k).has_delivered(key)) {
          store.node(k).delivered_mut(key)[0] ^= 0x01;
          return {k, key};
        }
      }
    }
  }
  throw std::logic_error("inject_fault: no delivered value to corrupt");
}

}  // namespace hcdc
