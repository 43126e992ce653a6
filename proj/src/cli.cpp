#include "hcdc/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>

#include "hcdc/design.hpp"
#include "hcdc/gf256.hpp"
#include "hcdc/pipeline.hpp"

namespace hcdc::cli {

namespace {

using nlohmann::json;

std::string cell(const Rational& q) { return to_fraction(q) + " (" + to_decimal(q) + ")"; }

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

template <typename T>
T get_as(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

json config_json(const RunConfig& cfg, const HypercubeParams& params) {
  return {{"x", cfg.x},
          {"d", cfg.d},
          {"eta1", cfg.eta1},
          {"eta2", cfg.eta2},
          {"s", to_string(cfg.s_mode)},
          {"policy", to_string(cfg.policy)},
          {"T", params.t_bytes()},
          {"seed", cfg.seed},
          {"rounds", cfg.rounds}};
}

std::string config_line(const RunConfig& cfg, const HypercubeParams& params) {
  std::ostringstream os;
  os << "x=" << cfg.x << " d=" << cfg.d << " eta1=" << cfg.eta1 << " eta2=" << cfg.eta2 << " s=" << to_string(cfg.s_mode)
     << " policy=" << to_string(cfg.policy) << " T=" << params.t_bytes() << " seed=" << cfg.seed;
  return os.str();
}

// Closed-form (r, L) for the configured scheme and Map policy.
LoadPair theory(const HypercubeParams& params, MapPolicy policy) {
  const int x = params.x();
  const int d = params.d();
  if (params.s_mode() == SMode::S1) return policy == MapPolicy::AllLocal ? corollary1(x, d) : theorem1(x, d);
  LoadPair out = theorem2(x, d);
  if (policy == MapPolicy::AllLocal) out.r = d;
  return out;
}

int requirement_s(const HypercubeParams& params) { return params.s_mode() == SMode::S1 ? 1 : params.d(); }

}  // namespace

HypercubeParams RunConfig::params() const {
  if (rounds < 1) throw ConfigError("rounds must be >= 1 (got " + std::to_string(rounds) + ")");
  if (t_bytes) return HypercubeParams(x, d, eta1, eta2, s_mode, *t_bytes);
  return HypercubeParams::with_minimal_t(x, d, eta1, eta2, s_mode);
}

Format parse_format(const std::string& s) {
  if (s == "human") return Format::Human;
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  throw ConfigError("format must be human, json or csv (got '" + s + "')");
}

SMode parse_s(const std::string& s) {
  if (s == "1") return SMode::S1;
  if (s == "d") return SMode::SD;
  throw ConfigError("s must be 1 or d (got '" + s + "')");
}

MapPolicy parse_policy(const std::string& s) {
  if (s == "necessary") return MapPolicy::NecessaryOnly;
  if (s == "all") return MapPolicy::AllLocal;
  throw ConfigError("policy must be necessary or all (got '" + s + "')");
}

void apply_json(RunConfig& cfg, const json& j) {
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  static const std::vector<std::string> known{"x",    "d",      "eta1", "eta2",         "s",     "policy",
                                              "T",    "seed",   "rounds", "format",     "out",   "inject_fault",
                                              "x_min", "x_max", "d_min", "d_max",       "simulate"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError("unknown config key '" + key + "'");
  }
  if (j.contains("x")) cfg.x = get_as<int>(j, "x");
  if (j.contains("d")) cfg.d = get_as<int>(j, "d");
  if (j.contains("eta1")) cfg.eta1 = get_as<int>(j, "eta1");
  if (j.contains("eta2")) cfg.eta2 = get_as<int>(j, "eta2");
  if (j.contains("s")) {
    // Accept both "d" and the number 1.
    cfg.s_mode = j["s"].is_number() ? parse_s(std::to_string(get_as<int>(j, "s"))) : parse_s(get_as<std::string>(j, "s"));
  }
  if (j.contains("policy")) cfg.policy = parse_policy(get_as<std::string>(j, "policy"));
  if (j.contains("T")) cfg.t_bytes = get_as<std::size_t>(j, "T");
  if (j.contains("seed")) cfg.seed = get_as<std::uint64_t>(j, "seed");
  if (j.contains("rounds")) cfg.rounds = get_as<int>(j, "rounds");
  if (j.contains("format")) cfg.format = parse_format(get_as<std::string>(j, "format"));
  if (j.contains("out")) cfg.out = get_as<std::string>(j, "out");
  if (j.contains("inject_fault")) cfg.inject_fault = get_as<bool>(j, "inject_fault");
  if (j.contains("x_min")) cfg.grid.x_lo = get_as<int>(j, "x_min");
  if (j.contains("x_max")) cfg.grid.x_hi = get_as<int>(j, "x_max");
  if (j.contains("d_min")) cfg.grid.d_lo = get_as<int>(j, "d_min");
  if (j.contains("d_max")) cfg.grid.d_hi = get_as<int>(j, "d_max");
  if (j.contains("simulate")) cfg.sweep_simulate = get_as<bool>(j, "simulate");
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON (byte " + std::to_string(e.byte) + ")");
  }
  RunConfig cfg;
  apply_json(cfg, j);
  return cfg;
}

// ---------------------------------------------------------------- plan

CommandResult cmd_plan(const RunConfig& cfg) {
  const HypercubeParams params = cfg.params();
  const Placement pl = build_placement(params);
  const bool list_sets = params.num_files() <= 512;
  const Requirements req = min_requirements(params.num_nodes(), params.d(), requirement_s(params));

  CommandResult res;
  if (cfg.format == Format::Json) {
    json doc = pl.to_json(list_sets);
    doc["requirements"] = {{"r", params.d()},
                           {"s", requirement_s(params)},
                           {"N_hc", req.n_hc.str()},
                           {"N_li", req.n_li.str()},
                           {"Q_hc", req.q_hc.str()},
                           {"Q_li", req.q_li.str()}};
    res.output = doc.dump(2) + "\n";
    return res;
  }

  std::ostringstream os;
  if (cfg.format == Format::Csv) {
    os << "node,dim,coord,num_files,num_functions\n";
    for (int k = 0; k < params.num_nodes(); ++k) {
      const NodeId id = NodeId::from_flat(k, params.x());
      os << k << ',' << id.dim << ',' << id.coord << ',' << pl.files_of_node(k).size() << ','
         << pl.functions_of_node(k).size() << '\n';
    }
    res.output = os.str();
    return res;
  }

  os << "design   " << config_line(cfg, params) << '\n';
  os << "K = " << params.num_nodes() << ", N = " << params.num_files() << ", Q = " << params.num_functions()
     << ", s = " << pl.s() << '\n';
  os << '\n' << "node  dim  coord  |M_k|  |W_k|\n";
  for (int k = 0; k < params.num_nodes(); ++k) {
    const NodeId id = NodeId::from_flat(k, params.x());
    os << pad(std::to_string(k), 6) << pad(std::to_string(id.dim), 5) << pad(std::to_string(id.coord), 7)
       << pad(std::to_string(pl.files_of_node(k).size()), 7) << pl.functions_of_node(k).size() << '\n';
  }
  os << '\n';
  if (list_sets) {
    const std::size_t point_width = 3 + 2 * static_cast<std::size_t>(params.d());
    os << pad("batch", 7) << pad("point", point_width) << "T-set\n";
    for (std::size_t n = 0; n < params.num_points(); ++n) {
      std::string point;
      const auto coords = index_to_point(n, params).coords;
      for (std::size_t i = 0; i < coords.size(); ++i) point += (i ? "," : "(") + std::to_string(coords[i]);
      point += ")";
      std::string tset = "{";
      const auto nodes = pl.nodes_of_batch(n);
      for (std::size_t i = 0; i < nodes.size(); ++i) tset += (i ? "," : "") + std::to_string(nodes[i]);
      tset += "}";
      os << pad(std::to_string(n), 7) << pad(point, point_width) << tset << '\n';
    }
  } else {
    os << "T-set listing suppressed (N = " << params.num_files() << " > 512)\n";
  }
  os << '\n' << "minimum requirements at K = " << params.num_nodes() << ", r = " << params.d()
     << ", s = " << requirement_s(params) << '\n';
  os << "          hypercube  binomial\n";
  os << "files N   " << pad(req.n_hc.str(), 11) << req.n_li.str() << '\n';
  os << "funcs Q   " << pad(req.q_hc.str(), 11) << req.q_li.str() << '\n';
  res.output = os.str();
  return res;
}

// ---------------------------------------------------------------- simulate

namespace {

CommandResult simulate_chain(const RunConfig& cfg, const HypercubeParams& params) {
  if (cfg.inject_fault) throw ConfigError("inject-fault is only supported with rounds = 1");
  const auto rounds = chain_round(params, cfg.policy, cfg.seed, cfg.rounds);
  const LoadPair th = theory(params, cfg.policy);
  bool ok = true;
  json arr = json::array();
  std::ostringstream os;
  os << "simulate " << config_line(cfg, params) << " rounds=" << cfg.rounds << '\n';
  os << "theory   r = " << cell(th.r) << ", L = " << cell(th.L) << '\n';
  for (std::size_t t = 0; t < rounds.size(); ++t) {
    const auto& r = rounds[t];
    const bool match = r.r == th.r && r.L == th.L;
    ok = ok && match && r.verified();
    arr.push_back({{"round", t},
                   {"r", rational_json(r.r)},
                   {"L", rational_json(r.L)},
                   {"match", match},
                   {"retries", r.retries},
                   {"pipeline_verified", r.pipeline_verified},
                   {"matches_chained_oracle", r.matches_chained_oracle},
                   {"digests", digests_to_json(r.digests)}});
    os << "round " << t << "  r = " << cell(r.r) << "  L = " << cell(r.L) << "  " << (match ? "match" : "MISMATCH")
       << "  retries " << r.retries << "  " << (r.verified() ? "verified" : "NOT VERIFIED") << '\n';
  }
  os << "status   " << (ok ? "VERIFIED" : "FAILED") << '\n';

  CommandResult res;
  res.exit_code = ok ? kExitOk : kExitMismatch;
  if (cfg.format == Format::Json) {
    json doc{{"config", config_json(cfg, params)},
             {"theory", {{"r", rational_json(th.r)}, {"L", rational_json(th.L)}}},
             {"rounds", std::move(arr)},
             {"verified", ok}};
    res.output = doc.dump(2) + "\n";
  } else if (cfg.format == Format::Csv) {
    std::ostringstream csv;
    csv << "round,r,L,match,retries,verified\n";
    for (std::size_t t = 0; t < rounds.size(); ++t) {
      const auto& r = rounds[t];
      csv << t << ',' << cell(r.r) << ',' << cell(r.L) << ',' << (r.r == th.r && r.L == th.L) << ',' << r.retries << ','
          << r.verified() << '\n';
    }
    res.output = csv.str();
  } else {
    res.output = os.str();
  }
  return res;
}

}  // namespace

CommandResult cmd_simulate(const RunConfig& cfg) {
  const HypercubeParams params = cfg.params();
  if (cfg.rounds > 1) return simulate_chain(cfg, params);

  const Placement pl = build_placement(params);
  const IvSource source(cfg.seed, params.t_bytes());
  PipelineOptions opt;
  opt.policy = cfg.policy;
  opt.seed = cfg.seed;
  opt.inject_fault = cfg.inject_fault;

  PipelineResult run;
  try {
    run = run_pipeline(pl, source, opt);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    return {"error: " + std::string(e.what()) + "\n", kExitMismatch};
  }

  const LoadPair th = theory(params, cfg.policy);
  const bool r_match = run.r == th.r;
  const bool L_match = run.L == th.L;
  const bool ok = r_match && L_match && run.verified();
  const auto& log = run.shuffle.log;

  CommandResult res;
  res.exit_code = ok ? kExitOk : kExitMismatch;

  if (cfg.format == Format::Json) {
    json fault = nullptr;
    if (run.injected) {
      fault = {{"node", run.injected->first}, {"func", run.injected->second.func}, {"file", run.injected->second.file}};
    }
    json doc{{"config", config_json(cfg, params)},
             {"K", params.num_nodes()},
             {"N", params.num_files()},
             {"Q", params.num_functions()},
             {"r", {{"measured", rational_json(run.r)}, {"theory", rational_json(th.r)}, {"match", r_match}}},
             {"L", {{"measured", rational_json(run.L)}, {"theory", rational_json(th.L)}, {"match", L_match}}},
             {"messages", log.size()},
             {"total_bits", log.total_bits().str()},
             {"retries", run.shuffle.retries},
             {"max_group_retries", run.shuffle.max_group_retries},
             {"coded_groups", run.shuffle.coded_groups},
             {"deliveries", run.shuffle.deliveries},
             {"computed_per_node", run.computed_per_node},
             {"sent_per_node", log.sent_per_node(params.num_nodes())},
             {"verification",
              {{"complete", run.delivery.complete()},
               {"missing", run.delivery.total_missing()},
               {"byte_mismatches", run.delivery.total_mismatches()},
               {"digest_checks", run.digest_checks},
               {"digest_mismatches", run.digest_mismatches},
               {"verified", run.verified()}}},
             {"injected_fault", fault},
             {"digests", digests_to_json(run.oracle)},
             {"transmission_log", log.to_json()},
             {"status", ok ? "verified" : "failed"}};
    res.output = doc.dump(2) + "\n";
    return res;
  }

  if (cfg.format == Format::Csv) {
    std::ostringstream os;
    os << "metric,measured,theory,match\n";
    os << "r," << cell(run.r) << ',' << cell(th.r) << ',' << r_match << '\n';
    os << "L," << cell(run.L) << ',' << cell(th.L) << ',' << L_match << '\n';
    os << "messages," << log.size() << ",,\n";
    os << "retries," << run.shuffle.retries << ",,\n";
    os << "byte_mismatches," << run.delivery.total_mismatches() << ",0," << (run.delivery.total_mismatches() == 0) << '\n';
    os << "digest_mismatches," << run.digest_mismatches << ",0," << (run.digest_mismatches == 0) << '\n';
    res.output = os.str();
    return res;
  }

  std::ostringstream os;
  os << "simulate   " << config_line(cfg, params) << '\n';
  os << "K, N, Q    " << params.num_nodes() << ", " << params.num_files() << ", " << params.num_functions() << '\n';
  os << "r          " << pad(cell(run.r), 22) << "theory " << pad(cell(th.r), 22) << (r_match ? "match" : "MISMATCH")
     << '\n';
  os << "L          " << pad(cell(run.L), 22) << "theory " << pad(cell(th.L), 22) << (L_match ? "match" : "MISMATCH")
     << '\n';
  os << "messages   " << log.size() << " (" << log.total_bits() << " bits)\n";
  os << "retries    " << run.shuffle.retries << " (worst group " << run.shuffle.max_group_retries << ", "
     << run.shuffle.coded_groups << " coded groups)\n";
  os << "delivery   " << (run.delivery.complete() ? "complete" : "INCOMPLETE") << ", "
     << run.delivery.total_mismatches() << " byte mismatches\n";
  os << "digests    " << run.digest_checks - run.digest_mismatches << "/" << run.digest_checks
     << " agree with the oracle\n";
  if (run.injected) {
    os << "fault      injected at node " << run.injected->first << ", value (" << run.injected->second.func << ","
       << run.injected->second.file << ")\n";
  }
  os << "status     " << (ok ? "VERIFIED" : "FAILED") << '\n';
  res.output = os.str();
  return res;
}

// ---------------------------------------------------------------- sweep

CommandResult cmd_sweep(const RunConfig& cfg) {
  const SweepGrid& g = cfg.grid;
  if (g.x_lo < 1 || g.x_hi < g.x_lo) throw ConfigError("sweep needs 1 <= x_min <= x_max");
  if (g.d_lo < 2 || g.d_hi < g.d_lo) throw ConfigError("sweep needs 2 <= d_min <= d_max");
  std::vector<SweepRow> rows = sweep(g);

  bool ok = true;
  if (cfg.sweep_simulate) {
    for (auto& row : rows) {
      const SMode mode = row.s == 1 ? SMode::S1 : SMode::SD;
      const auto params = HypercubeParams::with_minimal_t(row.x, row.d, 1, 1, mode);
      if (static_cast<double>(params.num_files()) * static_cast<double>(params.num_functions()) > 1e5) continue;
      PipelineOptions opt;
      opt.policy = MapPolicy::AllLocal;
      opt.seed = cfg.seed;
      const PipelineResult run = run_pipeline(build_placement(params), IvSource(cfg.seed, params.t_bytes()), opt);
      row.r_sim = run.r;
      row.L_sim = run.L;
      ok = ok && run.verified() && run.r == row.r_hc && run.L == row.L_hc;
    }
  }

  CommandResult res;
  res.exit_code = ok ? kExitOk : kExitMismatch;
  if (cfg.format == Format::Json) {
    json arr = sweep_json(rows);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].r_sim) arr[i]["r_sim"] = rational_json(*rows[i].r_sim);
      if (rows[i].L_sim) arr[i]["L_sim"] = rational_json(*rows[i].L_sim);
    }
    res.output = arr.dump(2) + "\n";
  } else if (cfg.format == Format::Csv) {
    res.output = sweep_csv(rows, cfg.sweep_simulate);
  } else {
    std::ostringstream os;
    os << pad("x", 4) << pad("d", 4) << pad("s", 4) << pad("r_hc", 6) << pad("L_hc", 22) << pad("L_opt", 22)
       << pad("L_uncoded", 22) << pad("N_hc", 10) << pad("N_li", 12) << pad("Q_hc", 10) << "Q_li";
    if (cfg.sweep_simulate) os << "  L_sim";
    os << '\n';
    for (const auto& r : rows) {
      os << pad(std::to_string(r.x), 4) << pad(std::to_string(r.d), 4) << pad(std::to_string(r.s), 4)
         << pad(to_fraction(r.r_hc), 6) << pad(cell(r.L_hc), 22) << pad(cell(r.L_opt), 22) << pad(cell(r.L_uncoded), 22)
         << pad(r.n_hc.str(), 10) << pad(r.n_li.str(), 12) << pad(r.q_hc.str(), 10) << r.q_li.str();
      if (cfg.sweep_simulate) os << "  " << (r.L_sim ? cell(*r.L_sim) : std::string("-"));
      os << '\n';
    }
    res.output = os.str();
  }
  return res;
}

// ---------------------------------------------------------------- verify

namespace {

class Suite {
 public:
  void check(const std::string& name, bool pass) {
    auto& e = entries_[name];
    ++e.first;
    if (!pass) ++e.second;
  }
  // Runs fn and records a failure if it throws.
  void guarded(const std::string& name, const std::function<void()>& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      check(name, false);
      errors_.push_back(name + ": " + e.what());
    }
  }
  bool passed() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const auto& kv) { return kv.second.second == 0; });
  }
  const std::map<std::string, std::pair<std::size_t, std::size_t>>& entries() const { return entries_; }
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::map<std::string, std::pair<std::size_t, std::size_t>> entries_;  // name -> (runs, failures)
  std::vector<std::string> errors_;
};

void verify_static(Suite& suite) {
  // lattice
  for (int x = 1; x <= 6; ++x) {
    for (int d = 2; d <= 6; ++d) {
      BigInt sum = 0;
      for (int g = 0; g <= d; ++g) {
        sum += binom(d, g) * ipow(static_cast<long long>(x) * (x - 1), static_cast<unsigned>(g)) *
               ipow(x, static_cast<unsigned>(d - g));
      }
      suite.check("lattice.partition_identity", sum == ipow(x, static_cast<unsigned>(2 * d)));
    }
  }
  for (int d = 2; d <= 6; ++d) {
    const std::size_t t = minimal_t(d);
    bool ok = t % static_cast<std::size_t>(d - 1) == 0;
    for (int g = 2; g <= d; ++g) ok = ok && t % static_cast<std::size_t>(2 * g - 1) == 0;
    suite.check("lattice.minimal_t", ok);
  }

  // design
  for (int K = 2; K <= 24; ++K) {
    for (int r = 2; r <= K; ++r) {
      if (K % r != 0) continue;
      const Requirements req = min_requirements(K, r, 1);
      suite.check("design.requirements", req.n_hc <= req.n_li && req.q_hc <= req.q_li);
    }
  }

  // gf256
  bool field = true;
  for (int a = 1; a < 256; ++a) field = field && gf256::mul(static_cast<std::uint8_t>(a), gf256::inv(static_cast<std::uint8_t>(a))) == 1;
  suite.check("gf256.inverse", field);

  // analysis
  suite.check("analysis.anchors", optimal_cascaded(6, 2, 2) == Rational(8, 15) && optimal_cascaded(9, 3, 1) == Rational(2, 9));
  for (const auto& row : sweep({2, 6, 2, 6, true, true})) {
    suite.check("analysis.sandwich", row.L_opt <= row.L_hc && row.L_hc <= row.L_uncoded);
  }
  for (const auto& row : optimality_ratios_s1(2, 6, 2, 6)) {
    suite.check("analysis.s1_ratio", row.ratio == Rational(row.d, row.d - 1));
  }
  const auto sd2 = optimality_ratios_sd2(3, 50);
  bool monotone = true;
  for (std::size_t i = 1; i < sd2.size(); ++i) monotone = monotone && sd2[i].ratio < sd2[i - 1].ratio;
  suite.check("analysis.sd2_ratio", monotone && sd2.back().ratio < Rational(105, 100));
}

void verify_lattice_design(Suite& suite, const HypercubeParams& params, const Placement& pl) {
  bool round_trip = true;
  bool tsets = true;
  for (std::size_t n = 0; n < params.num_points(); ++n) {
    round_trip = round_trip && point_to_index(index_to_point(n, params), params) == n;
    const auto t = nodes_through_index(n, params);
    bool one_per_dim = t.size() == static_cast<std::size_t>(params.d());
    for (std::size_t m = 0; m < t.size() && one_per_dim; ++m) one_per_dim = t[m] / params.x() == static_cast<int>(m);
    tsets = tsets && one_per_dim;
  }
  suite.check("lattice.round_trip", round_trip);
  suite.check("lattice.t_sets", tsets);

  bool files = true;
  for (std::size_t j = 0; j < params.num_files(); ++j) {
    int holders = 0;
    for (int k = 0; k < params.num_nodes(); ++k) holders += pl.node_has_file(k, j) ? 1 : 0;
    files = files && holders == params.d();
  }
  for (int k = 0; k < params.num_nodes(); ++k) {
    files = files && pl.files_of_node(k).size() * static_cast<std::size_t>(params.x()) ==
                         params.num_files();
  }
  bool reducers = true;
  for (std::size_t q = 0; q < params.num_functions(); ++q) {
    reducers = reducers && pl.reducers_of_function(q).size() == static_cast<std::size_t>(pl.s());
  }
  suite.check("design.file_replication", files);
  suite.check("design.reducers", reducers);
}

void verify_pipeline(Suite& suite, const HypercubeParams& params, MapPolicy policy, std::uint64_t seed) {
  const Placement pl = build_placement(params);
  verify_lattice_design(suite, params, pl);
  const IvSource source(seed, params.t_bytes());
  PipelineOptions opt;
  opt.policy = policy;
  opt.seed = seed;
  const PipelineResult run = run_pipeline(pl, source, opt);
  const LoadPair th = theory(params, policy);
  suite.check("mapper.load", run.r == th.r);
  suite.check("shuffle.load", run.L == th.L);
  std::size_t needed = 0;
  for (int k = 0; k < params.num_nodes(); ++k) {
    needed += pl.functions_of_node(k).size() * (params.num_files() - pl.files_of_node(k).size());
  }
  suite.check("shuffle.exactly_once", run.shuffle.deliveries == needed && run.delivery.complete());
  suite.check("shuffle.byte_exact", run.delivery.total_mismatches() == 0);
  suite.check("shuffle.retry_budget", run.shuffle.max_group_retries <= 16);
  suite.check("reducer.digests", run.digest_mismatches == 0 && run.digest_checks > 0);
}

}  // namespace

CommandResult cmd_verify(const RunConfig& cfg) {
  Suite suite;
  suite.guarded("static", [&] { verify_static(suite); });

  for (std::uint64_t seed = cfg.seed; seed < cfg.seed + 5; ++seed) {
    for (int x = 1; x <= 3; ++x) {
      for (int d = 2; d <= 3; ++d) {
        for (int e1 = 1; e1 <= 2; ++e1) {
          for (int e2 = 1; e2 <= 2; ++e2) {
            for (SMode mode : {SMode::S1, SMode::SD}) {
              for (MapPolicy policy : {MapPolicy::NecessaryOnly, MapPolicy::AllLocal}) {
                suite.guarded("pipeline", [&] {
                  verify_pipeline(suite, HypercubeParams::with_minimal_t(x, d, e1, e2, mode), policy, seed);
                });
              }
            }
          }
        }
      }
    }

    suite.guarded("gf256.solve", [&] {
      std::mt19937_64 rng(seed);
      bool ok = true;
      for (int trial = 0; trial < 50; ++trial) {
        gf256::Matrix a(8, 8);
        gf256::Matrix x(8, 4);
        for (std::size_t r = 0; r < 8; ++r) {
          for (std::size_t c = 0; c < 8; ++c) a.at(r, c) = static_cast<std::uint8_t>(rng());
          for (std::size_t c = 0; c < 4; ++c) x.at(r, c) = static_cast<std::uint8_t>(rng());
        }
        const auto got = gf256::solve(a, gf256::multiply(a, x));
        ok = ok && (gf256::rank(a) == 8 ? got && *got == x : !got);
      }
      suite.check("gf256.solve", ok);
    });

    suite.guarded("reducer.chain", [&] {
      const auto rounds = chain_round(HypercubeParams::with_minimal_t(3, 2, 2, 2, SMode::SD), MapPolicy::NecessaryOnly,
                                      seed, 2);
      suite.check("reducer.chain",
                  std::all_of(rounds.begin(), rounds.end(), [](const ChainRoundResult& r) { return r.verified(); }));
    });

    suite.guarded("cli.determinism", [&] {
      RunConfig c;
      c.x = 2;
      c.d = 3;
      c.s_mode = SMode::SD;
      c.seed = seed;
      c.format = Format::Json;
      const CommandResult a = cmd_simulate(c);
      const CommandResult b = cmd_simulate(c);
      suite.check("cli.determinism", a.output == b.output && a.exit_code == kExitOk);
    });

    suite.guarded("cli.fault_injection", [&] {
      const auto params = HypercubeParams::with_minimal_t(3, 2, 1, 1, SMode::SD);
      PipelineOptions opt;
      opt.seed = seed;
      opt.inject_fault = true;
      const PipelineResult run = run_pipeline(build_placement(params), IvSource(seed, params.t_bytes()), opt);
      suite.check("cli.fault_injection", run.injected.has_value() && run.delivery.total_mismatches() == 1 &&
                                             run.digest_mismatches == 1 && !run.verified());
    });
  }

  CommandResult res;
  res.exit_code = suite.passed() ? kExitOk : kExitMismatch;
  if (cfg.format == Format::Json) {
    json checks = json::array();
    for (const auto& [name, e] : suite.entries()) {
      checks.push_back({{"check", name}, {"runs", e.first}, {"failures", e.second}});
    }
    res.output = json{{"seeds", {cfg.seed, cfg.seed + 4}}, {"checks", checks}, {"errors", suite.errors()},
                      {"passed", suite.passed()}}
                     .dump(2) +
                 "\n";
    return res;
  }
  std::ostringstream os;
  if (cfg.format == Format::Csv) {
    os << "check,runs,failures\n";
    for (const auto& [name, e] : suite.entries()) os << name << ',' << e.first << ',' << e.second << '\n';
    res.output = os.str();
    return res;
  }
  os << "invariant suite, seeds " << cfg.seed << ".." << cfg.seed + 4 << "\n\n";
  os << pad("check", 28) << pad("runs", 8) << pad("failed", 8) << "status\n";
  for (const auto& [name, e] : suite.entries()) {
    os << pad(name, 28) << pad(std::to_string(e.first), 8) << pad(std::to_string(e.second), 8)
       << (e.second == 0 ? "pass" : "FAIL") << '\n';
  }
  for (const auto& err : suite.errors()) os << "error: " << err << '\n';
  os << '\n' << (suite.passed() ? "all checks passed" : "FAILURES present") << '\n';
  res.output = os.str();
  return res;
}

}  // namespace hcdc::cli
