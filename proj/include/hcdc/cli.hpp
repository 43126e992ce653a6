#pragma once

// Command implementations behind the hcdc executable. Each command returns
// its rendered output and exit code so it can be driven without a process.

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "hcdc/analysis.hpp"
#include "hcdc/lattice.hpp"
#include "hcdc/mapper.hpp"

namespace hcdc::cli {

enum class Format { Human, Json, Csv };

inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitConfig = 2;

struct RunConfig {
  int x = 3;
  int d = 3;
  int eta1 = 1;
  int eta2 = 1;
  SMode s_mode = SMode::S1;
  MapPolicy policy = MapPolicy::NecessaryOnly;
  std::optional<std::size_t> t_bytes;  // minimal_t(d) when unset
  std::uint64_t seed = 1;
  int rounds = 1;
  Format format = Format::Human;
  std::optional<std::string> out;
  bool inject_fault = false;

  // sweep only
  SweepGrid grid;
  bool sweep_simulate = false;

  // Throws ConfigError naming the first violated constraint.
  HypercubeParams params() const;
};

// Overlays the keys present in a JSON object onto cfg. Unknown keys and
// wrongly typed values are ConfigErrors.
void apply_json(RunConfig& cfg, const nlohmann::json& j);
RunConfig load_config_file(const std::string& path);

Format parse_format(const std::string& s);
SMode parse_s(const std::string& s);
MapPolicy parse_policy(const std::string& s);

struct CommandResult {
  std::string output;
  int exit_code = kExitOk;
};

CommandResult cmd_plan(const RunConfig& cfg);
CommandResult cmd_simulate(const RunConfig& cfg);
CommandResult cmd_sweep(const RunConfig& cfg);
// Runs the invariant suite at desk scale for seeds cfg.seed .. cfg.seed + 4.
CommandResult cmd_verify(const RunConfig& cfg);

}  // namespace hcdc::cli
