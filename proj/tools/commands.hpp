#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "experiment.hpp"

namespace adaptnet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUnstable = 2;
inline constexpr int kExitConfig = 3;

struct RunOverrides {
  std::optional<std::size_t> trials;
  std::optional<std::size_t> iters;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> strategy;
};

void apply_overrides(ExperimentConfig& c, const RunOverrides& o);

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const RunOverrides& overrides, std::ostream& out, std::ostream& err);
int cmd_theory(const std::string& config_path, std::ostream& out, std::ostream& err);
int cmd_preset(const std::string& name, const std::string& out_path, std::ostream& err);

}  // namespace adaptnet::cli
