#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "runner/report.hpp"

namespace dyadlab::runner {

/// Subcommand names in the order they are documented.
const std::vector<std::string>& commands();

/// Runs one subcommand. `config` holds the global fields plus an optional block keyed by
/// the subcommand name; blocks for other subcommands are ignored. The report echoes the
/// effective configuration with every default filled in, so (config, seed) reproduces it.
/// Schema violations throw Error(Parse) naming the offending field.
Report run(const std::string& command, const nlohmann::json& config, std::optional<std::uint64_t> seed = {});

}  // namespace dyadlab::runner
