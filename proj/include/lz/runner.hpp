#pragma once

#include <string>

namespace lz {

// Config-driven experiment driver behind the CLI and the C API.  Writes the
// subcommand's artifacts plus manifest.json into out_dir; deterministic for a
// fixed (config, seed).  seed_override < 0 keeps the config value.
void run_experiment(const std::string& config_json, const std::string& subcommand,
                    const std::string& out_dir, long long seed_override);

}  // namespace lz
