#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace interplab {

// Batch front end behind the `interplab` binary.  Loads the JSON experiment
// config, checks it against the documented schema (configs/schema.json),
// dispatches the subcommand, and writes the JSON report plus any CSV tables
// under out_dir.  Returns the process exit code: 0 when every declared
// assertion passes, 1 when an assertion fails (artifacts are still
// written), 2 on a schema violation (the stderr message names the offending
// field path), 3 on I/O or internal failure.
int run_cli(const std::string& command, const std::string& config_path,
            const std::optional<std::uint64_t>& seed_override,
            const std::string& out_dir);

}  // namespace interplab
