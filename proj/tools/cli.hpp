#ifndef SPINPHOTON_CLI_HPP
#define SPINPHOTON_CLI_HPP

#include <iosfwd>
#include <string>

#include <json.hpp>

namespace spinphoton::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidConfig = 2;
inline constexpr int kExitNumericalFailure = 3;

/// Fully resolved run configuration as a flat JSON object with kebab-case
/// keys. Keys that only select where output goes (output, binary-out,
/// contour-out) and the worker count are not part of it, so the same
/// configuration always describes the same file contents.
using RunConfig = nlohmann::json;

/// Defaults for `command`, with command-dependent values already resolved.
RunConfig default_config(const std::string& command);

/// Sorted-key compact serialization.
std::string canonical(const RunConfig& config);

/// Loads a flat JSON config, or the config embedded in the header of a file
/// previously written by this tool (CSV comment or JSON envelope).
RunConfig load_config_file(const std::string& path);

/// Entry point. Writes data to `out` unless --output names a file; messages
/// go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spinphoton::cli

#endif  // SPINPHOTON_CLI_HPP
