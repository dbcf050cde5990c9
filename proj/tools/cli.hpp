#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace zopt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

/// Entry point of the `zopt` tool. args[0] is the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

/// Reads a flat key=value file ('#' starts a comment) and returns the entries
/// as "--key", "value" pairs. Throws ContractViolation.
std::vector<std::string> config_file_arguments(const std::filesystem::path& path);

}  // namespace zopt::cli
