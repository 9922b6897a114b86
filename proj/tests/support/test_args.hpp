// Access to the test binary's argv, used to locate sibling executables
// (the CLI is built into the same directory as the test binaries).
#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace graphgp_test {

extern std::vector<std::string> args;

inline std::string cli_path() {
    std::filesystem::path self =
        args.empty() ? std::filesystem::path(".") : std::filesystem::path(args[0]);
    return (self.parent_path() / "graphgp").string();
}

} // namespace graphgp_test
