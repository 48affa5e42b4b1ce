#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace pmef::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Entry point shared by the `pmef` binary and the tests. `args` excludes
/// the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// One scene of a bench manifest.
struct BenchScene {
    std::string name;
    std::filesystem::path hdr;                  // synthesize the bracket from this, or
    std::vector<std::filesystem::path> stack;   // use these LDR files directly
    std::vector<double> evs{-1.0, 0.0, 1.0};
    std::vector<std::string> methods{"input", "mef", "A", "B"};
    std::vector<std::pair<std::string, std::string>> settings;  // pipeline key=value overrides
};

/// Manifest lines are whitespace-separated key=value tokens, one scene per
/// line: `scene=<name>` plus either `hdr=<path>` or `stack=<p1>,<p2>,...`,
/// optional `evs=`, `methods=` and any pipeline setting. Relative paths are
/// resolved against the manifest's directory.
std::vector<BenchScene> read_manifest(const std::filesystem::path& path);

}  // namespace pmef::cli
